# coding: utf-8

"""
Quantized beamsteering codebooks and power-maximizing beam selection.
"""

__all__ = ["Codebook", "build_codebook", "beam_gains", "select_beam"]


import numpy as np

from mmho.channel import ChannelConfig, array_response
from mmho.util import ContractError


class Codebook(object):
    """
    Immutable set of beamforming vectors. *codewords* is a complex array with shape
    ``(M_CB, M)``, *steering_angles* holds the azimuth each codeword points to.
    """

    def __init__(self, codewords, steering_angles):
        super(Codebook, self).__init__()

        codewords = np.array(codewords, dtype=complex, ndmin=2)
        steering_angles = np.array(steering_angles, dtype=float, ndmin=1)
        if codewords.shape[0] != steering_angles.shape[0]:
            raise ContractError("{} codewords but {} steering angles".format(
                codewords.shape[0], steering_angles.shape[0]))

        codewords.setflags(write=False)
        steering_angles.setflags(write=False)
        self.codewords = codewords
        self.steering_angles = steering_angles

    def __len__(self):
        return self.codewords.shape[0]

    def __getitem__(self, m):
        return self.codewords[m]

    def __repr__(self):
        return "{}(size={}, num_antennas={})".format(self.__class__.__name__, self.size,
            self.num_antennas)

    @property
    def size(self):
        return len(self)

    @property
    def num_antennas(self):
        return self.codewords.shape[1]

    @property
    def beamwidth(self):
        return 2.0 * np.pi / self.size

    def permuted(self, order):
        """
        Returns a new codebook with codewords (and angles) rearranged in *order*.
        """
        order = np.asarray(order, dtype=int)
        return self.__class__(self.codewords[order], self.steering_angles[order])


def build_codebook(M, oversampling, antenna_spacing=0.5):
    """
    Builds a beamsteering codebook for a ULA with *M* elements and ``oversampling * M`` codewords.
    The sines of the steering angles are spaced uniformly over ``[-1, 1)`` and every codeword is
    the array response normalized to unit norm.
    """
    if M < 1 or oversampling < 1:
        raise ContractError("invalid codebook dimensions M={}, oversampling={}".format(
            M, oversampling))

    cfg = ChannelConfig(num_antennas=M, antenna_spacing=antenna_spacing)
    size = int(oversampling * M)
    angles = np.arcsin(-1.0 + 2.0 * np.arange(size) / size)
    codewords = np.stack([array_response(a, 0.0, cfg) for a in angles]) / np.sqrt(M)

    return Codebook(codewords, angles)


def beam_gains(h_all_k, cb):
    """
    Returns the beamforming objective ``sum_k |h_k^H g_m|**2`` for every codeword *g_m* of a
    :py:class:`Codebook` *cb*, given the subcarrier channels *h_all_k* with shape ``(K, M)``.
    """
    h_all_k = np.atleast_2d(h_all_k)
    if h_all_k.shape[1] != cb.num_antennas:
        raise ContractError("channel has {} antennas, codebook {}".format(h_all_k.shape[1],
            cb.num_antennas))

    return np.sum(np.abs(h_all_k.conj().dot(cb.codewords.T))**2, axis=0)


def select_beam(h_all_k, cb):
    """
    Returns the index of the codeword that maximizes the beamforming objective and the objective
    value itself. Ties resolve to the lowest index.
    """
    if len(cb) == 0:
        raise ContractError("cannot select a beam from an empty codebook")

    gains = beam_gains(h_all_k, cb)
    m = int(np.argmax(gains))
    return m, float(gains[m])
