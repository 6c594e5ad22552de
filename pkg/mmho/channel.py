# coding: utf-8

"""
Wideband geometric channel model between a single-antenna user and a base station equipped with a
uniform linear array (ULA).
"""

__all__ = [
    "SPEED_OF_LIGHT", "ChannelConfig", "Path", "PathSet", "array_response", "pulse_shape",
    "delay_tap_channel", "delay_taps", "freq_channel", "receive_power", "free_space_loss",
    "dbm_to_watt", "noise_power", "snr_db",
]


import numpy as np

from mmho.util import ContractError
from mmho.logger import get_logger


logger = get_logger(__name__)

#: Speed of light in m/s.
SPEED_OF_LIGHT = 299792458.0

#: Thermal noise density in dBm/Hz.
THERMAL_NOISE_DENSITY = -174.0


class ChannelConfig(object):
    """
    Array and signaling parameters of the channel model. All quantities are in SI units except for
    *antenna_spacing* which is measured in wavelengths. *rolloff* is the roll-off factor of the
    raised-cosine pulse, *truncation* the number of symbol periods after which it is cut.

    .. py:attribute:: bandwidth

        type: float (read-only)

        The system bandwidth, i.e., the inverse of the sample period.
    """

    def __init__(self, num_antennas=32, num_subcarriers=64, num_taps=16, sample_period=1e-9,
            antenna_spacing=0.5, carrier_freq=60e9, rolloff=0.1, truncation=8):
        super(ChannelConfig, self).__init__()

        if num_antennas < 1:
            raise ContractError("num_antennas must be at least 1, got {}".format(num_antennas))
        if num_subcarriers < 1:
            raise ContractError("num_subcarriers must be at least 1, got {}".format(
                num_subcarriers))
        if num_taps < 1:
            raise ContractError("num_taps must be at least 1, got {}".format(num_taps))
        if sample_period <= 0:
            raise ContractError("sample_period must be positive, got {}".format(sample_period))
        if antenna_spacing <= 0:
            raise ContractError("antenna_spacing must be positive, got {}".format(antenna_spacing))
        if not 0 <= rolloff <= 1:
            raise ContractError("rolloff must be in [0, 1], got {}".format(rolloff))

        self.num_antennas = int(num_antennas)
        self.num_subcarriers = int(num_subcarriers)
        self.num_taps = int(num_taps)
        self.sample_period = float(sample_period)
        self.antenna_spacing = float(antenna_spacing)
        self.carrier_freq = float(carrier_freq)
        self.rolloff = float(rolloff)
        self.truncation = truncation

    def __repr__(self):
        return ("{}(num_antennas={}, num_subcarriers={}, num_taps={}, sample_period={!r}, "
            "antenna_spacing={!r}, carrier_freq={!r}, rolloff={!r})").format(
                self.__class__.__name__, self.num_antennas, self.num_subcarriers, self.num_taps,
                self.sample_period, self.antenna_spacing, self.carrier_freq, self.rolloff)

    @property
    def bandwidth(self):
        return 1.0 / self.sample_period

    @property
    def tap_window(self):
        return self.num_taps * self.sample_period


class Path(object):
    """
    A single propagation ray with complex *gain*, *delay* in seconds and angles of arrival
    *azimuth* and *elevation* in radians, measured in the local frame of the receiving array.
    *anchor* optionally stores the point (3-D, meters) the ray travels to when leaving the user,
    that is the base station for direct rays and the reflection point otherwise.
    """

    def __init__(self, gain, delay, azimuth, elevation=0.0, anchor=None):
        super(Path, self).__init__()

        if delay < 0:
            raise ContractError("path delay must not be negative, got {}".format(delay))

        self.gain = complex(gain)
        self.delay = float(delay)
        self.azimuth = float(azimuth)
        self.elevation = float(elevation)
        self.anchor = None if anchor is None else np.asarray(anchor, dtype=float)

    def __repr__(self):
        return "{}(gain={!r}, delay={!r}, azimuth={!r}, elevation={!r})".format(
            self.__class__.__name__, self.gain, self.delay, self.azimuth, self.elevation)


class PathSet(object):
    """
    All rays between the user and the base station *bs_index*, sharing a common linear
    *path_loss*. An empty list of *paths* encodes a fully blocked link. *reference_delay* is the
    receiver timing reference that tap delays are measured from, usually the first arrival.
    """

    def __init__(self, paths, path_loss, bs_index=0, reference_delay=0.0):
        super(PathSet, self).__init__()

        if not path_loss > 0:
            raise ContractError("path_loss must be positive, got {}".format(path_loss))

        self.paths = list(paths)
        self.path_loss = float(path_loss)
        self.bs_index = int(bs_index)
        self.reference_delay = float(reference_delay)

    def __len__(self):
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)

    def __add__(self, other):
        if not isinstance(other, PathSet):
            return NotImplemented
        if other.path_loss != self.path_loss or other.reference_delay != self.reference_delay:
            raise ContractError("cannot add path sets with different path loss or timing")
        return self.__class__(self.paths + other.paths, self.path_loss, bs_index=self.bs_index,
            reference_delay=self.reference_delay)

    def __repr__(self):
        return "{}(bs_index={}, L={}, path_loss={!r}, reference_delay={!r})".format(
            self.__class__.__name__, self.bs_index, len(self.paths), self.path_loss,
            self.reference_delay)

    @property
    def blocked(self):
        return not self.paths

    def excess_delays(self):
        """
        Returns the delays of all paths relative to :py:attr:`reference_delay` as an array.
        """
        return np.array([p.delay for p in self.paths], dtype=float) - self.reference_delay

    def validate(self, cfg):
        """
        Raises a :py:class:`ContractError` when a path arrives before the timing reference or after
        the tap window of a :py:class:`ChannelConfig` *cfg*.
        """
        excess = self.excess_delays()
        bad = (excess < 0) | (excess >= cfg.tap_window)
        if bad.any():
            raise ContractError("{} path(s) of {} outside the tap window [0, {}) s".format(
                int(bad.sum()), self, cfg.tap_window))


def array_response(theta, phi, cfg):
    """
    Returns the response vector of the ULA for an azimuth *theta* as a complex array of length
    ``cfg.num_antennas``. Entry *m* is ``exp(j 2 pi spacing m sin(theta))``. The elevation *phi* is
    accepted for interface stability but does not enter the response of a linear array.
    """
    m = np.arange(cfg.num_antennas)
    return np.exp(2j * np.pi * cfg.antenna_spacing * m * np.sin(theta))


def pulse_shape(tau, T_S, rolloff=0.1, truncation=8):
    """
    Evaluates the raised-cosine pulse with roll-off *rolloff* for symbol period *T_S* at time(s)
    *tau*. The pulse is cut to zero beyond *truncation* symbol periods. Scalars are returned for
    scalar input, arrays otherwise.
    """
    if not T_S > 0:
        raise ContractError("T_S must be positive, got {}".format(T_S))

    x = np.asarray(tau, dtype=float) / T_S
    b = float(rolloff)

    denom = 1.0 - (2.0 * b * x)**2
    singular = np.abs(denom) < 1e-12
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.sinc(x) * np.cos(np.pi * b * x) / denom
    if b > 0 and singular.any():
        # limit at the points t = +-T_S / (2 rolloff)
        p = np.where(singular, np.pi / 4.0 * np.sinc(1.0 / (2.0 * b)), p)

    if truncation is not None:
        p = np.where(np.abs(x) > truncation, 0.0, p)

    return float(p) if p.ndim == 0 else p


def _taps(ps, cfg, d):
    d = np.asarray(d, dtype=int)
    if ps.blocked:
        return np.zeros((d.size, cfg.num_antennas), dtype=complex)

    gains = np.array([p.gain for p in ps.paths], dtype=complex)
    responses = np.stack([array_response(p.azimuth, p.elevation, cfg) for p in ps.paths])

    # pulse values per tap and path
    offsets = d[:, None] * cfg.sample_period - ps.excess_delays()[None, :]
    pulses = pulse_shape(offsets, cfg.sample_period, cfg.rolloff, cfg.truncation)

    taps = (pulses * gains[None, :]).dot(responses)
    return np.sqrt(cfg.num_antennas / ps.path_loss) * taps


def delay_tap_channel(ps, d, cfg):
    """
    Returns the delay-*d* channel vector (length ``cfg.num_antennas``) of a :py:class:`PathSet`
    *ps*. Empty path sets yield the zero vector.
    """
    if not 0 <= d < cfg.num_taps:
        raise ContractError("tap index {} outside [0, {})".format(d, cfg.num_taps))

    return _taps(ps, cfg, [d])[0]


def delay_taps(ps, cfg):
    """
    Returns all delay taps of a :py:class:`PathSet` *ps* as a complex array with shape
    ``(num_taps, num_antennas)``.
    """
    return _taps(ps, cfg, np.arange(cfg.num_taps))


def freq_channel(ps, cfg):
    """
    Returns the frequency domain channel of a :py:class:`PathSet` *ps* as a complex array with
    shape ``(num_subcarriers, num_antennas)``. Row *k* is the sum over taps *d* of the delay-*d*
    channel weighted by ``exp(-j 2 pi k d / K)``.
    """
    k = np.arange(cfg.num_subcarriers)
    d = np.arange(cfg.num_taps)
    dft = np.exp(-2j * np.pi * np.outer(k, d) / cfg.num_subcarriers)
    return dft.dot(delay_taps(ps, cfg))


def receive_power(h_all_k, f, tx_power):
    """
    Returns the receive power in watts when all subcarrier channels *h_all_k* (shape ``(K, M)``)
    are combined with a beamforming vector *f* (length *M*) at transmit power *tx_power* in watts.
    """
    h_all_k = np.atleast_2d(h_all_k)
    f = np.asarray(f)
    if f.ndim != 1 or h_all_k.shape[1] != f.shape[0]:
        raise ContractError("dimension mismatch between channel {} and beam {}".format(
            h_all_k.shape, f.shape))

    return float(tx_power * np.sum(np.abs(h_all_k.conj().dot(f))**2))


def free_space_loss(distance, carrier_freq):
    """
    Returns the linear free-space path loss ``(4 pi d f_c / c)**2`` at *distance* in meters and
    *carrier_freq* in Hz.
    """
    return (4.0 * np.pi * distance * carrier_freq / SPEED_OF_LIGHT)**2


def dbm_to_watt(dbm):
    return 10.0**((dbm - 30.0) / 10.0)


def noise_power(bandwidth, noise_figure=0.0):
    """
    Returns the thermal noise power in watts over *bandwidth* in Hz, increased by *noise_figure* in
    dB.
    """
    return dbm_to_watt(THERMAL_NOISE_DENSITY + 10.0 * np.log10(bandwidth) + noise_figure)


def snr_db(rx_power_w, cfg, noise_figure=0.0):
    """
    Converts a receive power *rx_power_w*, summed over all subcarriers of a
    :py:class:`ChannelConfig` *cfg*, into the per-subcarrier SNR in dB over thermal noise in the
    system bandwidth. Zero power maps to ``-inf``.
    """
    if rx_power_w <= 0:
        return -np.inf

    signal = rx_power_w / cfg.num_subcarriers
    return float(10.0 * np.log10(signal / noise_power(cfg.bandwidth, noise_figure)))
