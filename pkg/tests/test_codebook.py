# coding: utf-8

__all__ = ["TestCodebook"]

import unittest

import numpy as np
from numpy.testing import assert_allclose

from mmho.channel import ChannelConfig, Path, PathSet, array_response, freq_channel
from mmho.codebook import Codebook, build_codebook, beam_gains, select_beam
from mmho.util import ContractError


class TestCodebook(unittest.TestCase):

    def setUp(self):
        self.M = 32
        self.cb = build_codebook(self.M, 4)
        self.cfg = ChannelConfig(num_antennas=self.M, num_subcarriers=16, num_taps=4)

    def channel(self, theta):
        return freq_channel(PathSet([Path(1.0, 0.0, theta)], 1.0), self.cfg)

    def test_build(self):
        self.assertEqual(len(self.cb), 128)
        self.assertEqual(self.cb.num_antennas, 32)
        assert_allclose(np.linalg.norm(self.cb.codewords, axis=1), np.ones(128))
        assert_allclose(np.sin(self.cb.steering_angles), -1.0 + 2.0 * np.arange(128) / 128.0,
            atol=1e-12)
        self.assertAlmostEqual(self.cb.beamwidth, 2 * np.pi / 128)

        with self.assertRaises(ContractError):
            build_codebook(0, 2)

    def test_immutable(self):
        with self.assertRaises(ValueError):
            self.cb.codewords[0, 0] = 0.0

    def test_mismatch(self):
        with self.assertRaises(ContractError):
            Codebook(np.ones((3, 4)), [0.0, 0.1])
        with self.assertRaises(ContractError):
            beam_gains(np.ones((2, 8)), self.cb)

    def test_permuted(self):
        order = np.arange(128)[::-1]
        cb = self.cb.permuted(order)
        assert_allclose(cb[0], self.cb[127])
        assert_allclose(cb.steering_angles[5], self.cb.steering_angles[122])

    def test_zero_channel_tie(self):
        m, gain = select_beam(np.zeros((16, self.M)), self.cb)
        self.assertEqual(m, 0)
        self.assertEqual(gain, 0.0)

    def test_nearest_beam(self):
        rng = np.random.default_rng(7)
        thetas = rng.uniform(-0.5 * np.pi, 0.5 * np.pi, size=1000)
        u = -1.0 + 2.0 * np.arange(128) / 128.0

        agree = 0
        for theta in thetas:
            m, _ = select_beam(self.channel(theta), self.cb)
            dist = np.abs(u - np.sin(theta))
            dist = np.minimum(dist, 2.0 - dist)
            agree += int(m == int(np.argmin(dist)))

        self.assertGreaterEqual(agree / float(len(thetas)), 0.99)

    def test_quantization_loss(self):
        rng = np.random.default_rng(11)
        for theta in rng.uniform(-0.5 * np.pi, 0.5 * np.pi, size=1000):
            H = self.channel(theta)
            a = array_response(theta, 0.0, self.cfg)
            exact = np.sum(np.abs(H.conj().dot(a / np.sqrt(self.M)))**2)
            _, gain = select_beam(H, self.cb)
            self.assertGreaterEqual(gain, 0.8 * exact)
            self.assertLessEqual(gain, exact * (1 + 1e-9))

    def test_full_scan(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            H = rng.normal(size=(16, self.M)) + 1j * rng.normal(size=(16, self.M))
            m, gain = select_beam(H, self.cb)
            for i, g in enumerate(self.cb.codewords):
                objective = sum(abs(np.vdot(H[k], g))**2 for k in range(16))
                self.assertGreaterEqual(gain, objective * (1 - 1e-12))
                if i < m:
                    self.assertLess(objective, gain * (1 - 1e-12))

    def test_permutation_equivariance(self):
        H = self.channel(0.37)
        m, gain = select_beam(H, self.cb)
        order = np.random.default_rng(2).permutation(len(self.cb))
        m_perm, gain_perm = select_beam(H, self.cb.permuted(order))
        self.assertEqual(order[m_perm], m)
        self.assertAlmostEqual(gain_perm, gain)

    def test_phase_invariance(self):
        H = self.channel(-0.6)
        gains = beam_gains(H, self.cb)
        rotated = beam_gains(np.exp(1.3j) * H, self.cb)
        assert_allclose(rotated, gains, rtol=0, atol=1e-10 * gains.max())

    def test_degenerate(self):
        cb = build_codebook(1, 1)
        assert_allclose(cb.codewords, [[1.0]])
        m, _ = select_beam(np.array([[0.3 + 0.1j]]), cb)
        self.assertEqual(m, 0)
