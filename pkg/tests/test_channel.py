# coding: utf-8

__all__ = ["TestChannel"]

import unittest

import numpy as np
from numpy.testing import assert_allclose

from mmho.channel import (
    ChannelConfig, Path, PathSet, array_response, pulse_shape, delay_tap_channel, delay_taps,
    freq_channel, receive_power, free_space_loss, noise_power, snr_db, SPEED_OF_LIGHT,
)
from mmho.util import ContractError


class TestChannel(unittest.TestCase):

    def setUp(self):
        self.cfg = ChannelConfig(num_antennas=8, num_subcarriers=64, num_taps=16,
            sample_period=1e-9)
        self.paths = [
            Path(1.0, 0.0, 0.3),
            Path(0.4 - 0.2j, 2.5e-9, -0.7),
            Path(0.1j, 7.3e-9, 1.1),
        ]

    def test_config_errors(self):
        with self.assertRaises(ContractError):
            ChannelConfig(num_antennas=0)
        with self.assertRaises(ContractError):
            ChannelConfig(sample_period=0)
        with self.assertRaises(ContractError):
            ChannelConfig(rolloff=1.5)
        self.assertAlmostEqual(ChannelConfig(sample_period=1e-9).bandwidth / 1e9, 1.0, places=12)

    def test_array_response(self):
        a = array_response(0.0, 0.0, self.cfg)
        assert_allclose(a, np.ones(8))

        a = array_response(0.4, 0.2, self.cfg)
        assert_allclose(np.abs(a), np.ones(8))
        self.assertAlmostEqual(np.linalg.norm(a), np.sqrt(8))
        assert_allclose(a[1], np.exp(1j * np.pi * np.sin(0.4)))

    def test_pulse_shape(self):
        self.assertAlmostEqual(pulse_shape(0.0, 1e-9), 1.0)
        for n in range(1, 8):
            self.assertAlmostEqual(pulse_shape(n * 1e-9, 1e-9), 0.0, places=12)
        self.assertEqual(pulse_shape(9.5e-9, 1e-9), 0.0)
        self.assertAlmostEqual(pulse_shape(0.37e-9, 1e-9), pulse_shape(-0.37e-9, 1e-9))

        # finite at the singular points of the roll-off term
        p = pulse_shape(np.array([5e-9, -5e-9]), 1e-9, rolloff=0.1)
        self.assertTrue(np.all(np.isfinite(p)))

        with self.assertRaises(ContractError):
            pulse_shape(0.0, 0.0)

    def test_path_errors(self):
        with self.assertRaises(ContractError):
            Path(1.0, -1e-9, 0.0)
        with self.assertRaises(ContractError):
            PathSet([], 0.0)

    def test_blocked(self):
        ps = PathSet([], 100.0)
        self.assertTrue(ps.blocked)
        assert_allclose(delay_taps(ps, self.cfg), np.zeros((16, 8)))
        assert_allclose(freq_channel(ps, self.cfg), np.zeros((64, 8)))

    def test_single_path_taps(self):
        pl = 1e6
        ps = PathSet([Path(0.5j, 0.0, 0.2)], pl)
        h0 = delay_tap_channel(ps, 0, self.cfg)
        assert_allclose(h0, np.sqrt(8 / pl) * 0.5j * array_response(0.2, 0.0, self.cfg))
        for d in range(1, 8):
            assert_allclose(delay_tap_channel(ps, d, self.cfg), np.zeros(8), atol=1e-15)

        with self.assertRaises(ContractError):
            delay_tap_channel(ps, 16, self.cfg)

    def test_parseval(self):
        ps = PathSet(self.paths, 1e4)
        taps = delay_taps(ps, self.cfg)
        H = freq_channel(ps, self.cfg)
        self.assertEqual(H.shape, (64, 8))
        assert_allclose(np.sum(np.abs(H)**2), 64 * np.sum(np.abs(taps)**2), rtol=1e-10)

    def test_linearity(self):
        a = PathSet(self.paths[:1], 1e4)
        b = PathSet(self.paths[1:], 1e4)
        assert_allclose(freq_channel(a + b, self.cfg),
            freq_channel(a, self.cfg) + freq_channel(b, self.cfg), atol=1e-12)

        with self.assertRaises(ContractError):
            a + PathSet(self.paths[1:], 2e4)

    def test_path_loss_scaling(self):
        H1 = freq_channel(PathSet(self.paths, 1e4), self.cfg)
        H4 = freq_channel(PathSet(self.paths, 4e4), self.cfg)
        assert_allclose(H4, 0.5 * H1, atol=1e-15)

    def test_validate(self):
        PathSet(self.paths, 1e4).validate(self.cfg)
        with self.assertRaises(ContractError):
            PathSet([Path(1.0, 20e-9, 0.0)], 1e4).validate(self.cfg)
        with self.assertRaises(ContractError):
            PathSet([Path(1.0, 1e-9, 0.0)], 1e4, reference_delay=2e-9).validate(self.cfg)

    def test_receive_power(self):
        pl = 1e6
        ps = PathSet([Path(0.5, 0.0, 0.2)], pl)
        H = freq_channel(ps, self.cfg)
        a = array_response(0.2, 0.0, self.cfg)
        f = a / np.linalg.norm(a)
        expected = 2.0 * 64 * 8**2 * 0.25 / pl
        self.assertAlmostEqual(receive_power(H, f, 2.0) / expected, 1.0, places=10)

        with self.assertRaises(ContractError):
            receive_power(H, np.ones(4), 1.0)

    def test_free_space_loss(self):
        d, fc = 37.0, 60e9
        expected = (4 * np.pi * d * fc / SPEED_OF_LIGHT)**2
        self.assertLess(abs(free_space_loss(d, fc) / expected - 1.0), 1e-9)

    def test_snr(self):
        assert_allclose(noise_power(1e9), 10.0**(-11.4))
        self.assertEqual(snr_db(0.0, self.cfg), -np.inf)

        rx = 64 * noise_power(self.cfg.bandwidth) * 100.0
        self.assertAlmostEqual(snr_db(rx, self.cfg), 20.0)

    def test_array_response_examples(self):
        cfg2 = ChannelConfig(num_antennas=2)
        assert_allclose(array_response(np.pi / 2, 0.0, cfg2), [1, -1], atol=1e-12)
        cfg4 = ChannelConfig(num_antennas=4)
        assert_allclose(array_response(np.pi / 6, 0.0, cfg4), [1, 1j, -1, -1j], atol=1e-12)

    def test_sinc_limit(self):
        self.assertAlmostEqual(pulse_shape(0.5e-9, 1e-9, rolloff=0.0), 2 / np.pi)

    def test_unit_ray(self):
        cfg = ChannelConfig(num_antennas=4, num_subcarriers=8, num_taps=4, rolloff=0.0)
        ps = PathSet([Path(1.0, 0.0, 0.0)], 4.0)
        taps = delay_taps(ps, cfg)
        assert_allclose(taps[0], np.ones(4))
        assert_allclose(taps[1:], np.zeros((3, 4)), atol=1e-15)

        H = freq_channel(ps, cfg)
        assert_allclose(H, np.ones((8, 4)), atol=1e-15)

    def test_naive_taps(self):
        ps = PathSet(self.paths, 1e4)
        taps = delay_taps(ps, self.cfg)
        for d in range(self.cfg.num_taps):
            expected = np.zeros(8, dtype=complex)
            for p in self.paths:
                pulse = pulse_shape(d * 1e-9 - p.delay, 1e-9, self.cfg.rolloff, self.cfg.truncation)
                expected += p.gain * pulse * array_response(p.azimuth, 0.0, self.cfg)
            assert_allclose(taps[d], np.sqrt(8 / 1e4) * expected, rtol=0, atol=1e-12)

    def random_path_set(self, rng):
        paths = [
            Path(rng.normal() + 1j * rng.normal(), rng.uniform(0.0, 10e-9),
                rng.uniform(-0.5 * np.pi, 0.5 * np.pi))
            for _ in range(int(rng.integers(1, 6)))
        ]
        return PathSet(paths, rng.uniform(1.0, 1e3))

    def test_brute_force_dft(self):
        rng = np.random.default_rng(42)
        K, D = self.cfg.num_subcarriers, self.cfg.num_taps
        for _ in range(100):
            ps = self.random_path_set(rng)
            taps = delay_taps(ps, self.cfg)
            H = freq_channel(ps, self.cfg)
            for k in range(K):
                expected = sum(taps[d] * np.exp(-2j * np.pi * k * d / float(K)) for d in range(D))
                self.assertLess(np.abs(H[k] - expected).max(), 1e-10)

    def test_receive_power_examples(self):
        f = np.ones(8) / np.sqrt(8)
        self.assertAlmostEqual(receive_power(np.tile(f, (5, 1)), f, 1.0), 5.0)

        orth = np.array([1, -1, 1, -1, 1, -1, 1, -1]) / np.sqrt(8)
        self.assertAlmostEqual(receive_power(np.tile(orth, (5, 1)), f, 1.0), 0.0)

        rng = np.random.default_rng(0)
        H = rng.normal(size=(6, 8)) + 1j * rng.normal(size=(6, 8))
        g = rng.normal(size=8) + 1j * rng.normal(size=8)
        expected = 0.5 * sum(abs(np.vdot(H[k], g))**2 for k in range(6))
        self.assertAlmostEqual(receive_power(H, g, 0.5) / expected, 1.0, places=12)
