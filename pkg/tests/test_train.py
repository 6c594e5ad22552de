# coding: utf-8

__all__ = [
    "TestTrainConfig", "TestEvaluation", "TestTraining", "TestLearningCurve",
    "TestDefaultScenarioCurve",
]

import os
import shutil
import sys
import tempfile
import unittest

import numpy as np

try:
    from unittest import mock
except ImportError:
    import mock

from mmho.model import GruModel, init_params
from mmho.model.checkpoint import dumps_checkpoint
from mmho.scenario import LabeledEpisode
from mmho.train import (
    TrainingError, TrainConfig, TrainReport, CurvePoint, train, evaluate, majority_baseline,
    handoff_metrics, learning_curve, write_metrics_csv, write_curve_csv,
)
from mmho.util import ArgumentError, ContractError


def constant_model(label=0, num_beams=8, num_outputs=2):
    model = GruModel.zeros(num_beams, 2, 3, num_outputs)
    model.c_f[label] = 1.0
    return model


def synthetic_episodes(n, length=10, num_beams=8, seed=0):
    # the serving base station switches when the beam wraps around the codebook
    rng = np.random.default_rng(seed)
    episodes = []
    for _ in range(n):
        beams = np.cumsum(rng.integers(0, 3, size=length + 1)) % num_beams
        serving = np.cumsum(np.r_[0, np.diff(beams) < 0]) % 2
        episodes.append(LabeledEpisode(beams[:-1], serving[1:]))
    return episodes


def small_config(**kwargs):
    opts = dict(epochs=2, hidden_size=4, embedding_size=3, learning_rate=0.01, seed=1)
    opts.update(kwargs)
    return TrainConfig(**opts)


class TestTrainConfig(unittest.TestCase):

    def test_validation(self):
        for kwargs in [{"epochs": 0}, {"eval_every": 0}, {"batch_size": 0},
                {"learning_rate": 0.0}, {"clip_norm": -1.0}, {"hidden_size": 0}]:
            with self.assertRaises(ArgumentError):
                TrainConfig(**kwargs)

    def test_from_config(self):
        cfg = TrainConfig.from_config(epochs=5, seed=None)
        self.assertEqual(cfg.epochs, 5)
        self.assertEqual(cfg.seed, 0)
        self.assertEqual(cfg.embedding_size, 20)
        self.assertEqual(cfg.beta2, 0.999)

    def test_replace(self):
        cfg = small_config()
        other = cfg.replace(seed=7, eval_every=2)
        self.assertEqual((other.seed, other.eval_every, other.hidden_size), (7, 2, 4))
        self.assertEqual(cfg.seed, 1)
        self.assertEqual(list(cfg.to_dict())[:2], ["epochs", "seed"])


class TestEvaluation(unittest.TestCase):

    def setUp(self):
        self.episodes = [
            LabeledEpisode([0, 1, 2, 3, 4], [0, 0, 0, 1, 1]),
            LabeledEpisode([1, 1, 1, 1, 1], [0, 0, 0, 0, 1]),
        ]

    def test_constant_prediction(self):
        model = constant_model(0)
        self.assertAlmostEqual(evaluate(model, self.episodes), 0.7)
        self.assertAlmostEqual(evaluate(constant_model(1), self.episodes), 0.3)

    def test_order_and_threads(self):
        model = init_params(8, 2, embedding_size=3, hidden_size=4, seed=5)
        episodes = synthetic_episodes(30)
        value = evaluate(model, episodes)
        self.assertEqual(evaluate(model, episodes[::-1]), value)
        self.assertEqual(evaluate(model, episodes, threads=3, chunk_size=4), value)

    def test_empty(self):
        with self.assertRaises(ContractError):
            evaluate(constant_model(), [])

    def test_majority_baseline(self):
        train_set = [LabeledEpisode([0, 1, 2], [0, 1, 1])]
        test_set = [LabeledEpisode([0, 1, 2, 3], [1, 0, 1, 1])]
        self.assertAlmostEqual(majority_baseline(train_set, test_set), 0.75)

        tied = [LabeledEpisode([0, 1], [1, 0])]
        self.assertAlmostEqual(majority_baseline(tied, test_set), 0.25)

    def test_handoff_metrics(self):
        model = constant_model(0)
        episodes = [LabeledEpisode([0, 1, 2, 3, 4], [0, 0, 1, 1, 0]),
            LabeledEpisode([5, 5, 5], [0, 0, 0])]
        self.assertEqual(handoff_metrics(model, episodes), (0.5, 0.5))
        self.assertEqual(handoff_metrics(model, episodes[1:]), (0.0, 0.0))


class TestTraining(unittest.TestCase):

    def setUp(self):
        self.tmp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp_dir)

    def test_overfit_single_episode(self):
        episode = LabeledEpisode([3, 7, 7, 1, 4, 4, 2, 5, 5, 6, 0, 3],
            [0, 0, 1, 1, 1, 0, 0, 1, 1, 0, 1, 1])
        cfg = TrainConfig(epochs=200, hidden_size=64, embedding_size=20, learning_rate=0.01,
            eval_every=200, seed=3)
        model, report = train([episode], [], cfg, 8, 2)

        self.assertEqual(report.epochs, 200)
        self.assertEqual(report.steps, 200)
        self.assertLess(min(report.losses), 0.01)
        self.assertEqual(report.final_success, 1.0)
        self.assertEqual(report.test_acc, [None] * 200)
        self.assertEqual(report.train_acc[:-1], [None] * 199)

    def test_deterministic(self):
        episodes = synthetic_episodes(12)
        cfg = small_config(batch_size=4)
        model_a, report_a = train(episodes[:9], episodes[9:], cfg, 8, 2)
        model_b, report_b = train(episodes[:9], episodes[9:], cfg, 8, 2)
        model_c, _ = train(episodes[:9], episodes[9:], cfg.replace(seed=2), 8, 2)

        self.assertEqual(dumps_checkpoint(model_a), dumps_checkpoint(model_b))
        self.assertNotEqual(dumps_checkpoint(model_a), dumps_checkpoint(model_c))
        self.assertEqual(report_a.losses, report_b.losses)
        self.assertEqual(report_a.steps, 2 * 3)
        self.assertEqual(report_a.final_success, report_a.test_acc[-1])
        self.assertEqual(report_a.baseline, majority_baseline(episodes[:9], episodes[9:]))

    def test_callback(self):
        seen = []
        train(synthetic_episodes(3), None, small_config(epochs=3),
            8, 2, callback=lambda epoch, report: seen.append((epoch, report.epochs)))
        self.assertEqual(seen, [(1, 1), (2, 2), (3, 3)])

    def test_train_module_attribute(self):
        import mmho
        self.assertIs(mmho.train, sys.modules["mmho.train"])
        self.assertTrue(callable(mmho.train.backward_batch))

    def test_errors(self):
        with self.assertRaises(ContractError):
            train([], [], small_config(), 8, 2)

        grads = {}
        with mock.patch("mmho.train.backward_batch", return_value=(float("nan"), grads)):
            with self.assertRaises(TrainingError) as cm:
                train(synthetic_episodes(2), [], small_config(), 8, 2)
        self.assertIn("epoch 1", str(cm.exception))

    def test_metrics_csv(self):
        episodes = synthetic_episodes(6)
        _, report = train(episodes[:4], episodes[4:], small_config(epochs=3, eval_every=2), 8, 2)
        path = os.path.join(self.tmp_dir, "metrics.csv")
        write_metrics_csv(report, path)

        with open(path) as f:
            lines = f.read().split("\n")
        self.assertEqual(lines[0], "epoch,loss,train_acc,test_acc")
        self.assertEqual(len(lines), 5)
        self.assertEqual(lines[-1], "")
        self.assertTrue(lines[1].startswith("1,") and lines[1].endswith(",,"))
        self.assertEqual(len(lines[2].split(",")), 4)
        self.assertEqual(lines[3].split(",")[3], "{:.6f}".format(report.test_acc[-1]))

    def test_report_rows(self):
        report = TrainReport()
        report.losses = [0.5, 0.25]
        report.train_acc = [None, 0.75]
        report.test_acc = [None, None]
        self.assertEqual(list(report.rows()),
            [[1, "0.500000", "", ""], [2, "0.250000", "0.750000", ""]])


class TestLearningCurve(unittest.TestCase):

    def setUp(self):
        self.tmp_dir = tempfile.mkdtemp()
        self.episodes = synthetic_episodes(20)

    def tearDown(self):
        shutil.rmtree(self.tmp_dir)

    def test_points(self):
        cfg = small_config()
        points = learning_curve(self.episodes, (30, 60), cfg, 8, 2, test_steps=50, seed=4)
        self.assertEqual([p.train_size for p in points], [30, 60])
        self.assertEqual([p.steps for p in points], [30, 60])
        for p in points:
            self.assertTrue(0.0 <= p.success_prob <= 1.0)
            self.assertTrue(0.0 <= p.baseline <= 1.0)

        again = learning_curve(self.episodes, (30, 60), cfg, 8, 2, test_steps=50, seed=4)
        self.assertEqual([p.success_prob for p in points], [p.success_prob for p in again])

    def test_errors(self):
        cfg = small_config()
        with self.assertRaises(ArgumentError):
            learning_curve(self.episodes, (60, 30), cfg, 8, 2, test_steps=50)
        with self.assertRaises(ArgumentError):
            learning_curve(self.episodes, (), cfg, 8, 2, test_steps=50)
        with self.assertRaises(ArgumentError):
            learning_curve(self.episodes, (160,), cfg, 8, 2, test_steps=50)
        with self.assertRaises(ArgumentError):
            learning_curve(self.episodes, (30,), cfg, 8, 2, test_steps=500)

    def test_curve_csv(self):
        path = os.path.join(self.tmp_dir, "curve.csv")
        write_curve_csv([CurvePoint(30, 0.5, 0.4, 30), CurvePoint(60, 0.8125, 0.4, 60)], path)
        with open(path) as f:
            self.assertEqual(f.read(), "train_size,success_prob\n30,0.500000\n60,0.812500\n")


@unittest.skipUnless(os.getenv("MMHO_SLOW_TESTS"), "set MMHO_SLOW_TESTS to run")
class TestDefaultScenarioCurve(unittest.TestCase):

    def test_curve(self):
        from mmho.scenario import default_scenario, generate_dataset

        scenario = default_scenario()
        cb = scenario.codebook()
        cfg = TrainConfig.from_config(epochs=None)

        finals = []
        for seed in (1, 2, 3):
            episodes = generate_dataset(scenario, 600, cb, seed, threads=4)
            points = learning_curve(episodes, (2000, 14000), cfg, len(cb), scenario.num_bs,
                test_steps=2000, seed=seed)
            self.assertGreater(points[-1].success_prob, points[0].success_prob)
            for p in points:
                self.assertGreater(p.success_prob, p.baseline)
            finals.append(points[-1].success_prob)

        self.assertGreaterEqual(np.mean(finals), 0.9)

    def test_overfit_fifty_episodes(self):
        from mmho.scenario import default_scenario, generate_dataset

        class Reached(Exception):
            pass

        def stop(epoch, report):
            if report.train_acc[-1] is not None and report.train_acc[-1] >= 0.99:
                raise Reached(epoch)

        scenario = default_scenario()
        cb = scenario.codebook()
        episodes = generate_dataset(scenario, 50, cb, 11, threads=4)
        cfg = TrainConfig(epochs=500, hidden_size=64, eval_every=25, seed=11, threads=4)

        with self.assertRaises(Reached):
            train(episodes, [], cfg, len(cb), scenario.num_bs, callback=stop)
