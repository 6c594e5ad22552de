# coding: utf-8

"""
Workflow tasks behind the command line subprograms. Every task writes its outputs atomically into
an output directory together with a ``manifest.json`` that records all parameters needed to
reproduce the run.
"""

__all__ = [
    "DatasetInput", "DatasetTask", "GenerateDataset", "TrainModel", "EvaluateModel",
    "LearningCurve",
]


import os
from collections import OrderedDict

import luigi
import numpy as np
import six

from mmho.task.base import Task, ExternalTask
from mmho.parameter import NO_INT, get_param, CSVParameter, SizesParameter
from mmho.decorator import timeit, safe_output
from mmho.config import Config
from mmho.scenario import load_scenario_config, default_scenario_file, generate_dataset
from mmho.dataset import DatasetHeader, DatasetFile, save, load, split
from mmho.model import save_checkpoint, load_checkpoint
from mmho.train import (
    TrainConfig, CurvePoint, train, evaluate, learning_curve, write_metrics_csv, write_curve_csv,
)
from mmho.plot import plot_curve
from mmho.util import CompatibilityError, ArgumentError, makedirs, flatten
from mmho.logger import get_logger


logger = get_logger(__name__)


class OutputDirTask(Task):

    out = luigi.Parameter(
        description="the output directory",
    )

    def local_target(self, name, **kwargs):
        return luigi.LocalTarget(os.path.join(os.path.expandvars(os.path.expanduser(self.out)),
            name), **kwargs)

    def remove_output(self):
        for target in flatten(self.output()):
            if target.exists():
                self.logger.info("removing output {}".format(target.path))
                target.remove()

    def prepare_output(self):
        makedirs(os.path.dirname(self.output()["manifest"].path))


class DatasetInput(ExternalTask):

    path = luigi.Parameter(
        description="path of an existing dataset file",
    )

    def output(self):
        return luigi.LocalTarget(os.path.expandvars(os.path.expanduser(self.path)))


class GenerateDataset(OutputDirTask):

    config = luigi.Parameter(
        default=default_scenario_file(),
        description="the scenario config file; default: the bundled street scenario",
    )
    episodes = luigi.IntParameter(
        default=NO_INT,
        description="number of episodes to generate; default: [generate] episodes config",
    )
    seed = luigi.IntParameter(
        default=0,
        description="seed of all random streams; default: 0",
    )
    threads = luigi.IntParameter(
        default=1,
        significant=False,
        description="number of generation threads; default: 1",
    )

    def n_episodes(self):
        n = get_param(self.episodes)
        if n is None:
            n = Config.instance().get_expanded_int("generate", "episodes")
        if n < 1:
            raise ArgumentError("number of episodes must be at least 1, got {}".format(n))
        return n

    def output(self):
        return OrderedDict([
            ("dataset", self.local_target("dataset.txt")),
            ("manifest", self.local_target("manifest.json")),
        ])

    @timeit
    @safe_output
    def run(self):
        self.prepare_output()
        outputs = self.output()

        scenario = load_scenario_config(self.config)
        cb = scenario.codebook()
        n = self.n_episodes()

        with self.publish_step("generating {} episodes of scenario {} ...".format(n,
                scenario.hash)):
            episodes = generate_dataset(scenario, n, cb, self.seed, threads=self.threads,
                callback=lambda i: self.publish_progress(i + 1, n))

        header = DatasetHeader(scenario.codebook_size, scenario.num_bs, seed=self.seed,
            scenario_hash=scenario.hash)
        dataset = DatasetFile(header, episodes)
        save(dataset, outputs["dataset"].path)
        self.logger.info("wrote {}".format(dataset))

        self.dump_manifest(outputs["manifest"], "generate", episodes=n,
            scenario_hash=scenario.hash, steps=dataset.num_steps)


class TrainingTask(OutputDirTask):

    epochs = luigi.IntParameter(
        default=NO_INT,
        description="number of training epochs; default: [training] epochs config",
    )
    hidden_size = luigi.IntParameter(
        default=NO_INT,
        description="size of the hidden state; default: [training] hidden_size config",
    )
    learning_rate = luigi.FloatParameter(
        default=NO_INT,
        description="Adam learning rate; default: [training] learning_rate config",
    )
    batch_size = luigi.IntParameter(
        default=NO_INT,
        description="episodes per update; default: [training] batch_size config",
    )
    clip_norm = luigi.FloatParameter(
        default=NO_INT,
        description="global gradient norm limit; default: [training] clip_norm config",
    )
    seed = luigi.IntParameter(
        default=0,
        description="seed of all random streams; default: 0",
    )
    threads = luigi.IntParameter(
        default=1,
        significant=False,
        description="number of evaluation threads; default: 1",
    )

    def train_config(self, **kwargs):
        opts = dict(
            epochs=get_param(self.epochs),
            hidden_size=get_param(self.hidden_size),
            learning_rate=get_param(self.learning_rate),
            batch_size=get_param(self.batch_size),
            clip_norm=get_param(self.clip_norm),
            seed=self.seed,
            threads=self.threads,
        )
        opts.update(kwargs)
        return TrainConfig.from_config(**opts)


class DatasetTask(Task):

    dataset = luigi.Parameter(
        description="the dataset file",
    )
    config = luigi.Parameter(
        default="",
        description="scenario config file the dataset must have been generated from; default: "
        "no check",
    )

    def requires(self):
        return DatasetInput(path=self.dataset)

    def load_dataset(self):
        dataset = load(self.input().path)

        if self.config:
            scenario = load_scenario_config(self.config)
            if scenario.hash != dataset.header.scenario_hash:
                raise CompatibilityError("dataset {} was generated from scenario {}, but config "
                    "{} describes scenario {}".format(self.dataset, dataset.header.scenario_hash,
                    self.config, scenario.hash))

        return dataset

    def split_dataset(self, episodes, fraction, seed):
        if not 0 <= fraction < 1:
            raise ArgumentError("test fraction must be in [0, 1), got {}".format(fraction))

        if fraction == 0:
            return episodes, []
        if len(episodes) < 2:
            self.logger.warning("dataset has a single episode, no episodes are held out")
            return episodes, []

        return split(episodes, 1.0 - fraction, seed)


class TrainModel(TrainingTask, DatasetTask):

    test_fraction = luigi.FloatParameter(
        default=NO_INT,
        description="fraction of episodes held out for testing, 0 disables testing; default: "
        "[training] test_fraction config",
    )

    def output(self):
        return OrderedDict([
            ("checkpoint", self.local_target("model.ckpt", format=luigi.format.Nop)),
            ("metrics", self.local_target("metrics.csv")),
            ("manifest", self.local_target("manifest.json")),
        ])

    @timeit
    @safe_output
    def run(self):
        self.prepare_output()
        outputs = self.output()

        dataset = self.load_dataset()
        cfg = self.train_config()
        fraction = get_param(self.test_fraction)
        if fraction is None:
            fraction = Config.instance().get_expanded_float("training", "test_fraction")
        train_set, test_set = self.split_dataset(dataset.episodes, fraction, self.seed)
        self.logger.info("training on {} episodes, testing on {}".format(len(train_set),
            len(test_set)))

        with self.publish_step("training {} ...".format(cfg)):
            model, report = train(train_set, test_set, cfg, dataset.header.codebook_size,
                dataset.header.num_bs,
                callback=lambda epoch, _: self.publish_progress(epoch, cfg.epochs))

        save_checkpoint(model, outputs["checkpoint"].path, seed=cfg.seed, step=report.steps)
        write_metrics_csv(report, outputs["metrics"].path)

        self.dump_manifest(outputs["manifest"], "train",
            train_config=cfg.to_dict(),
            scenario_hash=dataset.header.scenario_hash,
            train_episodes=len(train_set),
            test_episodes=len(test_set),
            final_success=report.final_success,
            baseline=report.baseline,
            handoff_precision=report.handoff_precision,
            handoff_recall=report.handoff_recall,
        )


class EvaluateModel(DatasetTask):

    checkpoint = luigi.Parameter(
        description="the model checkpoint file",
    )
    test_fraction = luigi.FloatParameter(
        default=0.0,
        description="evaluate only on the episodes that training with the same seed and fraction "
        "held out, 0 evaluates on all episodes; default: 0.0",
    )
    seed = luigi.IntParameter(
        default=0,
        description="seed of the held-out split; default: 0",
    )
    out = luigi.Parameter(
        default="",
        description="optional output directory receiving a manifest.json; default: none",
    )
    threads = luigi.IntParameter(
        default=1,
        significant=False,
        description="number of evaluation threads; default: 1",
    )

    def __init__(self, *args, **kwargs):
        super(EvaluateModel, self).__init__(*args, **kwargs)

        self.success_prob = None

    def output(self):
        return []

    def complete(self):
        return self.success_prob is not None

    def manifest_target(self):
        if not self.out:
            return None
        path = os.path.join(os.path.expandvars(os.path.expanduser(self.out)), "manifest.json")
        return luigi.LocalTarget(path)

    @timeit
    def run(self):
        model, info = load_checkpoint(self.checkpoint)
        dataset = self.load_dataset()

        header = dataset.header
        if (header.codebook_size, header.num_bs) != (model.num_beams, model.num_outputs):
            raise CompatibilityError("checkpoint {} with M_CB={}, N={} does not match dataset "
                "{} with M_CB={}, N={}".format(self.checkpoint, model.num_beams, model.num_outputs,
                self.dataset, header.codebook_size, header.num_bs))

        episodes = dataset.episodes
        if self.test_fraction:
            _, episodes = self.split_dataset(episodes, self.test_fraction, self.seed)
            if not episodes:
                raise ArgumentError("dataset {} has no held-out episodes".format(self.dataset))

        success_prob = evaluate(model, episodes, threads=self.threads)
        self.logger.info("success probability of {} after {} steps on {} episodes: {}".format(
            model, info.step, len(episodes), success_prob))

        target = self.manifest_target()
        if target is not None:
            makedirs(os.path.dirname(target.path))
            self.dump_manifest(target, "eval",
                scenario_hash=header.scenario_hash,
                episodes=len(episodes),
                checkpoint_step=info.step,
                success_prob=success_prob,
            )

        self.success_prob = success_prob
        print("{:.4f}".format(success_prob))


class LearningCurve(TrainingTask):

    config = luigi.Parameter(
        default=default_scenario_file(),
        description="the scenario config file; default: the bundled street scenario",
    )
    sizes = SizesParameter(
        description="ascending training sizes in time steps, e.g. 2000:14000:2000",
    )
    seeds = CSVParameter(
        cls=luigi.IntParameter,
        unique=True,
        min_len=1,
        description="comma-separated seeds, one curve per seed",
    )
    episodes = luigi.IntParameter(
        default=NO_INT,
        description="number of episodes generated per seed; default: [curve] episodes config",
    )
    test_steps = luigi.IntParameter(
        default=NO_INT,
        description="number of held-out time steps; default: [curve] test_steps config",
    )

    exclude_params_repr = {"seed"}

    def output(self):
        return OrderedDict([
            ("curve", self.local_target("curve.csv")),
            ("mean", self.local_target("curve_mean.csv")),
            ("plot", self.local_target("curve.svg")),
            ("manifest", self.local_target("manifest.json")),
        ])

    def curve_option(self, value, option):
        value = get_param(value)
        if value is None:
            value = Config.instance().get_expanded_int("curve", option)
        if value < 1:
            raise ArgumentError("{} must be at least 1, got {}".format(option, value))
        return value

    @timeit
    @safe_output
    def run(self):
        self.prepare_output()
        outputs = self.output()

        scenario = load_scenario_config(self.config)
        cb = scenario.codebook()
        n_episodes = self.curve_option(self.episodes, "episodes")
        test_steps = self.curve_option(self.test_steps, "test_steps")
        cfg = self.train_config()

        points = OrderedDict()
        for i, seed in enumerate(self.seeds):
            with self.publish_step("generating {} episodes for seed {} ...".format(n_episodes,
                    seed)):
                episodes = generate_dataset(scenario, n_episodes, cb, seed,
                    threads=self.threads)

            with self.publish_step("learning curve for seed {} ...".format(seed)):
                points[seed] = learning_curve(episodes, self.sizes, cfg, scenario.codebook_size,
                    scenario.num_bs, test_steps=test_steps, seed=seed)
            self.publish_progress(i + 1, len(self.seeds))

        write_curve_csv([p for seed_points in points.values() for p in seed_points],
            outputs["curve"].path)

        series = OrderedDict(
            ("seed {}".format(seed), [p.success_prob for p in seed_points])
            for seed, seed_points in six.iteritems(points)
        )
        baseline = float(np.mean([p.baseline for seed_points in points.values()
            for p in seed_points]))
        mean = plot_curve(self.sizes, series, outputs["plot"].path, baseline=baseline)

        mean_rows = [
            CurvePoint(size, prob, baseline, size) for size, prob in zip(self.sizes, mean)
        ]
        write_curve_csv(mean_rows, outputs["mean"].path)

        self.dump_manifest(outputs["manifest"], "curve",
            train_config=cfg.to_dict(),
            scenario_hash=scenario.hash,
            seed_order=list(self.seeds),
            episodes=n_episodes,
            test_steps=test_steps,
            mean_success=[float(p) for p in mean],
            baseline=baseline,
        )
