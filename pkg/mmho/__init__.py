# coding: utf-8
# flake8: noqa

__all__ = [
    "Config",
    "ChannelConfig", "Path", "PathSet", "Codebook", "build_codebook", "select_beam",
    "ScenarioConfig", "default_scenario", "load_scenario_config", "generate_episode",
    "generate_dataset", "LabeledEpisode",
    "DatasetFile", "DatasetHeader",
    "GruModel", "init_params", "save_checkpoint", "load_checkpoint",
    "TrainConfig", "TrainReport", "evaluate", "learning_curve",
    "Task", "GenerateDataset", "TrainModel", "EvaluateModel", "LearningCurve",
    "run",
]


# package infos
from mmho.__version__ import (
    __doc__, __author__, __email__, __copyright__, __credits__, __contact__, __license__,
    __status__, __version__,
)


# setup logging
import mmho.logger
mmho.logger.setup_logging()


# provisioning imports
from mmho.config import Config
from mmho.channel import ChannelConfig, Path, PathSet
from mmho.codebook import Codebook, build_codebook, select_beam
from mmho.scenario import (
    ScenarioConfig, default_scenario, load_scenario_config, generate_episode, generate_dataset,
    LabeledEpisode,
)
from mmho.dataset import DatasetFile, DatasetHeader
from mmho.model import GruModel, init_params, save_checkpoint, load_checkpoint
from mmho.train import TrainConfig, TrainReport, evaluate, learning_curve
from mmho.task import Task, GenerateDataset, TrainModel, EvaluateModel, LearningCurve
from mmho.cli import run
