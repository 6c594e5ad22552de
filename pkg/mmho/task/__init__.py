# coding: utf-8
# flake8: noqa

"""
luigi tasks running the generation, training, evaluation and learning curve workflows.
"""

__all__ = [
    "Task", "ExternalTask", "DatasetInput", "DatasetTask", "GenerateDataset", "TrainModel",
    "EvaluateModel", "LearningCurve",
]


# provisioning imports
from mmho.task.base import Task, ExternalTask
from mmho.task.tasks import (
    DatasetInput, DatasetTask, GenerateDataset, TrainModel, EvaluateModel, LearningCurve,
)
