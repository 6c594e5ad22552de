# coding: utf-8
# flake8: noqa

"""
Recurrent hand-off prediction model, its optimizer and checkpoint files.
"""

__all__ = [
    "GruModel", "init_params", "embed", "gru_step", "softmax", "predict_step", "forward",
    "forward_batch", "loss", "backward", "backward_batch", "predict", "predict_batch",
    "AdamState", "adam_update", "clip_gradients", "CheckpointError", "save_checkpoint",
    "load_checkpoint",
]


# provisioning imports
from mmho.model.gru import (
    GruModel, init_params, embed, gru_step, softmax, predict_step, forward, forward_batch, loss,
    backward, backward_batch, predict, predict_batch,
)
from mmho.model.optimizer import AdamState, adam_update, clip_gradients
from mmho.model.checkpoint import CheckpointError, save_checkpoint, load_checkpoint
