# coding: utf-8

"""
Binary checkpoint files of :py:class:`GruModel` instances.

Layout, all fields little-endian:

=======  ======================  ==========================================================
offset   type                    content
=======  ======================  ==========================================================
0        8 bytes                 magic ``MMHOCKPT``
8        uint32                  format version (1)
12       4 x uint32              E, H, N, M_CB
28       int64                   seed
36       uint64                  number of optimizer steps
44       float64 arrays          embd, W_r, W_z, W_q, U_r, U_z, U_q, c_r, c_z, c_q, W_f, c_f
=======  ======================  ==========================================================

Arrays are stored in row-major order without padding.
"""

__all__ = ["CheckpointError", "CheckpointInfo", "dumps_checkpoint", "loads_checkpoint",
    "save_checkpoint", "load_checkpoint"]


import os
import struct

import luigi
import numpy as np

from mmho.model.gru import GruModel
from mmho.util import CompatibilityError
from mmho.logger import get_logger


logger = get_logger(__name__)

MAGIC = b"MMHOCKPT"
VERSION = 1

_header = struct.Struct("<8sI4IqQ")


class CheckpointError(CompatibilityError):
    """
    Raised when a checkpoint file is truncated, has an unknown version or does not match the
    expected dimensions.
    """


class CheckpointInfo(object):

    def __init__(self, seed, step):
        super(CheckpointInfo, self).__init__()

        self.seed = int(seed)
        self.step = int(step)

    def __repr__(self):
        return "{}(seed={}, step={})".format(self.__class__.__name__, self.seed, self.step)


def dumps_checkpoint(model, seed=0, step=0):
    """
    Returns the checkpoint bytes of *model* with the generation *seed* and optimizer *step* count.
    """
    M, E, H, N = model.dims
    parts = [_header.pack(MAGIC, VERSION, E, H, N, M, int(seed), int(step))]
    for arr in model.params().values():
        parts.append(np.ascontiguousarray(arr, dtype="<f8").tobytes())
    return b"".join(parts)


def loads_checkpoint(data):
    """
    Parses checkpoint bytes *data* and returns the model and a :py:class:`CheckpointInfo`.
    """
    if len(data) < _header.size:
        raise CheckpointError("checkpoint truncated, only {} bytes".format(len(data)))

    magic, version, E, H, N, M, seed, step = _header.unpack_from(data, 0)
    if magic != MAGIC:
        raise CheckpointError("not a checkpoint, magic is {!r}".format(magic))
    if version != VERSION:
        raise CheckpointError("unsupported checkpoint version {}".format(version))

    shapes = GruModel.shapes(M, E, H, N)
    expected = _header.size + 8 * sum(int(np.prod(shape)) for shape in shapes.values())
    if len(data) != expected:
        raise CheckpointError("checkpoint has {} bytes, expected {}".format(len(data), expected))

    params = {}
    offset = _header.size
    for name, shape in shapes.items():
        count = int(np.prod(shape))
        params[name] = np.frombuffer(data, dtype="<f8", count=count, offset=offset).reshape(shape)
        offset += 8 * count

    return GruModel(**params), CheckpointInfo(seed, step)


def save_checkpoint(model, path, seed=0, step=0):
    """
    Writes the checkpoint of *model* to *path*, see :py:func:`dumps_checkpoint`.
    """
    data = dumps_checkpoint(model, seed=seed, step=step)
    with luigi.LocalTarget(str(path), format=luigi.format.Nop).open("w") as f:
        f.write(data)

    logger.debug("saved checkpoint of {} to {}".format(model, path))


def load_checkpoint(path):
    """
    Reads the checkpoint file at *path* and returns the model and a :py:class:`CheckpointInfo`.
    """
    path = os.path.expandvars(os.path.expanduser(str(path)))
    if not os.path.isfile(path):
        raise CheckpointError("checkpoint file '{}' does not exist".format(path))

    with open(path, "rb") as f:
        return loads_checkpoint(f.read())
