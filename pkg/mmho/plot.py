# coding: utf-8

"""
Static SVG plots of learning curves.
"""

__all__ = ["plot_curve"]


import io

import matplotlib
from matplotlib.figure import Figure
from matplotlib.backends.backend_svg import FigureCanvasSVG
import luigi
import numpy as np

from mmho.util import ContractError
from mmho.logger import get_logger


logger = get_logger(__name__)


def plot_curve(sizes, series, path, baseline=None, title=None):
    """
    Draws the success probability versus the training size and writes it as SVG to *path*.
    *series* maps labels (e.g. ``"seed 1"``) to sequences of probabilities, one per size in
    *sizes*, and a ``"mean"`` series is added on top. When *baseline* is given, the majority
    baseline is drawn as a dashed line. The output is identical for identical inputs.
    """
    sizes = np.asarray(sizes, dtype=float)
    if not series:
        raise ContractError("at least one series is required")
    for label, values in series.items():
        if len(values) != len(sizes):
            raise ContractError("series '{}' has {} values but there are {} sizes".format(label,
                len(values), len(sizes)))

    fig = Figure(figsize=(6.4, 4.8))
    FigureCanvasSVG(fig)
    ax = fig.add_subplot(1, 1, 1)

    for label, values in series.items():
        ax.plot(sizes, values, marker="o", linewidth=1.0, alpha=0.6, label=label)

    mean = np.mean([list(values) for values in series.values()], axis=0)
    ax.plot(sizes, mean, marker="s", color="black", linewidth=2.0, label="mean")

    if baseline is not None:
        ax.axhline(baseline, color="grey", linestyle="--", linewidth=1.0, label="majority baseline")

    ax.set_xlabel("Training size [samples]")
    ax.set_ylabel("Success probability")
    ax.set_ylim(0.0, 1.02)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="lower right")
    if title:
        ax.set_title(title)
    fig.tight_layout()

    buf = io.StringIO()
    with matplotlib.rc_context({"svg.hashsalt": "mmho"}):
        fig.savefig(buf, format="svg", metadata={"Date": None})
    with luigi.LocalTarget(str(path)).open("w") as f:
        f.write(buf.getvalue())

    logger.debug("saved learning curve plot to {}".format(path))

    return mean
