# coding: utf-8

"""
"mmho curve" cli subprogram.
"""


import os

from mmho.config import Config
from mmho.task.tasks import LearningCurve
from mmho.cli.cli import build, positive_int
from mmho.parameter import parse_sizes
from mmho.util import ConfigError, ArgumentError, brace_expand


_cfg = Config.instance()


def parse_seeds(inp):
    try:
        seeds = tuple(int(s) for s in brace_expand(inp, split_csv=True) if s.strip())
    except ValueError:
        raise ArgumentError("invalid seeds '{}'".format(inp))
    if not seeds:
        raise ArgumentError("at least one seed is required")
    if len(set(seeds)) != len(seeds):
        raise ArgumentError("seeds must be unique, got '{}'".format(inp))
    return seeds


def setup_parser(sub_parsers):
    """
    Sets up the command line parser for the *curve* subprogram and adds it to *sub_parsers*.
    """
    parser = sub_parsers.add_parser(
        "curve",
        prog="mmho curve",
        description="Run the learning curve experiment: success probability on a held-out set "
        "versus the number of training samples, for several seeds. Writes curve.csv, "
        "curve_mean.csv, curve.svg and manifest.json.",
    )

    parser.add_argument(
        "--config",
        "-c",
        required=True,
        help="the scenario config file",
    )
    parser.add_argument(
        "--sizes",
        default=_cfg.get_expanded("curve", "sizes"),
        help="ascending training sizes in time steps as integers or inclusive start:stop:step "
        "ranges; default: %(default)s",
    )
    parser.add_argument(
        "--seeds",
        default=_cfg.get_expanded("curve", "seeds"),
        help="comma-separated seeds, one curve per seed; default: %(default)s",
    )
    parser.add_argument(
        "--episodes",
        "-n",
        type=int,
        default=_cfg.get_expanded_int("curve", "episodes"),
        help="number of episodes generated per seed; default: %(default)s",
    )
    parser.add_argument(
        "--test-steps",
        type=int,
        default=_cfg.get_expanded_int("curve", "test_steps"),
        help="number of held-out time steps; default: %(default)s",
    )
    parser.add_argument(
        "--epochs",
        "-e",
        type=int,
        default=_cfg.get_expanded_int("training", "epochs"),
        help="number of epochs per training run; default: %(default)s",
    )
    parser.add_argument(
        "--hidden",
        type=int,
        default=_cfg.get_expanded_int("training", "hidden_size"),
        help="size of the hidden state; default: %(default)s",
    )
    parser.add_argument(
        "--batch-size",
        type=int,
        default=_cfg.get_expanded_int("training", "batch_size"),
        help="episodes per update; default: %(default)s",
    )
    parser.add_argument(
        "--out",
        "-o",
        required=True,
        help="the output directory",
    )
    parser.add_argument(
        "--threads",
        "-t",
        type=int,
        default=1,
        help="number of generation and evaluation threads; default: %(default)s",
    )
    parser.add_argument(
        "--remove-output",
        "-r",
        action="store_true",
        help="remove existing outputs in the output directory before running",
    )


def execute(args):
    """
    Executes the *curve* subprogram with parsed commandline *args*.
    """
    if not os.path.isfile(os.path.expandvars(os.path.expanduser(args.config))):
        raise ConfigError("scenario config file '{}' does not exist".format(args.config))

    task = LearningCurve(
        config=args.config,
        sizes=parse_sizes(args.sizes),
        seeds=parse_seeds(args.seeds),
        episodes=positive_int("episodes", args.episodes),
        test_steps=positive_int("test-steps", args.test_steps),
        epochs=positive_int("epochs", args.epochs),
        hidden_size=positive_int("hidden", args.hidden),
        batch_size=positive_int("batch-size", args.batch_size),
        out=args.out,
        threads=positive_int("threads", args.threads),
    )
    build(task, remove_output=args.remove_output)

    print(task.output()["curve"].path)
    return 0
