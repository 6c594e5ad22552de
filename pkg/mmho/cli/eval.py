# coding: utf-8

"""
"mmho eval" cli subprogram.
"""


import os

from mmho.task.tasks import EvaluateModel
from mmho.cli.cli import build, positive_int
from mmho.dataset import DatasetError
from mmho.model.checkpoint import CheckpointError
from mmho.util import ConfigError, ArgumentError


def setup_parser(sub_parsers):
    """
    Sets up the command line parser for the *eval* subprogram and adds it to *sub_parsers*.
    """
    parser = sub_parsers.add_parser(
        "eval",
        prog="mmho eval",
        description="Print the success probability of a model checkpoint on a dataset file.",
    )

    parser.add_argument(
        "--checkpoint",
        "-m",
        required=True,
        help="the model checkpoint file",
    )
    parser.add_argument(
        "--dataset",
        "-d",
        required=True,
        help="the dataset file",
    )
    parser.add_argument(
        "--config",
        "-c",
        help="scenario config file the dataset must have been generated from; default: no check",
    )
    parser.add_argument(
        "--test-fraction",
        type=float,
        default=0.0,
        help="evaluate only on the episodes held out by 'mmho train' with the same --seed and "
        "--test-fraction, 0 evaluates on all episodes; default: %(default)s",
    )
    parser.add_argument(
        "--seed",
        "-s",
        type=int,
        default=0,
        help="seed of the held-out split; default: %(default)s",
    )
    parser.add_argument(
        "--out",
        "-o",
        help="optional output directory receiving a manifest.json",
    )
    parser.add_argument(
        "--threads",
        "-t",
        type=int,
        default=1,
        help="number of evaluation threads; default: %(default)s",
    )


def execute(args):
    """
    Executes the *eval* subprogram with parsed commandline *args*. The success probability is
    printed by the task itself.
    """
    if not os.path.isfile(os.path.expandvars(os.path.expanduser(args.checkpoint))):
        raise CheckpointError("checkpoint file '{}' does not exist".format(args.checkpoint))
    if not os.path.isfile(os.path.expandvars(os.path.expanduser(args.dataset))):
        raise DatasetError("dataset file '{}' does not exist".format(args.dataset))
    if args.config and not os.path.isfile(os.path.expandvars(os.path.expanduser(args.config))):
        raise ConfigError("scenario config file '{}' does not exist".format(args.config))
    if not 0 <= args.test_fraction < 1:
        raise ArgumentError("--test-fraction must be in [0, 1), got {}".format(
            args.test_fraction))

    task = EvaluateModel(
        checkpoint=args.checkpoint,
        dataset=args.dataset,
        config=args.config or "",
        test_fraction=args.test_fraction,
        seed=args.seed,
        out=args.out or "",
        threads=positive_int("threads", args.threads),
    )
    build(task)

    return 0
