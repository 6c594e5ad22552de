# coding: utf-8

"""
"mmho train" cli subprogram.
"""


import os

from mmho.config import Config
from mmho.task.tasks import TrainModel
from mmho.cli.cli import build, positive_int
from mmho.dataset import DatasetError
from mmho.util import ConfigError, ArgumentError


_cfg = Config.instance()


def setup_parser(sub_parsers):
    """
    Sets up the command line parser for the *train* subprogram and adds it to *sub_parsers*.
    """
    parser = sub_parsers.add_parser(
        "train",
        prog="mmho train",
        description="Train a hand-off prediction model on a dataset file and write the checkpoint, "
        "the per-epoch metrics and a manifest.",
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
        "--epochs",
        "-e",
        type=int,
        default=_cfg.get_expanded_int("training", "epochs"),
        help="number of epochs; default: %(default)s",
    )
    parser.add_argument(
        "--hidden",
        type=int,
        default=_cfg.get_expanded_int("training", "hidden_size"),
        help="size of the hidden state; default: %(default)s",
    )
    parser.add_argument(
        "--lr",
        type=float,
        default=_cfg.get_expanded_float("training", "learning_rate"),
        help="Adam learning rate; default: %(default)s",
    )
    parser.add_argument(
        "--batch-size",
        type=int,
        default=_cfg.get_expanded_int("training", "batch_size"),
        help="episodes per update; default: %(default)s",
    )
    parser.add_argument(
        "--clip",
        type=float,
        default=_cfg.get_expanded_float("training", "clip_norm"),
        help="global gradient norm limit, 0 disables clipping; default: %(default)s",
    )
    parser.add_argument(
        "--test-fraction",
        type=float,
        default=_cfg.get_expanded_float("training", "test_fraction"),
        help="fraction of episodes held out for testing; default: %(default)s",
    )
    parser.add_argument(
        "--seed",
        "-s",
        type=int,
        default=0,
        help="seed of all random streams; default: %(default)s",
    )
    parser.add_argument(
        "--out",
        "-o",
        required=True,
        help="the output directory receiving model.ckpt, metrics.csv and manifest.json",
    )
    parser.add_argument(
        "--threads",
        "-t",
        type=int,
        default=1,
        help="number of evaluation threads; default: %(default)s",
    )
    parser.add_argument(
        "--remove-output",
        "-r",
        action="store_true",
        help="remove existing outputs in the output directory before running",
    )


def execute(args):
    """
    Executes the *train* subprogram with parsed commandline *args*.
    """
    if not os.path.isfile(os.path.expandvars(os.path.expanduser(args.dataset))):
        raise DatasetError("dataset file '{}' does not exist".format(args.dataset))
    if args.config and not os.path.isfile(os.path.expandvars(os.path.expanduser(args.config))):
        raise ConfigError("scenario config file '{}' does not exist".format(args.config))
    if args.lr <= 0:
        raise ArgumentError("--lr must be positive, got {}".format(args.lr))
    if args.clip < 0:
        raise ArgumentError("--clip must not be negative, got {}".format(args.clip))
    if not 0 <= args.test_fraction < 1:
        raise ArgumentError("--test-fraction must be in [0, 1), got {}".format(
            args.test_fraction))

    task = TrainModel(
        dataset=args.dataset,
        config=args.config or "",
        epochs=positive_int("epochs", args.epochs),
        hidden_size=positive_int("hidden", args.hidden),
        learning_rate=args.lr,
        batch_size=positive_int("batch-size", args.batch_size),
        clip_norm=args.clip,
        test_fraction=args.test_fraction,
        seed=args.seed,
        out=args.out,
        threads=positive_int("threads", args.threads),
    )
    build(task, remove_output=args.remove_output)

    print(task.output()["checkpoint"].path)
    return 0
