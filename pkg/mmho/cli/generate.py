# coding: utf-8

"""
"mmho generate" cli subprogram.
"""


import os

from mmho.config import Config
from mmho.task.tasks import GenerateDataset
from mmho.cli.cli import build, positive_int
from mmho.util import ConfigError


_cfg = Config.instance()


def setup_parser(sub_parsers):
    """
    Sets up the command line parser for the *generate* subprogram and adds it to *sub_parsers*.
    """
    parser = sub_parsers.add_parser(
        "generate",
        prog="mmho generate",
        description="Generate a dataset of labeled beam sequences from a scenario config file.",
    )

    parser.add_argument(
        "--config",
        "-c",
        required=True,
        help="the scenario config file",
    )
    parser.add_argument(
        "--episodes",
        "-n",
        type=int,
        default=_cfg.get_expanded_int("generate", "episodes"),
        help="number of episodes; default: %(default)s",
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
        help="the output directory receiving dataset.txt and manifest.json",
    )
    parser.add_argument(
        "--threads",
        "-t",
        type=int,
        default=_cfg.get_expanded_int("generate", "threads"),
        help="number of generation threads; default: %(default)s",
    )
    parser.add_argument(
        "--remove-output",
        "-r",
        action="store_true",
        help="remove existing outputs in the output directory before running",
    )


def execute(args):
    """
    Executes the *generate* subprogram with parsed commandline *args*.
    """
    if not os.path.isfile(os.path.expandvars(os.path.expanduser(args.config))):
        raise ConfigError("scenario config file '{}' does not exist".format(args.config))

    task = GenerateDataset(
        config=args.config,
        episodes=positive_int("episodes", args.episodes),
        seed=args.seed,
        out=args.out,
        threads=positive_int("threads", args.threads),
    )
    build(task, remove_output=args.remove_output)

    print(task.output()["dataset"].path)
    return 0
