# coding: utf-8

"""
mmho command line interface entry point.
"""


import sys
import logging
from importlib import import_module
from argparse import ArgumentParser

import luigi

import mmho
from mmho.task.base import Task
from mmho.util import MMHOError, ArgumentError, abort
from mmho.logger import get_logger


logger = get_logger(__name__)

progs = ["generate", "train", "eval", "curve"]

# exceptions of failed tasks, filled by the failure handler below
_failures = []


@Task.event_handler(luigi.Event.FAILURE)
def _on_failure(task, exception):
    _failures.append(exception)


def run(argv=None):
    """
    Entry point to the mmho cli. Sets up all parsers, parses all arguments given by *argv*, and
    executes the requested subprogram. When *None*, *argv* defaults to ``sys.argv[1:]``. Errors
    abort the process with the exit code of the raised :py:class:`mmho.util.MMHOError`.
    """
    # setup the main parser and sub parsers
    parser = ArgumentParser(
        prog="mmho",
        description="Simulate mmWave beam sequences and train a proactive hand-off predictor.",
    )
    sub_parsers = parser.add_subparsers(
        help="subcommands",
        dest="command",
    )

    # add main arguments
    parser.add_argument(
        "--version",
        "-V",
        action="version",
        version=mmho.__version__,
    )
    parser.add_argument(
        "--log-level",
        "-l",
        help="log level of the mmho logger, e.g. DEBUG or INFO; default: [logging] mmho config",
    )

    # setup all progs
    mods = {}
    for prog in progs:
        mods[prog] = import_module("mmho.cli." + prog)
        mods[prog].setup_parser(sub_parsers)

    # default argv
    if argv is None:
        argv = sys.argv[1:]

    args = parser.parse_args(argv)

    # the parser determines the prog
    prog = args.command
    if not prog:
        parser.print_help()
        return 0

    try:
        if args.log_level:
            level = getattr(logging, args.log_level.upper(), None)
            if not isinstance(level, int):
                raise ArgumentError("unknown log level '{}'".format(args.log_level))
            get_logger("mmho").setLevel(level)

        return mods[prog].execute(args)
    except MMHOError as e:
        abort(str(e), exitcode=e.exit_code)


def positive_int(name, value):
    if value is None or value < 1:
        raise ArgumentError("--{} must be at least 1, got {}".format(name, value))
    return value


def build(task, remove_output=False):
    """
    Runs *task* with the local luigi scheduler. Existing outputs are removed first when
    *remove_output* is *True*, and kept otherwise. When the task fails, the exception passed to the
    failure handler is raised again so that its exit code is used.
    """
    del _failures[:]

    if remove_output:
        task.remove_output()
    elif task.complete():
        logger.warning("outputs of {!r} exist and are kept, pass --remove-output to recreate "
            "them".format(task))

    logger.debug("running {!r}".format(task))
    success = luigi.build([task], local_scheduler=True, no_lock=True, workers=1)

    if _failures:
        raise _failures[-1]
    if not success:
        raise MMHOError("task {!r} did not complete".format(task))

    return task
