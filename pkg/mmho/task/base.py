# coding: utf-8

"""
Custom luigi base task definitions.
"""

__all__ = ["Task", "ExternalTask"]


import json
import logging
from collections import OrderedDict
from contextlib import contextmanager

import luigi
import six

from mmho.config import Config
from mmho.logger import setup_logger
from mmho.util import no_value, colored, uncolored, flatten, human_duration, perf_counter
from mmho.__version__ import __version__
from mmho.logger import get_logger


logger = get_logger(__name__)


class Task(luigi.Task):

    # parameters that are left out of the task representation
    exclude_params_repr = set()

    # cache size for published messages
    message_cache_size = 10

    def __init__(self, *args, **kwargs):
        super(Task, self).__init__(*args, **kwargs)

        # task level logger, created lazily
        self._task_logger = None

        # cache for messages published to the scheduler
        self._message_cache = []

    def complete(self):
        outputs = flatten(self.output())

        if len(outputs) == 0:
            logger.warning("task {!r} has no outputs or no custom complete() method".format(self))
            return True

        return all(t.exists() for t in outputs)

    def get_logger_name(self):
        return self.task_id

    @property
    def logger(self):
        if not self._task_logger:
            name = self.get_logger_name()
            existing = name in logging.root.manager.loggerDict
            self._task_logger = logging.getLogger(name) if existing else setup_logger(name)

        return self._task_logger

    def _publish_message(self, msg):
        self._message_cache.append(uncolored(msg))
        del self._message_cache[:max(len(self._message_cache) - self.message_cache_size, 0)]

        if callable(getattr(self, "set_status_message", None)):
            self.set_status_message("\n".join(self._message_cache))

    @contextmanager
    def publish_step(self, msg, success_message="done", fail_message="failed", runtime=True):
        self.logger.info(msg)
        success = False
        t0 = perf_counter()
        try:
            yield
            success = True
        finally:
            msg = success_message if success else fail_message
            if runtime:
                diff = perf_counter() - t0
                msg = "{} (took {})".format(msg, human_duration(seconds=diff))
            self.logger.info(msg)
            self._publish_message(msg)

    def publish_progress(self, done, total):
        if callable(getattr(self, "set_progress_percentage", None)):
            self.set_progress_percentage(int(100.0 * done / total))

    def manifest(self, command, **kwargs):
        """
        Returns the run manifest of this task as an ordered dictionary with the *command* name, the
        tool version, all significant parameters and additional *kwargs*.
        """
        data = OrderedDict(command=command, version=__version__)
        for name, param in self.get_params():
            if param.significant:
                data[name] = param.serialize(getattr(self, name))
        data.update(kwargs)
        return data

    def dump_manifest(self, target, command, **kwargs):
        with target.open("w") as f:
            json.dump(self.manifest(command, **kwargs), f, indent=4, sort_keys=True)
            f.write("\n")

    def __repr__(self):
        color = Config.instance().get_expanded_bool("task", "colored_repr")
        return self.repr(color=color)

    def __str__(self):
        color = Config.instance().get_expanded_bool("task", "colored_str")
        return self.repr(color=color)

    def repr(self, all_params=False, color=None):
        if color is None:
            color = Config.instance().get_expanded_bool("task", "colored_repr")

        family = self.get_task_family()
        if color:
            family = colored(family, "green")

        parts = [
            self._repr_param(name, value, color=color)
            for name, value in six.iteritems(self._repr_params(all_params=all_params))
        ] + [
            (colored(flag, color="magenta") if color else flag)
            for flag in self._repr_flags()
        ]

        return "{}({})".format(family, ", ".join(parts))

    def _repr_params(self, all_params=False):
        params = OrderedDict()
        for name, param in self.get_params():
            if param.significant and (all_params or name not in self.exclude_params_repr):
                params[name] = getattr(self, name)
        return params

    def _repr_flags(self):
        return []

    def _repr_param(self, name, value, color=False):
        param = getattr(self.__class__, name, no_value)
        if isinstance(param, luigi.Parameter):
            value = param.serialize(value)

        return "{}={}".format(colored(name, color="blue", style="bright") if color else name, value)


class ExternalTask(Task):

    run = None

    def _repr_flags(self):
        return super(ExternalTask, self)._repr_flags() + ["external"]
