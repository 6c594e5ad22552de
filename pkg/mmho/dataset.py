# coding: utf-8

"""
Line-oriented text format for labeled episode datasets.

The first line is a header ``MCB=<int> N=<int> SEED=<int> SCENARIO=<hex>`` that names the codebook
size, the number of base stations, the generation seed and the scenario hash. Every following line
holds one episode as ``beams=<i,...>;labels=<i,...>``.
"""

__all__ = [
    "DatasetError", "DatasetParseError", "DatasetSchemaError", "DatasetHeader", "DatasetFile",
    "save", "load", "split", "take_steps", "num_steps",
]


import io
import os
import re

import luigi

from mmho.scenario.generator import LabeledEpisode
from mmho.util import MMHOError, ContractError, ArgumentError, derive_rng
from mmho.logger import get_logger


logger = get_logger(__name__)


class DatasetError(MMHOError):

    exit_code = 3


class DatasetParseError(DatasetError):
    """
    Raised for malformed lines, the message names the line number *lineno* (starting at 1).
    """

    def __init__(self, msg, lineno=None):
        if lineno is not None:
            msg = "line {}: {}".format(lineno, msg)
        super(DatasetParseError, self).__init__(msg)
        self.lineno = lineno


class DatasetSchemaError(DatasetError):
    """
    Raised when well-formed lines violate the header, e.g. beam indices beyond the codebook size.
    """


class DatasetHeader(object):

    header_cre = re.compile(r"^MCB=(\d+) N=(\d+) SEED=(-?\d+) SCENARIO=([0-9a-fA-F]+)$")

    def __init__(self, codebook_size, num_bs, seed=0, scenario_hash="0"):
        super(DatasetHeader, self).__init__()

        self.codebook_size = int(codebook_size)
        self.num_bs = int(num_bs)
        self.seed = int(seed)
        self.scenario_hash = str(scenario_hash)

        if self.codebook_size < 1 or self.num_bs < 1:
            raise ContractError("invalid dataset header {}".format(self.to_line()))
        if not re.match(r"^[0-9a-fA-F]+$", self.scenario_hash):
            raise ContractError("scenario hash must be hexadecimal, got '{}'".format(
                self.scenario_hash))

    def __eq__(self, other):
        if not isinstance(other, DatasetHeader):
            return NotImplemented
        return self.to_line() == other.to_line()

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __repr__(self):
        return "{}({})".format(self.__class__.__name__, self.to_line())

    def to_line(self):
        return "MCB={} N={} SEED={} SCENARIO={}".format(self.codebook_size, self.num_bs,
            self.seed, self.scenario_hash)

    @classmethod
    def from_line(cls, line, lineno=1):
        m = cls.header_cre.match(line)
        if not m:
            raise DatasetParseError("invalid header '{}'".format(line), lineno=lineno)
        try:
            return cls(int(m.group(1)), int(m.group(2)), int(m.group(3)), m.group(4))
        except ContractError as e:
            raise DatasetSchemaError("line {}: {}".format(lineno, e))


_record_cre = re.compile(r"^beams=(\d+(?:,\d+)*);labels=(\d+(?:,\d+)*)$")


def _format_record(episode):
    return "beams={};labels={}".format(",".join(map(str, episode.beam_indices)),
        ",".join(map(str, episode.labels)))


class DatasetFile(object):
    """
    A :py:class:`DatasetHeader` *header* together with its list of *episodes*.
    """

    def __init__(self, header, episodes):
        super(DatasetFile, self).__init__()

        self.header = header
        self.episodes = list(episodes)

    def __len__(self):
        return len(self.episodes)

    def __iter__(self):
        return iter(self.episodes)

    def __repr__(self):
        return "{}({}, episodes={}, steps={})".format(self.__class__.__name__,
            self.header.to_line(), len(self), self.num_steps)

    @property
    def num_steps(self):
        return num_steps(self.episodes)

    def validate(self):
        """
        Raises a :py:class:`DatasetSchemaError` when an episode refers to a beam index or a base
        station that is not covered by the header.
        """
        for i, episode in enumerate(self.episodes):
            _validate_episode(episode, self.header, i)

    def dumps(self):
        self.validate()
        lines = [self.header.to_line()] + [_format_record(ep) for ep in self.episodes]
        return "\n".join(lines) + "\n"


def _validate_episode(episode, header, i, lineno=None):
    where = "line {}".format(lineno) if lineno else "episode {}".format(i)
    if max(episode.beam_indices) >= header.codebook_size:
        raise DatasetSchemaError("{}: beam index {} exceeds codebook size {}".format(where,
            max(episode.beam_indices), header.codebook_size))
    if max(episode.labels) >= header.num_bs:
        raise DatasetSchemaError("{}: label {} exceeds number of base stations {}".format(where,
            max(episode.labels), header.num_bs))


def save(dataset, path):
    """
    Writes a :py:class:`DatasetFile` *dataset* to *path*. The file appears atomically.
    """
    content = dataset.dumps()
    with luigi.LocalTarget(str(path)).open("w") as f:
        f.write(content)

    logger.debug("saved {} to {}".format(dataset, path))


def parse(content):
    """
    Parses the text *content* of a dataset file and returns a :py:class:`DatasetFile`.
    """
    lines = content.split("\n")
    # a single trailing newline terminates the last line
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise DatasetParseError("missing header", lineno=1)

    header = DatasetHeader.from_line(lines[0].rstrip("\r"), lineno=1)

    episodes = []
    for lineno, line in enumerate(lines[1:], 2):
        line = line.rstrip("\r")
        if DatasetHeader.header_cre.match(line):
            raise DatasetSchemaError("line {}: repeated header".format(lineno))
        m = _record_cre.match(line)
        if not m:
            raise DatasetParseError("malformed record '{}'".format(line[:60]), lineno=lineno)

        beams = [int(b) for b in m.group(1).split(",")]
        labels = [int(s) for s in m.group(2).split(",")]
        if len(beams) != len(labels):
            raise DatasetSchemaError("line {}: {} beams but {} labels".format(lineno, len(beams),
                len(labels)))

        episode = LabeledEpisode(beams, labels)
        _validate_episode(episode, header, len(episodes), lineno=lineno)
        episodes.append(episode)

    return DatasetFile(header, episodes)


def load(path):
    """
    Reads the dataset file at *path* and returns a :py:class:`DatasetFile`. A
    :py:class:`DatasetParseError` is raised for malformed lines and a :py:class:`DatasetSchemaError`
    for records that contradict the header.
    """
    path = os.path.expandvars(os.path.expanduser(str(path)))
    if not os.path.isfile(path):
        raise DatasetError("dataset file '{}' does not exist".format(path))

    try:
        with io.open(path, "r", encoding="utf-8") as f:
            content = f.read()
    except (IOError, UnicodeDecodeError) as e:
        raise DatasetError("cannot read dataset file '{}': {}".format(path, e))

    dataset = parse(content)
    logger.debug("loaded {} from {}".format(dataset, path))

    return dataset


def num_steps(episodes):
    """
    Returns the total number of labeled time steps in *episodes*.
    """
    return sum(len(ep) for ep in episodes)


def split(episodes, train_fraction, seed):
    """
    Shuffles *episodes* with a stream derived from *seed* and splits them into a training and a
    test list, where the training list receives ``round(train_fraction * n)`` episodes but at least
    one and never all of them.
    """
    episodes = list(episodes)
    n = len(episodes)
    if n < 2:
        raise ContractError("at least 2 episodes are required for splitting, got {}".format(n))
    if not 0 < train_fraction < 1:
        raise ContractError("train_fraction must be in (0, 1), got {}".format(train_fraction))

    n_train = min(max(int(round(train_fraction * n)), 1), n - 1)
    order = derive_rng(seed, "split").permutation(n)

    train = [episodes[i] for i in order[:n_train]]
    test = [episodes[i] for i in order[n_train:]]

    return train, test


def take_steps(episodes, n_steps):
    """
    Returns the leading whole episodes of *episodes* whose total number of steps first reaches
    *n_steps*. An :py:class:`mmho.util.ArgumentError` is raised when all episodes together are too
    short.
    """
    taken = []
    total = 0
    for episode in episodes:
        if total >= n_steps:
            break
        taken.append(episode)
        total += len(episode)

    if total < n_steps:
        raise ArgumentError("requested {} steps but only {} are available".format(n_steps,
            total))

    return taken

