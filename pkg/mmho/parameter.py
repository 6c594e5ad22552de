# coding: utf-8

"""
Custom luigi parameters.
"""

__all__ = [
    "NO_STR", "NO_INT", "is_no_param", "get_param", "CSVParameter",
    "SizesParameter", "parse_sizes",
]

import csv

import luigi
import six

from mmho.util import make_tuple, make_unique, is_lazy_iterable, no_value, ArgumentError
from mmho.logger import get_logger


logger = get_logger(__name__)

# make luigi's BoolParameter parsing explicit globally
luigi.BoolParameter.parsing = getattr(luigi.BoolParameter, "EXPLICIT_PARSING", "explicit")

#: String value denoting an empty parameter.
NO_STR = "NO_STR"

#: Integer value denoting an empty parameter.
NO_INT = -1


def is_no_param(value):
    """
    Checks whether a parameter *value* denotes an empty parameter, i.e., if the value is either
    :py:attr:`NO_STR` or :py:attr:`NO_INT`.
    """
    return value in (NO_STR, NO_INT, no_value)


def get_param(value, default=None):
    """
    Returns the passed *value* when it does not refer to an empty parameter value, checked with
    :py:func:`is_no_param`. Otherwise, *default* is returned, which defaults to *None*.
    """
    return default if is_no_param(value) else value


class CSVParameter(luigi.Parameter):
    r""" __init__(*args, cls=luigi.Parameter, inst=None, unique=False, sort=False, min_len=None, \
        max_len=None, **kwargs)
    Parameter that parses a comma-separated value (CSV) and produces a tuple. *cls* (*inst*) can
    refer to an other parameter class (instance) that will be used to parse and serialize the
    particular items.

    When *unique* is *True*, both parsing and serialization methods make sure that values are
    unique. *sort* can be a boolean or a function for sorting parameter values. When *min_len*
    (*max_len*) is set to an integer, an error is raised in case the number of elements deceeds
    (exceeds) that value.

    .. code-block:: python

        p = CSVParameter(cls=luigi.IntParameter)
        p.parse("1,2,3,3")
        # => (1, 2, 3, 3)
        p.serialize((7, 8, 9))
        # => "7,8,9"

    The tuple type keeps values hashable, which luigi requires for its instance caching.
    """

    def __init__(self, *args, **kwargs):
        self._cls = kwargs.pop("cls", luigi.Parameter)
        self._inst = kwargs.pop("inst", None)
        self._unique = kwargs.pop("unique", False)
        self._sort = kwargs.pop("sort", False)
        self._min_len = kwargs.pop("min_len", None)
        self._max_len = kwargs.pop("max_len", None)

        # ensure that the default value is a tuple
        if "default" in kwargs:
            kwargs["default"] = make_tuple(kwargs["default"])

        # instantiate cls when inst is not set, or set cls base on inst
        if self._inst is None:
            self._inst = self._cls()
        else:
            self._cls = self._inst.__class__

        super(CSVParameter, self).__init__(*args, **kwargs)

    def _check(self, value):
        if self._unique:
            value = make_unique(value)

        if self._sort:
            key = self._sort if callable(self._sort) else None
            value = tuple(sorted(value, key=key))

        str_repr = lambda: ",".join(str(v) for v in value)
        if self._min_len is not None and len(value) < self._min_len:
            raise ValueError("'{}' contains {} value(s), a minimum of {} is required".format(
                str_repr(), len(value), self._min_len))
        if self._max_len is not None and len(value) > self._max_len:
            raise ValueError("'{}' contains {} value(s), a maximum of {} is allowed".format(
                str_repr(), len(value), self._max_len))

        return value

    def _split(self, inp):
        elems = list(csv.reader([inp]))[0]
        # skip trailing empty strings
        if elems and not elems[-1]:
            elems.pop()
        return elems

    def parse(self, inp):
        """"""
        if inp in (None, "", NO_STR, no_value):
            value = tuple()
        elif isinstance(inp, (tuple, list)) or is_lazy_iterable(inp):
            value = make_tuple(inp)
        elif isinstance(inp, six.string_types):
            value = tuple(self._inst.parse(elem.strip()) for elem in self._split(inp))
        else:
            value = (inp,)

        return self._check(value)

    def normalize(self, x):
        return self.parse(x)

    def serialize(self, value):
        """"""
        if value in (None, NO_STR, no_value):
            value = tuple()

        value = self._check(make_tuple(value))

        return ",".join(str(self._inst.serialize(v)) for v in value)


def parse_sizes(inp):
    """
    Parses a training size specification *inp* into a tuple of integers. Elements are separated by
    commas and are either plain integers or inclusive ranges ``start:stop:step``. The resulting
    sizes must be positive and strictly ascending, otherwise an :py:class:`ArgumentError` is raised.

    .. code-block:: python

        parse_sizes("2000:14000:2000")
        # -> (2000, 4000, 6000, 8000, 10000, 12000, 14000)

        parse_sizes("500,1000:2000:500")
        # -> (500, 1000, 1500, 2000)
    """
    sizes = []
    for elem in str(inp).split(","):
        elem = elem.strip()
        if not elem:
            continue
        try:
            if ":" in elem:
                parts = [int(p) for p in elem.split(":")]
                if len(parts) == 2:
                    parts.append(1)
                if len(parts) != 3 or parts[2] <= 0:
                    raise ValueError
                start, stop, step = parts
                sizes.extend(range(start, stop + 1, step))
            else:
                sizes.append(int(elem))
        except ValueError:
            raise ArgumentError("invalid size specification '{}'".format(elem))

    if not sizes:
        raise ArgumentError("empty size specification '{}'".format(inp))
    if any(s <= 0 for s in sizes):
        raise ArgumentError("sizes must be positive, got {}".format(sizes))
    if any(b <= a for a, b in zip(sizes[:-1], sizes[1:])):
        raise ArgumentError("sizes must be strictly ascending, got {}".format(sizes))

    return tuple(sizes)


class SizesParameter(CSVParameter):
    """
    Parameter that parses training sizes with :py:func:`parse_sizes`, accepting both plain integers
    and inclusive ``start:stop:step`` ranges.

    .. code-block:: python

        p = SizesParameter()
        p.parse("2000:6000:2000,10000")
        # => (2000, 4000, 6000, 10000)
        p.serialize((2000, 4000))
        # => "2000,4000"
    """

    def __init__(self, *args, **kwargs):
        kwargs["cls"] = luigi.IntParameter
        kwargs.setdefault("min_len", 1)
        super(SizesParameter, self).__init__(*args, **kwargs)

    def parse(self, inp):
        """"""
        if isinstance(inp, six.string_types):
            return self._check(parse_sizes(inp))
        return self._check(parse_sizes(",".join(str(v) for v in make_tuple(inp))))
