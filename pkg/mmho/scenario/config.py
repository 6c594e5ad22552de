# coding: utf-8

"""
Street scenario definition and its config file representation.
"""

__all__ = [
    "Box", "Wall", "ScenarioConfig", "ScenarioError", "default_scenario", "load_scenario_config",
    "default_scenario_file",
]


import os
import json
import re

import numpy as np
from six.moves.configparser import Error as ConfigParserError

from mmho.channel import ChannelConfig
from mmho.codebook import build_codebook
from mmho.config import Config
from mmho.util import MMHOError, ConfigError, create_hash, mmho_src_path
from mmho.logger import get_logger


logger = get_logger(__name__)


class ScenarioError(MMHOError):
    """
    Raised for invalid scenario geometry, such as users placed outside the street.
    """


class Box(object):
    """
    Axis-aligned box in meters, used for stationary blockers.
    """

    def __init__(self, x_min, x_max, y_min, y_max, z_min=0.0, z_max=3.0):
        super(Box, self).__init__()

        self.lower = np.array([x_min, y_min, z_min], dtype=float)
        self.upper = np.array([x_max, y_max, z_max], dtype=float)
        if (self.upper < self.lower).any():
            raise ScenarioError("box has negative extent: {}".format(self))

    def __repr__(self):
        return "{}(lower={}, upper={})".format(self.__class__.__name__, self.lower.tolist(),
            self.upper.tolist())

    def to_dict(self):
        keys = ["x_min", "y_min", "z_min", "x_max", "y_max", "z_max"]
        return dict(zip(keys, self.lower.tolist() + self.upper.tolist()))


class Wall(object):
    """
    Vertical reflecting plane ``y = const`` parallel to the street axis, covering
    ``x_min <= x <= x_max`` and ``0 <= z <= height``.
    """

    def __init__(self, y, x_min, x_max, height=10.0):
        super(Wall, self).__init__()

        if x_max < x_min or height <= 0:
            raise ScenarioError("invalid wall extent x=[{}, {}], height={}".format(x_min, x_max,
                height))

        self.y = float(y)
        self.x_min = float(x_min)
        self.x_max = float(x_max)
        self.height = float(height)

    def __repr__(self):
        return "{}(y={}, x=[{}, {}], height={})".format(self.__class__.__name__, self.y,
            self.x_min, self.x_max, self.height)

    def to_dict(self):
        return {"y": self.y, "x_min": self.x_min, "x_max": self.x_max, "height": self.height}


class ScenarioConfig(object):
    """
    Complete description of the street scenario. Lengths are in meters, *speeds* in km/h,
    *tx_power* in dBm, *noise_figure*, *hysteresis_margin* and *reflection_loss* in dB,
    *min_alpha* in degrees and frequencies in Hz. *bs_positions* is a sequence of 3-D points, each
    base station array faces the center line of the street.

    The street spans ``0 <= x <= length`` and ``0 <= y <= width``; users move along the x-axis.
    """

    def __init__(self, bs_positions, length=200.0, width=20.0, start_window=40.0,
            trajectory_max_len=160.0, user_height=1.5, bs_height=4.0, blockers=None, walls=None,
            speeds=(8, 16, 24, 32, 40), min_alpha=5.0, max_seq_len=454, tx_power=30.0,
            noise_figure=0.0, bandwidth=1e9, carrier_freq=60e9, hysteresis_margin=0.0,
            reflection_loss=10.0, num_antennas=32, oversampling=4, antenna_spacing=0.5,
            num_subcarriers=64, num_taps=16, rolloff=0.1):
        super(ScenarioConfig, self).__init__()

        self.bs_positions = np.array(bs_positions, dtype=float, ndmin=2)
        self.length = float(length)
        self.width = float(width)
        self.start_window = float(start_window)
        self.trajectory_max_len = float(trajectory_max_len)
        self.user_height = float(user_height)
        self.bs_height = float(bs_height)
        self.blockers = list(blockers or [])
        self.walls = list(walls or [])
        self.speeds = tuple(float(s) for s in speeds)
        self.min_alpha = float(min_alpha)
        self.max_seq_len = int(max_seq_len)
        self.tx_power = float(tx_power)
        self.noise_figure = float(noise_figure)
        self.bandwidth = float(bandwidth)
        self.carrier_freq = float(carrier_freq)
        self.hysteresis_margin = float(hysteresis_margin)
        self.reflection_loss = float(reflection_loss)
        self.num_antennas = int(num_antennas)
        self.oversampling = int(oversampling)
        self.antenna_spacing = float(antenna_spacing)
        self.num_subcarriers = int(num_subcarriers)
        self.num_taps = int(num_taps)
        self.rolloff = float(rolloff)

        self._validate()

    def _validate(self):
        if self.bs_positions.shape[1] != 3 or self.bs_positions.shape[0] < 1:
            raise ScenarioError("bs_positions must be a non-empty list of 3-D points, got shape "
                "{}".format(self.bs_positions.shape))
        if self.length <= 0 or self.width <= 0:
            raise ScenarioError("street dimensions must be positive, got {}x{}".format(
                self.length, self.width))
        if not 0 <= self.start_window <= self.length:
            raise ScenarioError("start_window {} outside [0, {}]".format(self.start_window,
                self.length))
        if self.trajectory_max_len <= 0:
            raise ScenarioError("trajectory_max_len must be positive, got {}".format(
                self.trajectory_max_len))
        if not self.speeds or min(self.speeds) <= 0:
            raise ScenarioError("speeds must be non-empty and positive, got {}".format(
                self.speeds))
        if not 0 < self.min_alpha <= 90:
            raise ScenarioError("min_alpha must be in (0, 90] degrees, got {}".format(
                self.min_alpha))
        if self.max_seq_len < 1:
            raise ScenarioError("max_seq_len must be positive, got {}".format(self.max_seq_len))
        if self.hysteresis_margin < 0:
            raise ScenarioError("hysteresis_margin must not be negative, got {}".format(
                self.hysteresis_margin))

    def __repr__(self):
        return "{}(num_bs={}, hash={})".format(self.__class__.__name__, self.num_bs, self.hash)

    @property
    def num_bs(self):
        return self.bs_positions.shape[0]

    @property
    def codebook_size(self):
        return self.num_antennas * self.oversampling

    @property
    def hash(self):
        return create_hash(json.dumps(self.to_dict(), sort_keys=True), l=16)

    def to_dict(self):
        data = {
            key: getattr(self, key)
            for key in [
                "length", "width", "start_window", "trajectory_max_len", "user_height",
                "bs_height", "min_alpha", "max_seq_len", "tx_power", "noise_figure", "bandwidth",
                "carrier_freq", "hysteresis_margin", "reflection_loss", "num_antennas",
                "oversampling", "antenna_spacing", "num_subcarriers", "num_taps", "rolloff",
            ]
        }
        data["speeds"] = list(self.speeds)
        data["bs_positions"] = self.bs_positions.tolist()
        data["blockers"] = [b.to_dict() for b in self.blockers]
        data["walls"] = [w.to_dict() for w in self.walls]
        return data

    def bs_frame(self, bs_index):
        """
        Returns the horizontal unit vectors ``(axis, normal)`` of the array of base station
        *bs_index*. The normal points toward the center line of the street and the array axis is
        the normal rotated clockwise by 90 degrees.
        """
        bs = self.bs_positions[bs_index]
        normal = np.array([0.0, 1.0 if bs[1] <= 0.5 * self.width else -1.0])
        axis = np.array([normal[1], -normal[0]])
        return axis, normal

    def channel_config(self):
        return ChannelConfig(num_antennas=self.num_antennas, num_subcarriers=self.num_subcarriers,
            num_taps=self.num_taps, sample_period=1.0 / self.bandwidth,
            antenna_spacing=self.antenna_spacing, carrier_freq=self.carrier_freq,
            rolloff=self.rolloff)

    def codebook(self):
        return build_codebook(self.num_antennas, self.oversampling,
            antenna_spacing=self.antenna_spacing)


def default_scenario():
    """
    Returns the default street: two base stations on lamp posts at opposite sides of a 20 m wide
    and 200 m long street, building facades on both sides and a parked truck that shadows the
    first base station in the middle of the street. Users never start inside the truck lane.
    """
    return ScenarioConfig(
        bs_positions=[(60.0, -2.0, 4.0), (140.0, 22.0, 4.0)],
        blockers=[Box(88.0, 100.0, 14.0, 17.0, 0.0, 3.5)],
        walls=[Wall(-6.0, 0.0, 200.0, 12.0), Wall(26.0, 0.0, 200.0, 12.0)],
    )


def default_scenario_file():
    return mmho_src_path("files", "street.cfg")


def _indexed_sections(cfg, prefix):
    cre = re.compile(r"^{}\.(\d+)$".format(re.escape(prefix)))
    sections = []
    for section in cfg.sections(prefix=prefix + "."):
        m = cre.match(section)
        if not m:
            raise ConfigError("invalid section name [{}], expected [{}.<int>]".format(section,
                prefix))
        sections.append((int(m.group(1)), section))
    return [section for _, section in sorted(sections)]


def load_scenario_config(path):
    """
    Reads the scenario config file at *path* and returns a :py:class:`ScenarioConfig`. Options that
    are not set fall back to the values of :py:func:`default_scenario`. Defining any ``[bs.<i>]``,
    ``[blocker.<i>]`` or ``[wall.<i>]`` section replaces the complete default list of that kind.
    A :py:class:`mmho.util.ConfigError` is raised when the file cannot be read or contains invalid
    values.
    """
    path = os.path.expandvars(os.path.expanduser(str(path)))
    if not os.path.isfile(path):
        raise ConfigError("scenario config file '{}' does not exist".format(path))

    try:
        cfg = Config(path, skip_defaults=True, skip_fallbacks=True, skip_includes=True,
            skip_env_sync=True, skip_luigi_sync=True)
    except ConfigParserError as e:
        raise ConfigError("cannot parse scenario config file '{}': {}".format(path, e))

    default = default_scenario()

    def get(section, option, type=float):
        value = getattr(default, option)
        try:
            return cfg.get_expanded(section, option, default=value, type=type)
        except ValueError as e:
            raise ConfigError("invalid value of {}::{} in '{}': {}".format(section, option, path,
                e))

    def get_required(section, option, default=None):
        if default is None and not cfg.has_option(section, option):
            raise ConfigError("missing option {}::{} in '{}'".format(section, option, path))
        try:
            return cfg.get_expanded_float(section, option, default=default)
        except ValueError as e:
            raise ConfigError("invalid value of {}::{} in '{}': {}".format(section, option, path,
                e))

    kwargs = {}
    for option in ["length", "width", "start_window", "trajectory_max_len", "user_height",
            "bs_height"]:
        kwargs[option] = get("street", option)
    for option in ["carrier_freq", "bandwidth", "tx_power", "noise_figure", "hysteresis_margin",
            "reflection_loss"]:
        kwargs[option] = get("radio", option)
    for option in ["num_antennas", "oversampling", "num_subcarriers", "num_taps"]:
        kwargs[option] = get("array", option, type=int)
    for option in ["antenna_spacing", "rolloff"]:
        kwargs[option] = get("array", option)
    kwargs["min_alpha"] = get("mobility", "min_alpha")
    kwargs["max_seq_len"] = get("mobility", "max_seq_len", type=int)

    if cfg.has_option("mobility", "speeds"):
        try:
            kwargs["speeds"] = cfg.get_expanded("mobility", "speeds", type=float, split_csv=True)
        except ValueError as e:
            raise ConfigError("invalid speeds in '{}': {}".format(path, e))

    # base stations
    bs_sections = _indexed_sections(cfg, "bs")
    if bs_sections:
        kwargs["bs_positions"] = [
            (get_required(s, "x"), get_required(s, "y"), get_required(s, "z", kwargs["bs_height"]))
            for s in bs_sections
        ]
        if len(kwargs["bs_positions"]) < 2:
            raise ConfigError("scenario '{}' defines {} base station(s), at least 2 are "
                "required".format(path, len(kwargs["bs_positions"])))
    else:
        kwargs["bs_positions"] = default.bs_positions.tolist()

    # blockers and walls
    blocker_sections = _indexed_sections(cfg, "blocker")
    wall_sections = _indexed_sections(cfg, "wall")
    try:
        if blocker_sections:
            kwargs["blockers"] = [
                Box(*[get_required(s, opt) for opt in ["x_min", "x_max", "y_min", "y_max"]],
                    z_min=get_required(s, "z_min", 0.0), z_max=get_required(s, "z_max"))
                for s in blocker_sections
            ]
        else:
            kwargs["blockers"] = default.blockers
        if wall_sections:
            kwargs["walls"] = [
                Wall(get_required(s, "y"), get_required(s, "x_min", 0.0),
                    get_required(s, "x_max", kwargs["length"]), get_required(s, "height"))
                for s in wall_sections
            ]
        else:
            kwargs["walls"] = default.walls

        scenario = ScenarioConfig(**kwargs)
    except ScenarioError as e:
        raise ConfigError("invalid scenario in '{}': {}".format(path, e))

    logger.debug("loaded scenario {} from {}".format(scenario.hash, path))

    return scenario
