# coding: utf-8

"""
Generation of labeled beam-sequence episodes along user trajectories.
"""

__all__ = [
    "Trajectory", "LabeledEpisode", "EmptyEpisodeError", "beam_coherence_time",
    "sample_trajectory", "generate_episode", "generate_dataset", "handoff_events",
]


from multiprocessing.pool import ThreadPool

import numpy as np
import six

from mmho.channel import freq_channel, receive_power, dbm_to_watt, snr_db
from mmho.codebook import beam_gains
from mmho.scenario.config import ScenarioError
from mmho.scenario.geometry import path_params
from mmho.util import ContractError, derive_rng
from mmho.logger import get_logger


logger = get_logger(__name__)


class EmptyEpisodeError(ScenarioError):
    """
    Raised when every base station is blocked at the first position of a trajectory, so that the
    episode contains no step.
    """


class Trajectory(object):
    """
    Straight-line user trajectory starting at the 2-D point *start* and heading along *direction*
    (normalized on construction) with *speed* in m/s for *length* meters.
    """

    def __init__(self, start, direction, speed, length):
        super(Trajectory, self).__init__()

        direction = np.asarray(direction, dtype=float)
        norm = np.linalg.norm(direction)
        if norm == 0:
            raise ContractError("trajectory direction must not be the zero vector")
        if speed <= 0:
            raise ContractError("trajectory speed must be positive, got {}".format(speed))
        if length < 0:
            raise ContractError("trajectory length must not be negative, got {}".format(length))

        self.start = np.asarray(start, dtype=float)
        self.direction = direction / norm
        self.speed = float(speed)
        self.length = float(length)

    def __repr__(self):
        return "{}(start={}, direction={}, speed={:.3f}, length={:.2f})".format(
            self.__class__.__name__, self.start.tolist(), self.direction.tolist(), self.speed,
            self.length)

    def position(self, s):
        """
        Returns the 2-D position after traveling *s* meters.
        """
        return self.start + s * self.direction


class LabeledEpisode(object):
    """
    Beam sequence of one trajectory together with its per-step hand-off labels. *beam_indices* are
    the codebook indices used by the serving base station and *labels* the index of the base station
    serving the next step. *serving_bs* and *step_times* (seconds) are kept in memory only and do
    not take part in comparisons.
    """

    def __init__(self, beam_indices, labels, serving_bs=None, step_times=None):
        super(LabeledEpisode, self).__init__()

        self.beam_indices = tuple(int(b) for b in beam_indices)
        self.labels = tuple(int(s) for s in labels)
        self.serving_bs = None if serving_bs is None else tuple(int(s) for s in serving_bs)
        self.step_times = None if step_times is None else tuple(float(t) for t in step_times)

        if len(self.beam_indices) != len(self.labels):
            raise ContractError("episode has {} beams but {} labels".format(
                len(self.beam_indices), len(self.labels)))
        if not self.beam_indices:
            raise ContractError("episodes must contain at least one step")

    def __len__(self):
        return len(self.beam_indices)

    def __eq__(self, other):
        if not isinstance(other, LabeledEpisode):
            return NotImplemented
        return self.beam_indices == other.beam_indices and self.labels == other.labels

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash((self.beam_indices, self.labels))

    def __repr__(self):
        return "{}(steps={}, handoffs={})".format(self.__class__.__name__, len(self),
            len(handoff_events(self)))


def handoff_events(episode):
    """
    Returns the step indices *t* >= 1 at which the label changes with respect to step *t - 1*.
    """
    labels = episode.labels
    return [t for t in six.moves.range(1, len(labels)) if labels[t] != labels[t - 1]]


def beam_coherence_time(v_s, scatter_distance, alpha, beamwidth):
    """
    Returns the time in seconds after which a beam of width *beamwidth* (radians) has to be updated
    when the user moves with speed *v_s* (m/s) at *scatter_distance* (m) from the anchor of the
    link, under an angle *alpha* (radians, in (0, pi/2]) between the direction of travel and the
    anchor.
    """
    if v_s <= 0:
        raise ContractError("speed must be positive, got {}".format(v_s))
    if scatter_distance <= 0:
        raise ContractError("scatter distance must be positive, got {}".format(scatter_distance))
    if beamwidth <= 0:
        raise ContractError("beamwidth must be positive, got {}".format(beamwidth))
    if not 0 < alpha <= 0.5 * np.pi:
        raise ContractError("alpha must be in (0, pi/2], got {}".format(alpha))

    return scatter_distance / (v_s * np.sin(alpha)) * beamwidth / 2.0


def _free_lanes(cfg, x_min, x_max):
    """
    Returns the lateral intervals ``(y_low, y_high)`` of the street that are not covered by a
    blocker at user height anywhere between *x_min* and *x_max*.
    """
    lanes = [(0.0, cfg.width)]
    for box in cfg.blockers:
        if not box.lower[2] <= cfg.user_height <= box.upper[2]:
            continue
        if box.upper[0] < x_min or box.lower[0] > x_max:
            continue
        y_low, y_high = float(box.lower[1]), float(box.upper[1])
        cut = []
        for low, high in lanes:
            if low < y_low:
                cut.append((low, min(high, y_low)))
            if high > y_high:
                cut.append((max(low, y_high), high))
        lanes = [(low, high) for low, high in cut if high > low]
    return lanes


def sample_trajectory(cfg, rng):
    """
    Samples a trajectory along the street axis that starts uniformly within the start window at a
    uniform lateral position, moves with a speed drawn from ``cfg.speeds`` and ends at the end of
    the street or after ``cfg.trajectory_max_len`` meters. The lateral position is drawn only from
    lanes that no blocker at user height covers along the trajectory, an
    :py:class:`EmptyEpisodeError` is raised when there is no such lane.
    """
    x0 = rng.uniform(0.0, cfg.start_window)
    length = min(cfg.trajectory_max_len, cfg.length - x0)
    lanes = _free_lanes(cfg, x0, x0 + max(length, 0.0))
    if not lanes:
        raise EmptyEpisodeError("no free lane for a trajectory starting at x={:.2f}".format(x0))
    r = rng.uniform(0.0, sum(high - low for low, high in lanes))
    for low, high in lanes:
        y0 = min(low + r, high)
        r -= high - low
        if r <= 0:
            break
    speed = cfg.speeds[int(rng.integers(len(cfg.speeds)))] / 3.6
    return Trajectory((x0, y0), (1.0, 0.0), speed, length)


class _Observation(object):

    def __init__(self, snr, beams, anchors):
        super(_Observation, self).__init__()

        self.snr = snr
        self.beams = beams
        self.anchors = anchors

    @property
    def blocked(self):
        return np.isneginf(self.snr)


def _observe(user, cfg, cb, chan_cfg, wall_phases):
    tx_power = dbm_to_watt(cfg.tx_power)
    snr = np.full(cfg.num_bs, -np.inf)
    beams = np.zeros(cfg.num_bs, dtype=int)
    anchors = [None] * cfg.num_bs

    for n in six.moves.range(cfg.num_bs):
        ps = path_params(user, n, cfg, wall_phases=wall_phases)
        if ps.blocked:
            continue

        h = freq_channel(ps, chan_cfg)
        gains = beam_gains(h, cb)
        beams[n] = int(np.argmax(gains))
        rx = receive_power(h, cb[beams[n]], tx_power)
        snr[n] = snr_db(rx, chan_cfg, noise_figure=cfg.noise_figure)

        # the strongest ray anchors the beam coherence time
        strongest = max(ps.paths, key=lambda p: abs(p.gain))
        anchors[n] = strongest.anchor

    return _Observation(snr, beams, anchors)


def _next_serving(incumbent, obs, margin):
    challenger = int(np.argmax(obs.snr))
    if incumbent is None or obs.blocked[incumbent]:
        return challenger
    if challenger != incumbent and obs.snr[challenger] > obs.snr[incumbent] + margin:
        return challenger
    return incumbent


def _step_duration(user, traj, anchor, cfg, cb):
    v = anchor - user
    distance = float(np.linalg.norm(v))

    horizontal = np.linalg.norm(v[:2])
    if horizontal > 0:
        cos_alpha = np.clip(v[:2].dot(traj.direction) / horizontal, -1.0, 1.0)
        alpha = np.arccos(cos_alpha)
        alpha = min(alpha, np.pi - alpha)
    else:
        alpha = 0.5 * np.pi

    min_alpha = np.deg2rad(cfg.min_alpha)
    if alpha < min_alpha:
        logger.warning_once("alpha_clamp", "angle between travel direction and anchor clamped "
            "to {} degrees".format(cfg.min_alpha))
        alpha = min_alpha

    return beam_coherence_time(traj.speed, distance, alpha, cb.beamwidth)


def generate_episode(cfg, traj, cb, rng=None):
    """
    Moves a user along *traj* through the scenario *cfg* and returns the resulting
    :py:class:`LabeledEpisode`.

    At every step, each base station selects its power-maximizing beam from the codebook *cb* and
    the resulting SNRs determine the serving base station. The first step is served by the best
    base station; afterwards a challenger takes over only when it exceeds the incumbent by the
    hysteresis margin or when the incumbent is fully blocked. The label of a step is the base
    station serving the next step. Steps last one beam coherence time, anchored at the strongest
    ray of the serving base station. The position reached at the end of the trajectory, or after
    ``cfg.max_seq_len`` steps, only provides the label of the last step.

    When all base stations are blocked at some step, the episode ends with the previous step,
    which keeps its own serving base station as label. *rng* draws a random reflection phase per
    wall for the episode. An :py:class:`EmptyEpisodeError` is raised when the first position is
    fully blocked.
    """
    if traj.length <= 0:
        raise ScenarioError("cannot generate an episode on a zero-length trajectory")

    chan_cfg = cfg.channel_config()
    wall_phases = None
    if rng is not None and cfg.walls:
        wall_phases = rng.uniform(0.0, 2.0 * np.pi, size=len(cfg.walls))

    beams, labels, serving_bs, step_times = [], [], [], []
    serving = None
    s, t_now = 0.0, 0.0
    label_only = False

    while True:
        xy = traj.position(s)
        user = np.array([xy[0], xy[1], cfg.user_height])
        obs = _observe(user, cfg, cb, chan_cfg, wall_phases)

        if obs.blocked.all():
            if not serving_bs:
                raise EmptyEpisodeError("all base stations blocked at trajectory start {}".format(
                    traj))
            if not label_only:
                logger.warning("episode truncated after {} steps, all base stations blocked at "
                    "x={:.2f}".format(len(serving_bs), xy[0]))
            labels.append(serving_bs[-1])
            break

        serving = _next_serving(serving, obs, cfg.hysteresis_margin)
        if serving_bs:
            labels.append(serving)
        if label_only:
            break

        serving_bs.append(serving)
        beams.append(int(obs.beams[serving]))
        step_times.append(t_now)

        dt = _step_duration(user, traj, obs.anchors[serving], cfg, cb)
        s += traj.speed * dt
        t_now += dt
        if s >= traj.length:
            s = traj.length
            label_only = True
        if len(serving_bs) >= cfg.max_seq_len:
            label_only = True

    logger.debug("generated episode with {} steps on {}".format(len(beams), traj))

    return LabeledEpisode(beams, labels, serving_bs=serving_bs, step_times=step_times)


def _generate_indexed(cfg, cb, seed, i, max_attempts=100):
    rng = derive_rng(seed, "episode", i)
    for _ in six.moves.range(max_attempts):
        try:
            traj = sample_trajectory(cfg, rng)
            if traj.length <= 0:
                continue
            return generate_episode(cfg, traj, cb, rng=rng)
        except EmptyEpisodeError as e:
            logger.warning("resampling episode {}: {}".format(i, e))

    raise ScenarioError("no valid trajectory for episode {} after {} attempts".format(i,
        max_attempts))


def generate_dataset(cfg, n_episodes, cb, seed, threads=1, callback=None):
    """
    Generates *n_episodes* episodes of the scenario *cfg* and returns them in a list. Episode *i*
    draws from its own random stream derived from *seed*, so the result does not depend on the
    number of *threads* used. *callback* is invoked with the index of every finished episode.
    """
    if n_episodes < 1:
        raise ContractError("n_episodes must be at least 1, got {}".format(n_episodes))

    def generate(i):
        episode = _generate_indexed(cfg, cb, seed, i)
        if callable(callback):
            callback(i)
        return episode

    indices = list(six.moves.range(n_episodes))
    if threads is None or threads <= 1:
        return [generate(i) for i in indices]

    pool = ThreadPool(threads)
    try:
        return list(pool.map(generate, indices))
    finally:
        pool.close()
        pool.join()
