# coding: utf-8

"""
Ray geometry of the street scenario: line-of-sight tests against blockers and first-order wall
reflections using the image method.
"""

__all__ = ["segment_hits_box", "los_blocked", "reflection_point", "arrival_angles", "path_params"]


import numpy as np

from mmho.channel import SPEED_OF_LIGHT, Path, PathSet, free_space_loss
from mmho.scenario.config import ScenarioError
from mmho.logger import get_logger


logger = get_logger(__name__)


def segment_hits_box(p0, p1, box, eps=1e-12):
    """
    Returns *True* when the segment between the points *p0* and *p1* intersects the closed
    axis-aligned *box*, using the slab method.
    """
    p0 = np.asarray(p0, dtype=float)
    d = np.asarray(p1, dtype=float) - p0

    t_min, t_max = 0.0, 1.0
    for i in range(3):
        lo, hi = box.lower[i], box.upper[i]
        if abs(d[i]) < eps:
            if p0[i] < lo or p0[i] > hi:
                return False
            continue
        t1 = (lo - p0[i]) / d[i]
        t2 = (hi - p0[i]) / d[i]
        t_min = max(t_min, min(t1, t2))
        t_max = min(t_max, max(t1, t2))
        if t_min > t_max:
            return False

    return True


def los_blocked(user, bs, blockers):
    """
    Returns *True* when the segment between *user* and *bs* intersects any of the *blockers*.
    """
    return any(segment_hits_box(user, bs, box) for box in blockers)


def reflection_point(user, bs, wall):
    """
    Returns the point where a ray between *user* and *bs* reflects off *wall*, constructed by
    mirroring *bs* across the wall plane. *None* is returned when both points are not strictly on
    the same side of the wall or when the reflection point misses the wall surface.
    """
    user = np.asarray(user, dtype=float)
    bs = np.asarray(bs, dtype=float)

    du = user[1] - wall.y
    db = bs[1] - wall.y
    if du * db <= 0:
        return None

    image = np.array([bs[0], 2.0 * wall.y - bs[1], bs[2]])
    t = du / (du - (image[1] - wall.y))
    point = user + t * (image - user)
    point[1] = wall.y

    if not wall.x_min <= point[0] <= wall.x_max or not 0.0 <= point[2] <= wall.height:
        return None

    return point


def arrival_angles(bs_index, point, cfg):
    """
    Returns the azimuth and elevation, in the local frame of the array of base station *bs_index*,
    under which a ray coming from *point* arrives.
    """
    bs = cfg.bs_positions[bs_index]
    axis, normal = cfg.bs_frame(bs_index)

    v = np.asarray(point, dtype=float) - bs
    azimuth = np.arctan2(v[:2].dot(axis), v[:2].dot(normal))
    elevation = np.arctan2(v[2], np.hypot(v[0], v[1]))

    return float(azimuth), float(elevation)


def path_params(user, bs_index, cfg, wall_phases=None):
    """
    Traces the rays between the 3-D *user* position and base station *bs_index* of a
    :py:class:`mmho.scenario.config.ScenarioConfig` *cfg* and returns them as a
    :py:class:`mmho.channel.PathSet`.

    The direct ray is present unless blocked. Each wall adds one reflected ray when it is visible
    and both legs are unobstructed, attenuated by the reflection loss and the longer travel
    distance, and phase shifted by *wall_phases* (one value per wall, zeros by default). The path
    loss is the free-space loss over the direct distance, the timing reference is the first arrival,
    and rays arriving outside the tap window are dropped.
    """
    user = np.asarray(user, dtype=float)
    if not (0.0 <= user[0] <= cfg.length and 0.0 <= user[1] <= cfg.width):
        raise ScenarioError("user position ({:.2f}, {:.2f}) outside the street".format(
            user[0], user[1]))

    bs = cfg.bs_positions[bs_index]
    fc = cfg.carrier_freq
    d_los = float(np.linalg.norm(bs - user))
    path_loss = free_space_loss(d_los, fc)

    if wall_phases is None:
        wall_phases = np.zeros(len(cfg.walls))

    paths = []

    # direct ray
    if not los_blocked(user, bs, cfg.blockers):
        tau = d_los / SPEED_OF_LIGHT
        azimuth, elevation = arrival_angles(bs_index, user, cfg)
        paths.append(Path(np.exp(-2j * np.pi * fc * tau), tau, azimuth, elevation, anchor=bs))

    # first-order reflections
    refl_amp = 10.0**(-cfg.reflection_loss / 20.0)
    for wall, phase in zip(cfg.walls, wall_phases):
        point = reflection_point(user, bs, wall)
        if point is None:
            continue
        if los_blocked(user, point, cfg.blockers) or los_blocked(point, bs, cfg.blockers):
            continue

        d = float(np.linalg.norm(point - user) + np.linalg.norm(bs - point))
        tau = d / SPEED_OF_LIGHT
        gain = refl_amp * (d_los / d) * np.exp(-1j * (2.0 * np.pi * fc * tau + phase))
        azimuth, elevation = arrival_angles(bs_index, point, cfg)
        paths.append(Path(gain, tau, azimuth, elevation, anchor=point))

    if not paths:
        return PathSet([], path_loss, bs_index=bs_index)

    # synchronize to the first arrival and drop rays beyond the tap window
    reference = min(p.delay for p in paths)
    window = cfg.num_taps / cfg.bandwidth
    kept = [p for p in paths if p.delay - reference < window]
    if len(kept) < len(paths):
        logger.debug("dropped {} ray(s) of bs {} beyond the tap window".format(
            len(paths) - len(kept), bs_index))

    return PathSet(kept, path_loss, bs_index=bs_index, reference_delay=reference)
