"""Differential-drive dead reckoning from cumulative wheel-encoder counts.

Frame convention: heading 0 points along +y, and x grows with sin(heading),
so a positive heading increment (right wheel ahead of left) swings the
track towards +x. Internal units are mm, rad and s.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Collection, Optional, Sequence, Tuple

from .errors import DegenerateField, EmptyLog, NonMonotonicTime, ZeroTimeStep


@dataclass(frozen=True)
class RobotGeometry:
    wheel_diameter: float = 72.0    # mm
    wheelbase: float = 235.0        # mm
    counts_per_rev: float = 508.8
    wrap_modulus: Optional[int] = 65536

    def __post_init__(self):
        if not (self.wheel_diameter > 0 and self.wheelbase > 0 and self.counts_per_rev > 0):
            raise ValueError(f"geometry values must be positive: {self}")
        if self.wrap_modulus is not None and self.wrap_modulus < 2:
            raise ValueError("wrap_modulus must be >= 2")

    def as_dict(self) -> dict:
        return {
            "wheel_diameter_mm": self.wheel_diameter,
            "wheelbase_mm": self.wheelbase,
            "counts_per_rev": self.counts_per_rev,
            "wrap_modulus": self.wrap_modulus,
        }


ROOMBA_600 = RobotGeometry()
GEOMETRIES = {"roomba-600": ROOMBA_600}


def geometry_from_string(spec: str) -> RobotGeometry:
    """Resolve a preset name or an explicit ``D,W,C`` triple."""
    if spec in GEOMETRIES:
        return GEOMETRIES[spec]
    parts = spec.split(",")
    if len(parts) != 3:
        raise ValueError(f"unknown geometry {spec!r}; use a preset name or D,W,C")
    d, w, c = (float(p) for p in parts)
    return RobotGeometry(wheel_diameter=d, wheelbase=w, counts_per_rev=c)


@dataclass(frozen=True)
class EncoderSample:
    t: float
    left: int
    right: int
    mag: Optional[Tuple[int, int, int]] = None


@dataclass(frozen=True)
class Pose:
    x: float = 0.0
    y: float = 0.0
    theta: float = 0.0


@dataclass(frozen=True)
class TrajectoryPoint:
    n: int
    t: float
    delta_left: float
    delta_right: float
    beta: float
    mu: float
    pose: Pose
    v: float
    flagged: bool = False


class UpdateMode(str, enum.Enum):
    LITERAL = "literal"
    ACCUMULATED = "accumulated"


def counts_per_mm(geom: RobotGeometry) -> float:
    return geom.counts_per_rev / (math.pi * geom.wheel_diameter)


def counts_per_degree(geom: RobotGeometry) -> float:
    """Differential counts (right minus left) per degree of in-place rotation.

    In an in-place turn both wheels ride a circle whose diameter is the
    wheelbase, in opposite directions, so one revolution accumulates
    2 * pi * wheelbase * counts_per_mm differential counts.
    """
    return geom.wheelbase * math.pi * counts_per_mm(geom) * 2.0 / 360.0


def unwrap_delta(prev: float, curr: float, modulus: Optional[int]) -> float:
    delta = curr - prev
    if modulus is None:
        return delta
    delta = delta % modulus
    if delta > modulus / 2:
        delta -= modulus
    return delta


def delta_counts(prev: EncoderSample, curr: EncoderSample,
                 geom: RobotGeometry = ROOMBA_600) -> Tuple[float, float]:
    """Per-wheel count increments between two samples, as (left, right)."""
    if curr.t <= prev.t:
        raise NonMonotonicTime(f"t={curr.t} does not follow t={prev.t}")
    m = geom.wrap_modulus
    return unwrap_delta(prev.left, curr.left, m), unwrap_delta(prev.right, curr.right, m)


def step_distance(delta_left: float, delta_right: float,
                  geom: RobotGeometry = ROOMBA_600) -> float:
    return ((delta_right + delta_left) / 2.0) / counts_per_mm(geom)


def step_heading_change(delta_left: float, delta_right: float,
                        geom: RobotGeometry = ROOMBA_600) -> float:
    degrees = (delta_right - delta_left) / counts_per_degree(geom)
    return degrees * math.pi / 180.0


def advance_pose(pose: Pose, beta: float, mu: float,
                 mode: UpdateMode | str = UpdateMode.ACCUMULATED) -> Pose:
    """One dead-reckoning step.

    ``literal`` applies the step's heading increment on its own, which only
    stays meaningful while the commanded direction is constant; the stored
    theta is then just that increment. ``accumulated`` adds the increment
    to the running heading first and translates along the result.
    """
    mode = UpdateMode(mode)
    if mode is UpdateMode.LITERAL:
        return Pose(pose.x + beta * math.sin(mu), pose.y + beta * math.cos(mu), mu)
    theta = pose.theta + mu
    return Pose(pose.x + beta * math.sin(theta), pose.y + beta * math.cos(theta), theta)


def step_speed(beta: float, dt: float) -> float:
    if dt <= 0:
        raise ZeroTimeStep(f"dt must be positive, got {dt}")
    return beta / dt


def step_acceleration(v: float, v_prev: float, dt: float) -> float:
    if dt <= 0:
        raise ZeroTimeStep(f"dt must be positive, got {dt}")
    return (v - v_prev) / dt


def heading_from_magnetometer(mx: float, my: float) -> float:
    """Compass heading atan2(my, mx) in (-pi, pi]."""
    if mx == 0 and my == 0:
        raise DegenerateField("magnetometer x and y are both zero")
    h = math.atan2(my, mx)
    return math.pi if h == -math.pi else h


def track(samples: Sequence[EncoderSample], geom: RobotGeometry = ROOMBA_600,
          mode: UpdateMode | str = UpdateMode.ACCUMULATED, origin: Pose = Pose(),
          flagged: Collection[int] = ()) -> list[TrajectoryPoint]:
    """Dead-reckon a whole log. Point ``n`` covers samples ``n-1`` -> ``n``.

    ``flagged`` holds step indices to mark on the output (e.g. from an
    anomaly scan); it does not change the numbers.
    """
    if len(samples) < 2:
        raise EmptyLog(f"need at least 2 samples, got {len(samples)}")
    mode = UpdateMode(mode)
    flagged = set(flagged)
    pose = origin
    points = []
    for n in range(1, len(samples)):
        prev, curr = samples[n - 1], samples[n]
        dl, dr = delta_counts(prev, curr, geom)
        beta = step_distance(dl, dr, geom)
        mu = step_heading_change(dl, dr, geom)
        pose = advance_pose(pose, beta, mu, mode)
        v = step_speed(beta, curr.t - prev.t)
        points.append(TrajectoryPoint(n, curr.t, dl, dr, beta, mu, pose, v, n in flagged))
    return points


def path_length(points: Sequence[TrajectoryPoint]) -> float:
    """Total travelled distance in mm (sum of |beta|)."""
    return math.fsum(abs(p.beta) for p in points)


def accelerations(points: Sequence[TrajectoryPoint]) -> list[float]:
    """Acceleration between consecutive points (mm/s^2), one fewer than points."""
    return [step_acceleration(b.v, a.v, b.t - a.t) for a, b in zip(points, points[1:])]
