"""Run-level evaluation: the three distances, straight-line fit and drift."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DegenerateX, EmptyTrajectory, ZeroPath
from .odometry import ROOMBA_600, RobotGeometry, TrajectoryPoint, UpdateMode, path_length


@dataclass(frozen=True)
class RegressionFit:
    slope: float
    intercept: float
    r2: float
    n_points: int

    def as_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "r2": self.r2}

    def angle_deg(self) -> float:
        """Bearing of the fitted line from +y in degrees, in (-90, 90]."""
        return 90.0 if self.slope == 0 else math.degrees(math.atan(1.0 / self.slope))


@dataclass(frozen=True)
class RunReport:
    theoretical_distance_m: float
    measured_distance_m: float
    drift_deg: float
    mode: UpdateMode
    actual_distance_m: Optional[float] = None
    fit: Optional[RegressionFit] = None
    geometry: RobotGeometry = ROOMBA_600

    def as_dict(self) -> dict:
        return {
            "actual_distance_m": self.actual_distance_m,
            "theoretical_distance_m": self.theoretical_distance_m,
            "measured_distance_m": self.measured_distance_m,
            "fit": self.fit.as_dict() if self.fit is not None else None,
            "drift_deg": self.drift_deg,
            "mode": UpdateMode(self.mode).value,
            "geometry": self.geometry.as_dict(),
        }


def theoretical_distance(speed: float, duration: float) -> float:
    """Distance in metres implied by a commanded speed (mm/s) held for ``duration`` s."""
    if speed < 0 or duration < 0:
        raise ValueError("speed and duration must be non-negative")
    return speed * duration / 1000.0


def measured_distance(points: Sequence[TrajectoryPoint]) -> float:
    return path_length(points) / 1000.0


def linear_fit(points: Iterable[tuple[float, float]]) -> RegressionFit:
    """Ordinary least squares y = slope * x + intercept with R^2.

    When every y is equal the fit is exact and R^2 is reported as 1.
    """
    xy = np.asarray(list(points), dtype=float)
    if xy.ndim != 2 or xy.shape[0] < 2 or xy.shape[1] != 2:
        raise ValueError("need at least two (x, y) points")
    x, y = xy[:, 0], xy[:, 1]
    xm, ym = x.mean(), y.mean()
    dx, dy = x - xm, y - ym
    sxx = float(dx @ dx)
    if sxx == 0.0:
        raise DegenerateX("all x values are equal")
    slope = float(dx @ dy) / sxx
    intercept = float(ym - slope * xm)
    resid = y - (slope * x + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(dy @ dy)
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return RegressionFit(slope, intercept, r2, len(x))


def drift_metric(points: Sequence[TrajectoryPoint]) -> float:
    """Bearing of the final position from the start, degrees from +y (positive = towards +x).

    Measured relative to the first point's origin, i.e. (0, 0) for logs
    tracked from the default origin.
    """
    if not points:
        raise EmptyTrajectory("no trajectory points")
    if path_length(points) == 0.0:
        raise ZeroPath("trajectory has zero length")
    end = points[-1].pose
    return math.degrees(math.atan2(end.x, end.y))


def build_report(points: Sequence[TrajectoryPoint], commanded_speed: float,
                 commanded_duration: float, actual_m: Optional[float] = None,
                 mode: UpdateMode | str = UpdateMode.ACCUMULATED,
                 geom: RobotGeometry = ROOMBA_600) -> RunReport:
    """Assemble the per-run summary.

    The (x, y) fit is left out when the positions are degenerate, which
    is the normal outcome of a perfectly straight run along +y.
    """
    if not points:
        raise EmptyTrajectory("no trajectory points")
    try:
        fit = linear_fit((p.pose.x, p.pose.y) for p in points)
    except (DegenerateX, ValueError):
        fit = None
    return RunReport(
        theoretical_distance_m=theoretical_distance(commanded_speed, commanded_duration),
        measured_distance_m=measured_distance(points),
        drift_deg=drift_metric(points),
        mode=UpdateMode(mode),
        actual_distance_m=actual_m,
        fit=fit,
        geometry=geom,
    )
