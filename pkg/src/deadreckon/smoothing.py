"""Scalar Kalman filtering of a heading sequence."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidConfig


@dataclass(frozen=True)
class KalmanConfig:
    process_variance: float = 1e-6      # q, rad^2 per step
    measurement_variance: float = 0.0076  # r, rad^2
    initial_estimate: float = 0.0
    initial_variance: float = 1.0

    def __post_init__(self):
        q, r = self.process_variance, self.measurement_variance
        if q < 0 or r < 0 or q + r <= 0 or not self.initial_variance > 0:
            raise InvalidConfig(f"invalid Kalman configuration {self}")
        if not all(map(math.isfinite, (q, r, self.initial_estimate, self.initial_variance))):
            raise InvalidConfig(f"invalid Kalman configuration {self}")


def kalman_filter(headings: Sequence[float], cfg: KalmanConfig = KalmanConfig()
                  ) -> tuple[list[float], list[float]]:
    """Random-walk heading filter; returns (estimates, posterior variances)."""
    if len(headings) == 0:
        raise ValueError("headings must be non-empty")
    q, r = cfg.process_variance, cfg.measurement_variance
    x, p = cfg.initial_estimate, cfg.initial_variance
    xs, ps = [], []
    for z in headings:
        p += q
        k = p / (p + r)
        x = (1.0 - k) * x + k * z
        p *= 1.0 - k
        xs.append(x)
        ps.append(p)
    return xs, ps


def kalman_smooth(headings: Sequence[float], cfg: KalmanConfig = KalmanConfig()) -> list[float]:
    """Filtered headings, same length as the input.

    Inputs must already be continuous (see unwrap_angles); filtering
    wrapped angles averages across the +-pi seam.
    """
    return kalman_filter(headings, cfg)[0]


def steady_state_variance(q: float, r: float) -> float:
    """Fixed point of p -> (p + q) r / (p + q + r)."""
    # p^2 + q p - q r = 0
    return (-q + math.sqrt(q * q + 4.0 * q * r)) / 2.0


def unwrap_angles(raw: Sequence[float]) -> list[float]:
    """Make a wrapped angle sequence continuous by taking the shortest jump each step."""
    out: list[float] = []
    for a in raw:
        if not out:
            out.append(float(a))
            continue
        out.append(out[-1] + math.remainder(a - out[-1], 2.0 * math.pi))
    return out
