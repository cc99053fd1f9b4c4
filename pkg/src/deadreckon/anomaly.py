"""Threshold scanning of encoder increments and offline repair.

An encoder glitch shows up as one oversized increment that stays baked
into every later cumulative count. Repair therefore works on increments:
the bad increment is replaced and the rest of the series is re-accumulated,
so later steps keep their original increments.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import Sequence

from .errors import EmptyLog, InvalidConfig, UnrepairableBoundary
from .odometry import ROOMBA_600, EncoderSample, RobotGeometry, delta_counts

POLICIES = ("flag_only", "hold_last", "interpolate")
POLICY_ALIASES = {"flag": "flag_only", "hold": "hold_last", "interp": "interpolate"}


@dataclass(frozen=True)
class ScanConfig:
    max_delta_per_step: float = 300.0
    reference_dt: float = 0.5
    policy: str = "flag_only"

    def __post_init__(self):
        object.__setattr__(self, "policy", POLICY_ALIASES.get(self.policy, self.policy))
        if self.max_delta_per_step <= 0 or self.reference_dt <= 0:
            raise InvalidConfig("max_delta_per_step and reference_dt must be positive")
        if self.policy not in POLICIES:
            raise InvalidConfig(f"unknown policy {self.policy!r}")

    def allowed(self, dt: float) -> float:
        return self.max_delta_per_step * dt / self.reference_dt


@dataclass(frozen=True)
class FlaggedStep:
    step: int
    side: str       # "left" | "right"
    observed: float  # |increment|
    allowed: float


@dataclass(frozen=True)
class AnomalyReport:
    flagged_steps: tuple[FlaggedStep, ...] = ()
    repaired: bool = False
    policy: str = "flag_only"

    @property
    def steps(self) -> set[int]:
        return {f.step for f in self.flagged_steps}

    def as_dict(self) -> dict:
        return {
            "flagged_steps": [
                {"step": f.step, "side": f.side, "observed": f.observed, "allowed": f.allowed}
                for f in self.flagged_steps
            ],
            "policy": self.policy,
        }


def scan(samples: Sequence[EncoderSample], cfg: ScanConfig = ScanConfig(),
         geom: RobotGeometry = ROOMBA_600) -> AnomalyReport:
    """Flag every wheel increment whose magnitude exceeds the time-scaled limit."""
    if len(samples) < 2:
        raise EmptyLog(f"need at least 2 samples, got {len(samples)}")
    flags = []
    for n in range(1, len(samples)):
        dl, dr = delta_counts(samples[n - 1], samples[n], geom)
        limit = cfg.allowed(samples[n].t - samples[n - 1].t)
        for side, d in (("left", dl), ("right", dr)):
            if abs(d) > limit:
                flags.append(FlaggedStep(n, side, abs(d), limit))
    return AnomalyReport(tuple(flags), False, cfg.policy)


def _interpolated(deltas, dts, bad, k, side, integral):
    """Increment at step k from the rates of the nearest good steps on each side."""
    i = k - 1
    while i >= 1 and (i, side) in bad:
        i -= 1
    j = k + 1
    while j < len(deltas) and (j, side) in bad:
        j += 1
    if i < 1 or j >= len(deltas):
        return None
    ri, rj = deltas[i] / dts[i], deltas[j] / dts[j]
    rate = ri + (rj - ri) * (k - i) / (j - i)
    value = rate * dts[k]
    return round(value) if integral else value


def repair(samples: Sequence[EncoderSample], report: AnomalyReport,
           cfg: ScanConfig = ScanConfig(), geom: RobotGeometry = ROOMBA_600) -> list[EncoderSample]:
    """Return a repaired copy of ``samples`` according to ``cfg.policy``.

    ``hold_last`` rejects the whole reading at a flagged step: both wheels
    repeat their previous count, so the step contributes neither distance
    nor heading change. ``interpolate`` replaces only the flagged wheel's
    increment with one interpolated from its nearest unflagged neighbours;
    a flagged first or last step cannot be interpolated and falls back to
    ``hold_last`` with an UnrepairableBoundary warning.

    Output counts are re-accumulated from the first sample and are not
    wrapped back into the counter range.
    """
    samples = list(samples)
    if cfg.policy == "flag_only" or not report.flagged_steps:
        return samples

    n = len(samples)
    left = [0.0] * n
    right = [0.0] * n
    dts = [0.0] * n
    for k in range(1, n):
        left[k], right[k] = delta_counts(samples[k - 1], samples[k], geom)
        dts[k] = samples[k].t - samples[k - 1].t

    integral = all(isinstance(s.left, int) and isinstance(s.right, int) for s in samples)
    bad = {(f.step, f.side) for f in report.flagged_steps}
    hold_steps = set()
    if cfg.policy == "hold_last":
        hold_steps = {f.step for f in report.flagged_steps}
    else:
        new_left, new_right = list(left), list(right)
        for step, side in sorted(bad):
            series = left if side == "left" else right
            value = _interpolated(series, dts, bad, step, side, integral)
            if value is None:
                warnings.warn(f"cannot interpolate step {step} ({side}); holding last reading",
                              UnrepairableBoundary, stacklevel=2)
                hold_steps.add(step)
                continue
            (new_left if side == "left" else new_right)[step] = value
        left, right = new_left, new_right
    for step in hold_steps:
        left[step] = right[step] = 0

    out = [samples[0]]
    cl, cr = samples[0].left, samples[0].right
    for k in range(1, n):
        cl += left[k]
        cr += right[k]
        s = samples[k]
        out.append(EncoderSample(s.t, cl, cr, s.mag))
    return out


def scan_and_repair(samples: Sequence[EncoderSample], cfg: ScanConfig = ScanConfig(),
                    geom: RobotGeometry = ROOMBA_600) -> tuple[list[EncoderSample], AnomalyReport]:
    report = scan(samples, cfg, geom)
    fixed = repair(samples, report, cfg, geom)
    repaired = cfg.policy != "flag_only" and bool(report.flagged_steps)
    return fixed, replace(report, repaired=repaired)
