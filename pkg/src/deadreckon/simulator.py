"""Ground-truth motion and synthetic encoder logs for a differential-drive robot.

Motion plans are sequences of straight runs and in-place turns with
instantaneous speed changes. Wheel travel is integrated exactly, converted
to cumulative counts and then corrupted according to a NoiseModel. All
randomness comes from one seeded numpy PCG64 generator, so a
(plan, geometry, noise) triple always produces the same log.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import InvalidConfig, StepOutOfRange
from .ingest import LogDocument
from .odometry import ROOMBA_600, EncoderSample, Pose, RobotGeometry, counts_per_mm

RNG_ALGORITHM = "numpy.random.PCG64"

# (commanded speed mm/s, duration s) for the seven straight-line runs
COMMANDED_RUNS = {
    "test1": (75.0, 65.0),
    "test2": (75.0, 65.0),
    "test3": (100.0, 41.0),
    "test4": (100.0, 52.0),
    "test5": (50.0, 91.0),
    "test6": (50.0, 90.0),
    "test7": (150.0, 39.0),
}

# measured on the physical robot: (actual m, encoder-derived m)
OBSERVED_DISTANCE_M = {
    "test1": (5.83, 5.804),
    "test2": (5.79, 5.703),
    "test3": (4.54, 4.516),
    "test4": (5.73, 5.934),
    "test5": (5.80, 5.797),
    "test6": (5.65, 5.815),
    "test7": (5.70, 5.641),
}

# Wheel scale that turns the commanded Test 1 distance into the observed one.
TEST1_WHEEL_SCALE = 5.83 / 4.875


@dataclass(frozen=True)
class Straight:
    speed: float     # mm/s, negative drives backwards
    duration: float  # s

    def __post_init__(self):
        if not (self.duration > 0 and math.isfinite(self.duration) and math.isfinite(self.speed)):
            raise InvalidConfig(f"bad straight segment {self}")

    def wheel_speeds(self, geom: RobotGeometry) -> tuple[float, float]:
        return self.speed, self.speed


@dataclass(frozen=True)
class TurnInPlace:
    angle: float          # rad, positive turns towards +x from +y
    angular_speed: float  # rad/s, magnitude

    def __post_init__(self):
        if not (self.angle != 0 and self.angular_speed > 0
                and math.isfinite(self.angle) and math.isfinite(self.angular_speed)):
            raise InvalidConfig(f"bad turn segment {self}")

    @property
    def duration(self) -> float:
        return abs(self.angle) / self.angular_speed

    def wheel_speeds(self, geom: RobotGeometry) -> tuple[float, float]:
        rim = math.copysign(self.angular_speed, self.angle) * geom.wheelbase / 2.0
        return -rim, rim


Segment = Union[Straight, TurnInPlace]


@dataclass(frozen=True)
class MotionPlan:
    segments: tuple[Segment, ...]
    dt: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.dt > 0:
            raise InvalidConfig("dt must be positive")
        if not self.segments:
            raise InvalidConfig("plan has no segments")

    @property
    def duration(self) -> float:
        return math.fsum(s.duration for s in self.segments)


def preset_plan(name: str, dt: float = 0.5) -> MotionPlan:
    speed, duration = COMMANDED_RUNS[name]
    return MotionPlan((Straight(speed, duration),), dt)


def square_plan(side_mm: float = 1000.0, speed: float = 100.0,
                angular_speed: float = math.pi / 8, dt: float = 0.5) -> MotionPlan:
    segs = []
    for _ in range(4):
        segs += [Straight(speed, side_mm / speed), TurnInPlace(math.pi / 2, angular_speed)]
    return MotionPlan(tuple(segs), dt)


@dataclass(frozen=True)
class NoiseModel:
    quantize: bool = True
    gaussian_sigma: float = 0.0   # counts per step
    spike_prob: float = 0.0       # per wheel per step
    spike_magnitude: float = 350.0
    wheel_radius_bias: tuple[float, float] = (1.0, 1.0)  # (left, right)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "wheel_radius_bias", tuple(self.wheel_radius_bias))
        if self.gaussian_sigma < 0:
            raise InvalidConfig("gaussian_sigma must be >= 0")
        if not 0.0 <= self.spike_prob <= 1.0:
            raise InvalidConfig("spike_prob must lie in [0, 1]")
        if len(self.wheel_radius_bias) != 2 or min(self.wheel_radius_bias) <= 0:
            raise InvalidConfig("wheel_radius_bias must be two positive scales")


@dataclass(frozen=True)
class SimulationResult:
    truth: tuple[tuple[float, Pose], ...]
    log: LogDocument
    injected_spikes: tuple[tuple[int, str], ...] = ()
    rng_algorithm: str = RNG_ALGORITHM


def _sample_times(total: float, dt: float) -> list[float]:
    n = math.ceil(total / dt - 1e-9)
    times = [round(k * dt, 6) for k in range(n)]
    end = round(total, 6)
    if not times or end > times[-1]:
        times.append(end)
    return times


def _arc(pose: Pose, v: float, w: float, tau: float) -> Pose:
    theta = pose.theta + w * tau
    if abs(w) < 1e-12:
        return Pose(pose.x + v * tau * math.sin(pose.theta),
                    pose.y + v * tau * math.cos(pose.theta), theta)
    r = v / w
    return Pose(pose.x + r * (math.cos(pose.theta) - math.cos(theta)),
                pose.y + r * (math.sin(theta) - math.sin(pose.theta)), theta)


def simulate(plan: MotionPlan, geom: RobotGeometry = ROOMBA_600,
             noise: NoiseModel = NoiseModel(), origin: Pose = Pose()) -> SimulationResult:
    """Integrate ``plan`` and synthesize the encoder log a robot would record.

    Wheel scales multiply each wheel's actual travel, so they move the
    ground truth and the counts together (a wheel that is effectively
    larger, or slipping forward, on rough ground). Gaussian noise and
    spikes are added to per-step increments and therefore persist in the
    cumulative counts. With quantization on, counts are rounded and wrapped
    into the geometry's counter range.
    """
    ls, rs = noise.wheel_radius_bias
    # per segment: start time, start pose, start wheel arcs, wheel speeds, body speeds
    table = []
    t0, pose, arc_l, arc_r = 0.0, origin, 0.0, 0.0
    for seg in plan.segments:
        vl, vr = seg.wheel_speeds(geom)
        vl, vr = vl * ls, vr * rs
        v, w = (vl + vr) / 2.0, (vr - vl) / geom.wheelbase
        table.append((t0, pose, arc_l, arc_r, vl, vr, v, w))
        pose = _arc(pose, v, w, seg.duration)
        arc_l += vl * seg.duration
        arc_r += vr * seg.duration
        t0 += seg.duration

    times = _sample_times(plan.duration, plan.dt)
    truth, arcs = [], []
    idx = 0
    for t in times:
        while idx + 1 < len(table) and t >= table[idx + 1][0]:
            idx += 1
        ts, p0, al, ar, vl, vr, v, w = table[idx]
        tau = t - ts
        truth.append((t, _arc(p0, v, w, tau)))
        arcs.append((al + vl * tau, ar + vr * tau))

    rng = np.random.default_rng(noise.seed)
    steps = len(times) - 1
    gauss = rng.standard_normal((steps, 2)) * noise.gaussian_sigma
    spikes = rng.random((steps, 2)) < noise.spike_prob
    increments = gauss + spikes * noise.spike_magnitude
    offsets = np.vstack([np.zeros((1, 2)), np.cumsum(increments, axis=0)])
    counts = np.asarray(arcs) * counts_per_mm(geom) + offsets

    if noise.quantize:
        counts = np.rint(counts).astype(np.int64)
        if geom.wrap_modulus is not None:
            counts %= geom.wrap_modulus
        samples = [EncoderSample(t, int(c[0]), int(c[1])) for t, c in zip(times, counts)]
    else:
        samples = [EncoderSample(t, float(c[0]), float(c[1])) for t, c in zip(times, counts)]

    injected = tuple((int(k) + 1, ("left", "right")[int(side)])
                     for k, side in zip(*np.nonzero(spikes)))
    log = LogDocument(samples, f"simulate seed={noise.seed} rng={RNG_ALGORITHM}")
    return SimulationResult(tuple(truth), log, injected, RNG_ALGORITHM)


def inject_spike(log: LogDocument, step: int, side: str, magnitude: float) -> LogDocument:
    """Add ``magnitude`` counts to one wheel from sample ``step`` onwards."""
    if not 0 < step < len(log.samples):
        raise StepOutOfRange(f"step {step} outside 1..{len(log.samples) - 1}")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    out = list(log.samples[:step])
    for s in log.samples[step:]:
        if side == "left":
            s = EncoderSample(s.t, s.left + magnitude, s.right, s.mag)
        else:
            s = EncoderSample(s.t, s.left, s.right + magnitude, s.mag)
        out.append(s)
    return LogDocument(out, log.source_name, log.has_magnetometer)


def truth_poses(result: SimulationResult) -> list[Pose]:
    return [p for _, p in result.truth]
