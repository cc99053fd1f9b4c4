"""Reading and writing encoder logs, trajectories and reports.

Log CSV layout::

    t_s,left_counts,right_counts,mag_x,mag_y,mag_z
    0,0,0,12,-340,80
    0.5,84,84,,,

Times are decimal seconds (at most 6 fractional digits are kept), counts
and magnetometer readings are integers, magnetometer cells may be empty.
Everything is written with '.' decimals and ',' separators, independent of
the process locale.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .errors import MalformedHeader, NoValidRows
from .odometry import EncoderSample, Pose, TrajectoryPoint

LOG_HEADER = ("t_s", "left_counts", "right_counts", "mag_x", "mag_y", "mag_z")
TRAJECTORY_HEADER = ("n", "t_s", "delta_left", "delta_right", "beta_mm", "mu_rad",
                     "theta_rad", "x_mm", "y_mm", "v_mm_s", "flagged")
TRUTH_HEADER = ("t_s", "x_mm", "y_mm", "theta_rad")


@dataclass(frozen=True)
class LogDocument:
    samples: tuple[EncoderSample, ...] = ()
    source_name: str = ""
    has_magnetometer: bool = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        if self.has_magnetometer is None:
            object.__setattr__(self, "has_magnetometer",
                               any(s.mag is not None for s in self.samples))


@dataclass(frozen=True)
class ParseDiagnostic:
    line_number: int
    severity: str  # "warning" | "error"
    message: str


def _text(data: Union[bytes, str]) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _parse_int(cell: str) -> int:
    cell = cell.strip()
    # int() alone would accept "1_000" and unicode digits
    if not cell or not cell.lstrip("+-").isascii() or not cell.lstrip("+-").isdigit():
        raise ValueError(f"not an integer: {cell!r}")
    return int(cell)


def _parse_time(cell: str) -> float:
    t = float(cell.strip())
    if not math.isfinite(t) or t < 0:
        raise ValueError(f"time must be a finite non-negative number: {cell!r}")
    return t


def parse_log(data: Union[bytes, str], source_name: str = "") -> tuple[LogDocument, list[ParseDiagnostic]]:
    """Parse a log CSV into a document plus per-line diagnostics.

    Bad rows are dropped with one error diagnostic each. A wrong header
    raises MalformedHeader; a body whose every row was rejected raises
    NoValidRows.
    """
    lines = _text(data).split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    lines = [ln.rstrip("\r") for ln in lines]
    if not lines:
        raise MalformedHeader("empty input, expected a header line")
    header = tuple(c.strip() for c in lines[0].split(","))
    if header not in (LOG_HEADER, LOG_HEADER[:3]):
        raise MalformedHeader(f"unexpected header {lines[0]!r}")
    ncols = len(header)

    samples: list[EncoderSample] = []
    diags: list[ParseDiagnostic] = []
    n_rows = 0
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        n_rows += 1
        cells = line.split(",")
        if len(cells) != ncols:
            diags.append(ParseDiagnostic(lineno, "error", f"expected {ncols} fields, got {len(cells)}"))
            continue
        try:
            t = _parse_time(cells[0])
            left = _parse_int(cells[1])
            right = _parse_int(cells[2])
        except ValueError as exc:
            diags.append(ParseDiagnostic(lineno, "error", str(exc)))
            continue
        mag = None
        if ncols == 6:
            raw = [c.strip() for c in cells[3:]]
            present = [c != "" for c in raw]
            try:
                if all(present):
                    mag = tuple(_parse_int(c) for c in raw)
                elif any(present):
                    diags.append(ParseDiagnostic(lineno, "warning",
                                                 "partial magnetometer triple ignored"))
            except ValueError as exc:
                diags.append(ParseDiagnostic(lineno, "error", str(exc)))
                continue
        if samples and t <= samples[-1].t:
            diags.append(ParseDiagnostic(
                lineno, "error", f"non-monotonic time {t} after {samples[-1].t}; row dropped"))
            continue
        samples.append(EncoderSample(t, left, right, mag))

    if n_rows and not samples:
        raise NoValidRows(f"none of the {n_rows} data rows were valid")
    return LogDocument(samples, source_name), diags


def _fmt_time(t: float) -> str:
    s = f"{t:.6f}".rstrip("0").rstrip(".")
    return s or "0"


def _fmt_count(c) -> str:
    if isinstance(c, float):
        if not c.is_integer():
            raise ValueError(f"log counts must be integers, got {c}")
        c = int(c)
    return str(c)


def write_log(doc: LogDocument) -> bytes:
    out = [",".join(LOG_HEADER)]
    for s in doc.samples:
        mag = ",".join(_fmt_count(m) for m in s.mag) if s.mag is not None else ",,"
        out.append(f"{_fmt_time(s.t)},{_fmt_count(s.left)},{_fmt_count(s.right)},{mag}")
    return ("\n".join(out) + "\n").encode("utf-8")


def _fmt_real(v: float) -> str:
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _fmt_num(v) -> str:
    if isinstance(v, int) or (isinstance(v, float) and v.is_integer()):
        return str(int(v))
    return _fmt_real(v)


def write_trajectory(points: Sequence[TrajectoryPoint],
                     theta_smooth: Optional[Sequence[float]] = None) -> bytes:
    """Trajectory CSV; with ``theta_smooth`` an extra smoothed-heading column is appended."""
    header = list(TRAJECTORY_HEADER)
    if theta_smooth is not None:
        if len(theta_smooth) != len(points):
            raise ValueError("theta_smooth must match the number of points")
        header.append("theta_smooth_rad")
    out = [",".join(header)]
    for i, p in enumerate(points):
        row = [str(p.n), _fmt_time(p.t), _fmt_num(p.delta_left), _fmt_num(p.delta_right),
               _fmt_real(p.beta), _fmt_real(p.mu), _fmt_real(p.pose.theta),
               _fmt_real(p.pose.x), _fmt_real(p.pose.y), _fmt_real(p.v),
               "1" if p.flagged else "0"]
        if theta_smooth is not None:
            row.append(_fmt_real(theta_smooth[i]))
        out.append(",".join(row))
    return ("\n".join(out) + "\n").encode("utf-8")


def write_truth(truth: Iterable[tuple[float, Pose]]) -> bytes:
    out = [",".join(TRUTH_HEADER)]
    for t, pose in truth:
        out.append(f"{_fmt_time(t)},{_fmt_real(pose.x)},{_fmt_real(pose.y)},{_fmt_real(pose.theta)}")
    return ("\n".join(out) + "\n").encode("utf-8")


def dump_json(obj) -> bytes:
    """Stable JSON encoding used for every report file."""
    return (json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n").encode("utf-8")
