"""Self-contained SVG scatter of a trajectory, with an optional fitted line.

Written by hand rather than through a plotting library so that identical
inputs give identical bytes (no timestamps, ids or font metrics).
"""

from __future__ import annotations

from typing import Optional, Sequence

from .analysis import RegressionFit
from .errors import EmptyTrajectory
from .odometry import TrajectoryPoint

WIDTH, HEIGHT, MARGIN = 640, 480, 60


def _bounds(values):
    lo, hi = min(values), max(values)
    if hi - lo < 1e-9:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def _f(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def emit_plot(points: Sequence[TrajectoryPoint], fit: Optional[RegressionFit] = None,
              title: str = "Dead-reckoned trajectory") -> bytes:
    if not points:
        raise EmptyTrajectory("cannot plot an empty trajectory")
    xs = [p.pose.x for p in points]
    ys = [p.pose.y for p in points]
    x0, x1 = _bounds(xs)
    y0, y1 = _bounds(ys)
    pw, ph = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

    def sx(x):
        return MARGIN + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return HEIGHT - MARGIN - (y - y0) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<title>{title}</title>',
        f'<defs><clipPath id="area"><rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}"/>'
        '</clipPath></defs>',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for k in range(5):
        fx = x0 + (x1 - x0) * k / 4
        fy = y0 + (y1 - y0) * k / 4
        out.append(f'<text x="{_f(sx(fx))}" y="{HEIGHT - MARGIN + 16}" font-size="10" '
                   f'text-anchor="middle">{_f(fx)}</text>')
        out.append(f'<text x="{MARGIN - 6}" y="{_f(sy(fy))}" font-size="10" '
                   f'text-anchor="end">{_f(fy)}</text>')
    out.append(f'<text x="{WIDTH / 2:g}" y="{HEIGHT - 15}" font-size="12" '
               'text-anchor="middle">x [mm]</text>')
    out.append(f'<text x="15" y="{HEIGHT / 2:g}" font-size="12" text-anchor="middle" '
               f'transform="rotate(-90 15 {HEIGHT / 2:g})">y [mm]</text>')
    out.append('<g clip-path="url(#area)" fill="steelblue">')
    for x, y in zip(xs, ys):
        out.append(f'<circle cx="{_f(sx(x))}" cy="{_f(sy(y))}" r="2.5"/>')
    out.append('</g>')
    if fit is not None:
        ya, yb = fit.slope * x0 + fit.intercept, fit.slope * x1 + fit.intercept
        out.append(f'<line clip-path="url(#area)" x1="{_f(sx(x0))}" y1="{_f(sy(ya))}" '
                   f'x2="{_f(sx(x1))}" y2="{_f(sy(yb))}" stroke="crimson" stroke-width="1.5"/>')
        out.append(f'<text x="{WIDTH - MARGIN}" y="{MARGIN - 10}" font-size="11" text-anchor="end">'
                   f'y = {fit.slope:.4f}x + {fit.intercept:.2f}, R2 = {fit.r2:.4f}</text>')
    out.append('</svg>')
    return ("\n".join(out) + "\n").encode("utf-8")
