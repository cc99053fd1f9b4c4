"""Command-line front end.

    deadreckon simulate --preset test1 --seed 42 --output run.csv --truth truth.csv
    deadreckon track --input run.csv --output traj.csv --plot traj.svg
    deadreckon scan --input run.csv --max-delta 300
    deadreckon smooth --input run.csv --q 1e-6 --r 0.0076 --output smooth.csv
    deadreckon analyze --input run.csv --preset test1 --actual-m 5.83
    deadreckon report --input run.csv --preset test1 --policy hold

Exit status: 0 on success, 1 on usage errors, 2 on data errors.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from . import analysis, anomaly, ingest, odometry, plot, simulator, smoothing
from .errors import OdometryError


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


NOISE_KEYS = {
    "quantize": "quantize",
    "sigma": "gaussian_sigma",
    "gaussian_sigma": "gaussian_sigma",
    "spike_prob": "spike_prob",
    "spike_mag": "spike_magnitude",
    "spike_magnitude": "spike_magnitude",
    "left_scale": "left_scale",
    "right_scale": "right_scale",
    "bias": "bias",
}


def parse_noise(text: Optional[str], seed: int) -> simulator.NoiseModel:
    """``key=val,...`` -> NoiseModel. ``bias`` sets both wheel scales."""
    kw: dict = {}
    left = right = 1.0
    for item in filter(None, (text or "").split(",")):
        key, sep, val = item.partition("=")
        key = NOISE_KEYS.get(key.strip())
        if not sep or key is None:
            raise UsageError(f"bad --noise entry {item!r}; keys: {', '.join(sorted(NOISE_KEYS))}")
        val = val.strip()
        if key == "quantize":
            if val.lower() not in ("1", "0", "true", "false", "yes", "no"):
                raise UsageError(f"quantize expects a boolean, got {val!r}")
            kw["quantize"] = val.lower() in ("1", "true", "yes")
            continue
        try:
            num = float(val)
        except ValueError:
            raise UsageError(f"--noise {key} expects a number, got {val!r}") from None
        if key == "bias":
            left = right = num
        elif key == "left_scale":
            left = num
        elif key == "right_scale":
            right = num
        else:
            kw[key] = num
    return simulator.NoiseModel(wheel_radius_bias=(left, right), seed=seed, **kw)


def _read_log(path: str):
    data = Path(path).read_bytes()
    doc, diags = ingest.parse_log(data, source_name=path)
    for d in diags:
        print(f"{path}:{d.line_number}: {d.severity}: {d.message}", file=sys.stderr)
    return doc


def _scan_cfg(args) -> anomaly.ScanConfig:
    return anomaly.ScanConfig(max_delta_per_step=args.max_delta, policy=args.policy)


def _commanded(args) -> tuple[float, float]:
    speed, duration = args.speed_mm_s, args.duration_s
    if args.preset:
        p_speed, p_duration = simulator.COMMANDED_RUNS[args.preset]
        speed = p_speed if speed is None else speed
        duration = p_duration if duration is None else duration
    if speed is None or duration is None:
        raise UsageError("commanded motion needed: --preset or --speed-mm-s and --duration-s")
    return speed, duration


def _tracked(args, path):
    geom = odometry.geometry_from_string(args.geometry)
    doc = _read_log(path)
    cfg = _scan_cfg(args)
    samples, report = anomaly.scan_and_repair(doc.samples, cfg, geom)
    if report.flagged_steps:
        print(f"{path}: {len(report.flagged_steps)} increment(s) over threshold, "
              f"policy {cfg.policy}", file=sys.stderr)
    points = odometry.track(samples, geom, args.mode, flagged=report.steps)
    return geom, points, report


# Each job returns {"main": bytes, "plot": bytes?}; module-level for process pools.

def _job_track(args, path):
    _, points, _ = _tracked(args, path)
    out = {"main": ingest.write_trajectory(points)}
    if args.plot:
        out["plot"] = plot.emit_plot(points)
    return out


def _job_scan(args, path):
    geom = odometry.geometry_from_string(args.geometry)
    doc = _read_log(path)
    report = anomaly.scan(doc.samples, _scan_cfg(args), geom)
    return {"main": ingest.dump_json(report.as_dict())}


def _job_smooth(args, path):
    _, points, _ = _tracked(args, path)
    cfg = smoothing.KalmanConfig(process_variance=args.q, measurement_variance=args.r,
                                 initial_estimate=points[0].pose.theta)
    headings = [p.pose.theta for p in points]
    if odometry.UpdateMode(args.mode) is odometry.UpdateMode.LITERAL:
        headings = smoothing.unwrap_angles(headings)
    smooth = smoothing.kalman_smooth(headings, cfg)
    if args.smoothed_pose:
        points = _redrive(points, smooth)
    out = {"main": ingest.write_trajectory(points, smooth)}
    if args.plot:
        out["plot"] = plot.emit_plot(points)
    return out


def _redrive(points, headings):
    """Re-integrate positions along smoothed headings, keeping each step's distance."""
    pose = odometry.Pose()
    out = []
    for p, th in zip(points, headings):
        mu = th - pose.theta
        pose = odometry.advance_pose(pose, p.beta, mu, odometry.UpdateMode.ACCUMULATED)
        out.append(odometry.TrajectoryPoint(p.n, p.t, p.delta_left, p.delta_right, p.beta,
                                            mu, pose, p.v, p.flagged))
    return out


def _job_analyze(args, path, with_scan=False):
    geom, points, report = _tracked(args, path)
    speed, duration = _commanded(args)
    run = analysis.build_report(points, speed, duration, args.actual_m, args.mode, geom)
    payload = run.as_dict()
    if with_scan:
        payload["anomalies"] = report.as_dict() | {"repaired": report.repaired}
    out = {"main": ingest.dump_json(payload)}
    if args.plot:
        out["plot"] = plot.emit_plot(points, run.fit)
    return out


def _job_report(args, path):
    return _job_analyze(args, path, with_scan=True)


JOBS = {
    "track": (_job_track, ".csv"),
    "scan": (_job_scan, ".json"),
    "smooth": (_job_smooth, ".csv"),
    "analyze": (_job_analyze, ".json"),
    "report": (_job_report, ".json"),
}


def _write(path: Optional[str], data: bytes):
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        Path(path).write_bytes(data)


def _run_batch(args) -> None:
    job, ext = JOBS[args.command]
    inputs = args.input
    if len(inputs) == 1:
        result = job(args, inputs[0])
        _write(args.output, result["main"])
        if "plot" in result:
            _write(args.plot, result["plot"])
        return

    if not args.output:
        raise UsageError("--output must name a directory when several inputs are given")
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    stems = [Path(p).stem for p in inputs]
    if len(set(stems)) != len(stems):
        raise UsageError("input file names must be distinct for batch output")
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(job, [args] * len(inputs), inputs))
    else:
        results = [job(args, p) for p in inputs]
    for stem, result in zip(stems, results):
        (outdir / f"{stem}{ext}").write_bytes(result["main"])
        if "plot" in result:
            (outdir / f"{stem}.svg").write_bytes(result["plot"])


def _cmd_simulate(args) -> None:
    geom = odometry.geometry_from_string(args.geometry)
    if args.preset:
        plan = simulator.preset_plan(args.preset, args.dt_s)
        speed, duration = simulator.COMMANDED_RUNS[args.preset]
        if args.speed_mm_s is not None or args.duration_s is not None:
            speed = args.speed_mm_s if args.speed_mm_s is not None else speed
            duration = args.duration_s if args.duration_s is not None else duration
            plan = simulator.MotionPlan((simulator.Straight(speed, duration),), args.dt_s)
    elif args.speed_mm_s is not None and args.duration_s is not None:
        plan = simulator.MotionPlan((simulator.Straight(args.speed_mm_s, args.duration_s),), args.dt_s)
    else:
        raise UsageError("simulate needs --preset or --speed-mm-s and --duration-s")
    noise = parse_noise(args.noise, args.seed)
    result = simulator.simulate(plan, geom, noise)
    _write(args.output, ingest.write_log(result.log))
    if args.truth:
        _write(args.truth, ingest.write_truth(result.truth))
    print(f"simulated {len(result.log.samples)} samples, seed {args.seed}, "
          f"rng {result.rng_algorithm}, spikes {len(result.injected_spikes)}", file=sys.stderr)


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="deadreckon", description="Wheel-encoder dead reckoning toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, inputs=True):
        p.add_argument("--geometry", default="roomba-600",
                       help="preset name or wheel_diameter,wheelbase,counts_per_rev (mm, mm, counts)")
        p.add_argument("--output", help="output file (stdout if omitted); a directory for batches")
        if inputs:
            p.add_argument("--input", nargs="+", required=True, help="encoder log CSV(s)")
            p.add_argument("--jobs", type=_positive_int, default=1)
            p.add_argument("--mode", choices=["literal", "accumulated"], default="accumulated")
            p.add_argument("--max-delta", type=float, default=300.0,
                           help="allowed counts per wheel per 0.5 s step")
            p.add_argument("--policy", choices=["flag", "hold", "interp"], default="flag")

    def commanded(p):
        p.add_argument("--preset", choices=sorted(simulator.COMMANDED_RUNS))
        p.add_argument("--speed-mm-s", type=float)
        p.add_argument("--duration-s", type=float)

    p = sub.add_parser("track", help="log -> trajectory CSV")
    common(p)
    p.add_argument("--plot", help="write an SVG scatter of the trajectory")

    p = sub.add_parser("simulate", help="synthesize an encoder log")
    common(p, inputs=False)
    commanded(p)
    p.add_argument("--dt-s", type=float, default=0.5)
    p.add_argument("--noise", help="quantize=1,sigma=5,spike_prob=0.01,spike_mag=350,bias=1.196,...")
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--truth", help="write the ground-truth pose CSV here")

    p = sub.add_parser("scan", help="flag over-threshold encoder increments")
    common(p)

    p = sub.add_parser("smooth", help="trajectory with Kalman-smoothed heading")
    common(p)
    p.add_argument("--q", type=float, default=1e-6, help="process variance (rad^2 per step)")
    p.add_argument("--r", type=float, default=0.0076, help="measurement variance (rad^2)")
    p.add_argument("--smoothed-pose", action="store_true",
                   help="re-integrate positions along the smoothed heading")
    p.add_argument("--plot")

    for name, text in (("analyze", "distances, fit and drift as JSON"),
                       ("report", "scan + repair + track + analyze as JSON")):
        p = sub.add_parser(name, help=text)
        common(p)
        commanded(p)
        p.add_argument("--actual-m", type=float, help="hand-measured distance in metres")
        p.add_argument("--plot")
    return parser


def run(argv: Sequence[str]) -> int:
    try:
        args = build_parser().parse_args(list(argv))
        if args.command == "simulate":
            _cmd_simulate(args)
        else:
            _run_batch(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (OdometryError, ValueError, KeyError, OSError) as exc:
        print(f"deadreckon: error: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
