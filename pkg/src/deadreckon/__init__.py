"""Dead reckoning for differential-drive robots from wheel-encoder logs."""

from .analysis import (RegressionFit, RunReport, build_report, drift_metric, linear_fit,
                       measured_distance, theoretical_distance)
from .anomaly import AnomalyReport, FlaggedStep, ScanConfig, repair, scan, scan_and_repair
from .ingest import LogDocument, ParseDiagnostic, parse_log, write_log, write_trajectory, write_truth
from .odometry import (GEOMETRIES, ROOMBA_600, EncoderSample, Pose, RobotGeometry,
                       TrajectoryPoint, UpdateMode, advance_pose, counts_per_degree,
                       counts_per_mm, delta_counts, heading_from_magnetometer, step_acceleration,
                       step_distance, step_heading_change, step_speed, track)
from .plot import emit_plot
from .simulator import (MotionPlan, NoiseModel, SimulationResult, Straight, TurnInPlace,
                        inject_spike, simulate)
from .smoothing import KalmanConfig, kalman_smooth, unwrap_angles

__version__ = "0.1.0"
