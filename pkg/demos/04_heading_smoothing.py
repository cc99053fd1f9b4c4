"""
Smoothing a noisy heading
=========================

Run the scalar Kalman filter over a noisy constant heading, then over the
dead-reckoned heading of a noisy simulated run.
"""

# %%
import numpy as np

from deadreckon import KalmanConfig, NoiseModel, kalman_smooth, track, unwrap_angles
from deadreckon.simulator import preset_plan, simulate

rng = np.random.default_rng(0)
z = rng.normal(0.0, np.radians(5), 200)
out = np.array(kalman_smooth(z, KalmanConfig(process_variance=1e-6, measurement_variance=0.0076)))
print(f"RMSE raw {np.sqrt(np.mean(z ** 2)):.4f} rad, filtered {np.sqrt(np.mean(out ** 2)):.4f} rad")

# %%
# Wrapped angles need unwrapping before filtering.
print(unwrap_angles([3.0, -3.0, -2.9]))

# %%
res = simulate(preset_plan("test5"), noise=NoiseModel(gaussian_sigma=8, seed=4))
pts = track(res.log.samples)
theta = [p.pose.theta for p in pts]
smooth = kalman_smooth(theta, KalmanConfig(1e-5, 1e-3, initial_estimate=theta[0]))
print(f"heading std raw {np.std(np.diff(theta)):.4f}, smoothed {np.std(np.diff(smooth)):.4f} rad/step")
