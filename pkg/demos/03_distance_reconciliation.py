"""
Commanded, measured and actual distance
=======================================

Reproduce the theoretical-distance column for all seven straight runs and
show how a wheel scale makes the simulated robot travel further than
commanded, the way the field runs did.
"""

# %%
from deadreckon import NoiseModel, build_report, theoretical_distance, track
from deadreckon.simulator import COMMANDED_RUNS, OBSERVED_DISTANCE_M, TEST1_WHEEL_SCALE, preset_plan, simulate

print("run    speed  time  theoretical  observed actual  observed encoder")
for name, (speed, duration) in COMMANDED_RUNS.items():
    actual, encoder = OBSERVED_DISTANCE_M[name]
    print(f"{name}  {speed:5.0f} {duration:5.0f}  {theoretical_distance(speed, duration):10.3f}"
          f"  {actual:14.2f}  {encoder:16.3f}")

# %%
# A wheel scale of 5.83 / 4.875 reproduces the Test 1 mismatch in simulation.
noise = NoiseModel(wheel_radius_bias=(TEST1_WHEEL_SCALE, TEST1_WHEEL_SCALE))
res = simulate(preset_plan("test1"), noise=noise)
report = build_report(track(res.log.samples), 75, 65, actual_m=res.truth[-1][1].y / 1000)
print(report.as_dict())

# %%
# Unequal wheels bend the path. With heading measured clockwise from +y,
# a slower left wheel drifts towards +x.
for scales in ((0.98, 1.0), (1.0, 0.98)):
    res = simulate(preset_plan("test1"), noise=NoiseModel(wheel_radius_bias=scales))
    rep = build_report(track(res.log.samples), 75, 65)
    print(scales, f"drift {rep.drift_deg:+.2f} deg, fit slope {rep.fit.slope:.3f}, R2 {rep.fit.r2:.3f}")
