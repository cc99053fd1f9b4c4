"""
Encoder counts to a trajectory
==============================

Turn raw cumulative wheel counts into distances, heading changes and
positions for the Roomba 600 geometry, then dead-reckon a simulated run.
"""

# %%
# Conversion constants follow from the wheel and wheelbase dimensions.
import math

from deadreckon import (ROOMBA_600, EncoderSample, counts_per_degree, counts_per_mm,
                        step_distance, step_heading_change, track)
from deadreckon.simulator import preset_plan, simulate

print(f"counts per mm     : {counts_per_mm(ROOMBA_600):.4f}")
print(f"counts per degree : {counts_per_degree(ROOMBA_600):.4f}")
print(f"one full spin     : {360 * counts_per_degree(ROOMBA_600):.2f} differential counts")

# %%
# A single step: 225 counts on both wheels is a 100 mm straight move,
# 9.226 more counts on the right wheel is one degree of heading change.
print(step_distance(225, 225), "mm")
print(math.degrees(step_heading_change(0, 9.226)), "deg")

# %%
# The counters are 16 bit and wrap; increments are unwrapped to the nearest value.
pts = track([EncoderSample(0.0, 65530, 65530), EncoderSample(0.5, 10, 10)])
print("wrapped step distance:", round(pts[0].beta, 3), "mm")

# %%
# Dead-reckon the commanded Test 1 motion (75 mm/s for 65 s).
res = simulate(preset_plan("test1"))
pts = track(res.log.samples)
end = pts[-1].pose
print(f"{len(res.log.samples)} samples, final pose x={end.x:.2f} y={end.y:.2f} theta={end.theta:.4f}")
print(f"mean speed {sum(p.v for p in pts) / len(pts):.2f} mm/s")
