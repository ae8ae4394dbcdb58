"""
QoE curves and the switching point
==================================

Each control scheme's quality of experience falls with round-trip delay
along a four-parameter logistic. Where the two curves cross, the
preferred scheme changes.
"""
import numpy as np

from teleswitch import DEFAULT_QOE, HysteresisConfig, SchemeId, SchemeSelector, crossing_point, evaluate

tdpa, mmt = DEFAULT_QOE[SchemeId.TDPA_PD], DEFAULT_QOE[SchemeId.MMT_PD]

# MOS at the delays used in the experiments
print(" tau_ms   TDPA+PD   MMT+PD")
for tau in [0, 10, 25, 50, 100, 200]:
    print(f"{tau:7d} {evaluate(tau, tdpa):9.3f} {evaluate(tau, mmt):8.3f}")

# Bisection on the difference of the two curves
tau_star = crossing_point(tdpa, mmt)
print(f"\ncurves cross at {tau_star:.2f} ms")

# evaluate() is vectorized, so the whole curve is one call
grid = np.linspace(0, 400, 9)
print("MMT+PD ahead at", grid[evaluate(grid, mmt) > evaluate(grid, tdpa)], "ms")

# Near the crossing the gap is tiny; the 0.1 MOS margin keeps the incumbent.
selector = SchemeSelector(DEFAULT_QOE, HysteresisConfig(margin=0.1, dwell=3))
current = SchemeId.TDPA_PD
for tau in [40, 50, 60, 80, 100, 100, 100, 30, 30, 10, 10, 10]:
    current = selector.decide(tau, current)
    print(f"RTT {tau:3d} ms -> {current.value}")
