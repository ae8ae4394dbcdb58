"""
Fitting a QoE curve to delay ratings
====================================

Synthetic ratings drawn from a known curve plus rating noise are refit
with the four-parameter logistic, and the result is written as a [qoe]
fragment for a scenario file.
"""
import numpy as np

from teleswitch import DEFAULT_QOE, SchemeId, evaluate, fit_4pl
from teleswitch.config import qoe_fragment

truth = DEFAULT_QOE[SchemeId.MMT_PD]
taus = np.array([5, 10, 25, 50, 100, 200, 400], dtype=float)
rng = np.random.default_rng(3)

# three "subjects" per delay, each off by N(0, 0.05) MOS
ratings = [(t, evaluate(t, truth) + rng.normal(0, 0.05)) for t in taus for _ in range(3)]
res = fit_4pl(ratings)
p = res.params
print(f"A={p.A:.3f}  B={p.B_slope:.3f}  C={p.C:.1f}  D={p.D:.3f}   rms={res.rms:.4f} MOS")

grid = np.linspace(5, 400, 200)
print(f"worst deviation from the true curve: {np.max(np.abs(evaluate(grid, p) - evaluate(grid, truth))):.3f} MOS")
print()
print(qoe_fragment(p, SchemeId.MMT_PD))
