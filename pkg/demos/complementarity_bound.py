"""
Complementarity bound
=====================

Fringe visibility and which-path information trade off: V + I <= 1, with
equality only for pure states on the ridge cos(beta) = -S_x.
"""

import math

import numpy as np

from duality_lab import FIGURE_PRESETS, report, sweep, verify_bound
from duality_lab.duality import report_from_params

rep = report_from_params(0.5, 0.0, math.sqrt(0.75), 2 * math.pi / 3, 0.3)
print(rep.as_dict())

# Random sampling over the Bloch ball, splitter angle and overlap.
summary = verify_bound(20_000, seed=7)
print({k: summary.as_dict()[k] for k in ("max_duality_sum", "violations", "regime_counts")})

# A full figure grid: S_x against beta at C = 1/3.
rows = [r for r in sweep(FIGURE_PRESETS["fig2"]) if r.status == "ok"]
v = np.array([r.visibility for r in rows])
total = np.array([r.duality_sum for r in rows])
print("max V     :", v.max())
print("max V + I :", total.max())

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    s_x = np.array([r.s_x for r in rows])
    beta = np.array([r.beta for r in rows])
    plt.tricontourf(s_x, beta, total, levels=30)
    plt.colorbar(label="V + I")
    plt.xlabel("S_x")
    plt.ylabel("beta")
    plt.savefig("duality_sum.png", dpi=120)
