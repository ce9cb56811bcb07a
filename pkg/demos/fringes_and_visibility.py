"""
Fringes and visibility
======================

Build an interferometer with a partially reflecting second splitter and a
marking detector, compute the output probability as the phase is scanned,
and compare the measured fringe contrast with the closed form.
"""

import math
from dataclasses import replace

import numpy as np

from duality_lab import (ApparatusConfig, BeamSplitter, BlochVector, DetectorModel,
                         fringe_profile, output_probability, visibility_closed, visibility_scan)

# A pure particle state with S_x = 0.3, a detector whose two marks overlap
# with C = 1/3, and the second splitter set to beta = 2.
bloch = BlochVector.pure_in_xz(0.3)
cfg = ApparatusConfig(bloch, BeamSplitter(2.0), DetectorModel.canonical(1 / 3))

phis = np.linspace(0, 2 * math.pi, 9)
for phi in phis:
    print(f"phi = {phi:5.3f}   P(port a) = {output_probability(replace(cfg, phase=phi)):.6f}")

# The fringe is a cosine: a mean level, an amplitude and two phase offsets.
prof = fringe_profile(cfg)
print(prof)

# Visibility from the closed form and from a dense phase scan.
print("closed form:", visibility_closed(cfg))
print("phase scan :", visibility_scan(cfg, grid=720))

# Tuning the splitter onto the ridge cos(beta) = -S_x drives V up to C.
ridge = ApparatusConfig(bloch, BeamSplitter(math.acos(-0.3)), DetectorModel.canonical(1 / 3))
print("on the ridge:", visibility_closed(ridge))

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    grid = np.linspace(0, 2 * math.pi, 200)
    plt.plot(grid, [output_probability(replace(cfg, phase=p)) for p in grid], label="beta = 2")
    plt.plot(grid, [output_probability(replace(ridge, phase=p)) for p in grid], label="ridge")
    plt.xlabel("phase")
    plt.ylabel("P(port a)")
    plt.legend()
    plt.savefig("fringes.png", dpi=120)
