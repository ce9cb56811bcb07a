"""
Which-path information
======================

Combine the path priors with the error-free measurement to get a joint
distribution of path and outcome, then the information it carries (bits).
"""

import math

from duality_lab import (ApparatusConfig, BeamSplitter, BlochVector, DetectorModel, build_povm,
                         i_path_closed, joint_distribution_closed, joint_distribution_numeric,
                         overlap_pair, postselected_state, priors, which_path_information)

c = 0.25
cfg = ApparatusConfig(BlochVector.pure_in_xz(-0.4), BeamSplitter(1.1), DetectorModel.canonical(c))

# Numerical route: propagate, post-select, measure.
rho = postselected_state(cfg)
povm = build_povm(overlap_pair(cfg.detector), priors(cfg.bloch, cfg.bs2))
q = joint_distribution_numeric(rho, povm)
print(q.as_array())

# Closed form route, depending only on S_x, beta and C.
print(joint_distribution_closed(cfg.bloch, cfg.bs2, c).as_array())

print("I_path numeric:", which_path_information(q))
print("I_path closed :", i_path_closed(cfg.bloch, cfg.bs2, c))
print("ceiling 1 - C :", 1 - c)

# The transverse Bloch components never enter I_path.
shrunk = BlochVector(-0.4, 0.1, 0.2)
print("with S_y, S_z changed:", i_path_closed(shrunk, cfg.bs2, c))
print("on the ridge         :", i_path_closed(cfg.bloch, BeamSplitter(math.acos(0.4)), c))
