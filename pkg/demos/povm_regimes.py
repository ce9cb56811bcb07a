"""
Error-free path discrimination
==============================

The detector marks path ``a`` with ``|r>`` and path ``b`` with ``|s>``.
When the two marks overlap, an error-free measurement has to allow an
inconclusive outcome.  Which measurement minimizes it depends on the prior
weights of the two paths.
"""

import math

import numpy as np

from duality_lab import BeamSplitter, BlochVector, DetectorModel, build_povm, overlap_pair, priors
from duality_lab.discrimination import failure_probability

det = DetectorModel.canonical(0.4)
pair = overlap_pair(det)
print("overlap C =", pair.overlap_c)

# Scan beta at fixed S_x.  The ratio sqrt(w_a / w_b) sweeps through the
# three regimes: below C, between C and 1/C, above 1/C.
bloch = BlochVector.pure_in_xz(0.2)
for beta in np.linspace(0.2, math.pi - 0.2, 7):
    p = priors(bloch, BeamSplitter(beta))
    povm = build_povm(pair, p)
    fr = failure_probability(povm, pair, p)
    print(f"beta={beta:5.3f}  w_a={p.omega_a:.3f}  case={povm.regime.case}  "
          f"Q_fail={fr.failure_prob:.4f}  bound={fr.fidelity_bound:.4f}")

# Each element is positive and they sum to the identity.
p = priors(bloch, BeamSplitter(1.5))
povm = build_povm(pair, p)
print(np.round(povm.pi_a + povm.pi_b + povm.pi_0, 12).real)
print("eigenvalues of Pi_0:", np.linalg.eigvalsh(povm.pi_0))
