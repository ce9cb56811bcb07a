"""Cross-module invariant suites.

Each suite returns the largest residual it observed together with the
tolerance it is judged against; :func:`run_all` runs them in a fixed order
with a fixed seed.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import discrimination as dc
from . import interferometer as mzi
from . import qmatrix as qm
from .duality import report, verify_bound
from .tolerances import TOL


@dataclass(frozen=True)
class SuiteResult:
    name: str
    max_residual: float
    tolerance: float

    @property
    def passed(self):
        return bool(self.max_residual <= self.tolerance)

    def line(self):
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark} {self.name}: max residual {self.max_residual:.3e} (tolerance {self.tolerance:.0e})"


def random_unitary(rng, dim):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_ket(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_config(rng, dim=2, pure_detector=True, margin=1e-3):
    """Random apparatus away from the degenerate corners ``1 + S_x cos(beta) ~ 0``."""
    while True:
        v = rng.normal(size=3)
        v *= rng.uniform() ** (1 / 3) / np.linalg.norm(v)
        beta = rng.uniform(0.0, math.pi)
        if 1.0 + v[0] * math.cos(beta) > margin:
            break
    u = random_unitary(rng, dim)
    if pure_detector:
        state = random_ket(rng, dim)
    else:
        w = rng.dirichlet(np.ones(dim))
        kets = random_unitary(rng, dim)
        state = (kets * w) @ kets.conj().T
    return mzi.ApparatusConfig(
        mzi.BlochVector(*v), mzi.BeamSplitter(beta),
        mzi.DetectorModel(state, u), phase=rng.uniform(0.0, 2 * math.pi),
    )


def _usable(cfg):
    return cfg.detector.overlap < 1.0 - 1e-9


def suite_kernel(rng, n=200):
    worst = 0.0
    for _ in range(n):
        a, b, c, d = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(4))
        lhs = qm.kron(a, b) @ qm.kron(c, d)
        worst = max(worst, float(np.max(np.abs(lhs - qm.kron(a @ c, b @ d)))))
        h = a @ qm.dagger(a)
        worst = max(worst, abs(qm.eig_hermitian(h).sum() - np.trace(h).real))
        m = qm.kron(a, b)
        worst = max(worst, abs(np.trace(qm.partial_trace(m, (2, 2), 0)) - np.trace(m)))
    return worst


def suite_eq6(rng, n=100):
    """Full evolution vs an independent transcription of the closed joint-state expression."""
    worst = 0.0
    for _ in range(n):
        cfg = random_config(rng)
        b, beta, phi = cfg.bloch, cfg.bs2.beta, cfg.phase
        rho = cfg.detector.density
        u = cfg.detector.mark_unitary
        sx, sy, sz, i2 = qm.SIGMA_X, qm.SIGMA_Y, qm.SIGMA_Z, qm.I2
        cb, sb = math.cos(beta), math.sin(beta)
        expected = (
            0.25 * (1 - b.s_x) * np.kron(i2 + sz * cb + sx * sb, rho)
            - 0.25 * np.exp(-1j * phi) * (b.s_z - 1j * b.s_y) * np.kron(sz * sb - sx * cb - 1j * sy, rho @ u.conj().T)
            - 0.25 * np.exp(1j * phi) * (b.s_z + 1j * b.s_y) * np.kron(sz * sb - sx * cb + 1j * sy, u @ rho)
            + 0.25 * (1 + b.s_x) * np.kron(i2 - sz * cb - sx * sb, u @ rho @ u.conj().T)
        )
        worst = max(worst, float(np.max(np.abs(mzi.evolve_full(cfg) - expected))))
    return worst


def suite_visibility(rng, n=100):
    return max(abs(mzi.visibility_closed(cfg) - mzi.visibility_scan(cfg, 720))
               for cfg in (random_config(rng, pure_detector=bool(i % 2)) for i in range(n)))


def suite_postselection(rng, n=100):
    worst = 0.0
    for _ in range(n):
        cfg = random_config(rng, dim=int(rng.integers(2, 4)))
        p = mzi.priors(cfg.bloch, cfg.bs2)
        rho = cfg.detector.density
        u = cfg.detector.mark_unitary
        expected = p.omega_b * rho + p.omega_a * u @ rho @ u.conj().T
        reduced = qm.partial_trace(mzi.postselected_state(cfg), (2, cfg.detector.dim), 1)
        worst = max(worst, float(np.max(np.abs(reduced - expected))))
    return worst


def _random_pair_priors(rng):
    cfg = random_config(rng, dim=int(rng.integers(2, 4)))
    while not _usable(cfg):
        cfg = random_config(rng)
    return cfg, dc.overlap_pair(cfg.detector), mzi.priors(cfg.bloch, cfg.bs2)


def suite_povm(rng, n=300):
    worst = 0.0
    for _ in range(n):
        _, pair, p = _random_pair_priors(rng)
        povm = dc.build_povm(pair, p)
        eye = np.eye(pair.dim)
        worst = max(worst, float(np.max(np.abs(povm.pi_a + povm.pi_b + povm.pi_0 - eye))))
        for el in (povm.pi_a, povm.pi_b, povm.pi_0):
            worst = max(worst, -float(qm.eig_hermitian(el)[0]))
        worst = max(worst, abs(np.vdot(pair.r_state, povm.pi_a @ pair.r_state)))
        worst = max(worst, abs(np.vdot(pair.s_state, povm.pi_b @ pair.s_state)))
    return worst


def suite_joint(rng, n=300):
    worst = 0.0
    for _ in range(n):
        cfg, pair, p = _random_pair_priors(rng)
        numeric = dc.joint_distribution_numeric(mzi.postselected_state(cfg), dc.build_povm(pair, p))
        closed = dc.joint_distribution_closed(cfg.bloch, cfg.bs2, pair.overlap_c)
        worst = max(worst, float(np.max(np.abs(numeric.as_array() - closed.as_array()))))
    return worst


def suite_information(rng, n=300):
    worst = 0.0
    for _ in range(n):
        cfg, pair, p = _random_pair_priors(rng)
        numeric = dc.joint_distribution_numeric(mzi.postselected_state(cfg), dc.build_povm(pair, p))
        closed = dc.i_path_closed(cfg.bloch, cfg.bs2, pair.overlap_c)
        worst = max(worst, abs(dc.which_path_information(numeric) - closed))
    return worst


def boundary_configs(rng, n):
    """``(s_x, beta, C, lower_case, upper_case)`` placed exactly on a regime boundary.

    ``beta`` is solved from ``sqrt(omega_a/omega_b) = C`` (or ``1/C``), i.e.
    ``tan(beta/2) = sqrt((1+S_x)/(1-S_x)) / ratio``.
    """
    out = []
    for i in range(n):
        s_x = rng.uniform(-0.95, 0.95)
        c = rng.uniform(0.05, 0.95)
        ratio, cases = (c, (1, 2)) if i % 2 == 0 else (1.0 / c, (2, 3))
        beta = 2.0 * math.atan(math.sqrt((1.0 + s_x) / (1.0 - s_x)) / ratio)
        out.append((s_x, beta, c) + cases)
    return out


def suite_boundaries(rng, n=200):
    worst = 0.0
    for s_x, beta, c, lo, hi in boundary_configs(rng, n):
        a = dc.closed_form_joint(lo, s_x, beta, c).as_array()
        b = dc.closed_form_joint(hi, s_x, beta, c).as_array()
        worst = max(worst, float(np.max(np.abs(a - b))))
    return worst


def suite_failure(rng, n=300):
    worst = 0.0
    for _ in range(n):
        _, pair, p = _random_pair_priors(rng)
        povm = dc.build_povm(pair, p)
        fr = dc.failure_probability(povm, pair, p)
        worst = max(worst, abs(fr.failure_prob - dc.failure_closed(p, pair.overlap_c)))
        worst = max(worst, fr.fidelity_bound - fr.failure_prob)
        if povm.regime.tag is dc.RegimeTag.GENERAL_POVM:
            target = math.sqrt(p.omega_a * p.omega_b) * pair.overlap_c
            fail_b = p.omega_b * np.vdot(pair.r_state, povm.pi_0 @ pair.r_state).real
            fail_a = p.omega_a * np.vdot(pair.s_state, povm.pi_0 @ pair.s_state).real
            worst = max(worst, abs(fail_b - target), abs(fail_a - target))
    return worst


def suite_bound(rng, n=20000):
    s = verify_bound(n, seed=int(rng.integers(2**31)))
    return max(0.0, s.max_violation)


def suite_ridge(rng, n=200):
    worst = 0.0
    for _ in range(n):
        s_x = rng.uniform(-0.99, 0.99)
        c = rng.uniform(0.0, 0.95)
        cfg = mzi.ApparatusConfig(mzi.BlochVector.pure_in_xz(s_x), mzi.BeamSplitter(math.acos(-s_x)),
                                  mzi.DetectorModel.canonical(c))
        worst = max(worst, abs(report(cfg).duality_sum - 1.0))
    return worst


SUITES = (
    ("matrix kernel identities", suite_kernel, TOL.algebraic),
    ("full evolution vs joint-state closed form", suite_eq6, TOL.algebraic),
    ("visibility closed form vs phase scan", suite_visibility, 1e-6),
    ("post-selected detector marginal", suite_postselection, 1e-13),
    ("POVM completeness, positivity, error-free", suite_povm, TOL.algebraic),
    ("joint distribution closed vs numeric", suite_joint, TOL.algebraic),
    ("which-path information closed vs numeric", suite_information, 1e-10),
    ("regime boundary continuity", suite_boundaries, TOL.algebraic),
    ("failure probability optimality and bound", suite_failure, TOL.algebraic),
    ("complementarity bound V + I <= 1", suite_bound, TOL.bound),
    ("ridge equality V + I = 1", suite_ridge, TOL.bound),
)


def run_all(seed=2024):
    rng = np.random.default_rng(seed)
    return [SuiteResult(name, float(fn(rng)), tol) for name, fn, tol in SUITES]
