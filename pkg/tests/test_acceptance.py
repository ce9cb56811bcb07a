"""Exit criteria, one test per criterion.

Each test records a ``PASS``/``FAIL`` line with the observed residual; the
lines are printed in the terminal summary.
"""

import hashlib
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from duality_lab import cli
from duality_lab import discrimination as dc
from duality_lab import duality as du
from duality_lab import interferometer as mzi
from duality_lab import qmatrix as qm
from duality_lab.validation import boundary_configs, random_config

PI = math.pi


@pytest.fixture
def record(request):
    lines = []

    def _record(ok, detail):
        lines.append((ok, detail))
        return ok

    yield _record
    name = request.node.name
    ok = bool(lines) and all(ok for ok, _ in lines)
    details = "; ".join(d for _, d in lines)
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} {name}: {details}")


def ok_line(record, ok, detail):
    record(ok, detail)
    assert ok, detail


def test_01_ridge_equality(record):
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for i in range(50):
        c = 0.1 * (1 + i % 9)
        s_x = rng.uniform(-0.95, 0.95)
        cfg = mzi.ApparatusConfig(mzi.BlochVector.pure_in_xz(s_x), mzi.BeamSplitter(math.acos(-s_x)),
                                  mzi.DetectorModel.canonical(c))
        worst = max(worst, abs(du.report(cfg).duality_sum - 1.0))
    elapsed = time.perf_counter() - start
    ok_line(record, worst <= 1e-9, f"50 ridge configs, max |V+I-1| = {worst:.2e} (tol 1e-9)")
    ok_line(record, elapsed < 1.0, f"runtime {elapsed:.3f}s (< 1 s)")


def test_02_complementarity_bound(record):
    start = time.perf_counter()
    s = du.verify_bound(100_000, seed=20240101)
    elapsed = time.perf_counter() - start
    ok_line(record, s.violations == 0 and s.max_duality_sum <= 1 + 1e-9,
            f"max V+I = {s.max_duality_sum:.12f} over 1e5 samples (bound 1+1e-9)")
    ok_line(record, s.max_visibility_excess <= 1e-12, f"max V-C = {s.max_visibility_excess:.2e} (tol 1e-12)")
    ok_line(record, s.max_i_path_excess <= 1e-9, f"max I-(1-C) = {s.max_i_path_excess:.2e} (tol 1e-9)")
    ok_line(record, elapsed < 10.0, f"runtime {elapsed:.2f}s (< 10 s)")


def test_03_fig2_reproduction(record):
    spec = du.FIGURE_PRESETS["fig2"]
    rows = du.sweep(spec)
    s_x_step = 2.0 / 200
    ok_rows = [r for r in rows if r.status == du.STATUS_OK]
    best = max(ok_rows, key=lambda r: r.visibility)
    ok_line(record, abs(best.visibility - 1 / 3) <= 1e-4, f"max V = {best.visibility:.15f} (1/3 within 1e-4)")
    ridge_gap = abs(math.cos(best.beta) + best.s_x)
    ok_line(record, ridge_gap <= s_x_step, f"argmax |cos(beta)+S_x| = {ridge_gap:.2e} (<= {s_x_step})")
    edges = [r.visibility for r in ok_rows if r.beta in (0.0, PI) or abs(r.s_x) == 1.0]
    ok_line(record, max(abs(v) for v in edges) <= 1e-12,
            f"{len(edges)} edge rows (beta in {{0, pi}} or |S_x| = 1), max |V| = {max(abs(v) for v in edges):.1e}")


def _per_c_argmax(rows):
    by_c = {}
    for r in rows:
        by_c.setdefault(r.overlap_c, []).append(r)
    return {c: max(group, key=lambda r: r.i_path) for c, group in by_c.items()}


def test_04_peak_locations(record):
    beta_step = PI / 180
    peaks5 = _per_c_argmax(du.sweep(du.FIGURE_PRESETS["fig5"]))
    worst5 = max(abs(r.beta - 2 * PI / 3) for r in peaks5.values())
    ok_line(record, worst5 <= beta_step + 1e-12,
            f"S_x=1/2: {len(peaks5)} overlaps, max |argmax beta - 2pi/3| = {worst5:.2e} (step {beta_step:.4f})")
    s_x_step = 2.0 / 200
    peaks6 = _per_c_argmax(du.sweep(du.FIGURE_PRESETS["fig6"]))
    worst6 = max(abs(r.s_x + 0.5) for r in peaks6.values())
    ok_line(record, worst6 <= s_x_step + 1e-12,
            f"beta=pi/3: {len(peaks6)} overlaps, max |argmax S_x + 1/2| = {worst6:.2e} (step {s_x_step})")


def test_05_visibility_oracle(record):
    rng = np.random.default_rng(505)
    worst = 0.0
    for i in range(1000):
        cfg = random_config(rng, dim=2 + i % 2, pure_detector=bool(i % 3))
        worst = max(worst, abs(mzi.visibility_closed(cfg) - mzi.visibility_scan(cfg, 720)))
    ok_line(record, worst <= 1e-6, f"1000 configs, max |V_closed - V_scan| = {worst:.2e} (tol 1e-6)")


def _random_pairs(rng, n):
    for i in range(n):
        cfg = random_config(rng, dim=2 + i % 3)
        pair = dc.overlap_pair(cfg.detector)
        yield cfg, pair, mzi.priors(cfg.bloch, cfg.bs2)


def test_06_information_oracle(record):
    rng = np.random.default_rng(606)
    worst_q = worst_i = 0.0
    regimes = {1: 0, 2: 0, 3: 0}
    for cfg, pair, p in _random_pairs(rng, 10_000):
        povm = dc.build_povm(pair, p)
        regimes[povm.regime.case] += 1
        numeric = dc.joint_distribution_numeric(mzi.postselected_state(cfg), povm)
        closed = dc.joint_distribution_closed(cfg.bloch, cfg.bs2, pair.overlap_c)
        worst_q = max(worst_q, float(np.max(np.abs(numeric.as_array() - closed.as_array()))))
        i_closed = dc.i_path_closed(cfg.bloch, cfg.bs2, pair.overlap_c)
        worst_i = max(worst_i, abs(dc.which_path_information(numeric) - i_closed))
    ok_line(record, min(regimes.values()) > 0, f"regime counts {regimes}")
    ok_line(record, worst_q <= 1e-12, f"max joint entry gap = {worst_q:.2e} (tol 1e-12)")
    ok_line(record, worst_i <= 1e-10, f"max I_path gap = {worst_i:.2e} (tol 1e-10)")


def test_07_povm_validity(record):
    rng = np.random.default_rng(707)
    complete = eig = err_free = 0.0
    regimes = set()
    for _, pair, p in _random_pairs(rng, 10_000):
        povm = dc.build_povm(pair, p)
        regimes.add(povm.regime.case)
        complete = max(complete, float(np.max(np.abs(povm.pi_a + povm.pi_b + povm.pi_0 - np.eye(pair.dim)))))
        eig = max(eig, max(-float(qm.eig_hermitian(el)[0]) for el in (povm.pi_a, povm.pi_b, povm.pi_0)))
        err_free = max(err_free, abs(np.vdot(pair.r_state, povm.pi_a @ pair.r_state)),
                       abs(np.vdot(pair.s_state, povm.pi_b @ pair.s_state)))
    ok_line(record, regimes == {1, 2, 3}, f"regimes seen {sorted(regimes)}")
    ok_line(record, complete <= 1e-12, f"completeness residual {complete:.2e} (tol 1e-12)")
    ok_line(record, eig <= 1e-12, f"most negative eigenvalue {-eig:.2e} (>= -1e-12)")
    ok_line(record, err_free <= 1e-12, f"error-free traces {err_free:.2e} (tol 1e-12)")


def test_08_failure_optimality(record):
    rng = np.random.default_rng(808)
    gap2 = balance = gap13 = below = 0.0
    for _, pair, p in _random_pairs(rng, 10_000):
        povm = dc.build_povm(pair, p)
        fr = dc.failure_probability(povm, pair, p)
        c, wa, wb = pair.overlap_c, p.omega_a, p.omega_b
        below = max(below, fr.fidelity_bound - fr.failure_prob)
        if povm.regime.case == 2:
            gap2 = max(gap2, abs(fr.failure_prob - 2 * c * math.sqrt(wa * wb)))
            target = math.sqrt(wa * wb) * c
            fb = wb * np.vdot(pair.r_state, povm.pi_0 @ pair.r_state).real
            fa = wa * np.vdot(pair.s_state, povm.pi_0 @ pair.s_state).real
            balance = max(balance, abs(fb - target), abs(fa - target))
        elif povm.regime.case == 1:
            gap13 = max(gap13, abs(fr.failure_prob - (wa + c * c * wb)))
        else:
            gap13 = max(gap13, abs(fr.failure_prob - (wb + c * c * wa)))
    ok_line(record, gap2 <= 1e-12, f"case 2 |Q - 2C sqrt(w_a w_b)| = {gap2:.2e}")
    ok_line(record, balance <= 1e-12, f"case 2 balance condition residual {balance:.2e}")
    ok_line(record, gap13 <= 1e-12, f"cases 1/3 closed-form gap {gap13:.2e}")
    ok_line(record, below <= 1e-12, f"max (bound - Q) = {below:.2e} (<= 1e-12)")


def test_09_regime_boundaries(record):
    worst = {(1, 2): 0.0, (2, 3): 0.0}
    for s_x, beta, c, lo, hi in boundary_configs(np.random.default_rng(909), 2000):
        a = dc.closed_form_joint(lo, s_x, beta, c).as_array()
        b = dc.closed_form_joint(hi, s_x, beta, c).as_array()
        worst[lo, hi] = max(worst[lo, hi], float(np.max(np.abs(a - b))))
    ok_line(record, worst[1, 2] <= 1e-12, f"case 1 vs 2 at ratio=C: {worst[1, 2]:.2e}")
    ok_line(record, worst[2, 3] <= 1e-12, f"case 2 vs 3 at ratio=1/C: {worst[2, 3]:.2e}")


def test_10_s_dependence(record):
    rng = np.random.default_rng(1010)
    worst_i = worst_v = 0.0
    changed = 0
    for _ in range(200):
        s_x = rng.uniform(-0.95, 0.95)
        beta = rng.uniform(0, PI)
        c = rng.uniform(0, 0.99)
        det = mzi.DetectorModel.canonical(c)
        ref = dc.i_path_closed(mzi.BlochVector(s_x), mzi.BeamSplitter(beta), c)
        rho = math.sqrt(1 - s_x ** 2) * rng.uniform()
        ang = rng.uniform(0, 2 * PI)
        bloch = mzi.BlochVector(s_x, rho * math.sin(ang), rho * math.cos(ang))
        worst_i = max(worst_i, abs(dc.i_path_closed(bloch, mzi.BeamSplitter(beta), c) - ref))
        cfg = mzi.ApparatusConfig(bloch, mzi.BeamSplitter(beta), det)
        expected_v = math.sin(beta) * rho * c / (1 + s_x * math.cos(beta))
        worst_v = max(worst_v, abs(mzi.visibility_scan(cfg) - expected_v))
        changed += expected_v > 1e-3
    ok_line(record, worst_i <= 1e-14, f"I_path change under (S_y, S_z) randomization: {worst_i:.1e}")
    ok_line(record, worst_v <= 1e-6 and changed > 100,
            f"V follows sin(beta) sqrt(S_y^2+S_z^2) C/(1+S_x cos beta): max gap {worst_v:.2e}")


def test_11_cli_determinism(record, capsys, monkeypatch, tmp_path):
    digests = []
    for i in range(2):
        out = tmp_path / f"fig2_{i}.csv"
        assert cli.main(["figure", "fig2", "-o", str(out)]) == 0
        digests.append(hashlib.sha256(out.read_bytes()).hexdigest())
    ok_line(record, digests[0] == digests[1], f"fig2 sha256 {digests[0][:16]} twice")
    domain = cli.main(["report", "--sx", "2", "--beta", "1", "--overlap", "0.3"])
    degenerate = cli.main(["report", "--sx", "1", "--beta", str(PI), "--overlap", "0.3"])
    monkeypatch.setattr(du, "i_path_closed", lambda *a: 1.0)
    violation = cli.main(["verify", "--samples", "10", "--seed", "0"])
    err = capsys.readouterr().err.splitlines()
    ok_line(record, (domain, degenerate, violation) == (2, 3, 4),
            f"exit codes domain/degenerate/violation = {domain}/{degenerate}/{violation}")
    ok_line(record, len(err) == 3 and all(e.startswith("error:") for e in err), "error lines prefixed 'error:'")
