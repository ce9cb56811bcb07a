import math

import numpy as np
import pytest

from duality_lab import discrimination as dc
from duality_lab import duality as du
from duality_lab import interferometer as mzi
from duality_lab.errors import DegenerateConfigurationError, DomainError, InvariantViolationError
from duality_lab.validation import random_config

PI = math.pi


def ridge_config(s_x, c):
    return mzi.ApparatusConfig(mzi.BlochVector.pure_in_xz(s_x), mzi.BeamSplitter(math.acos(-s_x)),
                               mzi.DetectorModel.canonical(c))


class TestReport:
    def test_ridge_point(self):
        rep = du.report(ridge_config(0.3, 1 / 3))
        assert rep.visibility == pytest.approx(1 / 3, abs=1e-12)
        assert rep.i_path == pytest.approx(2 / 3, abs=1e-12)
        assert rep.duality_sum == pytest.approx(1.0, abs=1e-12)
        assert rep.regime.tag is dc.RegimeTag.GENERAL_POVM

    def test_no_second_splitter(self):
        rep = du.report_from_params(0.2, 0.1, 0.3, 0.0, 1 / 3)
        assert (rep.visibility, rep.i_path, rep.duality_sum) == (0.0, 0.0, 0.0)

    def test_balanced_point(self):
        rep = du.report_from_params(0, 0, 1, PI / 2, 1 / 3)
        assert rep.visibility == pytest.approx(1 / 3)
        assert rep.i_path == pytest.approx(2 / 3)
        assert rep.failure_prob == pytest.approx(1 / 3)
        assert rep.priors.omega_a == pytest.approx(0.5)

    def test_degenerate_names_parameters(self):
        with pytest.raises(DegenerateConfigurationError, match="s_x=1.*beta="):
            du.report_from_params(1, 0, 0, PI, 0.5)

    def test_mixed_detector_rejected(self):
        cfg = mzi.ApparatusConfig(mzi.BlochVector(0, 0, 1), mzi.BeamSplitter(1.0),
                                  mzi.DetectorModel(np.eye(2) / 2, np.eye(2)))
        with pytest.raises(DomainError):
            du.report(cfg)

    def test_violation_raised(self, monkeypatch):
        monkeypatch.setattr(du, "i_path_closed", lambda *a: 0.99)
        with pytest.raises(InvariantViolationError):
            du.report_from_params(0, 0, 1, PI / 2, 1 / 3)
        rep = du.report_from_params(0, 0, 1, PI / 2, 1 / 3, check=False)
        assert "duality_sum <= 1" in rep.violations()

    def test_shadowed_by_oracle_pipeline(self):
        rng = np.random.default_rng(50)
        for _ in range(200):
            cfg = random_config(rng, dim=int(rng.integers(2, 4)))
            rep = du.report(cfg)
            assert abs(rep.visibility - mzi.visibility_scan(cfg)) <= 1e-6
            pair = dc.overlap_pair(cfg.detector)
            povm = dc.build_povm(pair, mzi.priors(cfg.bloch, cfg.bs2))
            q = dc.joint_distribution_numeric(mzi.postselected_state(cfg), povm)
            assert abs(rep.i_path - dc.which_path_information(q)) <= 1e-10
            fr = dc.failure_probability(povm, pair, rep.priors)
            assert abs(rep.failure_prob - fr.failure_prob) <= 1e-12

    def test_equality_only_on_ridge(self):
        rng = np.random.default_rng(51)
        for _ in range(200):
            s_x = rng.uniform(-0.95, 0.95)
            c = rng.uniform(0.05, 0.95)
            assert abs(du.report(ridge_config(s_x, c)).duality_sum - 1) <= 1e-9
            # move off the ridge in beta
            beta = math.acos(-s_x) + rng.choice([-1, 1]) * rng.uniform(1e-3, 0.3)
            beta = min(max(beta, 0.0), PI)
            off = du.report_from_params(s_x, 0.0, math.sqrt(1 - s_x ** 2), beta, c)
            assert off.duality_sum < 1 - 1e-9
            # or shrink the Bloch vector
            shrink = du.report_from_params(0.9 * s_x, 0.0, 0.9 * math.sqrt(1 - s_x ** 2),
                                           math.acos(-0.9 * s_x), c)
            assert shrink.duality_sum < 1 - 1e-9


class TestSweep:
    def test_row_major_order(self):
        spec = du.SweepSpec(axes=(du.Axis("s_x", -0.5, 0.5, 3), du.Axis("beta", 0.5, 1.5, 4)),
                            fixed={"overlap_c": 0.2})
        rows = du.sweep(spec)
        assert len(rows) == 12
        assert [r.s_x for r in rows[:4]] == [-0.5] * 4
        assert [r.beta for r in rows[:4]] == pytest.approx([0.5, 5 / 6, 7 / 6, 1.5])

    def test_pure_rule(self):
        spec = du.SweepSpec(axes=(du.Axis("s_x", -0.6, 0.6, 3), du.Axis("overlap_c", 0.1, 0.5, 2)),
                            fixed={"s_y": 0.3, "beta": 1.0})
        for r in du.sweep(spec):
            assert r.s_x ** 2 + r.s_y ** 2 + r.s_z ** 2 == pytest.approx(1.0)

    def test_degenerate_rows_do_not_abort(self):
        rows = du.sweep(du.FIGURE_PRESETS["fig2"])
        bad = [r for r in rows if r.status == du.STATUS_DEGENERATE]
        assert {(r.s_x, r.beta) for r in bad} == {(-1.0, 0.0), (1.0, PI)}
        assert all(math.isnan(r.visibility) for r in bad)

    def test_threads_do_not_change_output(self):
        spec = du.FIGURE_PRESETS["fig6"]
        a = [r.as_dict() for r in du.sweep(spec, threads=1)]
        b = [r.as_dict() for r in du.sweep(spec, threads=4)]
        assert a == b

    def test_env_var_threads(self, monkeypatch):
        monkeypatch.setenv("DUALITY_LAB_THREADS", "3")
        assert du._thread_count() == 3
        monkeypatch.setenv("DUALITY_LAB_THREADS", "lots")
        assert du._thread_count() == 1

    @pytest.mark.parametrize("axes, fixed, pure", [
        ((du.Axis("s_y", 0, 1, 3), du.Axis("beta", 0, 1, 3)), {}, True),
        ((du.Axis("s_x", 0, 1, 1), du.Axis("beta", 0, 1, 3)), {}, True),
        ((du.Axis("s_x", 0, 2, 3), du.Axis("beta", 0, 1, 3)), {}, True),
        ((du.Axis("overlap_c", 0, 1, 3), du.Axis("beta", 0, 1, 3)), {}, True),
        ((du.Axis("s_x", 0, 1, 3), du.Axis("s_x", 0, 1, 3)), {}, True),
        ((du.Axis("s_x", 0, 1, 3), du.Axis("beta", 0, 1, 3)), {"s_z": 0.5}, False),
        ((du.Axis("s_x", 0, 1, 3), du.Axis("beta", 0, 1, 3)), {"bogus": 1}, True),
    ])
    def test_invalid_specs(self, axes, fixed, pure):
        with pytest.raises(DomainError):
            du.sweep(du.SweepSpec(axes=axes, fixed=fixed, pure=pure))

    def test_fig4_bounded(self):
        rows = [r for r in du.sweep(du.FIGURE_PRESETS["fig4"]) if r.status == du.STATUS_OK]
        best = max(r.i_path for r in rows)
        assert best == pytest.approx(2 / 3, abs=1e-4)
        assert best <= 2 / 3 + 1e-12

    def test_fig4_populates_all_regimes(self):
        rows = [r for r in du.sweep(du.FIGURE_PRESETS["fig4"]) if r.status == du.STATUS_OK]
        assert {r.regime.case for r in rows} == {1, 2, 3}


class TestVerifyBound:
    def test_no_violations(self):
        s = du.verify_bound(5000, seed=3)
        assert s.ok
        assert s.max_duality_sum <= 1 + 1e-9
        assert all(v > 0 for v in s.regime_counts.values())

    def test_deterministic(self):
        assert du.verify_bound(500, seed=9).as_dict() == du.verify_bound(500, seed=9).as_dict()

    def test_ridge(self):
        s = du.verify_bound(2000, seed=4, ridge=True)
        assert s.min_duality_sum >= 1 - 1e-9
        assert s.ok

    def test_reports_violations(self, monkeypatch):
        monkeypatch.setattr(du, "i_path_closed", lambda *a: 1.0)
        s = du.verify_bound(50, seed=1)
        assert not s.ok
        assert s.worst_config is not None

    def test_rejects_zero_samples(self):
        with pytest.raises(DomainError):
            du.verify_bound(0)

    def test_ball_sampling_inside(self):
        rows = du.draw_configs(2000, 5)
        assert np.all(np.sum(rows[:, :3] ** 2, axis=1) <= 1 + 1e-12)
        assert np.all((rows[:, 3] >= 0) & (rows[:, 3] <= PI))
        assert np.all((rows[:, 4] >= 0) & (rows[:, 4] <= 0.99))
