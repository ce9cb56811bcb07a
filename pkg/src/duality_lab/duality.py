"""Visibility + which-path information reports, parameter sweeps, bound checks."""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .discrimination import Regime, classify_regime, failure_closed, i_path_closed
from .errors import DegenerateConfigurationError, DomainError, InvariantViolationError
from .interferometer import (
    ApparatusConfig,
    BeamSplitter,
    BlochVector,
    DetectorModel,
    Priors,
    priors,
    visibility_closed,
)
from .tolerances import TOL

STATUS_OK = "ok"
STATUS_DEGENERATE = "degenerate"

CSV_COLUMNS = (
    "s_x", "s_y", "s_z", "beta", "overlap_c", "regime", "omega_a", "omega_b",
    "visibility", "i_path", "duality_sum", "failure_prob", "status",
)

AXIS_NAMES = ("s_x", "beta", "overlap_c")


@dataclass(frozen=True)
class DualityReport:
    s_x: float
    s_y: float
    s_z: float
    beta: float
    overlap_c: float
    visibility: float
    i_path: float
    duality_sum: float
    regime: Regime | None
    priors: Priors | None
    failure_prob: float
    status: str = STATUS_OK

    def violations(self):
        """Names of the complementarity invariants this report breaks."""
        if self.status != STATUS_OK:
            return []
        out = []
        if self.duality_sum > 1.0 + TOL.bound:
            out.append("duality_sum <= 1")
        if self.visibility > self.overlap_c + TOL.algebraic:
            out.append("visibility <= C")
        if self.i_path > 1.0 - self.overlap_c + TOL.bound:
            out.append("i_path <= 1 - C")
        return out

    def as_dict(self):
        return {
            "s_x": self.s_x,
            "s_y": self.s_y,
            "s_z": self.s_z,
            "beta": self.beta,
            "overlap_c": self.overlap_c,
            "regime": self.regime.case if self.regime else None,
            "ratio": self.regime.ratio if self.regime else None,
            "omega_a": self.priors.omega_a if self.priors else None,
            "omega_b": self.priors.omega_b if self.priors else None,
            "visibility": self.visibility,
            "i_path": self.i_path,
            "duality_sum": self.duality_sum,
            "failure_prob": self.failure_prob,
            "status": self.status,
        }


def _assemble(bloch, bs2, visibility, c, check):
    p = priors(bloch, bs2)
    i_path = i_path_closed(bloch, bs2, c)
    rep = DualityReport(
        s_x=bloch.s_x, s_y=bloch.s_y, s_z=bloch.s_z, beta=bs2.beta, overlap_c=c,
        visibility=visibility, i_path=i_path, duality_sum=visibility + i_path,
        regime=classify_regime(p, c), priors=p, failure_prob=failure_closed(p, c),
    )
    if check:
        bad = rep.violations()
        if bad:
            raise InvariantViolationError(f"invariant(s) violated: {', '.join(bad)} at {rep.as_dict()}")
    return rep


def report(cfg: ApparatusConfig, check=True) -> DualityReport:
    """Visibility, which-path information and their sum for one configuration.

    Raises :class:`DegenerateConfigurationError` when ``1 + S_x cos(beta)``
    vanishes and :class:`InvariantViolationError` (unless ``check`` is false)
    if a complementarity invariant fails.
    """
    if not cfg.detector.is_pure:
        raise DomainError("which-path information needs a pure detector state")
    return _assemble(cfg.bloch, cfg.bs2, visibility_closed(cfg), cfg.detector.overlap, check)


def report_from_params(s_x, s_y, s_z, beta, overlap_c, check=True) -> DualityReport:
    """Same as :func:`report` for the canonical two-level detector of overlap ``overlap_c``."""
    cfg = ApparatusConfig(BlochVector(s_x, s_y, s_z), BeamSplitter(beta),
                          DetectorModel.canonical(overlap_c))
    return report(cfg, check=check)


def _fast_report(s_x, s_y, s_z, beta, c, check):
    # skips the detector matrices; the canonical detector only contributes C
    bloch = BlochVector(s_x, s_y, s_z)
    bs2 = BeamSplitter(beta)
    norm = 1.0 + bloch.s_x * math.cos(bs2.beta)
    if norm <= TOL.degenerate_denominator:
        raise DegenerateConfigurationError(f"s_x={bloch.s_x:.17g}, beta={bs2.beta:.17g}")
    v = math.sin(bs2.beta) * bloch.transverse * c / norm
    return _assemble(bloch, bs2, v, c, check)


def degenerate_report(s_x, s_y, s_z, beta, overlap_c):
    nan = math.nan
    return DualityReport(s_x, s_y, s_z, beta, overlap_c, nan, nan, nan, None, None, nan,
                         status=STATUS_DEGENERATE)


# --------------------------------------------------------------------------- #
#                                   Sweeps                                    #
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    points: int

    def values(self):
        return np.linspace(self.start, self.stop, self.points)


_DOMAINS = {
    "s_x": (-1.0, 1.0, True),
    "beta": (0.0, math.pi, True),
    "overlap_c": (0.0, 1.0, False),
}


@dataclass(frozen=True)
class SweepSpec:
    """Two-axis grid over ``s_x``, ``beta`` and ``overlap_c``.

    Parameters not on an axis come from ``fixed`` (defaults: ``s_x = 0``,
    ``s_y = 0``, ``s_z = 0``, ``beta = pi/2``, ``overlap_c = 1/3``).  With
    ``pure`` set, ``s_z`` is recomputed at each point as
    ``sqrt(1 - s_x^2 - s_y^2)``.
    """

    axes: tuple
    fixed: dict = field(default_factory=dict)
    pure: bool = True

    def validate(self):
        if len(self.axes) != 2:
            raise DomainError("a sweep needs exactly two axes")
        names = [a.name for a in self.axes]
        if len(set(names)) != 2:
            raise DomainError(f"duplicate sweep axis {names[0]!r}")
        for ax in self.axes:
            if ax.name not in AXIS_NAMES:
                raise DomainError(f"unknown sweep axis {ax.name!r}; expected one of {', '.join(AXIS_NAMES)}")
            if ax.points < 2:
                raise DomainError(f"axis {ax.name} needs at least 2 points")
            lo, hi, closed = _DOMAINS[ax.name]
            for v in (ax.start, ax.stop):
                if not (lo <= v <= hi) or (not closed and v >= hi):
                    raise DomainError(f"axis {ax.name} value {v} outside its domain")
        for key in self.fixed:
            if key not in ("s_x", "s_y", "s_z", "beta", "overlap_c"):
                raise DomainError(f"unknown fixed parameter {key!r}")
        base = self._base()
        if not 0.0 <= base["overlap_c"] < 1.0:
            raise DomainError("overlap_c must lie in [0, 1)")
        if not 0.0 <= base["beta"] <= math.pi:
            raise DomainError("beta must lie in [0, pi]")
        if not self.pure:
            sx_max = max((abs(v) for ax in self.axes if ax.name == "s_x"
                          for v in (ax.start, ax.stop)), default=abs(base["s_x"]))
            if sx_max ** 2 + base["s_y"] ** 2 + base["s_z"] ** 2 > 1.0 + TOL.bloch_norm:
                raise DomainError("sweep leaves the Bloch ball")
        elif base["s_y"] ** 2 > 1.0:
            raise DomainError("|s_y| must not exceed 1")

    def _base(self):
        base = {"s_x": 0.0, "s_y": 0.0, "s_z": 0.0, "beta": math.pi / 2, "overlap_c": 1.0 / 3.0}
        base.update({k: float(v) for k, v in self.fixed.items()})
        return base

    def points(self):
        """Parameter dicts in row-major order (first axis outermost)."""
        base = self._base()
        first, second = self.axes
        out = []
        for u in first.values():
            for v in second.values():
                pt = dict(base)
                pt[first.name] = float(u)
                pt[second.name] = float(v)
                if self.pure:
                    pt["s_z"] = math.sqrt(max(0.0, 1.0 - pt["s_x"] ** 2 - pt["s_y"] ** 2))
                else:
                    # keep grid endpoints like s_x = 1 inside the ball despite rounding
                    pt["s_x"] = min(1.0, max(-1.0, pt["s_x"]))
                out.append(pt)
        return out

    @property
    def shape(self):
        return tuple(a.points for a in self.axes)


def _evaluate_point(pt):
    args = (pt["s_x"], pt["s_y"], pt["s_z"], pt["beta"], pt["overlap_c"])
    try:
        return _fast_report(*args, check=False)
    except DegenerateConfigurationError:
        return degenerate_report(*args)


def _thread_count():
    raw = os.environ.get("DUALITY_LAB_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def sweep(spec: SweepSpec, threads=None):
    """Evaluate a :class:`SweepSpec`; degenerate points become rows with status ``degenerate``."""
    spec.validate()
    pts = spec.points()
    n = _thread_count() if threads is None else max(1, int(threads))
    if n == 1:
        return [_evaluate_point(pt) for pt in pts]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(_evaluate_point, pts, chunksize=256))


FIGURE_PRESETS = {
    # visibility surface over (S_x, beta), C = 1/3
    "fig2": SweepSpec(
        axes=(Axis("s_x", -1.0, 1.0, 201), Axis("beta", 0.0, math.pi, 181)),
        fixed={"overlap_c": 1.0 / 3.0, "s_y": 0.0},
    ),
    # which-path information over (S_x, beta), C = 1/3
    "fig4": SweepSpec(
        axes=(Axis("s_x", -1.0, 1.0, 201), Axis("beta", 0.0, math.pi, 181)),
        fixed={"overlap_c": 1.0 / 3.0, "s_y": 0.0},
    ),
    # which-path information over (C, beta) at S_x = 1/2
    "fig5": SweepSpec(
        axes=(Axis("overlap_c", 0.0, 0.95, 20), Axis("beta", 0.0, math.pi, 181)),
        fixed={"s_x": 0.5, "s_y": 0.0},
    ),
    # which-path information over (C, S_x) at beta = pi/3
    "fig6": SweepSpec(
        axes=(Axis("overlap_c", 0.0, 0.95, 20), Axis("s_x", -1.0, 1.0, 201)),
        fixed={"beta": math.pi / 3, "s_y": 0.0},
    ),
}


# --------------------------------------------------------------------------- #
#                             Bound verification                              #
# --------------------------------------------------------------------------- #

SAMPLING_NOTE = (
    "Bloch vector uniform in the unit ball; beta uniform on [0, pi]; "
    "overlap uniform on [0, 0.99]"
)
RIDGE_SAMPLING_NOTE = (
    "pure states with s_y = 0 and cos(beta) = -s_x; s_x uniform on (-1, 1); "
    "overlap uniform on [0, 0.99]"
)


@dataclass
class BoundSummary:
    samples: int
    seed: int
    sampling: str
    max_duality_sum: float = -math.inf
    min_duality_sum: float = math.inf
    max_violation: float = -math.inf
    max_visibility_excess: float = -math.inf
    max_i_path_excess: float = -math.inf
    violations: int = 0
    degenerate: int = 0
    regime_counts: dict = field(default_factory=lambda: {"1": 0, "2": 0, "3": 0})
    worst_config: dict | None = None

    @property
    def ok(self):
        return self.violations == 0

    def as_dict(self):
        return {
            "samples": self.samples,
            "seed": self.seed,
            "sampling": self.sampling,
            "max_duality_sum": self.max_duality_sum,
            "min_duality_sum": self.min_duality_sum,
            "max_violation": self.max_violation,
            "max_visibility_excess": self.max_visibility_excess,
            "max_i_path_excess": self.max_i_path_excess,
            "violations": self.violations,
            "degenerate": self.degenerate,
            "regime_counts": dict(self.regime_counts),
            "worst_config": self.worst_config,
            "ok": self.ok,
        }


def _sample_ball(rng, n):
    direction = rng.normal(size=(n, 3))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    radius = rng.uniform(0.0, 1.0, size=n) ** (1.0 / 3.0)
    return direction * radius[:, None]


def draw_configs(samples, seed, ridge=False):
    """Random ``(s_x, s_y, s_z, beta, overlap_c)`` rows, deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    if ridge:
        s_x = rng.uniform(-1.0, 1.0, size=samples)
        beta = np.arccos(-s_x)
        s_z = np.sqrt(1.0 - s_x ** 2)
        bloch = np.column_stack([s_x, np.zeros(samples), s_z])
    else:
        bloch = _sample_ball(rng, samples)
        beta = rng.uniform(0.0, math.pi, size=samples)
    c = rng.uniform(0.0, 0.99, size=samples)
    return np.column_stack([bloch, beta, c])


def verify_bound(samples, seed=0, ridge=False) -> BoundSummary:
    """Check ``V + I_path <= 1`` (and ``V <= C``, ``I_path <= 1 - C``) on random configurations.

    Violations are counted and the worst configuration recorded; nothing is raised.
    """
    if samples < 1:
        raise DomainError("samples must be >= 1")
    summary = BoundSummary(samples=int(samples), seed=int(seed),
                           sampling=RIDGE_SAMPLING_NOTE if ridge else SAMPLING_NOTE)
    for row in draw_configs(samples, seed, ridge=ridge):
        s_x, s_y, s_z, beta, c = (float(v) for v in row)
        try:
            rep = _fast_report(s_x, s_y, s_z, beta, c, check=False)
        except DegenerateConfigurationError:
            summary.degenerate += 1
            continue
        summary.regime_counts[str(rep.regime.case)] += 1
        summary.min_duality_sum = min(summary.min_duality_sum, rep.duality_sum)
        summary.max_visibility_excess = max(summary.max_visibility_excess, rep.visibility - c)
        summary.max_i_path_excess = max(summary.max_i_path_excess, rep.i_path - (1.0 - c))
        if rep.duality_sum > summary.max_duality_sum:
            summary.max_duality_sum = rep.duality_sum
            summary.max_violation = rep.duality_sum - 1.0
            summary.worst_config = rep.as_dict()
        if rep.violations():
            summary.violations += 1
    return summary
