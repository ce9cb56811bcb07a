"""Error-free (unambiguous) discrimination of the two detector states.

The detector ends up in ``|r>`` when the particle took path b (prior
``omega_b``) and in ``|s> = U|r>`` when it took path a (prior ``omega_a``).
An unambiguous POVM ``{Pi_a, Pi_b, Pi_0}`` never confuses the two: ``Pi_a``
annihilates ``|r>`` and ``Pi_b`` annihilates ``|s>``, at the price of an
inconclusive outcome ``Pi_0``.  Which optimal POVM applies depends on where
``sqrt(omega_a / omega_b)`` falls relative to ``C`` and ``1/C``:

==========  ==========================  ===================================
case        ratio                       optimal measurement
==========  ==========================  ===================================
1           ratio < C                   project out ``|s>`` (Pi_a = 0)
2           C <= ratio <= 1/C           general three-outcome POVM
3           ratio > 1/C                 project out ``|r>`` (Pi_b = 0)
==========  ==========================  ===================================

The POVM weights called ``w_a`` and ``w_b`` here multiply ``|r_perp><r_perp|``
and ``|s_perp><s_perp|`` respectively.

Which-path information is reported in bits.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import qmatrix as qm
from .errors import DimensionError, DomainError, IndistinguishableStatesError
from .interferometer import DetectorModel, _normalizer, priors as _priors
from .tolerances import TOL

PATHS = ("a", "b")
OUTCOMES = ("a", "b", "0")


class RegimeTag(enum.IntEnum):
    PROJECT_OUT_S = 1
    GENERAL_POVM = 2
    PROJECT_OUT_R = 3


@dataclass(frozen=True)
class Regime:
    tag: RegimeTag
    ratio: float

    @property
    def case(self):
        return int(self.tag)


@dataclass(frozen=True, eq=False)
class OverlapPair:
    r_state: np.ndarray
    s_state: np.ndarray
    overlap_c: float

    @property
    def s_complement(self):
        return math.sqrt(1.0 - self.overlap_c ** 2)

    # (s - C r)/S and (r - C s)/S, but normalized by the computed norm:
    # dividing by S loses unit length to cancellation near C = 1

    @property
    def r_perp(self):
        """Unit vector in span{r, s} orthogonal to ``|r>``."""
        v = self.s_state - np.vdot(self.r_state, self.s_state) * self.r_state
        return v / np.linalg.norm(v)

    @property
    def s_perp(self):
        """Unit vector in span{r, s} orthogonal to ``|s>``."""
        v = self.r_state - np.vdot(self.s_state, self.r_state) * self.s_state
        return v / np.linalg.norm(v)

    @property
    def dim(self):
        return self.r_state.shape[0]


@dataclass(frozen=True, eq=False)
class Povm:
    pi_a: np.ndarray
    pi_b: np.ndarray
    pi_0: np.ndarray
    regime: Regime
    w_a: float
    w_b: float

    def element(self, outcome):
        return {"a": self.pi_a, "b": self.pi_b, "0": self.pi_0}[outcome]


@dataclass(frozen=True)
class JointDistribution:
    """Joint probabilities ``q[(path, outcome)]`` with path in a, b and outcome in a, b, 0."""

    q: dict

    def __getitem__(self, key):
        return self.q[key]

    @property
    def total(self):
        return sum(self.q.values())

    def path_marginal(self, path):
        return sum(self.q[(path, k)] for k in OUTCOMES)

    def outcome_marginal(self, outcome):
        return sum(self.q[(mu, outcome)] for mu in PATHS)

    def as_array(self):
        """Rows a, b; columns a, b, 0."""
        return np.array([[self.q[(mu, k)] for k in OUTCOMES] for mu in PATHS])


@dataclass(frozen=True)
class FailureReport:
    failure_prob: float
    fidelity_bound: float


def _clamped(value):
    if -TOL.clamp <= value < 0.0:
        return 0.0
    return value


def _distribution(entries):
    return JointDistribution({key: _clamped(float(v)) for key, v in entries.items()})


def overlap_pair(d: DetectorModel) -> OverlapPair:
    """Detector hypotheses ``|r>`` and ``|s> = U|r>`` with a real overlap.

    The phase of ``<r|U|r>`` is absorbed into ``|s>`` so that the stored
    overlap is ``C = |<r|U|r>|``.
    """
    if not d.is_pure:
        raise DomainError("state discrimination needs a pure detector state")
    r = d.pure_state / np.linalg.norm(d.pure_state)
    s = d.mark_unitary @ r
    inner = complex(np.vdot(r, s))
    c = abs(inner)
    if c >= 1.0 - TOL.indistinguishable:
        raise IndistinguishableStatesError(f"detector states are indistinguishable (C={c:.17g})")
    if c > 0.0:
        s = s * (inner.conjugate() / c)
    return OverlapPair(r_state=r, s_state=s, overlap_c=c)


def classify_regime(p, c) -> Regime:
    if p.omega_b == 0.0:
        ratio = math.inf
    else:
        ratio = math.sqrt(p.omega_a / p.omega_b)
    if ratio < c:
        tag = RegimeTag.PROJECT_OUT_S
    elif c > 0.0 and ratio > 1.0 / c:
        tag = RegimeTag.PROJECT_OUT_R
    else:
        tag = RegimeTag.GENERAL_POVM
    return Regime(tag, ratio)


def _general_weights(c, ratio):
    """Case-2 weights ``(w_a, w_b)``; ``c/ratio`` and ``c*ratio`` are taken as 0 when ``c`` is 0."""
    s2 = 1.0 - c * c
    if c == 0.0:
        return 1.0, 1.0
    return (1.0 - c / ratio) / s2, (1.0 - c * ratio) / s2


def build_povm(pair: OverlapPair, p) -> Povm:
    c = pair.overlap_c
    regime = classify_regime(p, c)
    eye = np.eye(pair.dim, dtype=complex)
    proj_r = qm.ket_bra(pair.r_state)
    proj_s = qm.ket_bra(pair.s_state)
    proj_r_perp = qm.ket_bra(pair.r_perp)
    proj_s_perp = qm.ket_bra(pair.s_perp)
    # projector onto the complement of span{r, s}; zero for a qubit detector
    outside = eye - proj_r - proj_r_perp
    zero = np.zeros_like(eye)

    if regime.tag is RegimeTag.PROJECT_OUT_S:
        w_a, w_b = 0.0, 1.0
        pi_a, pi_b, pi_0 = zero, proj_s_perp, proj_s + outside
    elif regime.tag is RegimeTag.PROJECT_OUT_R:
        w_a, w_b = 1.0, 0.0
        pi_a, pi_b, pi_0 = proj_r_perp, zero, proj_r + outside
    else:
        w_a, w_b = _general_weights(c, regime.ratio)
        pi_a = w_a * proj_r_perp
        pi_b = w_b * proj_s_perp
        pi_0 = eye - pi_a - pi_b
    return Povm(pi_a=pi_a, pi_b=pi_b, pi_0=pi_0, regime=regime, w_a=w_a, w_b=w_b)


def failure_probability(povm: Povm, pair: OverlapPair, p) -> FailureReport:
    """Inconclusive-outcome probability and its lower bound ``2 sqrt(omega_a omega_b) C``."""
    fail_b = np.vdot(pair.r_state, povm.pi_0 @ pair.r_state).real
    fail_a = np.vdot(pair.s_state, povm.pi_0 @ pair.s_state).real
    return FailureReport(
        failure_prob=float(p.omega_b * fail_b + p.omega_a * fail_a),
        fidelity_bound=2.0 * math.sqrt(p.omega_a * p.omega_b) * pair.overlap_c,
    )


def failure_closed(p, c):
    """Minimum failure probability of the regime selected by ``(p, c)``."""
    regime = classify_regime(p, c)
    if regime.tag is RegimeTag.PROJECT_OUT_S:
        return p.omega_a + c * c * p.omega_b
    if regime.tag is RegimeTag.PROJECT_OUT_R:
        return p.omega_b + c * c * p.omega_a
    return 2.0 * c * math.sqrt(p.omega_a * p.omega_b)


def joint_distribution_numeric(state, povm: Povm) -> JointDistribution:
    """``Q(mu, k) = tr_D <mu| Pi_k rho |mu>`` from a joint particle (x) detector state."""
    state = np.asarray(state, dtype=complex)
    dim = povm.pi_0.shape[0]
    if state.shape != (2 * dim, 2 * dim):
        raise DimensionError(f"state of shape {state.shape} does not match detector dim {dim}")
    blocks = {
        "b": state[qm.IDX_B * dim:(qm.IDX_B + 1) * dim, qm.IDX_B * dim:(qm.IDX_B + 1) * dim],
        "a": state[qm.IDX_A * dim:(qm.IDX_A + 1) * dim, qm.IDX_A * dim:(qm.IDX_A + 1) * dim],
    }
    return _distribution({
        (mu, k): np.trace(povm.element(k) @ blocks[mu]).real
        for mu in PATHS for k in OUTCOMES
    })


def _trig_terms(s_x, beta):
    """``cos^2(beta/2)(1+S_x)/(1+S_x cos beta)`` and its path-b counterpart."""
    norm = 1.0 + s_x * math.cos(beta)
    return (math.cos(beta / 2) ** 2 * (1.0 + s_x) / norm,
            math.sin(beta / 2) ** 2 * (1.0 - s_x) / norm)


def closed_form_joint(case, s_x, beta, c) -> JointDistribution:
    """Closed-form joint distribution of a given case, regardless of which case is optimal.

    Exposed separately so the regime boundaries can be probed from both sides.
    """
    to_a, to_b = _trig_terms(s_x, beta)
    q = {(mu, k): 0.0 for mu in PATHS for k in OUTCOMES}
    case = int(case)
    if case == 1:
        q["b", "b"] = (1.0 - c * c) * to_b
        q["a", "0"] = to_a
        q["b", "0"] = c * c * to_b
    elif case == 3:
        q["a", "a"] = (1.0 - c * c) * to_a
        q["a", "0"] = c * c * to_a
        q["b", "0"] = to_b
    elif case == 2:
        if c == 0.0:
            tan_part = cot_part = 0.0
        else:
            tan_part = c * math.tan(beta / 2) * math.sqrt((1.0 - s_x) / (1.0 + s_x))
            cot_part = c / math.tan(beta / 2) * math.sqrt((1.0 + s_x) / (1.0 - s_x))
        q["a", "a"] = to_a * (1.0 - tan_part)
        q["b", "b"] = to_b * (1.0 - cot_part)
        q["a", "0"] = to_a * tan_part
        q["b", "0"] = to_b * cot_part
    else:
        raise ValueError(f"case must be 1, 2 or 3, got {case!r}")
    return _distribution(q)


def _check_overlap(c):
    if not 0.0 <= c <= 1.0:
        raise DomainError(f"overlap must lie in [0, 1], got {c}")


def joint_distribution_closed(b, bs2, c) -> JointDistribution:
    _check_overlap(c)
    regime = classify_regime(_priors(b, bs2), c)
    return closed_form_joint(regime.case, b.s_x, bs2.beta, c)


def _xlog(weight, inv_prob):
    """``weight * log2(inv_prob)`` with ``0 * log(...) = 0``."""
    if weight == 0.0:
        return 0.0
    return weight * math.log2(inv_prob)


def which_path_information(q: JointDistribution) -> float:
    """Mutual information (bits) between path and conclusive outcome.

    The path marginal runs over all three outcomes; the double sum only over
    the conclusive ones.
    """
    info = 0.0
    for mu in PATHS:
        q_mu = q.path_marginal(mu)
        for k in ("a", "b"):
            q_mk = q[(mu, k)]
            if q_mk <= 0.0:
                continue
            info += q_mk * math.log2(q_mk / (q_mu * q.outcome_marginal(k)))
    return info


def i_path_closed(b, bs2, c) -> float:
    """Which-path information in bits from the piecewise closed forms."""
    _check_overlap(c)
    if c >= 1.0 - TOL.indistinguishable:
        return 0.0
    norm = _normalizer(b, bs2)
    s_x, beta = b.s_x, bs2.beta
    to_a_num = math.cos(beta / 2) ** 2 * (1.0 + s_x)
    to_b_num = math.sin(beta / 2) ** 2 * (1.0 - s_x)
    to_a, to_b = to_a_num / norm, to_b_num / norm
    case = classify_regime(_priors(b, bs2), c).case
    if case == 1:
        return _xlog((1.0 - c * c) * to_b, norm / to_b_num) if to_b_num else 0.0
    if case == 3:
        return _xlog((1.0 - c * c) * to_a, norm / to_a_num) if to_a_num else 0.0
    q = closed_form_joint(2, s_x, beta, c)
    info = 0.0
    if to_a_num:
        info += _xlog(q["a", "a"], norm / to_a_num)
    if to_b_num:
        info += _xlog(q["b", "b"], norm / to_b_num)
    return info
