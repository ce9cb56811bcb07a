"""Mach-Zehnder interferometer with a which-path detector in path a.

The particle enters through a symmetric first beam splitter, picks up a
relative phase ``phi`` (``phi_a = -phi_b = phi``), marks the detector with a
unitary ``U`` when it travels along path a, and leaves through a second beam
splitter of angle ``beta`` (reflection ``r = sin^2(beta/2)``, transmission
``t = cos^2(beta/2)``).

Matrices follow the ``(|b>, |a>)`` ordering documented in
:mod:`duality_lab.qmatrix`.
"""

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import qmatrix as qm
from .errors import DegenerateConfigurationError, DimensionError, DomainError
from .tolerances import TOL


@dataclass(frozen=True)
class BlochVector:
    s_x: float
    s_y: float = 0.0
    s_z: float = 0.0

    def __post_init__(self):
        for name in ("s_x", "s_y", "s_z"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if self.norm_squared > 1.0 + TOL.bloch_norm:
            raise DomainError(f"Bloch vector has norm {math.sqrt(self.norm_squared):.15g} > 1")

    @classmethod
    def pure_in_xz(cls, s_x):
        """Pure state with ``S_y = 0`` and ``S_z = sqrt(1 - S_x^2) >= 0``."""
        return cls(s_x, 0.0, math.sqrt(max(0.0, 1.0 - s_x * s_x)))

    @property
    def norm_squared(self):
        return self.s_x ** 2 + self.s_y ** 2 + self.s_z ** 2

    @property
    def transverse(self):
        """``sqrt(S_y^2 + S_z^2)``, the path coherence carried into the MZI."""
        return math.hypot(self.s_y, self.s_z)

    @property
    def is_pure(self):
        return abs(self.norm_squared - 1.0) <= TOL.bloch_norm


@dataclass(frozen=True)
class BeamSplitter:
    """Beam splitter of angle ``beta``.

    Angles outside ``[0, pi]`` are folded back using ``r(beta) = r(-beta)``
    and ``r(beta + 2 pi) = r(beta)``.
    """

    beta: float

    def __post_init__(self):
        b = float(self.beta)
        if not math.isfinite(b):
            raise DomainError("beta must be finite")
        if not 0.0 <= b <= math.pi:
            b = math.fmod(b, 2.0 * math.pi)
            b = abs(b)
            if b > math.pi:
                b = 2.0 * math.pi - b
        object.__setattr__(self, "beta", b)

    @property
    def r(self):
        return math.sin(self.beta / 2) ** 2

    @property
    def t(self):
        return math.cos(self.beta / 2) ** 2


@dataclass(frozen=True, eq=False)
class DetectorModel:
    """Detector initial state and the unitary applied when the particle takes path a.

    ``initial_state`` is either a ket ``|r>`` (pure detector) or a density
    matrix.  Mixed detectors are fine for visibility; state discrimination
    requires a pure one.
    """

    initial_state: np.ndarray
    mark_unitary: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        state = np.array(self.initial_state, dtype=complex)
        u = qm.cmatrix(self.mark_unitary)
        dim = u.shape[0]
        if dim < 2 or u.shape[1] != dim:
            raise DimensionError(f"mark unitary must be square with dim >= 2, got {u.shape}")
        if not qm.is_unitary(u):
            raise DomainError("mark_unitary is not unitary")
        if state.ndim == 1:
            if state.shape != (dim,):
                raise DimensionError(f"initial state has length {state.size}, expected {dim}")
            if abs(np.linalg.norm(state) - 1.0) > TOL.algebraic:
                raise DomainError("initial detector state is not normalized")
        elif state.ndim == 2:
            if state.shape != (dim, dim):
                raise DimensionError(f"initial density has shape {state.shape}, expected {(dim, dim)}")
            if not qm.is_hermitian(state) or abs(np.trace(state) - 1.0) > TOL.algebraic:
                raise DomainError("initial detector density must be Hermitian with unit trace")
            if not qm.is_psd(state):
                raise DomainError("initial detector density is not positive semidefinite")
        else:
            raise DimensionError("initial state must be a vector or a square matrix")
        object.__setattr__(self, "initial_state", state)
        object.__setattr__(self, "mark_unitary", u)
        object.__setattr__(self, "dim", dim)

    @classmethod
    def canonical(cls, overlap):
        """Two-level detector with ``|r> = (1, 0)`` and ``U|r> = (C, sqrt(1-C^2))``."""
        c = float(overlap)
        if not 0.0 <= c <= 1.0:
            raise DomainError(f"overlap must lie in [0, 1], got {c}")
        s = math.sqrt(1.0 - c * c)
        u = np.array([[c, -s], [s, c]], dtype=complex)
        return cls(np.array([1.0, 0.0], dtype=complex), u)

    @classmethod
    def from_json(cls, doc):
        """Build from ``{dim, r_state: [[re, im], ...], u_matrix: [[[re, im], ...], ...]}``."""
        try:
            dim = int(doc["dim"])
            r = np.array([complex(re, im) for re, im in doc["r_state"]])
            u = np.array([[complex(re, im) for re, im in row] for row in doc["u_matrix"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed detector document: {exc}") from exc
        if r.shape != (dim,) or u.shape != (dim, dim):
            raise DimensionError("detector document dimensions disagree with 'dim'")
        return cls(r, u)

    @cached_property
    def density(self):
        if self.initial_state.ndim == 1:
            return qm.ket_bra(self.initial_state)
        return self.initial_state

    @cached_property
    def is_pure(self):
        if self.initial_state.ndim == 1:
            return True
        purity = float(np.trace(self.density @ self.density).real)
        return abs(purity - 1.0) <= TOL.algebraic

    @cached_property
    def pure_state(self):
        """The ket ``|r>``; only defined for pure detectors."""
        if self.initial_state.ndim == 1:
            return self.initial_state
        if not self.is_pure:
            raise DomainError("detector state is mixed")
        rho = self.density
        j = int(np.argmax(np.diag(rho).real))
        return rho[:, j] / math.sqrt(rho[j, j].real)

    @cached_property
    def marked_trace(self):
        """``tr(U rho_in^D)``, complex."""
        return complex(np.trace(self.mark_unitary @ self.density))

    @property
    def overlap(self):
        """``C = |tr(U rho_in^D)|``."""
        return min(1.0, abs(self.marked_trace))


@dataclass(frozen=True)
class ApparatusConfig:
    bloch: BlochVector
    bs2: BeamSplitter
    detector: DetectorModel
    phase: float = 0.0


@dataclass(frozen=True)
class FringeProfile:
    """``p(phi) = mean_level + amplitude * cos(alpha_offset + gamma_offset + phi)``."""

    mean_level: float
    amplitude: float
    alpha_offset: float
    gamma_offset: float

    def __call__(self, phi):
        return self.mean_level + self.amplitude * np.cos(self.alpha_offset + self.gamma_offset + phi)


@dataclass(frozen=True)
class Priors:
    omega_a: float
    omega_b: float


def input_density(b):
    return 0.5 * (qm.I2 + b.s_x * qm.SIGMA_X + b.s_y * qm.SIGMA_Y + b.s_z * qm.SIGMA_Z)


def bs_unitary(beta):
    """``exp(-i beta/2 sigma_y)``, i.e. ``[[sqrt t, -sqrt r], [sqrt r, sqrt t]]``."""
    if not 0.0 <= beta <= math.pi:
        raise DomainError(f"beta must lie in [0, pi], got {beta}")
    c = math.cos(beta / 2)
    s = math.sin(beta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def phase_unitary(phi):
    """``exp(-i phi/2 sigma_z)``."""
    return np.diag([cmath.exp(-0.5j * phi), cmath.exp(0.5j * phi)])


def mark_operator(d):
    """Controlled mark ``|b><b| (x) I + |a><a| (x) U``."""
    return qm.kron(qm.PROJ_B, np.eye(d.dim)) + qm.kron(qm.PROJ_A, d.mark_unitary)


def _joint_input(cfg):
    return qm.kron(input_density(cfg.bloch), cfg.detector.density)


def _pre_bs2_propagators(cfg, phis):
    """Stack of ``M (U_P(phi) U_B(pi/2) (x) I)`` for each phase in ``phis``."""
    dim = cfg.detector.dim
    m = mark_operator(cfg.detector)
    bs1 = bs_unitary(math.pi / 2)
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    half = np.exp(0.5j * phis)
    up = np.zeros((phis.size, 2, 2), dtype=complex)
    up[:, 0, 0] = half.conj()
    up[:, 1, 1] = half
    single = up @ bs1
    eye = np.eye(dim)
    local = np.einsum("nij,kl->nikjl", single, eye).reshape(phis.size, 2 * dim, 2 * dim)
    return m @ local


def _evolve_batch(cfg, phis):
    dim = cfg.detector.dim
    g = np.kron(bs_unitary(cfg.bs2.beta), np.eye(dim)) @ _pre_bs2_propagators(cfg, phis)
    rho = _joint_input(cfg)
    return g @ rho @ np.conj(np.swapaxes(g, -1, -2))


def evolve_full(cfg):
    """Joint particle/detector state after the second beam splitter.

    Built as the explicit product ``U_B(beta) M U_P(phi) U_B(pi/2)`` acting
    on ``rho_in^Q (x) rho_in^D``.
    """
    return _evolve_batch(cfg, [cfg.phase])[0]


def _port_a_probabilities(states, dim):
    proj = np.kron(qm.PROJ_A, np.eye(dim))
    return np.einsum("ij,nji->n", proj, states).real


def output_probability(cfg):
    """Probability of finding the particle in output port a, ``tr[(1 - sigma_z)/2 rho_f]``."""
    return float(_port_a_probabilities(_evolve_batch(cfg, [cfg.phase]), cfg.detector.dim)[0])


def fringe_profile(cfg):
    b = cfg.bloch
    beta = cfg.bs2.beta
    tr_u = cfg.detector.marked_trace
    return FringeProfile(
        mean_level=0.5 * (1.0 + b.s_x * math.cos(beta)),
        amplitude=0.5 * b.transverse * math.sin(beta) * abs(tr_u),
        alpha_offset=math.atan2(b.s_y, b.s_z),
        gamma_offset=cmath.phase(tr_u) if tr_u != 0 else 0.0,
    )


def _normalizer(b, bs2):
    # 1 + S_x cos(beta) == 1 + S_x (t - r)
    norm = 1.0 + b.s_x * math.cos(bs2.beta)
    if norm <= TOL.degenerate_denominator:
        raise DegenerateConfigurationError(f"s_x={b.s_x:.17g}, beta={bs2.beta:.17g}")
    return norm


def visibility_closed(cfg):
    """``V = sin(beta) sqrt(S_y^2 + S_z^2) |tr(U rho)| / (1 + S_x cos(beta))``."""
    b = cfg.bloch
    norm = _normalizer(b, cfg.bs2)
    return math.sin(cfg.bs2.beta) * b.transverse * cfg.detector.overlap / norm


def _parabolic_peak(y_prev, y0, y_next):
    denom = y_prev - 2.0 * y0 + y_next
    if denom == 0.0:
        return y0
    offset = 0.5 * (y_prev - y_next) / denom
    return y0 - 0.25 * (y_prev - y_next) * offset


def visibility_scan(cfg, grid=720):
    """Fringe visibility from a brute-force phase scan of the full evolution.

    ``p(phi)`` is evaluated by matrix evolution at ``grid`` equally spaced
    phases in ``[0, 2 pi)``; each extremum is refined with a three-point
    parabola before forming ``(max - min) / (max + min)``.
    """
    if grid < 16:
        raise ValueError("grid must be at least 16")
    phis = np.arange(grid) * (2.0 * math.pi / grid)
    p = _port_a_probabilities(_evolve_batch(cfg, phis), cfg.detector.dim)
    i_max = int(np.argmax(p))
    i_min = int(np.argmin(p))
    p_max = _parabolic_peak(p[i_max - 1], p[i_max], p[(i_max + 1) % grid])
    p_min = _parabolic_peak(p[i_min - 1], p[i_min], p[(i_min + 1) % grid])
    total = p_max + p_min
    if total <= TOL.degenerate_denominator:
        raise DegenerateConfigurationError(f"s_x={cfg.bloch.s_x:.17g}, beta={cfg.bs2.beta:.17g}")
    return max(0.0, (p_max - p_min) / total)


def priors(b, bs2):
    """Probabilities that the particle leaves through output a (``omega_a``) or d (``omega_b``)."""
    norm = _normalizer(b, bs2)
    return Priors(
        omega_a=bs2.t * (1.0 + b.s_x) / norm,
        omega_b=bs2.r * (1.0 - b.s_x) / norm,
    )


def postselected_state(cfg):
    """Joint particle/detector state conditioned on the monitored outputs.

    The pre-BS2 state is filtered by the amplitudes ``sqrt(t)`` on path a and
    ``sqrt(r)`` on path b and renormalized; output d is relabelled as path b.
    """
    _normalizer(cfg.bloch, cfg.bs2)
    dim = cfg.detector.dim
    g = _pre_bs2_propagators(cfg, [cfg.phase])[0]
    pre = g @ _joint_input(cfg) @ qm.dagger(g)
    k = np.kron(np.diag([math.sqrt(cfg.bs2.r), math.sqrt(cfg.bs2.t)]), np.eye(dim))
    post = k @ pre @ qm.dagger(k)
    return post / np.trace(post).real
