"""Fringe visibility and error-free which-path information in an asymmetric Mach-Zehnder interferometer."""

__version__ = "0.1.0"

from .discrimination import (
    JointDistribution,
    OverlapPair,
    Povm,
    Regime,
    RegimeTag,
    build_povm,
    classify_regime,
    failure_probability,
    i_path_closed,
    joint_distribution_closed,
    joint_distribution_numeric,
    overlap_pair,
    which_path_information,
)
from .duality import FIGURE_PRESETS, Axis, DualityReport, SweepSpec, report, sweep, verify_bound
from .errors import (
    DegenerateConfigurationError,
    DomainError,
    DualityLabError,
    IndistinguishableStatesError,
    InvariantViolationError,
)
from .interferometer import (
    ApparatusConfig,
    BeamSplitter,
    BlochVector,
    DetectorModel,
    Priors,
    evolve_full,
    fringe_profile,
    output_probability,
    postselected_state,
    priors,
    visibility_closed,
    visibility_scan,
)
