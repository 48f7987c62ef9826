"""Dynamics, geometric phases and hopping diagnostics for periodically driven
non-Hermitian two-level systems.

The core pipeline: propagate (fixed-step RK4 on the linear system) ->
floquet_operator / cyclic_states (one-period propagator and its eigenpairs) ->
aa_phase (gauge-invariant cyclic geometric phase) -> eigen_track / detect_hops
(instantaneous eigenpaths and following switches).  Exact companions live in
models (closed-form cyclic states and phases) and asymptotics (series Bessel
evaluation, wedge exponents, takeover-ratio asymptotics, the critical ratio).
"""

from __future__ import annotations

from .adiabatic import (
    EigenPath,
    HopEvent,
    ProjectionSeries,
    component_ratio,
    detect_hops,
    eigen_track,
    project,
    ratio_series,
)
from .asymptotics import (
    CriticalSolve,
    StokesPoint,
    Wedge,
    bessel_series,
    critical_ratio,
    hop_theta_estimate,
    hop_window_width,
    r_minus_asymptotic,
    r_plus_asymptotic,
    stokes_point,
    uniform_bessel,
    xi_exponent,
)
from .errors import (
    AccuracyWarning,
    BranchAmbiguity,
    DegenerateBasis,
    DegenerateMatrix,
    DegeneracyOnPath,
    DiscontinuousPath,
    DomainError,
    ExceptionalPoint,
    InconsistentDynamics,
    IntegerOrder,
    LiouvilleViolation,
    NHFloquetError,
    NoRootInBracket,
    NonConvergence,
    NotClosed,
    NotCyclic,
    OnStokesLine,
    PoleCrossing,
    SeriesDomain,
    StateOverflow,
    ZeroOverlap,
    ZeroState,
)
from .geophase import (
    BlochPoint,
    PhaseResult,
    aa_phase,
    aa_phase_energy_form,
    berry_phase,
    bloch_coords,
    solid_angle_phase,
)
from .models import (
    BUParams,
    Model1ClosedForm,
    Model1Params,
    Model2Params,
    bu_floquet_bessel,
    bu_instantaneous,
    complex_berry_comparison,
    h1,
    h1_aa_exact,
    h1_aa_slow_limit,
    h1_closed_form,
    h1_cyclic_exact,
    h2,
    hbu,
)
from .numerics import (
    DEFAULT_STEPS,
    CyclicState,
    StabilityClass,
    StabilityKind,
    Trajectory,
    classify_stability,
    cyclic_states,
    eig2,
    floquet_operator,
    propagate,
    track_root,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyWarning",
    "BUParams",
    "BlochPoint",
    "BranchAmbiguity",
    "CriticalSolve",
    "CyclicState",
    "DEFAULT_STEPS",
    "DegenerateBasis",
    "DegenerateMatrix",
    "DegeneracyOnPath",
    "DiscontinuousPath",
    "DomainError",
    "EigenPath",
    "ExceptionalPoint",
    "HopEvent",
    "InconsistentDynamics",
    "IntegerOrder",
    "LiouvilleViolation",
    "Model1ClosedForm",
    "Model1Params",
    "Model2Params",
    "NHFloquetError",
    "NoRootInBracket",
    "NonConvergence",
    "NotClosed",
    "NotCyclic",
    "OnStokesLine",
    "PhaseResult",
    "PoleCrossing",
    "ProjectionSeries",
    "SeriesDomain",
    "StabilityClass",
    "StabilityKind",
    "StateOverflow",
    "StokesPoint",
    "Trajectory",
    "Wedge",
    "ZeroOverlap",
    "ZeroState",
    "aa_phase",
    "aa_phase_energy_form",
    "berry_phase",
    "bessel_series",
    "bloch_coords",
    "bu_floquet_bessel",
    "bu_instantaneous",
    "classify_stability",
    "complex_berry_comparison",
    "component_ratio",
    "critical_ratio",
    "cyclic_states",
    "detect_hops",
    "eig2",
    "eigen_track",
    "floquet_operator",
    "h1",
    "h1_aa_exact",
    "h1_aa_slow_limit",
    "h1_closed_form",
    "h1_cyclic_exact",
    "h2",
    "hbu",
    "hop_theta_estimate",
    "hop_window_width",
    "project",
    "propagate",
    "r_minus_asymptotic",
    "r_plus_asymptotic",
    "ratio_series",
    "solid_angle_phase",
    "stokes_point",
    "track_root",
    "uniform_bessel",
    "xi_exponent",
]
