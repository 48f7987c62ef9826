"""Geometric phases of cyclic trajectories and closed eigenvector loops.

The cyclic geometric phase is evaluated on the gauge-invariant product
discretization: per-sample normalized states, total phase from the closing
overlap, dynamical part from the chain of nearest-neighbour overlaps.  The
discretization is exactly invariant under per-sample rephasing at any
resolution, which is the property that makes it trustworthy for non-unitary
evolution where norms drift by orders of magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .adiabatic import EigenPath
from .errors import (
    InconsistentDynamics,
    NotClosed,
    NotCyclic,
    ZeroOverlap,
    ZeroState,
)
from .numerics import CMat2, Trajectory

__all__ = [
    "PhaseResult",
    "BlochPoint",
    "aa_phase",
    "aa_phase_energy_form",
    "berry_phase",
    "bloch_coords",
    "solid_angle_phase",
]

_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class PhaseResult:
    """Cyclic-phase decomposition of one period of evolution.

    beta is the geometric part in [0, 2*pi).  alpha is the total cyclic phase
    (principal log of the return amplitude; its imaginary part is the norm
    growth rate times the period).  dynamical_integral is the accumulated
    dynamical phase in the convention of the producing function, and
    imag_residual is that function's internal consistency measure (see each
    docstring); small values certify the decomposition.
    """

    beta: float
    alpha: complex
    dynamical_integral: complex
    imag_residual: float


@dataclass(frozen=True)
class BlochPoint:
    """Polar/azimuthal coordinates of a state ray: theta in [0, pi], phi in [0, 2*pi)."""

    theta: float
    phi: float


def _norms(states: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(states, axis=1)
    if np.any(norms == 0.0):
        raise ZeroState("trajectory contains a zero state vector")
    return norms


def _closure(states: np.ndarray, closure_tol: float) -> complex:
    """Return amplitude c with psi(T) ~ c * psi(0), enforcing cyclicity."""
    first, last = states[0], states[-1]
    c = np.vdot(first, last) / np.vdot(first, first)
    residual = np.linalg.norm(last - c * first) / np.linalg.norm(last)
    if residual > closure_tol:
        raise NotCyclic(
            f"projective closure residual {residual:.3e} exceeds {closure_tol:g}"
        )
    return complex(c)


def aa_phase(
    traj: Trajectory,
    *,
    closure_tol: float = 1e-6,
    overlap_tol: float = 0.5,
) -> PhaseResult:
    """Cyclic geometric phase of a trajectory that returns to its initial ray.

    beta = arg<phi_0|phi_N> - sum_k arg<phi_k|phi_k+1> on per-sample
    normalized states phi, reduced to [0, 2*pi).  NotCyclic if the endpoint is
    not proportional to the start within closure_tol; ZeroOverlap if any
    normalized nearest-neighbour overlap falls below overlap_tol (the grid is
    then too coarse for the discretization to mean anything).

    dynamical_integral is the chained log of raw nearest-neighbour overlap
    ratios, a discretization of the integral of <psi|d psi/dt> / <psi|psi>.
    imag_residual is the modulus drift of the product of unit-modulus overlap
    phases; it is a pure floating-point check and sits at rounding level for
    any valid input.
    """
    states = traj.states
    norms = _norms(states)
    c = _closure(states, closure_tol)
    alpha = complex(-1j * np.log(c))

    phi = states / norms[:, None]
    w = np.sum(np.conj(phi[:-1]) * phi[1:], axis=1)
    aw = np.abs(w)
    if np.min(aw) < overlap_tol:
        raise ZeroOverlap(
            f"nearest-neighbour overlap {np.min(aw):.3f} below {overlap_tol:g}; refine the grid"
        )
    w_close = np.vdot(phi[0], phi[-1])

    beta = (np.angle(w_close) - np.sum(np.angle(w))) % _TWO_PI

    unit = w / aw
    unit_close = w_close / abs(w_close)
    imag_residual = abs(np.log(abs(np.prod(unit) * np.conj(unit_close))))

    raw = np.sum(np.conj(states[:-1]) * states[1:], axis=1)
    dynamical = complex(np.sum(np.log(raw / norms[:-1] ** 2)))

    return PhaseResult(
        beta=float(beta),
        alpha=alpha,
        dynamical_integral=dynamical,
        imag_residual=float(imag_residual),
    )


def _circle_gap(x: float, y: float) -> float:
    return abs((x - y + np.pi) % _TWO_PI - np.pi)


def aa_phase_energy_form(
    traj: Trajectory,
    H: Callable[[float], CMat2],
    *,
    closure_tol: float = 1e-6,
    form_tol: float = 1e-5,
) -> PhaseResult:
    """Cyclic geometric phase from the energy expectation route.

    beta = Re alpha + Re integral of <psi|H|psi> / <psi|psi> dt over one
    period (trapezoid on the trajectory grid), reduced to [0, 2*pi).  The
    result is checked against aa_phase on the same trajectory and
    InconsistentDynamics is raised when they disagree by more than
    100 * form_tol, which catches a trajectory that was not generated by H.

    dynamical_integral is the complex integral of <H>; imag_residual is
    |Im(alpha + integral)|, which vanishes up to quadrature error because the
    norm drift in alpha is exactly the accumulated anti-Hermitian part.
    """
    states = traj.states
    norms = _norms(states)
    c = _closure(states, closure_tol)
    alpha = complex(-1j * np.log(c))

    ts = traj.times
    expect = np.empty(ts.shape[0], dtype=complex)
    for k, t in enumerate(ts):
        s = states[k]
        expect[k] = np.vdot(s, np.asarray(H(float(t)), dtype=complex) @ s) / (
            norms[k] ** 2
        )
    dt = np.diff(ts)
    integral = complex(np.sum(0.5 * dt * (expect[:-1] + expect[1:])))

    beta = float((alpha.real + integral.real) % _TWO_PI)

    reference = aa_phase(traj, closure_tol=closure_tol)
    gap = _circle_gap(beta, reference.beta)
    if gap > 100.0 * form_tol:
        raise InconsistentDynamics(
            f"energy-form phase deviates from overlap-form phase by {gap:.3e}"
        )

    return PhaseResult(
        beta=beta,
        alpha=alpha,
        dynamical_integral=integral,
        imag_residual=float(abs((alpha + integral).imag)),
    )


def berry_phase(path: EigenPath, *, closure_tol: float = 1e-6) -> float:
    """Geometric phase of a closed eigenvector loop, in [0, 2*pi).

    Uses the same product discretization as aa_phase on the path's vectors.
    NotClosed if the loop fails to return to its initial ray within
    closure_tol (for instance when the underlying parameter loop encircles a
    degeneracy and the vectors come back on the other branch).
    """
    vectors = path.vectors
    norms = np.linalg.norm(vectors, axis=1)
    if np.any(norms == 0.0):
        raise ZeroState("eigenpath contains a zero vector")
    phi = vectors / norms[:, None]
    mismatch = 1.0 - abs(np.vdot(phi[0], phi[-1]))
    if mismatch > closure_tol:
        raise NotClosed(f"projective closure mismatch {mismatch:.3e} exceeds {closure_tol:g}")
    w = np.sum(np.conj(phi[:-1]) * phi[1:], axis=1)
    if np.min(np.abs(w)) == 0.0:
        raise ZeroOverlap("orthogonal neighbours on the eigenpath; refine the grid")
    beta = (np.angle(np.vdot(phi[0], phi[-1])) - np.sum(np.angle(w))) % _TWO_PI
    return float(beta)


def bloch_coords(state: np.ndarray) -> BlochPoint:
    """Polar angles of the ray of a two-component state.

    theta = 2 * atan2(|b|, |a|); phi = arg(b) - arg(a) in [0, 2*pi), set to 0
    at the poles where the azimuth is undefined.  ZeroState for the zero
    vector.  Norm and global phase (growth included) drop out, so this is the
    trajectory's shadow on the unit sphere.
    """
    s = np.asarray(state, dtype=complex).reshape(2)
    a, b = abs(s[0]), abs(s[1])
    if a == 0.0 and b == 0.0:
        raise ZeroState("zero state has no ray")
    theta = 2.0 * np.arctan2(b, a)
    phi = 0.0 if (a == 0.0 or b == 0.0) else float(np.angle(s[1] / s[0]) % _TWO_PI)
    return BlochPoint(theta=float(theta), phi=phi)


def solid_angle_phase(theta: float) -> float:
    """Half the solid angle of the polar cap above colatitude theta, i.e. pi*(1+cos theta).

    This is the geometric phase of a loop of latitude traversed once; exact
    cyclic states of the rotating-coupling model ride such loops, which turns
    this formula into their phase law.
    """
    if not 0.0 <= theta <= np.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta!r}")
    return float(np.pi * (1.0 + np.cos(theta)))
