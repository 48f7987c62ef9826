"""Core numerics for 2x2 non-Hermitian Schrodinger dynamics.

States are numpy arrays of shape (2,) and matrices of shape (2, 2), both
complex128.  Time evolution solves i d/dt psi = H(t) psi with a fixed-step
classical Runge-Kutta integrator; the norm of psi is physical and is never
rescaled during integration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import (
    BranchAmbiguity,
    DegenerateMatrix,
    LiouvilleViolation,
    StateOverflow,
)

__all__ = [
    "CVec2",
    "CMat2",
    "Trajectory",
    "CyclicState",
    "StabilityKind",
    "StabilityClass",
    "DEFAULT_STEPS",
    "OVERFLOW_CAP",
    "eig2",
    "propagate",
    "floquet_operator",
    "cyclic_states",
    "classify_stability",
    "track_root",
]

# Shape-(2,) and shape-(2, 2) complex128 arrays.
CVec2 = np.ndarray
CMat2 = np.ndarray

# Integration intervals per period used throughout unless a caller overrides.
DEFAULT_STEPS = 1 << 14

# Any state component above this magnitude aborts the integration.
OVERFLOW_CAP = 1e15

_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of i psi' = H(t) psi on a uniform grid over [0, T].

    times has steps + 1 entries and states has shape (steps + 1, 2); norms are
    not rescaled, so non-unitary growth or decay is visible in the samples.
    """

    times: np.ndarray
    states: np.ndarray
    period: float
    model: str = "custom"
    params: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.times.shape[0] != self.states.shape[0]:
            raise ValueError("times and states must have matching lengths")

    @property
    def steps(self) -> int:
        return self.times.shape[0] - 1


@dataclass(frozen=True)
class CyclicState:
    """Eigenvector u of the one-period propagator with U(T) u = exp(i alpha) u.

    alpha is complex; Im(alpha) != 0 means the state returns with a changed
    norm.  The residual records ||U u - exp(i alpha) u|| / ||u||.
    """

    u: np.ndarray
    alpha: complex
    label: str
    residual: float = 0.0

    @property
    def multiplier(self) -> complex:
        return complex(np.exp(1j * self.alpha))


class StabilityKind(Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    MARGINAL = "marginal"


@dataclass(frozen=True)
class StabilityClass:
    """Stability verdict for a one-period propagator plus both multiplier moduli."""

    kind: StabilityKind
    moduli: tuple[float, float]


def _as_cmat2(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M.view(float))):
        raise ValueError("matrix has non-finite entries")
    return M


def eig2(M: np.ndarray, tol: float = 1e-9) -> tuple[tuple[complex, np.ndarray], tuple[complex, np.ndarray]]:
    """Eigenpairs of a complex 2x2 matrix by the cancellation-safe closed form.

    The larger root of the characteristic polynomial is formed with a sign
    choice that avoids subtractive cancellation and the smaller one is
    recovered from the determinant.  Returns two (eigenvalue, unit
    eigenvector) pairs.  Raises DegenerateMatrix when the eigenvalues coincide
    within tol * ||M|| and M is not a multiple of the identity, since no
    eigenbasis exists there.
    """
    M = _as_cmat2(M)
    tr = M[0, 0] + M[1, 1]
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    scale = float(np.linalg.norm(M))

    sq = np.sqrt(tr * tr - 4.0 * det)
    # Re(conj(tr) * sq) >= 0 makes tr + sq the addition of aligned terms.
    if (tr.real * sq.real + tr.imag * sq.imag) < 0.0:
        sq = -sq
    lam1 = 0.5 * (tr + sq)
    lam2 = det / lam1 if lam1 != 0.0 else 0.5 * (tr - sq)

    if abs(lam1 - lam2) <= tol * max(scale, np.finfo(float).tiny):
        lam = 0.5 * (lam1 + lam2)
        if scale == 0.0 or np.linalg.norm(M - lam * np.eye(2)) <= tol * scale:
            e0 = np.array([1.0 + 0.0j, 0.0 + 0.0j])
            e1 = np.array([0.0 + 0.0j, 1.0 + 0.0j])
            return (complex(lam), e0), (complex(lam), e1)
        raise DegenerateMatrix(
            f"eigenvalues coincide within tol={tol:g} and the matrix is defective"
        )

    def vec(lam: complex) -> np.ndarray:
        r1 = np.array([M[0, 1], lam - M[0, 0]])
        r2 = np.array([lam - M[1, 1], M[1, 0]])
        v = r1 if np.linalg.norm(r1) >= np.linalg.norm(r2) else r2
        return v / np.linalg.norm(v)

    return (complex(lam1), vec(lam1)), (complex(lam2), vec(lam2))


_PRECISIONS = {"double": np.complex128, "extended": np.clongdouble}


def _resolve_precision(precision: str) -> type:
    try:
        return _PRECISIONS[precision]
    except KeyError:
        raise ValueError(f"precision must be one of {sorted(_PRECISIONS)}") from None


def _sample_half_grid(
    H: Callable[[float], np.ndarray], T: float, steps: int, dtype: type = np.complex128
) -> np.ndarray:
    """-i H(t) at the 2*steps + 1 points of the half-step grid.

    For the extended dtype the times are handed to H as long doubles, so a
    generator built from numpy scalar functions is evaluated at working
    precision rather than rounded at double.
    """
    real = np.longdouble if dtype is np.clongdouble else np.float64
    ts = np.linspace(real(0.0), real(T), 2 * steps + 1, dtype=real)
    A = np.empty((ts.size, 2, 2), dtype=dtype)
    for j, t in enumerate(ts):
        A[j] = H(t)
    if not np.all(np.isfinite(A)):
        raise ValueError("generator returned non-finite entries")
    return -1j * A


def _step_matrices(A: np.ndarray, dt: float) -> np.ndarray:
    """One-step transfer matrices of the classical fourth-order Runge-Kutta rule.

    For the linear system psi' = A(t) psi every stage is itself linear, so the
    whole step collapses to a matrix S_k with psi_{k+1} = S_k psi_k.
    """
    A0 = A[0:-2:2]
    Ah = A[1:-1:2]
    A1 = A[2::2]
    K1 = A0
    K2 = Ah + 0.5 * dt * np.einsum("nij,njk->nik", Ah, K1)
    K3 = Ah + 0.5 * dt * np.einsum("nij,njk->nik", Ah, K2)
    K4 = A1 + dt * np.einsum("nij,njk->nik", A1, K3)
    return np.eye(2) + (dt / 6.0) * (K1 + 2.0 * K2 + 2.0 * K3 + K4)


def _check_args(T: float, steps: int) -> None:
    if not T > 0.0:
        raise ValueError("period T must be positive")
    if steps < 16:
        raise ValueError("need at least 16 integration steps")


def propagate(
    H: Callable[[float], np.ndarray],
    psi0: np.ndarray,
    T: float,
    steps: int = DEFAULT_STEPS,
    *,
    overflow_cap: float = OVERFLOW_CAP,
    model: str = "custom",
    params: Mapping[str, object] | None = None,
    precision: str = "double",
) -> Trajectory:
    """Integrate i psi' = H(t) psi from t = 0 to t = T, storing every step.

    H maps a time to a 2x2 complex array.  The grid is uniform with `steps`
    intervals and the returned trajectory holds steps + 1 samples including
    both endpoints.  No renormalization is applied; StateOverflow is raised as
    soon as any component magnitude exceeds overflow_cap.

    precision selects the working arithmetic: "double" (complex128) or
    "extended" (clongdouble, 80-bit on x86).  Extended mode exists for stable
    loops whose transient growth exceeds what double can carry; it only helps
    on platforms where clongdouble is wider than double.
    """
    _check_args(T, steps)
    dtype = _resolve_precision(precision)
    psi = np.asarray(psi0, dtype=dtype).reshape(2).copy()
    if not np.all(np.isfinite(psi)):
        raise ValueError("initial state has non-finite entries")

    dt = np.longdouble(T) / steps if dtype is np.clongdouble else T / steps
    S = _step_matrices(_sample_half_grid(H, T, steps, dtype), dt)

    states = np.empty((steps + 1, 2), dtype=dtype)
    states[0] = psi
    for k in range(steps):
        psi = S[k] @ psi
        m = max(abs(psi[0].real), abs(psi[0].imag), abs(psi[1].real), abs(psi[1].imag))
        if not m < overflow_cap:
            raise StateOverflow(
                f"component magnitude {m:.3e} exceeded cap {overflow_cap:.3e} at step {k + 1}"
            )
        states[k + 1] = psi

    return Trajectory(
        times=np.linspace(0.0, T, steps + 1),
        states=states,
        period=T,
        model=model,
        params=dict(params or {}),
    )


def _ordered_product(S: np.ndarray) -> np.ndarray:
    """Product S[n-1] @ ... @ S[0] via pairwise reduction."""
    M = S
    while M.shape[0] > 1:
        n2 = M.shape[0] // 2
        paired = np.einsum("nij,njk->nik", M[1 : 2 * n2 : 2], M[0 : 2 * n2 : 2])
        if M.shape[0] % 2:
            M = np.concatenate([paired, M[2 * n2 :]], axis=0)
        else:
            M = paired
    return M[0]


def floquet_operator(
    H: Callable[[float], np.ndarray],
    T: float,
    steps: int = DEFAULT_STEPS,
    *,
    liouville_tol: float = 1e-6,
    overflow_cap: float = OVERFLOW_CAP,
    precision: str = "double",
) -> np.ndarray:
    """One-period propagator U(T) with U(0) = identity.

    Both canonical basis columns are advanced by the same fixed-step scheme as
    `propagate`.  As a built-in self check, det U(T) is compared against
    exp(-i * integral of tr H) evaluated by Simpson quadrature on the
    half-step grid; a mismatch beyond liouville_tol raises LiouvilleViolation
    because it means the result cannot be trusted.  That failure mode is real:
    a loop whose envelope dips by a factor delta within the period loses about
    delta**2 in relative accuracy when the one-period product is formed, no
    matter how the partial products are ordered, so U(T) is simply not
    representable in fixed precision once delta**2 reaches 1/eps.  Cyclic
    states of such loops must come from transient filtering on the state
    level, not from U(T).
    """
    _check_args(T, steps)
    dtype = _resolve_precision(precision)
    dt = np.longdouble(T) / steps if dtype is np.clongdouble else T / steps
    A = _sample_half_grid(H, T, steps, dtype)
    U = _ordered_product(_step_matrices(A, dt))

    m = np.max(np.abs(U))
    if not m < overflow_cap:
        raise StateOverflow(f"propagator entry magnitude {m:.3e} exceeded cap {overflow_cap:.3e}")

    # tr H = i * tr A since A = -i H.
    tr_h = 1j * (A[:, 0, 0] + A[:, 1, 1])
    h2 = 0.5 * dt
    integral = (h2 / 3.0) * (tr_h[0] + tr_h[-1] + 4.0 * np.sum(tr_h[1:-1:2]) + 2.0 * np.sum(tr_h[2:-1:2]))
    expected = np.exp(-1j * integral)
    det = U[0, 0] * U[1, 1] - U[0, 1] * U[1, 0]
    if abs(det - expected) > liouville_tol * max(1.0, abs(expected)):
        raise LiouvilleViolation(
            f"|det U - exp(-i int tr H)| = {abs(det - expected):.3e} at {steps} steps"
        )
    return U


def cyclic_states(U: np.ndarray, tol: float = 1e-9) -> tuple[CyclicState, CyclicState]:
    """Cyclic states of a one-period propagator, labelled by their phases.

    Eigenvectors u of U satisfy U u = exp(i alpha) u with alpha = -i log of
    the multiplier on the principal branch.  The '+' label goes to the larger
    Re(alpha); ties fall back to the larger Im(alpha).  Extended unitarity
    (both multipliers on the unit circle) shows up as real alpha.
    """
    (l1, v1), (l2, v2) = eig2(U, tol)
    if l1 == 0.0 or l2 == 0.0:
        raise ValueError("propagator is singular; cyclic phases are undefined")

    def make(lam: complex, v: np.ndarray, label: str) -> CyclicState:
        alpha = complex(-1j * np.log(lam))
        res = float(np.linalg.norm(U @ v - lam * v))
        return CyclicState(u=v, alpha=alpha, label=label, residual=res)

    a1 = -1j * np.log(l1)
    a2 = -1j * np.log(l2)
    first_is_plus = (a1.real, a1.imag) >= (a2.real, a2.imag)
    if first_is_plus:
        return make(l1, v1, "+"), make(l2, v2, "-")
    return make(l2, v2, "+"), make(l1, v1, "-")


def classify_stability(U: np.ndarray, tol: float = 1e-6) -> StabilityClass:
    """Classify a one-period propagator by its multiplier moduli.

    Stable means both moduli equal 1 within tol, unstable means at least one
    deviates by more than tol, and marginal is reserved for a defective U
    where the eigenbasis itself degenerates.
    """
    U = _as_cmat2(U)
    tr = U[0, 0] + U[1, 1]
    det = U[0, 0] * U[1, 1] - U[0, 1] * U[1, 0]
    sq = np.sqrt(tr * tr - 4.0 * det)
    if (tr.real * sq.real + tr.imag * sq.imag) < 0.0:
        sq = -sq
    l1 = 0.5 * (tr + sq)
    l2 = det / l1 if l1 != 0.0 else 0.5 * (tr - sq)
    moduli = (float(abs(l1)), float(abs(l2)))

    try:
        eig2(U)
    except DegenerateMatrix:
        return StabilityClass(kind=StabilityKind.MARGINAL, moduli=moduli)

    if max(abs(moduli[0] - 1.0), abs(moduli[1] - 1.0)) <= tol:
        kind = StabilityKind.STABLE
    else:
        kind = StabilityKind.UNSTABLE
    return StabilityClass(kind=kind, moduli=moduli)


def track_root(values: Sequence[complex] | np.ndarray, k: int) -> np.ndarray:
    """Branch-continuous k-th root along a sampled path of nonzero complex values.

    The first sample uses the principal root; afterwards the argument is
    accumulated step by step, so the returned branch follows the path even
    when it crosses the principal cut.  k must be 2 or 4.  BranchAmbiguity is
    raised when the path touches zero or a single step winds by pi/k or more,
    since the continuation is then undecidable at this sampling density.
    """
    if k not in (2, 4):
        raise ValueError("root order k must be 2 or 4")
    v = np.asarray(values, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("values must be a non-empty 1-d sequence")
    if np.any(v == 0) or not np.all(np.isfinite(v.view(float))):
        raise BranchAmbiguity("path touches zero; no continuous root exists")

    jumps = np.angle(v[1:] / v[:-1])
    worst = float(np.max(np.abs(jumps))) if jumps.size else 0.0
    if worst >= np.pi / k:
        raise BranchAmbiguity(
            f"phase jump {worst:.3f} rad per step reaches pi/{k}; refine the path sampling"
        )
    args = np.concatenate(([np.angle(v[0])], np.angle(v[0]) + np.cumsum(jumps)))
    return np.abs(v) ** (1.0 / k) * np.exp(1j * args / k)
