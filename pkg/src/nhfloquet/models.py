"""Concrete periodically driven two-level Hamiltonians and their exact data.

Three families are provided.  The rotating-coupling model h1 is exactly
solvable: its cyclic states, quasi-energies and geometric phases come in
closed form.  The oscillating anti-Hermitian coupling model h2 is a stress
case with no closed-form solution.  The loop model hbu traces a circle in the
complex plane with purely off-diagonal structure; its cyclic states are Bessel
functions of large complex order and its instantaneous eigenvectors follow
from continued fractional powers of the loop variable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .adiabatic import EigenPath
from .asymptotics import bessel_series
from .errors import DegeneracyOnPath, DomainError, ExceptionalPoint
from .numerics import CMat2, CVec2, track_root

__all__ = [
    "Model1Params",
    "Model1ClosedForm",
    "Model2Params",
    "BUParams",
    "h1",
    "h1_closed_form",
    "h1_cyclic_exact",
    "h1_aa_exact",
    "h1_aa_slow_limit",
    "complex_berry_comparison",
    "h2",
    "hbu",
    "bu_instantaneous",
    "bu_floquet_bessel",
]

_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Model1Params:
    """Rotating transverse coupling with (possibly complex) level splitting.

    epsilon is the half-splitting, omega > 0 the drive frequency; one period
    is 2*pi/omega.
    """

    epsilon: complex
    omega: float = 1.0

    def __post_init__(self) -> None:
        if not self.omega > 0.0:
            raise ValueError("omega must be positive")

    @property
    def period(self) -> float:
        return _TWO_PI / self.omega


@dataclass(frozen=True)
class Model2Params:
    """Oscillating coupling mu*(cos(omega t) + i) on top of a unit splitting."""

    mu: float
    omega: float = 1.0

    def __post_init__(self) -> None:
        if self.mu < 0.0:
            raise ValueError("mu must be nonnegative")
        if not self.omega > 0.0:
            raise ValueError("omega must be positive")

    @property
    def period(self) -> float:
        return _TWO_PI / self.omega


@dataclass(frozen=True)
class BUParams:
    """Circular loop z(theta) = rho * exp(i theta) - r traversed over one period.

    rho is the loop radius, r the (real, nonzero) center offset and period the
    traversal time.  The loop avoids the origin iff rho < |r|.
    """

    rho: float
    r: float
    period: float

    def __post_init__(self) -> None:
        if self.rho < 0.0:
            raise ValueError("rho must be nonnegative")
        if self.r == 0.0:
            raise ValueError("r must be nonzero")
        if not self.period > 0.0:
            raise ValueError("period must be positive")

    @property
    def nu(self) -> float:
        """Large order (period / pi) * sqrt(r) of the cyclic-state Bessel functions."""
        if self.r <= 0.0:
            raise DomainError("nu is defined for positive r")
        return self.period * np.sqrt(self.r) / np.pi

    def x(self, theta: float | np.ndarray) -> complex | np.ndarray:
        """Scaled loop variable sqrt(rho / r) * exp(i theta / 2), continued in theta."""
        if self.r <= 0.0:
            raise DomainError("x is defined for positive r")
        return np.sqrt(self.rho / self.r) * np.exp(0.5j * np.asarray(theta, dtype=float))


def h1(params: Model1Params, t: float) -> CMat2:
    """Rotating-coupling Hamiltonian at time t.

    The dtype follows the dtype of t, so extended-precision propagation can
    sample the generator at working precision.
    """
    e = complex(params.epsilon)
    w = params.omega
    return np.array([[e, np.exp(-1j * w * t)], [np.exp(1j * w * t), -e]])


@dataclass(frozen=True)
class Model1ClosedForm:
    """Closed-form data of the rotating-coupling model.

    Omega is the rotating-frame Rabi rate sqrt(1 + (epsilon - omega/2)**2) on
    the principal branch.  theta_* are the constant polar angles of the two
    cyclic states, gamma_* their constant azimuth offsets; the azimuth evolves
    as phi(t) = omega * t - gamma.
    """

    omega: float
    Omega: complex
    theta_plus: float
    theta_minus: float
    gamma_plus: float
    gamma_minus: float

    def phi(self, branch: str, t: float | np.ndarray) -> float | np.ndarray:
        gamma = _pick(branch, self.gamma_plus, self.gamma_minus)
        return self.omega * np.asarray(t, dtype=float) - gamma


def _pick(branch: str, plus, minus):
    if branch == "+":
        return plus
    if branch == "-":
        return minus
    raise ValueError(f"branch must be '+' or '-', got {branch!r}")


def _h1_shifts(params: Model1Params, tol: float) -> tuple[complex, complex, complex]:
    """Rabi rate Omega and the two shifted detunings delta +/- Omega."""
    delta = complex(params.epsilon) - 0.5 * params.omega
    Omega = np.sqrt(1.0 + delta * delta + 0j)
    if abs(Omega) < tol:
        raise ExceptionalPoint(f"|Omega| = {abs(Omega):.3e}: cyclic states coalesce")
    return Omega, delta + Omega, delta - Omega


def h1_closed_form(params: Model1Params, tol: float = 1e-12) -> Model1ClosedForm:
    """Closed-form angles and rates of the rotating-coupling model.

    ExceptionalPoint is raised when the rotating-frame spectrum degenerates
    (epsilon - omega/2 = +/- i) and the two cyclic states coalesce.
    """
    Omega, a_plus, a_minus = _h1_shifts(params, tol)
    return Model1ClosedForm(
        omega=params.omega,
        Omega=complex(Omega),
        theta_plus=float(2.0 * np.arctan2(1.0, abs(a_plus))),
        theta_minus=float(2.0 * np.arctan2(1.0, abs(a_minus))),
        gamma_plus=float(np.angle(a_plus)),
        gamma_minus=float(np.angle(a_minus)),
    )


def h1_cyclic_exact(
    params: Model1Params,
    branch: str,
    t: float | np.ndarray,
    tol: float = 1e-12,
) -> CVec2:
    """Exact cyclic solution of the rotating-coupling model at time t.

    Returns the state (cos(theta/2), sin(theta/2) e^{i phi(t)}) carried by the
    branch-dependent exponential; theta is constant in time, which is what
    makes the polar-cap phase exact for this model.  For array t the result
    has shape (len(t), 2).
    """
    cf = h1_closed_form(params, tol)
    sign = +1.0 if branch == "+" else -1.0
    _pick(branch, None, None)
    theta = _pick(branch, cf.theta_plus, cf.theta_minus)
    gamma = _pick(branch, cf.gamma_plus, cf.gamma_minus)
    ts = np.asarray(t, dtype=float)
    prefactor = np.exp(
        -1j * sign * cf.Omega * ts - 0.5j * params.omega * ts + 1j * gamma
    )
    upper = np.cos(0.5 * theta) * np.ones_like(ts)
    lower = np.sin(0.5 * theta) * np.exp(1j * (params.omega * ts - gamma))
    out = np.stack([prefactor * upper, prefactor * lower], axis=-1)
    return out if ts.ndim else out.reshape(2)


def h1_aa_exact(params: Model1Params, branch: str, tol: float = 1e-12) -> float:
    """Exact cyclic geometric phase of the rotating-coupling model, in [0, 2*pi).

    Computed from the shifted detuning and cross-checked against the polar-cap
    form pi * (1 + cos(theta)); the two are the same identity written two
    ways, so any disagreement indicates a numerical defect.
    """
    cf = h1_closed_form(params, tol)
    _, a_plus, a_minus = _h1_shifts(params, tol)
    a = _pick(branch, a_plus, a_minus)
    theta = _pick(branch, cf.theta_plus, cf.theta_minus)
    mod2 = abs(a) ** 2
    beta = _TWO_PI * mod2 / (mod2 + 1.0)
    cap = np.pi * (1.0 + np.cos(theta))
    if abs(beta - cap) > 1e-12 * max(1.0, beta):
        raise ArithmeticError(f"phase identity violated: {beta!r} vs {cap!r}")
    return float(beta % _TWO_PI)


def h1_aa_slow_limit(epsilon: complex, branch: str, tol: float = 1e-12) -> float:
    """Slow-drive limit of the cyclic geometric phase at half-splitting epsilon.

    This is the omega -> 0 limit of h1_aa_exact, with the shifted detuning
    replaced by epsilon +/- sqrt(1 + epsilon**2).  ExceptionalPoint at
    epsilon = +/- i where the static spectrum degenerates.
    """
    e = complex(epsilon)
    root = np.sqrt(1.0 + e * e + 0j)
    if abs(root) < tol:
        raise ExceptionalPoint("static spectrum degenerates at epsilon = +/- i")
    a = e + root if branch == "+" else e - root
    _pick(branch, None, None)
    mod2 = abs(a) ** 2
    return float((_TWO_PI * mod2 / (mod2 + 1.0)) % _TWO_PI)


def complex_berry_comparison(epsilon: complex, tol: float = 1e-12) -> complex:
    """Complex adiabatic geometric phase pi * (1 - epsilon / sqrt(1 + epsilon**2)).

    For real epsilon this is real and equals the slow-drive limit of the
    cyclic phase of the '-' branch; for complex epsilon it acquires an
    imaginary part while the cyclic phase stays real, which is the
    quantitative discrepancy between the two notions.
    """
    e = complex(epsilon)
    root = np.sqrt(1.0 + e * e + 0j)
    if abs(root) < tol:
        raise ExceptionalPoint("static spectrum degenerates at epsilon = +/- i")
    return complex(np.pi * (1.0 - e / root))


def h2(params: Model2Params, t: float) -> CMat2:
    """Oscillating anti-Hermitian-coupling Hamiltonian at time t.

    The dtype follows the dtype of t (see h1).
    """
    c = 1j * params.mu * (np.cos(params.omega * t) + 1j)
    return np.array([[1.0, c], [c, -1.0]])


def hbu(params: BUParams, t: float) -> CMat2:
    """Loop Hamiltonian i * [[0, 1], [z, 0]] with z = rho e^{i theta} - r.

    The dtype follows the dtype of t (see h1).
    """
    theta = _TWO_PI * t / params.period
    z = params.rho * np.exp(1j * theta) - params.r
    return np.array([[0.0, 1j], [1j * z, 0.0]])


def bu_instantaneous(
    params: BUParams,
    theta_grid: np.ndarray,
    tol: float = 1e-12,
) -> tuple[EigenPath, EigenPath]:
    """Continued instantaneous eigenpaths of the loop model over theta_grid.

    Eigenvalues are +/- i sqrt(z) and eigenvectors (z^{-1/4}, +/- z^{1/4}),
    both continued along the loop from the principal branch at the first
    sample, so a loop that does not encircle the origin closes after one turn.
    The '+' label carries + i sqrt(z).  DegeneracyOnPath is raised when the
    loop passes through (or numerically touches) the origin.
    """
    thetas = np.asarray(theta_grid, dtype=float)
    if thetas.ndim != 1 or thetas.shape[0] < 2:
        raise ValueError("theta_grid must be a 1-D grid with at least 2 points")
    z = params.rho * np.exp(1j * thetas) - params.r
    scale = max(abs(params.r), params.rho)
    if np.min(np.abs(z)) <= tol * scale:
        raise DegeneracyOnPath("loop passes through the spectral degeneracy at z = 0")
    q = track_root(z, 4)  # continued z^{1/4}
    s = q * q  # continued z^{1/2}, same branch choice
    inv_q = 1.0 / q
    norm = np.sqrt(np.abs(inv_q) ** 2 + np.abs(q) ** 2)

    paths = []
    for sign, label in ((+1.0, "+"), (-1.0, "-")):
        vectors = np.stack([inv_q / norm, sign * q / norm], axis=-1)
        defect = 1.0 - abs(np.vdot(vectors[0], vectors[-1]))
        paths.append(
            EigenPath(
                grid=thetas,
                values=sign * 1j * s,
                vectors=vectors,
                label=label,
                closure_defect=float(defect),
            )
        )
    return paths[0], paths[1]


def bu_floquet_bessel(
    params: BUParams,
    branch: str,
    t: float | np.ndarray,
) -> CVec2:
    """Cyclic state of the loop model from the power-series route.

    The state is (y(t), dy/dt) with y a fixed-order Bessel function of the
    running argument nu * x(theta); the '+' branch uses order +nu, the '-'
    branch order -nu.  The series itself polices its accuracy and raises
    SeriesDomain once cancellation eats into the requested tolerance, which
    for this loop's argument range means both branches are served far into
    the adiabatic regime (the recessive '+' branch gives out first).  Integer
    nu is rejected upstream because the two orders then cease to be
    independent.  rho = 0 is rejected: the argument collapses to zero for all
    t and the pair degenerates.  For array t the result has shape (len(t), 2).
    """
    _pick(branch, None, None)
    if params.r <= 0.0:
        raise DomainError("cyclic Bessel states require positive r")
    if params.rho <= 0.0:
        raise DomainError("rho = 0 collapses the Bessel argument; pair degenerates")
    nu = params.nu
    order = nu if branch == "+" else -nu
    ts = np.asarray(t, dtype=float)
    theta = _TWO_PI * ts / params.period
    x = params.x(theta)
    arg = nu * np.asarray(x, dtype=complex)
    flat = np.atleast_1d(arg)
    out = np.empty(flat.shape + (2,), dtype=complex)
    rate = 1j * np.pi / params.period  # d(log x)/dt
    for k, zk in enumerate(flat):
        y, dy = bessel_series(order, complex(zk))
        out[k, 0] = y
        out[k, 1] = rate * zk * dy  # chain rule: d(nu x)/dt = rate * nu x
    return out if ts.ndim else out.reshape(2)
