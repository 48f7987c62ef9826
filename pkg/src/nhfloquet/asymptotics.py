"""Bessel evaluation and the asymptotics of piecewise adiabatic following.

The power series here is the ground truth for Bessel values at moderate order;
the uniform large-order forms approximate the same functions and are the
analytic backbone for transition ("hop") locations: the sign of the real part
of the exponent below decides which component of a followed state grows.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    AccuracyWarning,
    DomainError,
    IntegerOrder,
    NoRootInBracket,
    NonConvergence,
    OnStokesLine,
    SeriesDomain,
)

__all__ = [
    "SERIES_CANCEL_TOL",
    "SERIES_MAX_TERMS",
    "Wedge",
    "StokesPoint",
    "CriticalSolve",
    "bessel_series",
    "xi_exponent",
    "stokes_point",
    "r_plus_asymptotic",
    "r_minus_asymptotic",
    "critical_ratio",
    "hop_theta_estimate",
    "hop_window_width",
    "uniform_bessel",
]

# Largest tolerated roundoff-over-cancellation ratio of the power series,
# measured per call as eps * max|term| / |sum|, and the term budget.
SERIES_CANCEL_TOL = 1e-6
SERIES_MAX_TERMS = 300

# Orders closer than this to an integer make J_nu and J_{-nu} dependent.
INTEGER_ORDER_TOL = 1e-6

# Below this order the uniform forms are returned with a warning attached.
UNIFORM_NU_MIN = 10.0


class Wedge(Enum):
    PLUS = "plus"  # Re(exponent) > 0: following persists
    MINUS = "minus"  # Re(exponent) < 0: the other component takes over
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class StokesPoint:
    """Exponent value at one loop angle together with its wedge classification."""

    theta: float
    exponent: complex
    wedge: Wedge


@dataclass(frozen=True)
class CriticalSolve:
    """Result of the critical-ratio root solve: value, residual, iteration count."""

    c: float
    residual: float
    iterations: int


def _recip_gamma(a: float) -> float:
    """1 / Gamma(a) for real a, zero at the poles (non-positive integers)."""
    if a > 0.0:
        return math.exp(-math.lgamma(a))
    if a == math.floor(a):
        return 0.0
    # reflection: 1 / Gamma(a) = Gamma(1 - a) * sin(pi a) / pi
    return math.exp(math.lgamma(1.0 - a)) * math.sin(math.pi * a) / math.pi


def bessel_series(nu: float, z: complex) -> tuple[complex, complex]:
    """(J_nu(z), J_nu'(z)) from the ascending power series.

    Terms follow the ratio recurrence t_{k+1} = -t_k (z/2)^2 / ((k+1)(k+nu+1))
    starting from (z/2)^nu / Gamma(nu+1) on the principal branch, and the sum
    stops once the tail is below the machine-precision floor.  nu may be
    negative (the reflected series is formed the same way term by term), which
    is what makes the J_nu, J_{-nu} pair independent for non-integer nu.

    There is no fixed argument cap: accuracy is policed per call by comparing
    the largest term magnitude against the final sum.  When roundoff carried
    by the peak term exceeds SERIES_CANCEL_TOL of the result pair, the value
    would be silently wrong and SeriesDomain is raised instead.  Same-sign
    regimes (order and argument of the same scale, argument not too far into
    the oscillatory region) pass at any order the exponents keep finite.
    """
    z = complex(z)
    if nu < 0.0 and abs(nu - round(nu)) < INTEGER_ORDER_TOL:
        raise IntegerOrder(f"order {nu} is within {INTEGER_ORDER_TOL:g} of an integer")

    if z == 0.0:
        if nu == 0.0:
            return 1.0 + 0.0j, 0.0 + 0.0j
        if nu == 1.0:
            return 0.0 + 0.0j, 0.5 + 0.0j
        if nu > 1.0:
            return 0.0 + 0.0j, 0.0 + 0.0j
        raise SeriesDomain(f"J_nu and its derivative diverge at z = 0 for nu = {nu}")

    half = 0.5 * z
    rg = _recip_gamma(nu + 1.0)
    if rg != 0.0:
        term = np.exp(nu * np.log(half)) * rg
    else:
        # First term sits on a Gamma pole; start the recurrence one index later.
        term = 0.0 + 0.0j
    s = term
    ds = term * nu
    ratio_num = -half * half
    abs_u = abs(ratio_num)
    peak = abs(term)
    peak_d = abs(term) * abs(nu)

    k = 0
    floor_hits = 0
    done = False
    while k < SERIES_MAX_TERMS:
        k += 1
        kk = float(k)
        if term == 0.0 and k <= max(0.0, -nu) + 1.0:
            # Rebuild directly past the pole instead of multiplying by inf.
            rg = _recip_gamma(kk + nu + 1.0)
            term = (-1.0) ** k * np.exp((nu + 2.0 * kk) * np.log(half)) * rg / math.factorial(k)
        else:
            term = term * ratio_num / (kk * (kk + nu))
        s += term
        ds += term * (nu + 2.0 * kk)
        tail = abs(term)
        peak = max(peak, tail)
        peak_d = max(peak_d, tail * abs(nu + 2.0 * kk))
        # Terms can regrow while kk (kk + nu) < |z/2|^2, so only trust a small
        # tail once the ratio factor has dropped below 1 for good.
        if kk * (kk + nu) > abs_u and tail <= 1e-17 * max(1.0, abs(s)):
            floor_hits += 1
            if floor_hits >= 2:
                done = True
                break
        else:
            floor_hits = 0
    if not done:
        raise NonConvergence(
            f"series tail still {abs(term):.3e} after {SERIES_MAX_TERMS} terms "
            f"at nu={nu}, |z|={abs(z):.3f}"
        )

    out = complex(s), complex(ds / z)
    if not (np.isfinite(out[0]) and np.isfinite(out[1]) and np.isfinite(peak)):
        raise SeriesDomain(f"series over/underflowed at nu={nu}, |z|={abs(z):.3e}")
    tiny = np.finfo(float).tiny
    scale = max(abs(out[0]), abs(out[1]), tiny)
    worst = max(peak, peak_d / max(abs(z), tiny))
    cancel = float(np.finfo(float).eps) * worst / scale
    if cancel > SERIES_CANCEL_TOL:
        raise SeriesDomain(
            f"cancellation leaves {cancel:.3e} relative roundoff at nu={nu}, "
            f"|z|={abs(z):.3f} (tolerance {SERIES_CANCEL_TOL:g})"
        )
    return out


def xi_exponent(rho: float, r: float, theta: float | np.ndarray) -> complex | np.ndarray:
    """Stokes exponent (2/3) xi^(3/2) controlling growth along the parameter loop.

    Evaluates log((sqrt(r) + sqrt(r - rho e^{i theta})) / (sqrt(rho) e^{i theta/2}))
    - sqrt(r - rho e^{i theta}) / sqrt(r) with every branch continued from
    theta = 0, where all quantities are real and positive.  The square root is
    principal (its argument stays in the right half plane for rho < r) and the
    log's imaginary part is assembled from the continuous pieces directly, so
    no per-point branch choice is involved.  The real part changes sign on the
    Stokes lines bounding the hop wedge.
    """
    if not (r > 0.0 and 0.0 < rho < r):
        raise DomainError(f"need 0 < rho < r, got rho={rho}, r={r}")
    th = np.asarray(theta, dtype=float)
    w = r - rho * np.exp(1j * th)
    sw = np.sqrt(w)
    num = np.sqrt(r) + sw
    val = (
        np.log(np.abs(num) / np.sqrt(rho))
        + 1j * (np.angle(num) - 0.5 * th)
        - sw / np.sqrt(r)
    )
    if np.ndim(theta) == 0:
        return complex(val)
    return val


def stokes_point(rho: float, r: float, theta: float, boundary_tol: float = 1e-10) -> StokesPoint:
    """Classify one loop angle by the sign of Re of the exponent."""
    e = complex(xi_exponent(rho, r, theta))
    if e.real > boundary_tol:
        wedge = Wedge.PLUS
    elif e.real < -boundary_tol:
        wedge = Wedge.MINUS
    else:
        wedge = Wedge.BOUNDARY
    return StokesPoint(theta=float(theta), exponent=e, wedge=wedge)


def r_plus_asymptotic(rho: float, r: float, T: float, theta: float | np.ndarray) -> complex | np.ndarray:
    """Large-T component ratio for the branch that always keeps following.

    (pi / 4T) * rho e^{i theta} / (r - rho e^{i theta})^{3/2}, with the power
    on the principal branch, which is continuous here because its base stays
    in the right half plane for 0 < rho < r.  Valid in that parameter range
    for any theta; the magnitude is O(1/T), which is why this branch never
    stops following its eigenpath.
    """
    if not (r > 0.0 and 0.0 < rho < r and T > 0.0):
        raise DomainError(f"need 0 < rho < r and T > 0, got rho={rho}, r={r}, T={T}")
    th = np.asarray(theta, dtype=float)
    zz = rho * np.exp(1j * th)
    val = (np.pi / (4.0 * T)) * zz / (r - zz) ** 1.5
    if np.ndim(theta) == 0:
        return complex(val)
    return val


def r_minus_asymptotic(
    rho: float, r: float, T: float, theta: float, boundary_tol: float = 1e-10
) -> tuple[complex, Wedge]:
    """Large-T component ratio for the fragile branch, with its wedge tag.

    Inside the wedge where Re of the exponent is positive the value coincides
    with r_plus_asymptotic (small, following persists); where it is negative
    the reciprocal-type branch -(4T/pi) (r - rho e^{i theta})^{3/2} / (rho
    e^{i theta}) applies and the ratio is large, i.e. the state has switched
    to the other eigenpath.  The product of the two branch expressions is -1
    identically.  On the boundary itself OnStokesLine is raised.
    """
    pt = stokes_point(rho, r, theta, boundary_tol)
    zz = rho * np.exp(1j * float(theta))
    if pt.wedge is Wedge.PLUS:
        return complex((np.pi / (4.0 * T)) * zz / (r - zz) ** 1.5), pt.wedge
    if pt.wedge is Wedge.MINUS:
        return complex(-(4.0 * T / np.pi) * (r - zz) ** 1.5 / zz), pt.wedge
    raise OnStokesLine(f"theta = {theta:.6f} lies on the wedge boundary within {boundary_tol:g}")


def _critical_equation(c: float) -> float:
    return math.log((1.0 + math.sqrt(1.0 + c)) / math.sqrt(c)) - math.sqrt(1.0 + c)


def critical_ratio(tol: float = 1e-8) -> CriticalSolve:
    """Radius ratio rho/r above which the fragile branch hops.

    Solves log((1 + sqrt(1 + c)) / sqrt(c)) = sqrt(1 + c) on (0.01, 0.99) by
    bisection to width tol, then polishes with three secant steps.  Below the
    returned c the exponent's real part is positive on the whole loop and no
    hop occurs; above it a wedge with negative real part opens around
    theta = pi.
    """
    a, b = 0.01, 0.99
    fa, fb = _critical_equation(a), _critical_equation(b)
    if not (fa > 0.0 > fb or fa < 0.0 < fb):
        raise NoRootInBracket(f"no sign change on ({a}, {b})")
    iterations = 0
    while b - a > tol:
        m = 0.5 * (a + b)
        fm = _critical_equation(m)
        iterations += 1
        if (fa > 0.0) == (fm > 0.0):
            a, fa = m, fm
        else:
            b, fb = m, fm
    x0, x1 = a, b
    f0, f1 = fa, fb
    for _ in range(3):
        if f1 == f0:
            break
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        x0, f0 = x1, f1
        x1, f1 = x2, _critical_equation(x2)
        iterations += 1
    return CriticalSolve(c=float(x1), residual=abs(_critical_equation(x1)), iterations=iterations)


def hop_theta_estimate(rho: float, r: float) -> tuple[float, float]:
    """Leading estimate of the two wedge-boundary angles just above critical.

    Returns pi -/+ 2 (sqrt(1 + c) / c) sqrt(rho/r - c) where c is the critical
    ratio.  Only meaningful for rho/r slightly above c; DomainError when
    rho/r <= c (no wedge) or the ratio is not below 1.
    """
    if not (r > 0.0 and 0.0 < rho < r):
        raise DomainError(f"need 0 < rho < r, got rho={rho}, r={r}")
    c = critical_ratio().c
    ratio = rho / r
    if ratio <= c:
        raise DomainError(f"rho/r = {ratio:.6f} is below the critical ratio {c:.6f}; no hop wedge")
    half = 2.0 * (math.sqrt(1.0 + c) / c) * math.sqrt(ratio - c)
    return (math.pi - half, math.pi + half)


def hop_window_width(r: float, T: float) -> float:
    """Angular width pi / (T sqrt(r)) over which a hop completes."""
    if not (r > 0.0 and T > 0.0):
        raise DomainError(f"need r > 0 and T > 0, got r={r}, T={T}")
    return math.pi / (T * math.sqrt(r))


def uniform_bessel(nu: float, x: complex) -> tuple[complex, complex, complex, complex]:
    """Leading uniform large-order forms of J_{+nu}, J_{-nu} and derivatives at nu * x.

    Returns (J_nu(nu x), J_nu'(nu x), J_{-nu}(nu x), J_{-nu}'(nu x)) built
    from exp(-nu E) and exp(+nu E) with E the exponent of `xi_exponent`
    written in terms of x, here on per-point principal branches.  The
    negative-order pair mixes both exponentials with cos(nu pi) and
    2 sin(nu pi) weights, which is the whole mechanism of the hop: whichever
    exponential dominates at a given angle decides what J_{-nu} looks like.
    Accuracy is O(1/nu); below nu = 10 an AccuracyWarning is emitted.
    """
    x = complex(x)
    if abs(x) >= 1.0:
        raise DomainError(f"|x| = {abs(x):.4f} must be below 1")
    if x == 0.0:
        raise DomainError("x must be nonzero")
    if nu <= 0.0:
        raise DomainError("nu must be positive")
    if nu < UNIFORM_NU_MIN:
        warnings.warn(
            f"uniform forms at nu = {nu:.3f} < {UNIFORM_NU_MIN:g} are outside their accuracy range",
            AccuracyWarning,
            stacklevel=2,
        )

    s = np.sqrt(1.0 - x * x)
    E = np.log((1.0 + s) / x) - s
    amp = 1.0 / math.sqrt(2.0 * math.pi * nu)
    quarter = np.sqrt(s)
    down = np.exp(-nu * E)
    up = np.exp(nu * E)
    c = math.cos(math.pi * nu)
    s2 = 2.0 * math.sin(math.pi * nu)

    j_plus = amp * down / quarter
    jp_plus = amp * down * quarter / x
    j_minus = amp * (c * down + s2 * up) / quarter
    jp_minus = amp * (c * down - s2 * up) * quarter / x
    return complex(j_plus), complex(jp_plus), complex(j_minus), complex(jp_minus)
