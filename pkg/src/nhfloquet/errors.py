"""Exception types shared across the package.

Every failure mode that callers are expected to handle gets its own class so
that tests and the command line tool can react to the cause rather than to a
message string.
"""

from __future__ import annotations

__all__ = [
    "NHFloquetError",
    "DegenerateMatrix",
    "StateOverflow",
    "BranchAmbiguity",
    "LiouvilleViolation",
    "ExceptionalPoint",
    "NotCyclic",
    "ZeroOverlap",
    "InconsistentDynamics",
    "NotClosed",
    "ZeroState",
    "DegeneracyOnPath",
    "DiscontinuousPath",
    "DegenerateBasis",
    "PoleCrossing",
    "SeriesDomain",
    "IntegerOrder",
    "NonConvergence",
    "DomainError",
    "OnStokesLine",
    "NoRootInBracket",
    "AccuracyWarning",
]


class NHFloquetError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateMatrix(NHFloquetError):
    """2x2 matrix has coinciding eigenvalues and no eigenbasis."""


class StateOverflow(NHFloquetError):
    """A state component exceeded the integrator's overflow cap."""


class BranchAmbiguity(NHFloquetError):
    """Root continuation cannot decide a branch (step too large or a zero on the path)."""


class LiouvilleViolation(NHFloquetError):
    """det U(T) disagrees with exp(-i * integral of tr H); the propagation is unreliable."""


class ExceptionalPoint(NHFloquetError):
    """Model parameters sit at a spectral degeneracy where the closed form breaks down."""


class NotCyclic(NHFloquetError):
    """Final state is not a complex multiple of the initial state within tolerance."""


class ZeroOverlap(NHFloquetError):
    """Consecutive samples are nearly orthogonal; the grid is too coarse for phase tracking."""


class InconsistentDynamics(NHFloquetError):
    """Overlap-based and energy-based phase values disagree far beyond tolerance."""


class NotClosed(NHFloquetError):
    """Eigenvector path does not return to its starting ray."""


class ZeroState(NHFloquetError):
    """State vector has zero norm."""


class DegeneracyOnPath(NHFloquetError):
    """Instantaneous spectrum degenerates somewhere on the sampled path."""


class DiscontinuousPath(NHFloquetError):
    """Eigenvector continuation lost track between consecutive samples."""


class DegenerateBasis(NHFloquetError):
    """Supplied basis pair is (numerically) linearly dependent."""


class PoleCrossing(NHFloquetError):
    """Component ratio b/a evaluated where the reference component a vanishes."""


class SeriesDomain(NHFloquetError):
    """Series evaluation requested outside its validated accuracy envelope."""


class IntegerOrder(NHFloquetError):
    """Order is too close to an integer for the two power series to stay independent."""


class NonConvergence(NHFloquetError):
    """Iteration or series failed to reach tolerance within its budget."""


class DomainError(NHFloquetError):
    """Arguments outside the validity region of an asymptotic formula."""


class OnStokesLine(NHFloquetError):
    """Requested point lies on the boundary between asymptotic regimes."""


class NoRootInBracket(NHFloquetError):
    """Bracketing interval does not contain a sign change."""


class AccuracyWarning(UserWarning):
    """Result returned, but outside the range where stated accuracy holds."""
