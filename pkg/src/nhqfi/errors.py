"""Exception types raised by the library.

Everything derives from :class:`NhqfiError` so callers can catch the whole
family with one clause.  Errors that signal invalid *input* also derive from
``ValueError``; errors that signal a numerically degenerate *computation*
derive from ``ArithmeticError``.
"""


class NhqfiError(Exception):
    """Base class for all library errors."""


class NotAState(NhqfiError, ValueError):
    """A matrix or Bloch vector does not describe a valid qubit state."""


class NotHermitian(NhqfiError, ValueError):
    """A matrix expected to be Hermitian is not, beyond tolerance."""


class NotPure(NhqfiError, ValueError):
    """A curve expected to produce pure states produced a mixed one."""


class IncompleteKraus(NhqfiError, ValueError):
    """Kraus operators do not satisfy the completeness relation."""


class PtRegimeError(NhqfiError, ValueError):
    """Closed-form evaluator called outside the unbroken regime |alpha| <= pi/2."""


class ExceptionalPoint(NhqfiError, ArithmeticError):
    """Evolution requested at cos(alpha) ~ 0 where the closed form diverges."""


class VanishingNorm(NhqfiError, ArithmeticError):
    """Renormalization denominator Tr(U rho U^dag) fell below threshold."""


class NearBoundaryIllConditioned(NhqfiError, ArithmeticError):
    """State too close to the pure boundary for the mixed-state QFI term.

    Signals the caller to tighten the step, use the spectral evaluator, or
    an exact-derivative curve.
    """


class RankDeficientDerivative(NhqfiError, ArithmeticError):
    """A vanishing eigenvalue has a non-vanishing derivative (QFI diverges)."""


class ZeroInformation(NhqfiError, ArithmeticError):
    """Cramer-Rao bound requested for (numerically) zero Fisher information."""


class DenominatorVanishes(NhqfiError, ArithmeticError):
    """Closed-form expression evaluated too close to its singular locus."""


class NoInteriorOptimum(NhqfiError, ArithmeticError):
    """Grid optimization terminated on the range boundary with outward slope."""
