"""Exception hierarchy and warning categories.

Numerical failures (quadrature, oscillatory sums) are kept separate from
configuration rejections (bad exponents, degenerate branches, thresholds)
because the CLI maps them to different exit codes.
"""


class HalfplaneBVPError(Exception):
    """Base class for all errors raised by this package."""


# -- configuration ----------------------------------------------------------

class InvalidExponent(HalfplaneBVPError):
    """Lebesgue exponent p outside (1, inf)."""


class NotInvertible(HalfplaneBVPError):
    """Boundary equation is not invertible at (or too close to) a threshold k."""


class BranchDegenerate(NotInvertible):
    """No admissible alpha with tan(pi*alpha/2) = k inside the open branch interval."""


class NotWellPosed(NotInvertible):
    """Solver refused: the requested problem is at a well-posedness threshold."""


class DomainError(HalfplaneBVPError):
    """Kernel or identity parameters outside their admissible ranges."""


# -- quadrature -------------------------------------------------------------

class QuadratureFailure(HalfplaneBVPError):
    """Base class for numerical integration failures."""


class SingularityOnBoundary(QuadratureFailure):
    """Principal-value singularity placed on a domain endpoint."""


class NonConvergent(QuadratureFailure):
    """Richardson extrapolants diverge instead of settling."""


class NonIntegrable(QuadratureFailure):
    """Declared endpoint power <= -1: the integral does not exist."""


class TailTooSlow(QuadratureFailure):
    """Hinted algebraic tail decay rate <= 1: the tail is not integrable."""


class WindowLeak(QuadratureFailure):
    """Log-line samples do not decay at the grid ends; FFT would alias."""


class OutOfBoundednessRange(HalfplaneBVPError):
    """Multiplier index gamma outside (0, 2), where the symbol is unbounded."""


class EvaluationOnInterface(HalfplaneBVPError):
    """Operator evaluation requested exactly on the coefficient jump x = 0."""


class GridTooCoarse(HalfplaneBVPError):
    """Field grid too coarse for the requested finite-difference check."""


class OscillatoryNonConvergence(QuadratureFailure):
    """Accelerated partial sums of an oscillatory integral failed to settle."""


# -- warnings ---------------------------------------------------------------

class BoundednessRangeViolation(UserWarning):
    """alpha outside (-1/p, 2-1/p): the half-line operator is not Lp-bounded.

    Pointwise evaluation may still converge; emitted as a warning, not an error.
    """
