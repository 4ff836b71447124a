"""Problem parameters and well-posedness classification.

The coefficient matrix family is

    A(x) = [[1, k*sgn(x)], [-k*sgn(x), 1]],      k real,

acting in div A grad U = 0 on the upper half plane {(t, x) : t > 0}.  Every
kernel in this package is expressed through the angle-like parameter alpha
solving k = tan(pi*alpha/2); since tan(pi*./2) has period 2, the solution is
fixed by choosing a branch interval:

* energy branch ("h1"):            alpha in (-1, 1)
* boundary-equation branch ("lpinf"): alpha in (1/q - 2, 1/q),  1/q = 1 - 1/p

The two branches select genuinely different solutions once k exceeds the
Dirichlet threshold tan(pi/(2q)).  alpha is stored, never recomputed, so the
branch is unambiguous downstream.

Classification follows the two known results for this family: one-sided
*failure* statements in the energy (H1) sense -- the non-asserted side is
reported Unknown, never WellPosed -- and an if-and-only-at-threshold
dichotomy in the L_inf(L_p) sense.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import BranchDegenerate, InvalidExponent

#: Accretivity constant of the coefficient family: the symmetric part of
#: A(x) is the identity for every k, so Re(A v, v) = |v|^2 exactly.
ACCRETIVITY_CONSTANT = 1.0

#: Absolute tolerance on |k - threshold| used to detect threshold equality.
THRESHOLD_TOL = 1e-12

#: Solvers refuse configurations closer to a threshold than this; the
#: boundary-equation inverse degrades as the branch endpoint is approached.
SOLVER_THRESHOLD_BAND = 1e-6


class Branch(Enum):
    """Which solution of k = tan(pi*alpha/2) parametrizes the kernels."""

    H1 = "h1"
    LPINF = "lpinf"


class Problem(Enum):
    DIRICHLET = "dirichlet"
    REGULARITY = "regularity"
    NEUMANN = "neumann"


class Sense(Enum):
    """In which topology well-posedness is asserted."""

    H1 = "h1"
    LPINF = "lpinf"


class Wellposedness(Enum):
    WELL_POSED = "well_posed"
    FAILS = "fails"
    THRESHOLD = "threshold"
    UNKNOWN = "unknown"


def conjugate_exponent(p: float) -> float:
    if not (1.0 < p < math.inf):
        raise InvalidExponent(f"p must lie in (1, inf), got {p}")
    return p / (p - 1.0)


def dirichlet_threshold(p: float) -> float:
    """Critical k for the Dirichlet problem: tan(pi/(2q))."""
    q = conjugate_exponent(p)
    return math.tan(math.pi / (2.0 * q))


def regularity_threshold(p: float) -> float:
    """Critical k for the regularity problem: -tan(pi/(2p))."""
    conjugate_exponent(p)  # validates p
    return -math.tan(math.pi / (2.0 * p))


def neumann_threshold(p: float) -> float:
    """Critical k for the Neumann problem: tan(pi/(2p))."""
    conjugate_exponent(p)
    return math.tan(math.pi / (2.0 * p))


_THRESHOLDS = {
    Problem.DIRICHLET: dirichlet_threshold,
    Problem.REGULARITY: regularity_threshold,
    Problem.NEUMANN: neumann_threshold,
}


def threshold_for(problem: Problem, p: float) -> float:
    return _THRESHOLDS[problem](p)


def branch_interval(branch: Branch, p: float) -> tuple[float, float]:
    """Open interval from which alpha is taken for the given branch."""
    if branch is Branch.H1:
        return (-1.0, 1.0)
    q = conjugate_exponent(p)
    return (1.0 / q - 2.0, 1.0 / q)


@dataclass(frozen=True)
class ProblemConfig:
    """Immutable parameter tuple (k, p, q, branch, alpha).

    alpha is the stored branch solution of k = tan(pi*alpha/2); q is the
    conjugate exponent.  Construct through :func:`derive_config`.
    """

    k: float
    p: float
    q: float
    branch: Branch
    alpha: float

    def __post_init__(self) -> None:
        if not (1.0 < self.p < math.inf):
            raise InvalidExponent(f"p must lie in (1, inf), got {self.p}")
        if abs(1.0 / self.p + 1.0 / self.q - 1.0) > 1e-12:
            raise InvalidExponent("q is not the conjugate exponent of p")
        lo, hi = branch_interval(self.branch, self.p)
        if not (lo < self.alpha < hi):
            raise BranchDegenerate(
                f"alpha={self.alpha} outside open branch interval ({lo}, {hi})"
            )
        k_back = math.tan(math.pi * self.alpha / 2.0)
        scale = max(1.0, abs(self.k))
        if abs(k_back - self.k) > 1e-12 * scale:
            raise BranchDegenerate(
                f"stored alpha inconsistent: tan(pi*alpha/2)={k_back} vs k={self.k}"
            )


def derive_config(k: float, p: float, branch: Branch | str = Branch.H1) -> ProblemConfig:
    """Resolve alpha in the requested branch and build a ProblemConfig.

    Raises BranchDegenerate when the required alpha lands on (or within
    THRESHOLD_TOL of) an endpoint of the open branch interval -- which for
    the boundary-equation branch happens exactly at the Dirichlet threshold
    k = tan(pi/(2q)).
    """
    if isinstance(branch, str):
        branch = Branch(branch)
    if not math.isfinite(k):
        raise BranchDegenerate(f"k must be finite, got {k}")
    q = conjugate_exponent(p)
    base = 2.0 / math.pi * math.atan(k)  # in (-1, 1)
    lo, hi = branch_interval(branch, p)
    # candidates are base + 2m; the open interval has length 2, so at most one fits
    alpha = None
    for m in (-1, 0, 1):
        cand = base + 2.0 * m
        if lo + THRESHOLD_TOL < cand < hi - THRESHOLD_TOL:
            alpha = cand
            break
    if alpha is None:
        raise BranchDegenerate(
            f"no alpha in ({lo}, {hi}) with tan(pi*alpha/2)={k}; "
            "k sits at a branch endpoint (threshold)"
        )
    return ProblemConfig(k=float(k), p=float(p), q=q, branch=branch, alpha=alpha)


@dataclass(frozen=True)
class WellposednessReport:
    problem: Problem
    sense: Sense
    status: Wellposedness
    threshold_value: float


def classify(problem: Problem | str, k: float, p: float) -> tuple[WellposednessReport, WellposednessReport]:
    """Classify (problem, k, p) in both senses.

    H1 sense: only failure beyond the threshold is asserted; the other side
    is Unknown.  L_inf(L_p) sense: well posed iff k is off the threshold.
    """
    if isinstance(problem, str):
        problem = Problem(problem)
    thr = threshold_for(problem, p)
    at_threshold = abs(k - thr) <= THRESHOLD_TOL * max(1.0, abs(thr))

    if at_threshold:
        h1_status = Wellposedness.THRESHOLD
    else:
        beyond = k < thr if problem is Problem.REGULARITY else k > thr
        h1_status = Wellposedness.FAILS if beyond else Wellposedness.UNKNOWN

    lp_status = Wellposedness.THRESHOLD if at_threshold else Wellposedness.WELL_POSED

    return (
        WellposednessReport(problem, Sense.H1, h1_status, thr),
        WellposednessReport(problem, Sense.LPINF, lp_status, thr),
    )


def near_threshold(problem: Problem, k: float, p: float, band: float = SOLVER_THRESHOLD_BAND) -> bool:
    """True when k is within the solver refusal band of the problem's threshold."""
    thr = threshold_for(problem, p)
    return abs(k - thr) <= band * max(1.0, abs(thr))
