"""Closed-form kernels of the first-order boundary operator family.

The divergence-form equation is rewritten as d/dt F + T F = 0 for the
boundary vector field F; T is a self-adjoint first-order operator on the
line whose domain couples the two components through the coefficient jump
at x = 0.  Everything here evaluates explicit kernel formulas for members
of the functional calculus of T:

* the resolvent (i*lam - T)^(-1): exponential convolution plus a rank-one
  interface coupling,
* the second-order resolvent (1 + t^2 T^2)^(-1) and its first-order
  counterpart tT(1 + t^2 T^2)^(-1),
* the Cauchy singular integral sgn(T): Hilbert-transform block plus a
  1/(|x|+|y|) coupling block,
* Hardy projections (1 +- sgn(T))/2 and the Cauchy extension
  exp(-t|T|) chi_+(T), whose values solve the equation in the half plane,
* the double layer potential type operator K on the line, its power-weighted
  half-line family, the log-line Fourier symbol that diagonalizes them, and
  the closed-form inverse of I -+ k K on each half-line.

All quadrature nodes avoid y = 0 and the evaluation point; evaluation at
x = 0 itself is refused (the coefficients jump there).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .config import ProblemConfig
from .errors import (
    BoundednessRangeViolation,
    DomainError,
    EvaluationOnInterface,
    NotInvertible,
    OutOfBoundednessRange,
)
from .quadrature import (
    DEFAULT_LOG_GRID,
    DEFAULT_SCHEME,
    AlgebraicDecay,
    BoundarySample,
    LogLineGrid,
    PVQuadratureScheme,
    line_integral,
    log_line_multiplier_apply,
)

#: exp(-r) below double rounding for r >= 45; kernels are clipped there
EXP_WINDOW = 45.0


@dataclass
class BoundaryVectorField:
    """Two scalar boundary samples, the components along e0 and e1."""

    f0: BoundarySample
    f1: BoundarySample

    def window(self, radius: float) -> tuple[float, float]:
        a0, b0 = self.f0.window(radius)
        a1, b1 = self.f1.window(radius)
        return (min(a0, a1), max(b0, b1))

    def breakpoints(self) -> tuple[float, ...]:
        return tuple(sorted(set(self.f0.breakpoints()) | set(self.f1.breakpoints())))

    def features(self) -> tuple[tuple[float, float], ...]:
        return tuple(set(self.f0.features) | set(self.f1.features))

    def decay_rate(self) -> float:
        return min(self.f0.decay_rate(), self.f1.decay_rate())

    def origin_power(self) -> float:
        return min(self.f0.origin_power, self.f1.origin_power)

    def is_compact(self) -> bool:
        return self.f0.is_compact() and self.f1.is_compact()


def _sgn(y: np.ndarray) -> np.ndarray:
    # quadrature nodes never sit at 0, so the value at 0 is irrelevant
    return np.where(y >= 0.0, 1.0, -1.0)


def _check_interface(x: float, k: float) -> None:
    # every sgn(x) factor carries a weight k, so x = 0 is fine when k = 0
    if x == 0.0 and k != 0.0:
        raise EvaluationOnInterface("kernel uses sgn(x); evaluate off x = 0")


def _field_integral(field_like, kernel, scheme, *, pv_at=None, concentrations=(),
                    extra_decay=0.0, clip=None, power_at=None, extra_breaks=()):
    """Integrate kernel(y) (data factors included) over the field's domain.

    Fractional |y|^power behavior of the data at the origin (densities from
    half-line inverses) is absorbed by Gauss-Jacobi head panels there.
    """
    if power_at is None:
        op = field_like.origin_power()
        if op != 0.0:
            power_at = (0.0, op)
    a, b = field_like.window(scheme.truncation_radius)
    compact = field_like.is_compact()
    if not compact:
        a, b = -math.inf, math.inf
    if clip is not None:
        a, b = max(a, clip[0]), min(b, clip[1])
        if a >= b:
            return 0.0
    rate = None
    if math.isinf(a) or math.isinf(b):
        rate = min(field_like.decay_rate() + extra_decay, 14.0)
    cons = tuple(concentrations) + tuple(field_like.features())
    return line_integral(
        kernel, scheme, (a, b),
        pv_at=pv_at,
        breakpoints=(0.0,) + tuple(extra_breaks) + field_like.breakpoints(),
        concentrations=cons,
        tail_rate=rate,
        power_at=power_at,
    )


# ---------------------------------------------------------------------------
# resolvent family
# ---------------------------------------------------------------------------

def resolvent(lam: float, field: BoundaryVectorField, x: float,
              cfg: ProblemConfig, scheme: PVQuadratureScheme = DEFAULT_SCHEME) -> np.ndarray:
    """(i*lam - T)^(-1) applied to the field, evaluated at x.

    Exponential two-sided convolution plus the interface coupling term with
    prefactor k/(2(1 - i k sgn(lam))).  lam must be a nonzero real.
    """
    if lam == 0.0 or not math.isfinite(lam):
        raise DomainError("resolvent requires a nonzero finite real lam")
    k = cfg.k
    sl = 1.0 if lam > 0 else -1.0
    al = abs(lam)
    f0, f1 = field.f0, field.f1
    reach = EXP_WINDOW / al

    def conv0(y):
        return np.exp(-al * np.abs(x - y)) * (-1j * f0(y) + sl * _sgn(x - y) * f1(y))

    def conv1(y):
        return np.exp(-al * np.abs(x - y)) * (-sl * _sgn(x - y) * f0(y) - 1j * f1(y))

    def bdry(y):
        return np.exp(-al * np.abs(y)) * (-1j * f0(y) - sl * _sgn(y) * f1(y))

    kw = dict(concentrations=[(x, 1.0 / al)], clip=(x - reach, x + reach),
              extra_breaks=(x,))
    u0 = 0.5 * sl * _field_integral(field, conv0, scheme, **kw)
    u1 = 0.5 * sl * _field_integral(field, conv1, scheme, **kw)
    if k != 0.0:
        j = _field_integral(field, bdry, scheme,
                            concentrations=[(0.0, 1.0 / al)], clip=(-reach, reach))
        pref = k / (2.0 * (1.0 - 1j * k * sl)) * math.exp(-al * abs(x)) * j
        u0 = u0 + 1j * pref
        u1 = u1 + sl * _sgn(np.asarray(x)) * pref
    return np.asarray([u0, u1])


def smoothing_op(t: float, field: BoundaryVectorField, x: float,
                 cfg: ProblemConfig, scheme: PVQuadratureScheme = DEFAULT_SCHEME) -> np.ndarray:
    """(1 + t^2 T^2)^(-1) at x: averaged exponential kernel plus coupling."""
    if t <= 0:
        raise DomainError("t must be positive")
    _check_interface(x, cfg.k)
    k = cfg.k
    f0, f1 = field.f0, field.f1
    w = k / (1.0 + k * k)
    reach = EXP_WINDOW * t

    def comp0(y):
        conv = np.exp(-np.abs(x - y) / t) * f0(y)
        coup = w * np.exp(-(abs(x) + np.abs(y)) / t) * (-k * f0(y) + _sgn(y) * f1(y))
        return (conv + coup) / (2.0 * t)

    def comp1(y):
        conv = np.exp(-np.abs(x - y) / t) * f1(y)
        coup = w * _sgn(np.asarray(x)) * np.exp(-(abs(x) + np.abs(y)) / t) * (f0(y) + k * _sgn(y) * f1(y))
        return (conv + coup) / (2.0 * t)

    clip = (min(x - reach, -reach), max(x + reach, reach))
    kw = dict(concentrations=[(x, t), (0.0, t)], clip=clip, extra_breaks=(x,))
    return np.asarray([
        _field_integral(field, comp0, scheme, **kw),
        _field_integral(field, comp1, scheme, **kw),
    ])


def band_op(t: float, field: BoundaryVectorField, x: float,
            cfg: ProblemConfig, scheme: PVQuadratureScheme = DEFAULT_SCHEME) -> np.ndarray:
    """tT(1 + t^2 T^2)^(-1) at x: odd exponential kernel plus coupling."""
    if t <= 0:
        raise DomainError("t must be positive")
    _check_interface(x, cfg.k)
    k = cfg.k
    f0, f1 = field.f0, field.f1
    w = k / (1.0 + k * k)
    reach = EXP_WINDOW * t

    def comp0(y):
        conv = -_sgn(x - y) * np.exp(-np.abs(x - y) / t) * f1(y)
        coup = -w * np.exp(-(abs(x) + np.abs(y)) / t) * (f0(y) + k * _sgn(y) * f1(y))
        return (conv + coup) / (2.0 * t)

    def comp1(y):
        conv = _sgn(x - y) * np.exp(-np.abs(x - y) / t) * f0(y)
        coup = -w * _sgn(np.asarray(x)) * np.exp(-(abs(x) + np.abs(y)) / t) * (k * f0(y) - _sgn(y) * f1(y))
        return (conv + coup) / (2.0 * t)

    clip = (min(x - reach, -reach), max(x + reach, reach))
    # sgn(x - y) kinks at y = x: pin a panel edge there
    kw = dict(concentrations=[(x, t), (0.0, t)], clip=clip, extra_breaks=(x,))
    return np.asarray([
        _field_integral(field, comp0, scheme, **kw),
        _field_integral(field, comp1, scheme, **kw),
    ])


# ---------------------------------------------------------------------------
# Cauchy singular integral and extensions
# ---------------------------------------------------------------------------

def cauchy_singular(field: BoundaryVectorField, x: float, cfg: ProblemConfig,
                    scheme: PVQuadratureScheme = DEFAULT_SCHEME) -> np.ndarray:
    """sgn(T) at x: (-H f1, H f0) minus the k/(1+k^2)-weighted coupling block."""
    _check_interface(x, cfg.k)
    k = cfg.k
    f0, f1 = field.f0, field.f1

    h1 = _field_integral(field, lambda y: f1(y) / (x - y), scheme,
                         pv_at=x, extra_decay=1.0)
    h0 = _field_integral(field, lambda y: f0(y) / (x - y), scheme,
                         pv_at=x, extra_decay=1.0)
    out0 = -h1 / math.pi
    out1 = h0 / math.pi
    if k != 0.0:
        w = k / (math.pi * (1.0 + k * k))
        c0 = _field_integral(
            field, lambda y: (f0(y) + k * _sgn(y) * f1(y)) / (abs(x) + np.abs(y)),
            scheme, extra_decay=1.0)
        c1 = _field_integral(
            field, lambda y: (k * f0(y) - _sgn(y) * f1(y)) / (abs(x) + np.abs(y)),
            scheme, extra_decay=1.0)
        out0 = out0 - w * c0
        out1 = out1 - w * _sgn(np.asarray(x)) * c1
    return np.asarray([out0, out1])


def hardy_projection(sign: int, field: BoundaryVectorField, x: float,
                     cfg: ProblemConfig, scheme: PVQuadratureScheme = DEFAULT_SCHEME) -> np.ndarray:
    """Spectral projections (1 +- sgn(T))/2 at x; sign is +1 or -1."""
    if sign not in (+1, -1):
        raise DomainError("sign must be +1 or -1")
    pointwise = np.asarray([complex(field.f0(np.asarray([x]))[0]),
                            complex(field.f1(np.asarray([x]))[0])])
    return 0.5 * (pointwise + sign * cauchy_singular(field, x, cfg, scheme))


def cauchy_extension(t: float, field: BoundaryVectorField, x: float,
                     cfg: ProblemConfig, scheme: PVQuadratureScheme = DEFAULT_SCHEME) -> np.ndarray:
    """exp(-t|T|) chi_+(T) at (t, x): the solution field above the boundary.

    Poisson/conjugate-Poisson block plus the k/(1+k^2)-weighted coupling
    block with denominators t^2 + (|x|+|y|)^2.
    """
    if t <= 0:
        raise DomainError("t must be positive")
    _check_interface(x, cfg.k)
    k = cfg.k
    f0, f1 = field.f0, field.f1

    def main0(y):
        return (t * f0(y) - (x - y) * f1(y)) / (t * t + (x - y) ** 2)

    def main1(y):
        return (t * f1(y) + (x - y) * f0(y)) / (t * t + (x - y) ** 2)

    kw = dict(concentrations=[(x, t), (0.0, max(t, abs(x)))], extra_decay=1.0)
    out0 = _field_integral(field, main0, scheme, **kw) / (2.0 * math.pi)
    out1 = _field_integral(field, main1, scheme, **kw) / (2.0 * math.pi)
    if k != 0.0:
        w = k / (1.0 + k * k) / (2.0 * math.pi)

        def coup0(y):
            ay = abs(x) + np.abs(y)
            num = t * (k * f0(y) - _sgn(y) * f1(y)) + ay * (f0(y) + k * _sgn(y) * f1(y))
            return num / (t * t + ay * ay)

        def coup1(y):
            ay = abs(x) + np.abs(y)
            num = t * (f0(y) + k * _sgn(y) * f1(y)) + ay * (-k * f0(y) + _sgn(y) * f1(y))
            return num / (t * t + ay * ay)

        out0 = out0 - w * _field_integral(field, coup0, scheme, **kw)
        out1 = out1 + w * _sgn(np.asarray(x)) * _field_integral(field, coup1, scheme, **kw)
    return np.asarray([out0, out1])


# ---------------------------------------------------------------------------
# double layer potential type operators
# ---------------------------------------------------------------------------

def double_layer(f: BoundarySample, x: float,
                 scheme: PVQuadratureScheme = DEFAULT_SCHEME) -> float:
    """K at x: sgn(x)/pi pv-int f/(x-y) dy - (1/pi) int f/(|x|+|y|) dy."""
    if x == 0.0:
        raise EvaluationOnInterface("double layer kernel uses sgn(x)")
    pv = _field_integral(_AsField(f), lambda y: f(y) / (x - y), scheme,
                         pv_at=x, extra_decay=1.0)
    coup = _field_integral(_AsField(f), lambda y: f(y) / (abs(x) + np.abs(y)), scheme,
                           extra_decay=1.0)
    return float((1.0 if x > 0 else -1.0) * pv / math.pi - coup / math.pi)


class _AsField:
    """Adapter: expose a single BoundarySample through the field interface."""

    def __init__(self, f: BoundarySample):
        self._f = f

    def window(self, radius):
        return self._f.window(radius)

    def breakpoints(self):
        return self._f.breakpoints()

    def features(self):
        return self._f.features

    def decay_rate(self):
        return self._f.decay_rate()

    def origin_power(self):
        return self._f.origin_power

    def is_compact(self):
        return self._f.is_compact()


def lp_boundedness_interval(p: float) -> tuple[float, float]:
    """alpha-range on which the weighted half-line operator is Lp-bounded."""
    return (-1.0 / p, 2.0 - 1.0 / p)


def halfline_double_layer(alpha: float, f: BoundarySample, x: float,
                          scheme: PVQuadratureScheme = DEFAULT_SCHEME,
                          p: float = 2.0) -> float:
    """Power-weighted half-line operator at x > 0:

        (2/pi) pv-int_0^inf x^alpha y^(1-alpha) / (x^2 - y^2) f(y) dy.

    The y^(1-alpha) endpoint weight (plus any power carried by f itself) is
    absorbed by a Gauss-Jacobi head panel.  Warns when alpha leaves the
    Lp-boundedness window (-1/p, 2-1/p): pointwise values may still exist.
    """
    if x <= 0.0:
        raise DomainError("evaluation point must be on the positive half-line")
    lo, hi = lp_boundedness_interval(p)
    if not (lo < alpha < hi):
        warnings.warn(
            f"alpha={alpha} outside Lp-boundedness range ({lo}, {hi}) for p={p}",
            BoundednessRangeViolation,
        )

    def kern(y):
        return (2.0 / math.pi) * x**alpha * y ** (1.0 - alpha) / (x * x - y * y) * f(y)

    a, b = f.window(scheme.truncation_radius)
    a = max(a, 0.0)
    compact = f.is_compact()
    power = (1.0 - alpha) + f.origin_power
    rate = None if compact else min(f.decay_rate() + 1.0 + alpha, 14.0)
    return float(np.real(line_integral(
        kern, scheme, (a, b if compact else math.inf),
        pv_at=x if (a < x) else None,
        power_at=(0.0, power) if a == 0.0 else None,
        breakpoints=f.breakpoints(),
        concentrations=tuple(f.features),
        tail_rate=rate,
    )))


# ---------------------------------------------------------------------------
# log-line Fourier symbols
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MultiplierSymbol:
    """Fourier symbol on the log-line of the weighted half-line operator.

    m_gamma(xi) = i (1 + e^{pi(xi + i gamma)}) / (1 - e^{pi(xi + i gamma)}),
    bounded on the line exactly for gamma in (0, 2).
    """

    gamma: float

    def __call__(self, xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        # keep real exponents non-positive on both sides of xi = 0:
        # for xi < 0 use w = e^{pi(xi + i gamma)} directly, for xi >= 0 the
        # equivalent form -i(1 + 1/w)/(1 - 1/w) with 1/w = e^{-pi(xi + i gamma)}
        decay = np.exp(-math.pi * np.abs(xi))
        w = decay * np.exp(1j * math.pi * self.gamma)
        winv = decay * np.exp(-1j * math.pi * self.gamma)
        neg = 1j * (1.0 + w) / (1.0 - w)
        pos = -1j * (1.0 + winv) / (1.0 - winv)
        return np.where(xi >= 0.0, pos, neg)


def log_line_symbol(gamma: float) -> MultiplierSymbol:
    """Symbol of the log-line convolution (2/pi) pv e^{gamma t}/(e^{2t}-1) *.

    Requires gamma in (0, 2); outside, the convolution is unbounded and the
    symbol has poles.
    """
    if not (0.0 < gamma < 2.0):
        raise OutOfBoundednessRange(f"gamma={gamma} outside (0, 2)")
    return MultiplierSymbol(float(gamma))


def halfline_double_layer_log_grid(alpha: float, values_on_x: np.ndarray, p: float,
                                   grid: LogLineGrid = DEFAULT_LOG_GRID) -> np.ndarray:
    """Grid-to-grid weighted half-line operator via its log-line symbol.

    `values_on_x` are f(e^t) on the grid's log nodes; returns K f(e^t).
    The isometry f -> e^{t/p} f(e^t) conjugates the operator into a log-line
    convolution with symbol index gamma = alpha + 1/p.
    """
    gamma = alpha + 1.0 / p
    sym = log_line_symbol(gamma)
    t = grid.nodes()
    weighted = np.exp(t / p) * np.asarray(values_on_x)
    out_w = log_line_multiplier_apply(weighted, sym, grid)
    return np.exp(-t / p) * out_w


def apply_halfline_op(op_sign: str, k: float, f: BoundarySample, cfg: ProblemConfig,
                      grid: LogLineGrid = DEFAULT_LOG_GRID) -> BoundarySample:
    """(I -+ k K0) f on the positive half-line, via the log-grid symbol route.

    Companion of :func:`invert_half_line` for round-trip checks; returns a
    spline-backed sample like the inverse does.
    """
    if op_sign not in ("+", "-"):
        raise DomainError("op_sign must be '+' or '-'")
    if k == 0.0:
        return f
    ksign = -1.0 if op_sign == "-" else 1.0
    p = cfg.p
    t = grid.nodes()
    fvals = _log_grid_samples(f, grid)
    kvals = halfline_double_layer_log_grid(0.0, fvals, p, grid)
    return _spline_sample(
        t, np.exp(t / p) * (fvals + ksign * k * kvals), p,
        support=AlgebraicDecay(min(f.decay_rate(), 2.0)),
        smoothness=f.smoothness,
        origin_power=min(f.origin_power, 0.0),
        features=f.features,
        name=f"(I{op_sign}kK0){f.name and '[' + f.name + ']'}",
    )


def _log_grid_samples(f: BoundarySample, grid: LogLineGrid) -> np.ndarray:
    """Values of f on e^t over the grid, cached on the sample itself."""
    key = ("log-grid", grid.t0, grid.t1, grid.n)
    if key not in f.samples:
        f.samples[key] = np.asarray(f(np.exp(grid.nodes())))
    return f.samples[key]


def _spline_sample(t, weighted_vals, p, **meta) -> BoundarySample:
    """BoundarySample backed by a cubic spline of e^{t/p}-weighted log-grid values."""
    from scipy.interpolate import CubicSpline

    spline = CubicSpline(t, weighted_vals, extrapolate=False)

    def evaluator(y):
        y = np.asarray(y, dtype=float)
        out = np.zeros_like(y)
        pos = y > 0.0
        ty = np.log(y[pos])
        vals = spline(ty)
        vals = np.where(np.isnan(vals), 0.0, vals)
        out[pos] = np.exp(-ty / p) * vals
        return out

    return BoundarySample(evaluator, **meta)


# ---------------------------------------------------------------------------
# closed-form half-line inverses
# ---------------------------------------------------------------------------

def halfline_inverse_index(op_sign: str, k: float, p: float) -> float:
    """The alpha index used by the closed-form inverse of I -+ k K0 on Lp.

    For (I - kK0)^(-1) = (I + kK_a)/(1+k^2) pick tan(pi*a/2) = k with a in
    (-1/p, 2-1/p); for (I + kK0)^(-1) the a solving tan(pi*a/2) = -k.
    Raises NotInvertible when a lands on an interval endpoint, which happens
    exactly at the known threshold values of k.
    """
    if op_sign not in ("+", "-"):
        raise DomainError("op_sign must be '+' or '-'")
    target = -k if op_sign == "+" else k
    lo, hi = lp_boundedness_interval(p)
    base = 2.0 / math.pi * math.atan(target)
    for m in (-1, 0, 1):
        cand = base + 2.0 * m
        if lo + 1e-9 < cand < hi - 1e-9:
            return cand
    raise NotInvertible(
        f"I {op_sign} kK0 with k={k} is not invertible on L{p}: required index "
        f"hits the boundedness-range boundary ({lo}, {hi})"
    )


def invert_half_line(op_sign: str, k: float, f: BoundarySample, cfg: ProblemConfig,
                     scheme: PVQuadratureScheme = DEFAULT_SCHEME,
                     grid: LogLineGrid = DEFAULT_LOG_GRID) -> BoundarySample:
    """Apply (I -+ k K0)^(-1) on the positive half-line via the closed form.

    op_sign '-' inverts I - kK0 as (f + k K_a f)/(1+k^2); '+' inverts
    I + kK0 as (f - k K_b f)/(1+k^2) with the mirrored index b.  The
    weighted half-line operator is applied on the log grid (multiplier
    route) and returned as a spline-backed evaluator; the y->0 power and
    tail decay of the result are recorded in the sample metadata.
    """
    p = cfg.p
    beta = halfline_inverse_index(op_sign, k, p)
    ksign = 1.0 if op_sign == "-" else -1.0
    denom = 1.0 + k * k
    if k == 0.0:
        return f

    t = grid.nodes()
    fvals = _log_grid_samples(f, grid)
    kvals = halfline_double_layer_log_grid(beta, fvals, p, grid)
    weighted = np.exp(t / p) * (fvals + ksign * k * kvals) / denom
    return _spline_sample(
        t, weighted, p,
        support=AlgebraicDecay(min(f.decay_rate(), 2.0 - beta)),
        smoothness=f.smoothness,
        origin_power=min(f.origin_power, beta if beta < 0 else 0.0),
        features=f.features,
        name=f"inv({op_sign}k){f.name and '[' + f.name + ']'}",
    )
