"""Numerical integration engines.

Four distinct jobs, each matched to the singular structure it meets:

* principal values with an interior simple pole -- symmetric excision on
  pole-aligned dyadic panels, then Neville extrapolation of the excision
  radius to zero (the excision error is regular in the radius);
* integrable endpoint singularities |y - e|^power -- one Gauss-Jacobi panel
  absorbing the weight exactly, dyadic Gauss-Legendre panels beyond it;
* algebraic tails on [R, inf) -- interval-doubling partial integrals with
  Richardson elimination of the hinted decay exponents;
* dilation-invariant half-line convolutions -- uniform grid on the log
  axis, FFT, pointwise symbol multiplication, inverse FFT.

All node placement avoids y = 0, declared breakpoints, and pole locations
exactly: Gauss nodes are interior to their panels by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.special import roots_jacobi

from .errors import (
    NonConvergent,
    NonIntegrable,
    QuadratureFailure,
    SingularityOnBoundary,
    TailTooSlow,
    WindowLeak,
)


class PanelRule(Enum):
    GAUSS_LEGENDRE = "gauss-legendre"
    CLENSHAW_CURTIS = "clenshaw-curtis"


@lru_cache(maxsize=64)
def _reference_rule(rule: PanelRule, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights on the open reference interval (-1, 1)."""
    if rule is PanelRule.GAUSS_LEGENDRE:
        return np.polynomial.legendre.leggauss(n)
    # Fejer-2 flavor of Clenshaw-Curtis: endpoints dropped so panels never
    # evaluate on their edges, where poles and breakpoints sit.
    j = np.arange(1, n + 1)
    theta = j * np.pi / (n + 1)
    x = np.cos(theta)
    w = np.zeros(n)
    for idx, th in enumerate(theta):
        s = sum(math.sin((2 * m - 1) * th) / (2 * m - 1) for m in range(1, (n + 1) // 2 + 1))
        w[idx] = 4.0 * math.sin(th) / (n + 1) * s
    return x, w


@dataclass(frozen=True)
class PVQuadratureScheme:
    """Knobs for all singular quadrature in the package.

    excision_radii must be strictly decreasing; they set the symmetric holes
    cut around a principal-value pole before extrapolation to radius zero.
    grading_exponent deepens the Gauss-Jacobi head panel near integrable
    singularities; truncation_radius / tail_exponent_hint control where an
    infinite domain is cut and how the algebraic remainder is extrapolated.
    """

    excision_radii: tuple[float, ...] = (0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125)
    extrapolation_order: int = 3
    panel_rule: PanelRule = PanelRule.GAUSS_LEGENDRE
    points_per_panel: int = 16
    grading_exponent: float = 3.0
    truncation_radius: float = 50.0
    tail_exponent_hint: float = 2.0

    def __post_init__(self) -> None:
        radii = tuple(float(r) for r in self.excision_radii)
        if len(radii) < self.extrapolation_order + 1:
            raise ValueError("need at least extrapolation_order + 1 excision radii")
        if any(r <= 0 for r in radii) or any(a <= b for a, b in zip(radii, radii[1:])):
            raise ValueError("excision radii must be positive and strictly decreasing")
        if self.extrapolation_order < 1:
            raise ValueError("extrapolation_order must be >= 1")
        if self.points_per_panel < 4:
            raise ValueError("points_per_panel must be >= 4")
        if self.grading_exponent < 1.0:
            raise ValueError("grading_exponent must be >= 1")
        if self.truncation_radius <= 0:
            raise ValueError("truncation_radius must be positive")
        object.__setattr__(self, "excision_radii", radii)

    def with_tail(self, rate: float, radius: float | None = None) -> "PVQuadratureScheme":
        return PVQuadratureScheme(
            excision_radii=self.excision_radii,
            extrapolation_order=self.extrapolation_order,
            panel_rule=self.panel_rule,
            points_per_panel=self.points_per_panel,
            grading_exponent=self.grading_exponent,
            truncation_radius=self.truncation_radius if radius is None else radius,
            tail_exponent_hint=rate,
        )


DEFAULT_SCHEME = PVQuadratureScheme()


@dataclass(frozen=True)
class QuadratureResult:
    """Value plus the extrapolation trace that produced it."""

    value: complex | float
    error_estimate: float
    levels: tuple[float, ...] = ()

    def __float__(self) -> float:
        return float(np.real(self.value))


# ---------------------------------------------------------------------------
# panel machinery
# ---------------------------------------------------------------------------

def _panel_nodes(edges: np.ndarray, rule: PanelRule, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Concatenated nodes/weights for Gauss panels between consecutive edges."""
    x, w = _reference_rule(rule, n)
    lo = edges[:-1][:, None]
    hi = edges[1:][:, None]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo) + half * x[None, :]).ravel()
    weights = (half * w[None, :]).ravel()
    return nodes, weights


def _integrate_edges(f, edges: np.ndarray, rule: PanelRule, n: int):
    if len(edges) < 2:
        return 0.0
    nodes, weights = _panel_nodes(edges, rule, n)
    return np.sum(np.asarray(f(nodes)) * weights)


def _edges_toward(anchor: float, lo: float, hi: float, ratio: float = 2.0,
                  first: float | None = None) -> np.ndarray:
    """Edges covering [lo, hi] with panel widths shrinking toward `anchor`.

    The anchor must lie outside (lo, hi); it may coincide with an endpoint,
    in which case `first` sets the width of the innermost panel (default:
    span / 2**30, fine enough for near-singular smooth kernels).
    """
    if hi <= lo:
        return np.asarray([lo, hi]) if hi == lo else np.asarray([])
    span = hi - lo
    if anchor <= lo:
        d_near, d_far = lo - anchor, hi - anchor
        if d_near <= 0 or d_near < span * 2.0**-30:
            d_near = first if first is not None else span * 2.0**-30
        ds = [d_near]
        while ds[-1] * ratio < d_far:
            ds.append(ds[-1] * ratio)
        ds.append(d_far)
        edges = anchor + np.asarray(ds)
        edges[0] = lo
        return np.unique(np.clip(edges, lo, hi))
    if anchor >= hi:
        mirrored = _edges_toward(-anchor, -hi, -lo, ratio=ratio, first=first)
        return np.unique(-mirrored[::-1])
    raise ValueError("anchor must lie outside the open interval")


# ---------------------------------------------------------------------------
# principal values
# ---------------------------------------------------------------------------

def _neville_to_zero(xs: Sequence[float], ys: Sequence, order: int):
    """Extrapolate samples (xs, ys) polynomially to x = 0, degree <= order.

    xs are the (decreasing) excision radii.  Returns the final estimate and
    the level sequence: at each level i the sliding extrapolant of maximal
    allowed degree ending at radius i.
    """
    m = len(xs)
    cols = [list(ys)]
    for j in range(1, m):
        prev = cols[j - 1]
        col = []
        for i in range(m - j):
            x_lo, x_hi = xs[i], xs[i + j]
            col.append((x_lo * prev[i + 1] - x_hi * prev[i]) / (x_lo - x_hi))
        cols.append(col)
    capped = []
    for i in range(m):
        j = min(i, order)
        capped.append(cols[j][i - j])
    return capped[-1], capped


def pv_integral(
    f: Callable[[np.ndarray], np.ndarray],
    x0: float,
    domain: tuple[float, float],
    scheme: PVQuadratureScheme = DEFAULT_SCHEME,
) -> QuadratureResult:
    """Principal value of f over `domain` with at worst a simple pole at x0.

    f is the complete integrand, pole included.  Symmetric excision windows
    at the scheme radii are extrapolated to radius zero; if x0 lies outside
    the open domain the integral is regular and done on refined panels.
    The error estimate is the gap between the last two extrapolants.
    """
    a, b = float(domain[0]), float(domain[1])
    if not a < b:
        raise QuadratureFailure(f"empty domain ({a}, {b})")
    scale = max(abs(a), abs(b), 1e-30)
    if abs(x0 - a) <= 1e-13 * scale or abs(x0 - b) <= 1e-13 * scale:
        raise SingularityOnBoundary(f"pole x0={x0} on a domain endpoint of [{a}, {b}]")

    rule, n = scheme.panel_rule, scheme.points_per_panel

    if not (a < x0 < b):
        edges = _edges_toward(x0, a, b)
        edges = np.unique(np.concatenate([edges, np.linspace(a, b, 5)]))
        fine_edges = np.unique(np.concatenate([edges, 0.5 * (edges[:-1] + edges[1:])]))
        coarse = _integrate_edges(f, edges, rule, n)
        fine = _integrate_edges(f, fine_edges, rule, n)
        return QuadratureResult(fine, abs(fine - coarse),
                                (float(np.real(coarse)), float(np.real(fine))))

    reach = min(x0 - a, b - x0)
    radii = [r for r in scheme.excision_radii if r < 0.5 * reach]
    if len(radii) < scheme.extrapolation_order + 1:
        m = max(len(scheme.excision_radii), scheme.extrapolation_order + 1)
        radii = [0.25 * reach * 0.5**j for j in range(m)]

    # dyadic ladder from the smallest radius outward; every excision radius
    # is on it, so each excised integral is an exact partial sum of panels
    ladder = set(radii)
    d = radii[-1]
    while d < reach:
        ladder.add(d)
        d *= 2.0
    ladder = np.asarray(sorted(ladder))
    inner_edges = np.concatenate([x0 - ladder[::-1], x0 + ladder])
    left_out = _edges_toward(x0, a, x0 - ladder[-1]) if x0 - ladder[-1] > a else np.asarray([])
    right_out = _edges_toward(x0, x0 + ladder[-1], b) if x0 + ladder[-1] < b else np.asarray([])
    edges = np.unique(np.concatenate([np.asarray([a, b]), left_out, inner_edges, right_out]))
    edges = edges[(edges >= a) & (edges <= b)]

    nodes, weights = _panel_nodes(edges, rule, n)
    vals = np.asarray(f(nodes)) * weights
    panel_sums = vals.reshape(len(edges) - 1, n).sum(axis=1)
    centers = 0.5 * (edges[:-1] + edges[1:])

    estimates = [panel_sums[np.abs(centers - x0) > eps].sum() for eps in radii]
    gross = float(np.sum(np.abs(vals)))
    if max(abs(e) for e in estimates) <= 1e-15 * gross:
        # symmetric cancellation down to rounding: extrapolating the noise
        # would only amplify it
        return QuadratureResult(estimates[-1], 1e-15 * gross,
                                tuple(float(np.real(e)) for e in estimates))
    value, capped = _neville_to_zero(radii, estimates, scheme.extrapolation_order)
    diffs = [abs(capped[i + 1] - capped[i]) for i in range(len(capped) - 1)]
    err = diffs[-1] if diffs else 0.0
    # diverging means the last gap grew AND remains a significant fraction of
    # the initial correction; ticks at the rounding/interpolation floor pass
    if (len(diffs) >= 3 and diffs[-1] > 5.0 * diffs[-2]
            and diffs[-1] > 0.25 * diffs[0]
            and diffs[-1] > 1e-9 * max(1.0, abs(value))):
        raise NonConvergent(f"pv extrapolants diverge near x0={x0}: level gaps {diffs}")
    return QuadratureResult(value, err, tuple(float(np.real(c)) for c in capped))


# ---------------------------------------------------------------------------
# graded endpoint singularities
# ---------------------------------------------------------------------------

def _jacobi_panel(f, a: float, b: float, endpoint: float, power: float, n: int):
    """Integrate f over [a, b] with f ~ |y - endpoint|^power at an endpoint.

    Gauss-Jacobi absorbs the power weight exactly; the integrand is divided
    by it and must be smooth after division.
    """
    if power == 0.0:
        return _integrate_edges(f, np.asarray([a, b]), PanelRule.GAUSS_LEGENDRE, n)
    if endpoint == a:
        x, w = roots_jacobi(n, 0.0, power)  # weight (1+x)^power, singular end x=-1
    else:
        x, w = roots_jacobi(n, power, 0.0)
    half = 0.5 * (b - a)
    nodes = 0.5 * (a + b) + half * x
    vals = np.asarray(f(nodes)) * np.abs(nodes - endpoint) ** (-power)
    return half ** (power + 1.0) * np.sum(vals * w)


def graded_integral(
    f: Callable[[np.ndarray], np.ndarray],
    singular_endpoint: float,
    power: float,
    domain: tuple[float, float],
    scheme: PVQuadratureScheme = DEFAULT_SCHEME,
) -> QuadratureResult:
    """Integral of f over `domain` with f ~ c|y - endpoint|^power, power > -1.

    The singular point must be a domain endpoint.  An infinite far end is
    truncated at the scheme radius and finished by tail extrapolation.
    """
    if power <= -1.0:
        raise NonIntegrable(f"declared endpoint power {power} <= -1")
    a, b = float(domain[0]), float(domain[1])
    e = float(singular_endpoint)
    n = scheme.points_per_panel

    tail = 0.0
    tail_err = 0.0
    if math.isinf(b):
        b = e + scheme.truncation_radius
        res = _tail_beyond(f, b, scheme.tail_exponent_hint, scheme)
        tail, tail_err = res.value, res.error_estimate
    if math.isinf(a):
        raise QuadratureFailure("mirror the integrand instead of using a left-infinite domain")
    if not (abs(e - a) <= 1e-12 * max(1.0, abs(a)) or abs(e - b) <= 1e-12 * max(1.0, abs(b))):
        raise QuadratureFailure(f"singular point {e} is not an endpoint of [{a}, {b}]")

    length = b - a
    frac = 2.0 ** (-2.0 * min(scheme.grading_exponent, 6.0))
    if abs(e - a) < abs(e - b):
        split = a + frac * length
        head = _jacobi_panel(f, a, split, a, power, 2 * n)
        edges = _edges_toward(a, split, b)
    else:
        split = b - frac * length
        head = _jacobi_panel(f, split, b, b, power, 2 * n)
        edges = _edges_toward(b, a, split)
    body = _integrate_edges(f, edges, scheme.panel_rule, n)
    fine_edges = np.unique(np.concatenate([edges, 0.5 * (edges[:-1] + edges[1:])]))
    body_fine = _integrate_edges(f, fine_edges, scheme.panel_rule, n)
    err = abs(body_fine - body) + tail_err
    return QuadratureResult(head + body_fine + tail, err)


# ---------------------------------------------------------------------------
# half-line tails
# ---------------------------------------------------------------------------

def _tail_beyond(f, R: float, hint: float, scheme: PVQuadratureScheme,
                 levels: int = 7) -> QuadratureResult:
    """Integral of f over [R, inf) assuming f ~ c y^{-hint} (hint > 1).

    Partial integrals over doubling windows are Richardson-extrapolated,
    eliminating the exponents hint-1, hint, hint+1, hint+2 in turn.
    """
    if hint <= 1.0:
        raise TailTooSlow(f"tail exponent hint {hint} <= 1: tail not integrable")
    n = scheme.points_per_panel
    partials = [0.0]
    Rj = R
    for _ in range(levels):
        seg_edges = np.geomspace(Rj, 2.0 * Rj, 5)
        partials.append(partials[-1] + _integrate_edges(f, seg_edges, scheme.panel_rule, n))
        Rj *= 2.0

    vals = list(partials)
    for l in range(min(4, len(vals) - 1)):
        fac = 2.0 ** (hint - 1.0 + l)
        vals = [(fac * vals[i + 1] - vals[i]) / (fac - 1.0) for i in range(len(vals) - 1)]
    err = abs(vals[-1] - vals[-2]) if len(vals) >= 2 else math.inf
    return QuadratureResult(vals[-1], err)


def halfline_tail_integral(
    f: Callable[[np.ndarray], np.ndarray],
    scheme: PVQuadratureScheme = DEFAULT_SCHEME,
    lower: float = 0.0,
) -> QuadratureResult:
    """Integral of a smooth algebraically-decaying f over [lower, inf).

    Splits at the truncation radius; the head is covered by geometric
    panels, the tail extrapolated using the scheme's exponent hint.
    """
    lo = float(lower)
    R = max(scheme.truncation_radius, 2.0 * abs(lo) + 1.0)
    head_edges = _edges_toward(lo, lo, R, first=max(1e-3, 0.01 * max(abs(lo), 1.0)))
    head = _integrate_edges(f, head_edges, scheme.panel_rule, scheme.points_per_panel)
    tail = _tail_beyond(f, R, scheme.tail_exponent_hint, scheme)
    return QuadratureResult(head + tail.value, tail.error_estimate)


# ---------------------------------------------------------------------------
# log-line Fourier multipliers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogLineGrid:
    """Uniform grid on the log axis t = log x, covering x in (e^t0, e^t1)."""

    t0: float = -128.0
    t1: float = 128.0
    n: int = 1 << 15

    @property
    def spacing(self) -> float:
        return (self.t1 - self.t0) / self.n

    def nodes(self) -> np.ndarray:
        return self.t0 + self.spacing * np.arange(self.n)

    def frequencies(self) -> np.ndarray:
        """Angular frequencies matching g^(xi) = int g(t) e^{-i xi t} dt."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)


DEFAULT_LOG_GRID = LogLineGrid()

#: relative size above which boundary samples on the log grid are rejected
WINDOW_LEAK_TOL = 1e-10


def log_line_multiplier_apply(
    values: np.ndarray,
    symbol: Callable[[np.ndarray], np.ndarray],
    grid: LogLineGrid = DEFAULT_LOG_GRID,
) -> np.ndarray:
    """Apply the Fourier multiplier `symbol` to samples on a uniform log grid.

    Forward FFT, pointwise multiply, inverse FFT.  Periodization demands
    decay at both window ends, enforced by the window-leak check.
    """
    v = np.asarray(values)
    if v.shape != (grid.n,):
        raise QuadratureFailure(f"expected {grid.n} samples, got shape {v.shape}")
    peak = np.max(np.abs(v))
    if peak > 0.0:
        edge = max(np.max(np.abs(v[:4])), np.max(np.abs(v[-4:])))
        if edge > WINDOW_LEAK_TOL * peak:
            raise WindowLeak(
                f"samples at window ends ({edge:.3e}) exceed "
                f"{WINDOW_LEAK_TOL:.0e} of peak ({peak:.3e})"
            )
    spec = np.fft.fft(v) * symbol(grid.frequencies())
    out = np.fft.ifft(spec)
    if np.isrealobj(v) and np.max(np.abs(out.imag)) <= 1e-9 * max(peak, 1e-300):
        return out.real
    return out


# ---------------------------------------------------------------------------
# boundary data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompactSupport:
    a: float
    b: float


@dataclass(frozen=True)
class AlgebraicDecay:
    rate: float = 2.0


@dataclass(frozen=True)
class ExponentialDecay:
    scale: float = 1.0


SupportHint = CompactSupport | AlgebraicDecay | ExponentialDecay


@dataclass(frozen=True)
class Smooth:
    pass


@dataclass(frozen=True)
class PiecewiseSmooth:
    breakpoints: tuple[float, ...]


SmoothnessHint = Smooth | PiecewiseSmooth


@dataclass
class BoundarySample:
    """A scalar boundary function: an evaluator plus decay/smoothness metadata.

    origin_power records known |y|^power behavior at y = 0 (densities built
    from half-line inverses carry fractional powers there); 0 means regular.
    `samples` caches values on reusable grids, keyed by the producer.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    support: SupportHint = field(default_factory=AlgebraicDecay)
    smoothness: SmoothnessHint = field(default_factory=Smooth)
    origin_power: float = 0.0
    features: tuple[tuple[float, float], ...] = ()  # (center, scale) peaks
    name: str = ""
    samples: dict = field(default_factory=dict, repr=False, compare=False)

    def __call__(self, y) -> np.ndarray:
        return np.asarray(self.evaluator(np.asarray(y, dtype=float)))

    def breakpoints(self) -> tuple[float, ...]:
        if isinstance(self.smoothness, PiecewiseSmooth):
            return self.smoothness.breakpoints
        return ()

    def window(self, default_radius: float) -> tuple[float, float]:
        """Interval outside which the function is zero or tail-extrapolable."""
        if isinstance(self.support, CompactSupport):
            return (self.support.a, self.support.b)
        return (-default_radius, default_radius)

    def decay_rate(self) -> float:
        """Algebraic decay exponent usable in tail extrapolation hints."""
        if isinstance(self.support, AlgebraicDecay):
            return self.support.rate
        if isinstance(self.support, ExponentialDecay):
            return 12.0  # treated as faster than any algebraic hint we use
        return math.inf  # compact support: no tail at all

    def is_compact(self) -> bool:
        return isinstance(self.support, CompactSupport)


def _bump(y: np.ndarray, center: float, width: float) -> np.ndarray:
    s = (y - center) / width
    out = np.zeros_like(s)
    m = np.abs(s) < 1.0
    out[m] = np.exp(-1.0 / (1.0 - s[m] ** 2))
    return out


def _bump_derivative(y: np.ndarray, center: float, width: float) -> np.ndarray:
    s = (y - center) / width
    out = np.zeros_like(s)
    m = np.abs(s) < 1.0
    sm = s[m]
    out[m] = np.exp(-1.0 / (1.0 - sm**2)) * (-2.0 * sm / (1.0 - sm**2) ** 2) / width
    return out


def preset_sample(name: str, center: float = 0.0, width: float = 1.0) -> BoundarySample:
    """Boundary-data presets: gaussian, bump, bump-prime, indicator, rational, hat."""
    if name == "gaussian":
        return BoundarySample(
            lambda y: np.exp(-(((y - center) / width) ** 2)),
            support=ExponentialDecay(width),
            features=((center, width),),
            name=name,
        )
    if name == "bump":
        return BoundarySample(
            lambda y: _bump(np.asarray(y, dtype=float), center, width),
            support=CompactSupport(center - width, center + width),
            features=((center, width),
                      (center - width, width / 64.0), (center + width, width / 64.0)),
            name=name,
        )
    if name == "bump-prime":
        return BoundarySample(
            lambda y: _bump_derivative(np.asarray(y, dtype=float), center, width),
            support=CompactSupport(center - width, center + width),
            features=((center, width),
                      (center - width, width / 64.0), (center + width, width / 64.0)),
            name=name,
        )
    if name == "indicator":
        a, b = center + width, center + 2.0 * width
        return BoundarySample(
            lambda y: ((y > a) & (y < b)).astype(float),
            support=CompactSupport(a, b),
            smoothness=PiecewiseSmooth((a, b)),
            features=((0.5 * (a + b), 0.5 * (b - a)),),
            name=name,
        )
    if name == "rational":
        return BoundarySample(
            lambda y: width / (np.pi * (width**2 + (y - center) ** 2)),
            support=AlgebraicDecay(2.0),
            features=((center, width),),
            name=name,
        )
    if name == "hat":
        return BoundarySample(
            lambda y: np.maximum(0.0, 1.0 - np.abs((y - center) / width)),
            support=CompactSupport(center - width, center + width),
            smoothness=PiecewiseSmooth((center - width, center, center + width)),
            features=((center, width),),
            name=name,
        )
    raise ValueError(f"unknown preset {name!r}")


PRESET_NAMES = ("gaussian", "bump", "bump-prime", "indicator", "rational", "hat")


# ---------------------------------------------------------------------------
# composite line integrals (shared by the operator kernels)
# ---------------------------------------------------------------------------

def line_integral(
    f: Callable[[np.ndarray], np.ndarray],
    scheme: PVQuadratureScheme,
    domain: tuple[float, float],
    *,
    pv_at: float | None = None,
    power_at: tuple[float, float] | None = None,
    breakpoints: Sequence[float] = (),
    concentrations: Sequence[tuple[float, float]] = (),
    tail_rate: float | None = None,
):
    """Integrate f over `domain` with mixed singular structure.

    pv_at: interior simple pole (principal value).
    power_at: (point, power) integrable singularity at a domain endpoint.
    breakpoints: interior kinks; panel edges are pinned there.
    concentrations: (point, scale) near-singular smooth peaks, e.g. Poisson
        kernels at small height; panels refine dyadically down to the scale.
    tail_rate: algebraic decay exponent of f itself, for infinite ends.

    Returns the bare value; this is the inner loop of every operator.
    """
    a, b = float(domain[0]), float(domain[1])
    R = scheme.truncation_radius
    for c, s in concentrations:
        R = max(R, 4.0 * (abs(c) + abs(s)))
    if pv_at is not None:
        R = max(R, 4.0 * abs(pv_at) + 1.0)
    for p in breakpoints:
        if math.isfinite(p):
            R = max(R, 2.0 * abs(p) + 1.0)

    hint = scheme.tail_exponent_hint if tail_rate is None else tail_rate
    total = 0.0

    if math.isinf(b):
        b = R
        total += _tail_beyond(f, R, hint, scheme).value
    if math.isinf(a):
        a = -R
        total += _tail_beyond(lambda y: f(-np.asarray(y)), R, hint, scheme).value

    # segment at interior breakpoints; also separate an endpoint power
    # singularity from an interior pole so each segment has one job
    cuts = sorted({p for p in breakpoints if a < p < b})
    if power_at is not None and pv_at is not None:
        pt = power_at[0]
        if a < pv_at < b and not any(pt < c < pv_at or pv_at < c < pt for c in cuts):
            mid = 0.5 * (pt + pv_at)
            if a < mid < b:
                cuts = sorted(set(cuts) | {mid})
    seg_edges = [a, *cuts, b]

    def regular_piece(lo: float, hi: float):
        """Concentration-aware panel integral of a pole-free piece."""
        if hi - lo <= 0:
            return 0.0
        edge_sets = [np.linspace(lo, hi, 17)]
        if lo < 0.0 < hi:  # kernels built from |y| and sgn(y) vary near 0
            if lo < -2.0**-20 * (hi - lo):
                edge_sets.append(_edges_toward(0.0, lo, -2.0**-20 * (hi - lo)))
            if hi > 2.0**-20 * (hi - lo):
                edge_sets.append(_edges_toward(0.0, 2.0**-20 * (hi - lo), hi))
        for c, s in concentrations:
            s = max(abs(s), 2.0**-40 * (hi - lo))
            if lo < c < hi:
                if c - s > lo:
                    edge_sets.append(_edges_toward(c, lo, c - s))
                if c + s < hi:
                    edge_sets.append(_edges_toward(c, c + s, hi))
                edge_sets.append(np.asarray([max(lo, c - s), min(hi, c + s)]))
            else:
                edge_sets.append(_edges_toward(c, lo, hi, first=s if abs(
                    c - (lo if c <= lo else hi)) < s else None))
        if pv_at is not None and not (lo < pv_at < hi):
            edge_sets.append(_edges_toward(pv_at, lo, hi))
        edges = np.unique(np.concatenate(edge_sets))
        edges = edges[(edges >= lo) & (edges <= hi)]
        if len(edges) < 2 or edges[0] > lo or edges[-1] < hi:
            edges = np.unique(np.concatenate([[lo, hi], edges]))
        return _integrate_edges(f, edges, scheme.panel_rule, scheme.points_per_panel)

    for s0, s1 in zip(seg_edges[:-1], seg_edges[1:]):
        if s1 - s0 <= 0:
            continue
        lo, hi = s0, s1
        if power_at is not None:
            pt, power = power_at
            tol = 1e-12 * max(1.0, abs(pt))
            if abs(pt - lo) <= tol and power != 0.0:
                split = lo + 2.0**-6 * (hi - lo)
                total += _jacobi_panel(f, lo, split, lo, power, 2 * scheme.points_per_panel)
                lo = split
            elif abs(pt - hi) <= tol and power != 0.0:
                split = hi - 2.0**-6 * (hi - lo)
                total += _jacobi_panel(f, split, hi, hi, power, 2 * scheme.points_per_panel)
                hi = split

        if pv_at is not None and lo < pv_at < hi:
            # keep the excision machinery on a tight window around the pole;
            # the rest of the segment gets the feature-aware panels (a far
            # pole must not starve data regions of resolution)
            d = 0.5 * min(pv_at - lo, hi - pv_at)
            d = min(d, 4.0 * scheme.excision_radii[0])
            total += pv_integral(f, pv_at, (pv_at - d, pv_at + d), scheme).value
            total += regular_piece(lo, pv_at - d)
            total += regular_piece(pv_at + d, hi)
        else:
            total += regular_piece(lo, hi)

    return total
