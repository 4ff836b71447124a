"""Boundary value problem solvers and the signed Poisson kernel.

The Dirichlet solution is an integral against the explicit kernel

  P_a(t,x;y) = [2xty + |y|^-a Im{(|x|+it)^(a+1) (y^2-(|x|-it)^2)}]
               / (pi (t^2+(x-y)^2)(t^2+(x+y)^2)),

with tan(pi*a/2) = k and `a` taken from the configured branch.  At a = 0 it
collapses to the classical Poisson kernel; on the axis x = 0 it reduces to
(cos(pi*a/2)/pi) t^(1+a) |y|^-a / (t^2+y^2).  The same solution is reached
through a two-step route: invert the boundary equation for a density, then
apply the Cauchy-extension kernel; both routes are kept and cross-checked.

Neumann and regularity problems are solved operationally: the half-line
boundary equations are inverted with the closed-form inverse (never a dense
solve) and the gradient field is the Cauchy extension of the stated ansatz.

Complex powers (|x|+it)^(a+1) use the principal branch; since |x| >= 0 and
t > 0 the argument stays in (0, pi/2] and no cut is crossed.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np

from .config import (
    Branch,
    Problem,
    ProblemConfig,
    SOLVER_THRESHOLD_BAND,
    near_threshold,
)
from .errors import DomainError, NotWellPosed
from .operators import (
    BoundaryVectorField,
    cauchy_extension,
    halfline_double_layer,
    halfline_double_layer_log_grid,
    invert_half_line,
)
from .quadrature import (
    DEFAULT_LOG_GRID,
    DEFAULT_SCHEME,
    AlgebraicDecay,
    BoundarySample,
    CompactSupport,
    LogLineGrid,
    PVQuadratureScheme,
    PiecewiseSmooth,
    line_integral,
)


def max_threads() -> int:
    """Worker cap for grid assembly, from HALFPLANE_BVP_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("HALFPLANE_BVP_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# kernel
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PoissonKernelParams:
    """alpha in (-2, 1) plus the branch it came from."""

    alpha: float
    branch_tag: Branch = Branch.H1

    def __post_init__(self) -> None:
        if not (-2.0 < self.alpha < 1.0):
            raise DomainError(
                f"alpha={self.alpha} outside (-2, 1): kernel not locally "
                "integrable (alpha >= 1) or not decaying (alpha <= -2)"
            )

    @classmethod
    def from_config(cls, cfg: ProblemConfig) -> "PoissonKernelParams":
        return cls(cfg.alpha, cfg.branch)


def poisson_kernel(alpha: float, t: float, x: float, y) -> np.ndarray:
    """Signed harmonic-measure density P_alpha(t, x; y); vectorized in y."""
    if not (-2.0 < alpha < 1.0):
        raise DomainError(f"alpha={alpha} outside (-2, 1)")
    if t <= 0.0:
        raise DomainError("t must be positive")
    y = np.asarray(y, dtype=float)
    if np.any(y == 0.0):
        raise DomainError("kernel is singular at y = 0; place nodes off it")
    base = complex(abs(x), t)
    num = 2.0 * x * t * y + np.abs(y) ** (-alpha) * np.imag(
        base ** (alpha + 1.0) * (y * y - np.conj(base) ** 2)
    )
    den = math.pi * (t * t + (x - y) ** 2) * (t * t + (x + y) ** 2)
    return num / den


def axis_kernel(alpha: float, t: float, y) -> np.ndarray:
    """Axis restriction: (cos(pi a/2)/pi) t^(1+a) |y|^-a / (t^2 + y^2)."""
    if not (-2.0 < alpha < 1.0):
        raise DomainError(f"alpha={alpha} outside (-2, 1)")
    if t <= 0.0:
        raise DomainError("t must be positive")
    y = np.asarray(y, dtype=float)
    return (
        math.cos(math.pi * alpha / 2.0)
        / math.pi
        * t ** (1.0 + alpha)
        * np.abs(y) ** (-alpha)
        / (t * t + y * y)
    )


# ---------------------------------------------------------------------------
# field grids
# ---------------------------------------------------------------------------

class GridKind(Enum):
    POTENTIAL = "potential"
    GRADIENT = "gradient"


@dataclass
class FieldGrid:
    """Solution samples on a tensor grid: levels t > 0, nodes x != 0."""

    t_levels: np.ndarray
    x_nodes: np.ndarray
    values: np.ndarray
    kind: GridKind

    def __post_init__(self) -> None:
        self.t_levels = np.asarray(self.t_levels, dtype=float)
        self.x_nodes = np.asarray(self.x_nodes, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if np.any(self.t_levels <= 0.0) or np.any(np.diff(self.t_levels) <= 0.0):
            raise DomainError("t levels must be positive and increasing")
        if np.any(self.x_nodes == 0.0):
            raise DomainError("x nodes must avoid the interface x = 0")
        if np.max(np.abs(self.x_nodes + self.x_nodes[::-1])) > 1e-12 * np.max(np.abs(self.x_nodes)):
            raise DomainError("x nodes must be symmetric about 0")
        want = (len(self.t_levels), len(self.x_nodes))
        if self.kind is GridKind.POTENTIAL and self.values.shape != want:
            raise DomainError(f"potential values must have shape {want}")
        if self.kind is GridKind.GRADIENT and self.values.shape != want + (2,):
            raise DomainError(f"gradient values must have shape {want + (2,)}")

    def to_csv(self, path) -> None:
        cols = "t,x,u" if self.kind is GridKind.POTENTIAL else "t,x,f0,f1"
        with open(path, "w") as fh:
            fh.write(cols + "\n")
            for i, t in enumerate(self.t_levels):
                for j, x in enumerate(self.x_nodes):
                    row = [t, x] + (
                        [self.values[i, j]] if self.kind is GridKind.POTENTIAL
                        else [self.values[i, j, 0], self.values[i, j, 1]]
                    )
                    fh.write(",".join(repr(float(v)) for v in row) + "\n")

    @classmethod
    def from_csv(cls, path) -> "FieldGrid":
        with open(path) as fh:
            header = fh.readline().strip().split(",")
            rows = [[float(c) for c in line.strip().split(",")] for line in fh if line.strip()]
        kind = GridKind.POTENTIAL if header == ["t", "x", "u"] else GridKind.GRADIENT
        data = np.asarray(rows)
        ts = np.unique(data[:, 0])
        xs = np.unique(data[:, 1])
        nt, nx = len(ts), len(xs)
        if kind is GridKind.POTENTIAL:
            values = data[:, 2].reshape(nt, nx)
        else:
            values = data[:, 2:4].reshape(nt, nx, 2)
        return cls(ts, xs, values, kind)


@dataclass(frozen=True)
class GridSpec:
    """Tensor grid request: t0:t1:nt levels, [x0, x1] with nx midpoint nodes."""

    t0: float
    t1: float
    nt: int
    x0: float
    x1: float
    nx: int

    def __post_init__(self) -> None:
        if self.t0 <= 0 or self.t1 < self.t0 or self.nt < 1:
            raise DomainError("need 0 < t0 <= t1 and nt >= 1")
        if abs(self.x0 + self.x1) > 1e-12 * max(abs(self.x0), abs(self.x1)):
            raise DomainError("x-range must be symmetric about 0")
        if self.nx < 2 or self.nx % 2:
            raise DomainError("nx must be even (keeps nodes off x = 0)")

    def t_levels(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.nt)

    def x_nodes(self) -> np.ndarray:
        h = (self.x1 - self.x0) / self.nx
        return self.x0 + h * (np.arange(self.nx) + 0.5)

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse 't0:t1:nt,x0:x1:nx'."""
        tpart, xpart = text.split(",")
        t0, t1, nt = tpart.split(":")
        x0, x1, nx = xpart.split(":")
        return cls(float(t0), float(t1), int(nt), float(x0), float(x1), int(nx))


DEFAULT_GRID = GridSpec(0.1, 2.0, 20, -4.0, 4.0, 40)


def _assemble(fn: Callable[[float, float], float | np.ndarray],
              ts: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Evaluate fn over the tensor grid, parallel over t levels."""
    workers = max_threads()

    def row(t: float):
        return [fn(t, x) for x in xs]

    if workers == 1 or len(ts) == 1:
        rows = [row(t) for t in ts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, ts))
    return np.asarray(rows)


# ---------------------------------------------------------------------------
# Dirichlet problem
# ---------------------------------------------------------------------------

def _restrict_positive(u: BoundarySample) -> BoundarySample:
    ev = u.evaluator

    def evaluator(y):
        y = np.asarray(y, dtype=float)
        return np.where(y > 0.0, ev(y), 0.0)

    a, b = u.window(math.inf)
    support = u.support
    if isinstance(support, CompactSupport):
        support = CompactSupport(max(0.0, a), max(0.0, b))
    return BoundarySample(evaluator, support=support, smoothness=u.smoothness,
                          origin_power=u.origin_power,
                          features=tuple((c, s) for c, s in u.features if c + s > 0.0),
                          name=u.name and u.name + "|+")


def _mirror(u: BoundarySample) -> BoundarySample:
    ev = u.evaluator

    def evaluator(y):
        return ev(-np.asarray(y, dtype=float))

    support = u.support
    if isinstance(support, CompactSupport):
        support = CompactSupport(-support.b, -support.a)
    smoothness = u.smoothness
    if isinstance(smoothness, PiecewiseSmooth):
        smoothness = PiecewiseSmooth(tuple(sorted(-b for b in smoothness.breakpoints)))
    return BoundarySample(evaluator, support=support, smoothness=smoothness,
                          origin_power=u.origin_power,
                          features=tuple((-c, s) for c, s in u.features),
                          name=u.name and u.name + "|mirror")


def _glue_halves(pos: BoundarySample, neg_mirrored: BoundarySample,
                 name: str = "") -> BoundarySample:
    """Assemble f(y) = pos(y) for y > 0, neg_mirrored(-y) for y < 0."""
    pev, nev = pos.evaluator, neg_mirrored.evaluator

    def evaluator(y):
        y = np.asarray(y, dtype=float)
        return np.where(y > 0.0, pev(np.abs(y)), nev(np.abs(y)))

    rate = min(pos.decay_rate(), neg_mirrored.decay_rate())
    feats = tuple(set(pos.features) | {(-c, s) for c, s in neg_mirrored.features})
    breaks = tuple(sorted({0.0}
                          | set(pos.breakpoints())
                          | {-b for b in neg_mirrored.breakpoints()}))
    return BoundarySample(
        evaluator,
        support=AlgebraicDecay(rate) if math.isfinite(rate) else AlgebraicDecay(12.0),
        smoothness=PiecewiseSmooth(breaks),
        origin_power=min(pos.origin_power, neg_mirrored.origin_power),
        features=feats,
        name=name,
    )


def dirichlet_density(u: BoundarySample, cfg: ProblemConfig,
                      scheme: PVQuadratureScheme = DEFAULT_SCHEME,
                      grid: LogLineGrid = DEFAULT_LOG_GRID) -> BoundarySample:
    """Density of the Dirichlet ansatz from the boundary datum.

    Each half-line is independent:

        psi(+-y) = (2/(1+k^2)) (u(+-y)
                   + k (2/pi) pv-int_0^inf y^(1+a) z^-a/(y^2-z^2) u(+-z) dz).

    The weighted half-line operator is applied on the log grid when its
    symbol index 1 + a + 1/p lies in (0, 2), and by pointwise principal-value
    quadrature otherwise (the energy branch can leave the bounded range while
    the integrals still converge for decaying data).
    """
    k, p, alpha = cfg.k, cfg.p, cfg.alpha
    denom = 1.0 + k * k
    gamma = 1.0 + alpha + 1.0 / p

    halves = []
    for part in (_restrict_positive(u), _restrict_positive(_mirror(u))):
        if k == 0.0:
            halves.append(_scale_sample(part, 2.0))
            continue
        if 1e-9 < gamma < 2.0 - 1e-9:
            from .operators import _log_grid_samples

            t = grid.nodes()
            pvals = _log_grid_samples(part, grid)
            kvals = halfline_double_layer_log_grid(1.0 + alpha, pvals, p, grid)
            weighted = np.exp(t / p) * (2.0 / denom) * (pvals + k * kvals)
            half = _density_spline(t, weighted, p, part, alpha, u)
        else:
            half = _density_pointwise(part, cfg, scheme, alpha, u)
        halves.append(half)

    return _glue_halves(halves[0], halves[1], name=f"density[{u.name}]")


def _scale_sample(f: BoundarySample, c: float) -> BoundarySample:
    ev = f.evaluator
    return BoundarySample(lambda y: c * ev(np.asarray(y, dtype=float)),
                          support=f.support, smoothness=f.smoothness,
                          origin_power=f.origin_power, features=f.features,
                          name=f.name)


def _density_meta(part: BoundarySample, alpha: float, u: BoundarySample):
    origin = min(u.origin_power, 1.0 + alpha if alpha < -1.0 else 0.0)
    rate = min(part.decay_rate(), 1.0 - alpha)
    return origin, rate


def _density_spline(t, weighted, p, part, alpha, u) -> BoundarySample:
    from scipy.interpolate import CubicSpline

    spline = CubicSpline(t, weighted, extrapolate=False)
    origin, rate = _density_meta(part, alpha, u)

    def evaluator(y):
        y = np.asarray(y, dtype=float)
        out = np.zeros_like(y)
        pos = y > 0.0
        ty = np.log(y[pos])
        vals = spline(ty)
        vals = np.where(np.isnan(vals), 0.0, vals)
        out[pos] = np.exp(-ty / p) * vals
        return out

    return BoundarySample(evaluator, support=AlgebraicDecay(rate),
                          origin_power=origin, features=part.features)


def _density_pointwise(part: BoundarySample, cfg: ProblemConfig,
                       scheme: PVQuadratureScheme, alpha: float,
                       u: BoundarySample) -> BoundarySample:
    """Pointwise pv route on a log-spaced grid, spline-interpolated.

    Used when the symbol index leaves (0, 2): the operator is then not
    Lp-bounded, but the integrals converge pointwise for decaying data, so
    the per-point boundedness warning is deliberate and silenced.
    """
    import warnings as _warnings

    from .errors import BoundednessRangeViolation

    k, p = cfg.k, cfg.p
    denom = 1.0 + k * k
    ts = np.linspace(-16.0, 16.0, 641)
    xs = np.exp(ts)
    vals = np.empty_like(xs)
    with _warnings.catch_warnings():
        _warnings.simplefilter("ignore", BoundednessRangeViolation)
        for i, x in enumerate(xs):
            kv = halfline_double_layer(1.0 + alpha, part, float(x), scheme, p=p)
            vals[i] = (2.0 / denom) * (float(part(np.asarray([x]))[0]) + k * kv)
    weighted = np.exp(ts / p) * vals
    return _density_spline(ts, weighted, p, part, alpha, u)


def dirichlet_value(u: BoundarySample, cfg: ProblemConfig, t: float, x: float,
                    scheme: PVQuadratureScheme = DEFAULT_SCHEME,
                    route: str = "kernel",
                    density: BoundarySample | None = None) -> float:
    """Dirichlet solution at one point, by either computational route.

    route "kernel": integrate the closed-form kernel against the datum.
    route "density": integrate the extension kernel against the density
    (supply `density` to amortize its construction over many points).
    """
    if t <= 0.0:
        raise DomainError("t must be positive")
    alpha, k = cfg.alpha, cfg.k

    if route == "kernel":
        def integrand(y):
            return poisson_kernel(alpha, t, x, y) * u(y)

        a, b = u.window(scheme.truncation_radius)
        compact = u.is_compact()
        rate = None if compact else min(u.decay_rate() + min(alpha + 2.0, 3.0), 14.0)
        return float(line_integral(
            integrand, scheme, (a, b) if compact else (-math.inf, math.inf),
            power_at=(0.0, -alpha + u.origin_power),
            breakpoints=(0.0,) + u.breakpoints(),
            concentrations=((x, t), (-x, t)) + tuple(u.features),
            tail_rate=rate,
        ))

    if route != "density":
        raise DomainError(f"unknown route {route!r}")
    psi = density if density is not None else dirichlet_density(u, cfg, scheme)

    def ext(y):
        sy = np.where(y >= 0.0, 1.0, -1.0)
        main = (t - (x - y) * k * sy) / (t * t + (x - y) ** 2)
        coup = -k * (abs(x) + np.abs(y)) / (t * t + (abs(x) + np.abs(y)) ** 2)
        return (main + coup) * psi(y) / (2.0 * math.pi)

    rate = min(psi.decay_rate() + 1.0, 14.0)
    return float(line_integral(
        ext, scheme, (-math.inf, math.inf),
        power_at=(0.0, psi.origin_power),
        breakpoints=(0.0,) + psi.breakpoints(),
        concentrations=((x, t), (0.0, max(t, abs(x)))) + tuple(psi.features),
        tail_rate=rate,
    ))


def _require_solvable(problem: Problem, cfg: ProblemConfig) -> None:
    if near_threshold(problem, cfg.k, cfg.p):
        raise NotWellPosed(
            f"{problem.value} at k={cfg.k}, p={cfg.p} is within "
            f"{SOLVER_THRESHOLD_BAND:g} of its threshold; the boundary "
            "equation inverse is ill-conditioned there"
        )


def solve_dirichlet(u: BoundarySample, cfg: ProblemConfig,
                    grid_spec: GridSpec = DEFAULT_GRID,
                    scheme: PVQuadratureScheme = DEFAULT_SCHEME,
                    route: str = "kernel") -> FieldGrid:
    """Solve the Dirichlet problem on a tensor grid.

    The boundary-equation branch refuses near-threshold k; the energy branch
    always has an admissible kernel index.
    """
    if cfg.branch is Branch.LPINF:
        _require_solvable(Problem.DIRICHLET, cfg)
    density = dirichlet_density(u, cfg, scheme) if route == "density" else None
    ts, xs = grid_spec.t_levels(), grid_spec.x_nodes()
    vals = _assemble(
        lambda t, x: dirichlet_value(u, cfg, t, x, scheme, route, density),
        ts, xs,
    )
    return FieldGrid(ts, xs, vals, GridKind.POTENTIAL)


# ---------------------------------------------------------------------------
# Neumann and regularity problems
# ---------------------------------------------------------------------------

def neumann_density(phi: BoundarySample, cfg: ProblemConfig,
                    grid: LogLineGrid = DEFAULT_LOG_GRID) -> BoundarySample:
    """Density psi with conormal datum phi = (I + kK) psi / 2, per half-line."""
    pos = invert_half_line("+", cfg.k, _restrict_positive(phi), cfg, grid=grid)
    neg = invert_half_line("+", cfg.k, _restrict_positive(_mirror(phi)), cfg, grid=grid)
    return _glue_halves(_scale_sample(pos, 2.0), _scale_sample(neg, 2.0),
                        name=f"neumann-density[{phi.name}]")


def solve_neumann(phi: BoundarySample, cfg: ProblemConfig,
                  grid_spec: GridSpec = DEFAULT_GRID,
                  scheme: PVQuadratureScheme = DEFAULT_SCHEME) -> FieldGrid:
    """Gradient-field solution with prescribed conormal boundary datum.

    The extension ansatz places the density in the first component; its
    trace satisfies f0 + k sgn(x) f1 = phi.
    """
    _require_solvable(Problem.NEUMANN, cfg)
    psi = neumann_density(phi, cfg)
    zero = BoundarySample(lambda y: np.zeros_like(np.asarray(y, dtype=float)),
                          support=CompactSupport(-1.0, 1.0))
    field = BoundaryVectorField(psi, zero)
    ts, xs = grid_spec.t_levels(), grid_spec.x_nodes()
    vals = _assemble(lambda t, x: cauchy_extension(t, field, x, cfg, scheme).real,
                     ts, xs)
    return FieldGrid(ts, xs, vals, GridKind.GRADIENT)


def regularity_density(u_prime: BoundarySample, cfg: ProblemConfig,
                       grid: LogLineGrid = DEFAULT_LOG_GRID) -> BoundarySample:
    """Density psi with tangential datum: sgn u' = (I - kK)(sgn psi)/2."""
    pos = invert_half_line("-", cfg.k, _restrict_positive(u_prime), cfg, grid=grid)
    neg = invert_half_line("-", cfg.k, _restrict_positive(_mirror(u_prime)), cfg, grid=grid)
    return _glue_halves(_scale_sample(pos, 2.0), _scale_sample(neg, 2.0),
                        name=f"regularity-density[{u_prime.name}]")


def solve_regularity(u_prime: BoundarySample, cfg: ProblemConfig,
                     grid_spec: GridSpec = DEFAULT_GRID,
                     scheme: PVQuadratureScheme = DEFAULT_SCHEME) -> FieldGrid:
    """Gradient-field solution with prescribed tangential boundary derivative.

    Ansatz components (-k sgn(x) psi, psi); the trace has f1 -> u'.
    """
    _require_solvable(Problem.REGULARITY, cfg)
    psi = regularity_density(u_prime, cfg)
    k = cfg.k
    pev = psi.evaluator

    h0 = BoundarySample(
        lambda y: -k * np.where(np.asarray(y) >= 0.0, 1.0, -1.0) * pev(np.asarray(y, dtype=float)),
        support=psi.support, smoothness=psi.smoothness,
        origin_power=psi.origin_power, features=psi.features,
        name="-k*sgn*psi",
    )
    field = BoundaryVectorField(h0, psi)
    ts, xs = grid_spec.t_levels(), grid_spec.x_nodes()
    vals = _assemble(lambda t, x: cauchy_extension(t, field, x, cfg, scheme).real,
                     ts, xs)
    return FieldGrid(ts, xs, vals, GridKind.GRADIENT)


def gradient_evaluator(problem: Problem, datum: BoundarySample, cfg: ProblemConfig,
                       scheme: PVQuadratureScheme = DEFAULT_SCHEME):
    """(t, x) -> (F0, F1) for the gradient problems, density built once."""
    if problem is Problem.NEUMANN:
        psi = neumann_density(datum, cfg)
        zero = BoundarySample(lambda y: np.zeros_like(np.asarray(y, dtype=float)),
                              support=CompactSupport(-1.0, 1.0))
        field = BoundaryVectorField(psi, zero)
    elif problem is Problem.REGULARITY:
        psi = regularity_density(datum, cfg)
        k = cfg.k
        pev = psi.evaluator
        h0 = BoundarySample(
            lambda y: -k * np.where(np.asarray(y) >= 0.0, 1.0, -1.0) * pev(np.asarray(y, dtype=float)),
            support=psi.support, smoothness=psi.smoothness,
            origin_power=psi.origin_power, features=psi.features)
        field = BoundaryVectorField(h0, psi)
    else:
        raise DomainError("gradient evaluator covers neumann and regularity only")

    def evaluate(t: float, x: float) -> np.ndarray:
        return cauchy_extension(t, field, x, cfg, scheme).real

    return evaluate


# ---------------------------------------------------------------------------
# residue-calculus closed form
# ---------------------------------------------------------------------------

def pv_poisson_power_integral(alpha: float, beta: float, gamma: float,
                              t: float, x: float, z: float) -> float:
    """Closed form of

        pv-int_0^inf (gamma t + beta(y-x))/(t^2+(y-x)^2) * y^(1+alpha)/(y^2-z^2) dy

    for alpha in (-2, 1) \\ {0}, t, z > 0.  The displayed combination equals
    2(k/pi) z^-alpha I; solving for I needs k = tan(pi*alpha/2) != 0.
    """
    if not (-2.0 < alpha < 1.0):
        raise DomainError(f"alpha={alpha} outside (-2, 1)")
    if alpha == 0.0:
        raise DomainError("alpha = 0 makes the displayed combination degenerate (k = 0)")
    if t <= 0.0 or z <= 0.0:
        raise DomainError("t and z must be positive")
    k = math.tan(math.pi * alpha / 2.0)
    w = complex(x, t)
    term1 = (k * k - 1.0) / 2.0 * (gamma * t - beta * (x - z)) / (t * t + (x - z) ** 2)
    term2 = -(k * k + 1.0) / 2.0 * (gamma * t - beta * (x + z)) / (t * t + (x + z) ** 2)
    term3 = -np.real(
        (1.0 - 1j * k) ** 2 * (beta - 1j * gamma) * w ** (1.0 + alpha) / (w * w - z * z)
    ) * z ** (-alpha)
    return float(math.pi / (2.0 * k) * z**alpha * (term1 + term2 + term3))


# ---------------------------------------------------------------------------
# quadrant composition
# ---------------------------------------------------------------------------

def quadrant_poisson(u: BoundarySample, axis_values, t: float, x: float,
                     scheme: PVQuadratureScheme = DEFAULT_SCHEME,
                     axis_origin_power: float = 0.0,
                     axis_decay_rate: float = 1.0) -> float:
    """First-quadrant harmonic reconstruction from the two boundary legs.

        U(t,x) = (1/pi) int_0^inf 4xty/(4x^2t^2+(x^2-t^2-y^2)^2) u(y) dy
               + (1/pi) int_0^inf 4xts/(4x^2t^2+(x^2-t^2+s^2)^2) U(s,0) ds,

    for t, x > 0 (mirror the data for the other quadrant).  `axis_values`
    maps s -> U(s, 0); its s->0 power and s->inf decay exponent can be
    hinted for quadrature.
    """
    if t <= 0.0 or x <= 0.0:
        raise DomainError("first-quadrant evaluation needs t > 0 and x > 0")
    up = _restrict_positive(u)

    def bdry_kernel(y):
        return 4.0 * x * t * y / (4.0 * x * x * t * t + (x * x - t * t - y * y) ** 2) * up(y) / math.pi

    y0 = math.sqrt(max(x * x - t * t, 0.0))
    yscale = max(x * t / max(y0, math.sqrt(2.0 * x * t)), 1e-6)
    a, b = up.window(scheme.truncation_radius)
    a = max(a, 0.0)
    compact = up.is_compact()
    bval = line_integral(
        bdry_kernel, scheme, (a, b) if compact else (a, math.inf),
        power_at=(0.0, u.origin_power) if a == 0.0 else None,
        breakpoints=up.breakpoints(),
        concentrations=((y0, yscale),) + tuple(up.features),
        tail_rate=None if compact else min(up.decay_rate() + 3.0, 14.0),
    )

    axis = axis_values if callable(axis_values) else (lambda s: np.full_like(np.asarray(s, float), float(axis_values)))

    def axis_kernel_term(s):
        return 4.0 * x * t * s / (4.0 * x * x * t * t + (x * x - t * t + s * s) ** 2) * np.asarray(axis(s)) / math.pi

    s0 = math.sqrt(max(t * t - x * x, 0.0))
    sscale = max(x * t / max(s0, math.sqrt(2.0 * x * t)), 1e-6)
    aval = line_integral(
        axis_kernel_term, scheme, (0.0, math.inf),
        power_at=(0.0, 1.0 + axis_origin_power),
        concentrations=((s0, sscale), (max(t, x), max(t, x))),
        tail_rate=3.0 + axis_decay_rate,
    )
    return float(bval + aval)


def quadrant_integral_identity(alpha: float, t: float, x: float, y: float,
                               scheme: PVQuadratureScheme = DEFAULT_SCHEME) -> tuple[float, float]:
    """Numerically integrated left side and closed-form right side of

        (1/pi) int_0^inf s^(2+alpha) / ((4x^2t^2+(x^2-t^2+s^2)^2)(s^2+y^2)) ds
        = -(1/2) |y|^(1+alpha) / (cos(pi a/2) (4x^2t^2+(x^2-t^2-y^2)^2))
          + (1/(4xt)) Re{(1-ik)(t+ix)^(1+alpha) / ((t+ix)^2+y^2)}.
    """
    if not (-2.0 < alpha < 1.0):
        raise DomainError(f"alpha={alpha} outside (-2, 1)")
    if min(t, x, y) <= 0.0:
        raise DomainError("t, x, y must be positive")

    def integrand(s):
        return s ** (2.0 + alpha) / (
            (4.0 * x * x * t * t + (x * x - t * t + s * s) ** 2) * (s * s + y * y)
        ) / math.pi

    s0 = math.sqrt(max(t * t - x * x, 0.0))
    sscale = max(x * t / max(s0, math.sqrt(2.0 * x * t)), 1e-6)
    lhs = float(line_integral(
        integrand, scheme, (0.0, math.inf),
        power_at=(0.0, 2.0 + alpha),
        concentrations=((s0, sscale), (y, max(y, 0.1)), (max(t, x), max(t, x))),
        tail_rate=4.0 - alpha + 2.0 * 0.0,
    ))

    k = math.tan(math.pi * alpha / 2.0)
    w = complex(t, x)
    rhs = (
        -0.5 / math.cos(math.pi * alpha / 2.0)
        * y ** (1.0 + alpha)
        / (4.0 * x * x * t * t + (x * x - t * t - y * y) ** 2)
        + 1.0 / (4.0 * x * t)
        * np.real((1.0 - 1j * k) * w ** (1.0 + alpha) / (w * w + y * y))
    )
    return lhs, float(rhs)


# ---------------------------------------------------------------------------
# kernel tabulation
# ---------------------------------------------------------------------------

def harmonic_measure_table(alphas: Iterable[float], t: float, x: float,
                           y_grid: Sequence[float]) -> list[tuple[float, float, float]]:
    """Rows (alpha, y, P_alpha(t, x; y)) for kernel plotting and CSV export."""
    ys = np.asarray(list(y_grid), dtype=float)
    if np.any(ys == 0.0):
        raise DomainError("y grid must avoid 0")
    rows = []
    for alpha in alphas:
        vals = poisson_kernel(float(alpha), t, x, ys)
        rows.extend((float(alpha), float(yy), float(vv)) for yy, vv in zip(ys, vals))
    return rows
