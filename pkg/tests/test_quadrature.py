"""Singular quadrature engines against analytic values."""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import gamma as gamma_fn

from halfplane_bvp import (
    BoundarySample,
    LogLineGrid,
    NonIntegrable,
    PVQuadratureScheme,
    PanelRule,
    SingularityOnBoundary,
    TailTooSlow,
    WindowLeak,
    graded_integral,
    halfline_tail_integral,
    line_integral,
    log_line_multiplier_apply,
    preset_sample,
    pv_integral,
)
from halfplane_bvp.operators import MultiplierSymbol
from halfplane_bvp.quadrature import DEFAULT_LOG_GRID, DEFAULT_SCHEME


# ------------------------------------------------------------- pv integrals

def test_pv_odd_pole_vanishes():
    res = pv_integral(lambda y: 1.0 / (0.0 - y), 0.0, (-1.0, 1.0))
    assert abs(res.value) < 1e-14


def test_pv_pole_outside_domain():
    res = pv_integral(lambda y: 1.0 / (4.0 - y), 4.0, (1.0, 2.0))
    assert res.value == pytest.approx(math.log(1.5), abs=1e-12)


def test_pv_even_kernel_value():
    x = 2.0
    res = pv_integral(lambda y: (2.0 / math.pi) * y / (x * x - y * y), x, (1.0, 3.0))
    assert res.value == pytest.approx(math.log(3.0 / 5.0) / math.pi, abs=1e-12)


def test_pv_pole_on_endpoint_rejected():
    with pytest.raises(SingularityOnBoundary):
        pv_integral(lambda y: 1.0 / (1.0 - y), 1.0, (1.0, 2.0))


def test_pv_error_estimates_decrease_on_analytic_family():
    # 1/(x-y) * poly(y): the extrapolation trace must improve level by level
    x = 0.3
    res = pv_integral(lambda y: (1.0 + y + y * y) / (x - y), x, (-1.0, 1.0))
    diffs = [abs(b - a) for a, b in zip(res.levels, res.levels[1:])]
    assert all(b < a or b < 1e-13 for a, b in zip(diffs, diffs[1:]))


def test_pv_antisymmetric_exactness():
    # integrand odd about the pole on a symmetric domain
    res = pv_integral(lambda y: 1.0 / (0.5 - y), 0.5, (-0.5, 1.5))
    assert abs(res.value) < 1e-14


def test_pv_clenshaw_curtis_rule():
    scheme = PVQuadratureScheme(panel_rule=PanelRule.CLENSHAW_CURTIS, points_per_panel=24)
    res = pv_integral(lambda y: 1.0 / (4.0 - y), 4.0, (1.0, 2.0), scheme)
    assert res.value == pytest.approx(math.log(1.5), abs=1e-10)


# --------------------------------------------------------- graded integrals

def test_graded_inverse_sqrt():
    res = graded_integral(lambda y: y**-0.5, 0.0, -0.5, (0.0, 1.0))
    assert res.value == pytest.approx(2.0, abs=1e-12)


def test_graded_gamma_value():
    res = graded_integral(lambda y: y**-0.3 * np.exp(-y), 0.0, -0.3, (0.0, np.inf))
    assert res.value == pytest.approx(gamma_fn(0.7), rel=1e-12)


def test_graded_regular_is_plain():
    res = graded_integral(lambda y: np.ones_like(y), 0.0, 0.0, (0.0, 1.0))
    assert res.value == pytest.approx(1.0, abs=1e-14)


def test_graded_nonintegrable_rejected():
    with pytest.raises(NonIntegrable):
        graded_integral(lambda y: y**-1.2, 0.0, -1.2, (0.0, 1.0))


# ------------------------------------------------------------ tail handling

def test_tail_lorentzian():
    res = halfline_tail_integral(lambda y: 1.0 / (1.0 + y * y))
    assert res.value == pytest.approx(math.pi / 2.0, rel=1e-12)


def test_tail_pure_power():
    scheme = DEFAULT_SCHEME.with_tail(1.4)
    res = halfline_tail_integral(lambda y: y**-1.4, scheme, lower=1.0)
    assert res.value == pytest.approx(2.5, rel=1e-12)


def test_tail_mixed_power_vs_reference():
    f = lambda y: y**-1.7 / (1.0 + 1.0 / y)
    scheme = DEFAULT_SCHEME.with_tail(1.7)
    res = halfline_tail_integral(f, scheme, lower=1.0)
    ref, _ = quad(f, 1.0, np.inf, limit=400)
    assert res.value == pytest.approx(ref, rel=1e-8)


def test_tail_too_slow_rejected():
    with pytest.raises(TailTooSlow):
        halfline_tail_integral(lambda y: 1.0 / (1.0 + y), DEFAULT_SCHEME.with_tail(0.9))


# -------------------------------------------------------- log-line symbols

def test_multiplier_identity_map():
    grid = DEFAULT_LOG_GRID
    g = np.exp(-grid.nodes() ** 2)
    out = log_line_multiplier_apply(g, lambda xi: np.ones_like(xi), grid)
    assert np.max(np.abs(out - g)) < 1e-13


def test_multiplier_zero_map():
    grid = DEFAULT_LOG_GRID
    g = np.exp(-grid.nodes() ** 2)
    out = log_line_multiplier_apply(g, lambda xi: np.zeros_like(xi), grid)
    assert np.max(np.abs(out)) == 0.0


def test_multiplier_matches_direct_convolution():
    # K~ with index 1 applied to a centered Gaussian, against pv quadrature
    gamma = 1.0
    grid = LogLineGrid(-64.0, 64.0, 1 << 13)
    t = grid.nodes()
    g = np.exp(-(t**2))
    out = log_line_multiplier_apply(g, MultiplierSymbol(gamma), grid)
    idx = [np.argmin(np.abs(t - v)) for v in (-1.1, 0.25, 0.8)]
    diffs = []
    for i in idx:
        t0 = t[i]
        conv = line_integral(
            lambda s: (2.0 / math.pi) * np.exp(gamma * s) / (np.expm1(2.0 * s))
            * np.exp(-((t0 - s) ** 2)),
            DEFAULT_SCHEME, (-40.0, 40.0), pv_at=0.0,
            concentrations=((t0, 1.0),),
        )
        diffs.append(abs(out[i] - conv))
    scale = math.sqrt(np.mean(out**2))
    assert max(diffs) / scale < 1e-6


def test_multiplier_calculus_is_multiplicative():
    grid = DEFAULT_LOG_GRID
    g = np.exp(-grid.nodes() ** 2)
    m1 = MultiplierSymbol(0.7)
    m2 = MultiplierSymbol(1.4)
    seq = log_line_multiplier_apply(log_line_multiplier_apply(g, m1, grid), m2, grid)
    prod = log_line_multiplier_apply(g, lambda xi: m1(xi) * m2(xi), grid)
    assert np.max(np.abs(seq - prod)) / np.max(np.abs(prod)) < 1e-10


def test_window_leak_rejected():
    grid = LogLineGrid(-8.0, 8.0, 1 << 10)
    g = 1.0 / (1.0 + grid.nodes() ** 2)  # far from zero at the window ends
    with pytest.raises(WindowLeak):
        log_line_multiplier_apply(g, lambda xi: np.ones_like(xi), grid)


# ---------------------------------------------------------------- plumbing

def test_scheme_validation():
    with pytest.raises(ValueError):
        PVQuadratureScheme(excision_radii=(0.1, 0.2))  # not decreasing
    with pytest.raises(ValueError):
        PVQuadratureScheme(excision_radii=(0.1, 0.05), extrapolation_order=3)
    with pytest.raises(ValueError):
        PVQuadratureScheme(points_per_panel=2)


def test_presets_evaluate_and_carry_metadata():
    for name in ("gaussian", "bump", "bump-prime", "indicator", "rational", "hat"):
        s = preset_sample(name)
        vals = s(np.asarray([-0.7, 0.3, 1.5]))
        assert np.all(np.isfinite(vals))
    bump = preset_sample("bump", center=1.0, width=2.0)
    assert bump(np.asarray([3.5]))[0] == 0.0
    assert bump.is_compact()


def test_rational_preset_mass():
    rat = preset_sample("rational")
    val = line_integral(lambda y: rat(y), DEFAULT_SCHEME, (-np.inf, np.inf),
                        tail_rate=2.0, concentrations=((0.0, 1.0),))
    assert val == pytest.approx(1.0, rel=1e-10)


def test_boundary_sample_defaults():
    s = BoundarySample(lambda y: np.exp(-np.abs(y)))
    assert s.breakpoints() == ()
    assert s.decay_rate() == 2.0
