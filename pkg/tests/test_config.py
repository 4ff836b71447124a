"""Parameter derivation, branch logic, and well-posedness classification."""

import math

import numpy as np
import pytest

from halfplane_bvp import (
    Branch,
    BranchDegenerate,
    InvalidExponent,
    Problem,
    Sense,
    Wellposedness,
    classify,
    derive_config,
    dirichlet_threshold,
    neumann_threshold,
    regularity_threshold,
)
from halfplane_bvp.config import branch_interval, near_threshold


def test_symmetric_case_h1():
    cfg = derive_config(0.0, 2.0, Branch.H1)
    assert cfg.alpha == 0.0
    assert cfg.q == 2.0


def test_unit_k_h1():
    cfg = derive_config(1.0, 2.0, Branch.H1)
    assert cfg.alpha == pytest.approx(0.5, abs=1e-15)


def test_unit_k_lpinf_degenerate():
    # the unique candidate hits the open endpoint -3/2 of (-3/2, 1/2)
    with pytest.raises(BranchDegenerate):
        derive_config(1.0, 2.0, Branch.LPINF)


def test_lpinf_branch_shifts_past_threshold():
    cfg = derive_config(2.0, 2.0, Branch.LPINF)
    lo, hi = branch_interval(Branch.LPINF, 2.0)
    assert lo < cfg.alpha < -1.0 < hi
    assert math.tan(math.pi * cfg.alpha / 2.0) == pytest.approx(2.0, rel=1e-14)


@pytest.mark.parametrize("p", [0.5, 1.0, -2.0])
def test_invalid_exponent(p):
    with pytest.raises(InvalidExponent):
        derive_config(0.3, p)


def test_classify_dirichlet_beyond_threshold():
    h1, lp = classify(Problem.DIRICHLET, 2.0, 2.0)
    assert h1.status is Wellposedness.FAILS
    assert lp.status is Wellposedness.WELL_POSED
    assert h1.threshold_value == pytest.approx(1.0)


def test_classify_neumann_symmetric():
    h1, lp = classify(Problem.NEUMANN, 0.0, 3.0)
    assert h1.status is Wellposedness.UNKNOWN
    assert lp.status is Wellposedness.WELL_POSED


def test_classify_regularity_threshold():
    h1, lp = classify(Problem.REGULARITY, -1.0, 2.0)
    assert h1.status is Wellposedness.THRESHOLD
    assert lp.status is Wellposedness.THRESHOLD


def test_classify_senses_tagged():
    h1, lp = classify("dirichlet", 0.3, 2.0)
    assert h1.sense is Sense.H1 and lp.sense is Sense.LPINF


@pytest.mark.parametrize("k", np.linspace(-5.0, 5.0, 21))
@pytest.mark.parametrize("branch", [Branch.H1, Branch.LPINF])
def test_alpha_reproduces_k(k, branch):
    try:
        cfg = derive_config(float(k), 2.7, branch)
    except BranchDegenerate:
        return
    back = math.tan(math.pi * cfg.alpha / 2.0)
    assert back == pytest.approx(float(k), rel=1e-14, abs=1e-14)


@pytest.mark.parametrize("k", [-3.0, -0.4, 0.0, 0.7, 1.2, 4.0])
def test_branch_values_differ_by_two_or_agree(k):
    p = 2.0
    h1 = derive_config(k, p, Branch.H1)
    try:
        lp = derive_config(k, p, Branch.LPINF)
    except BranchDegenerate:
        return
    diff = h1.alpha - lp.alpha
    assert diff == pytest.approx(0.0, abs=1e-14) or diff == pytest.approx(2.0, abs=1e-14)
    if k > dirichlet_threshold(p):
        assert diff == pytest.approx(2.0, abs=1e-14)


@pytest.mark.parametrize("p", [1.2, 1.5, 2.0, 3.0, 7.0])
def test_duality_of_thresholds(p):
    q = p / (p - 1.0)
    assert dirichlet_threshold(p) == pytest.approx(neumann_threshold(q), rel=1e-14)
    assert regularity_threshold(p) == pytest.approx(-neumann_threshold(p), rel=1e-14)


def test_near_threshold_band():
    thr = neumann_threshold(2.0)
    assert near_threshold(Problem.NEUMANN, thr + 1e-8, 2.0)
    assert not near_threshold(Problem.NEUMANN, thr + 1e-3, 2.0)


def test_config_is_immutable():
    cfg = derive_config(0.5, 2.0)
    with pytest.raises(AttributeError):
        cfg.k = 1.0
