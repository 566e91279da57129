import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from fairenum.bounds import (
    ceil_guarded,
    coupon_deadline,
    deadline,
    derive_params,
    kappa1,
    kappa2,
    sample_budget,
    zeta_tail,
)

# Reference values computed with mpmath at 40 digits (mpmath.zeta for the series).
KAPPA1_001 = 1.142105487087150975
KAPPA2_001 = 2.442621452199947494
ZETA_TAIL_2A_001 = 3.830237958193442526e-06


def test_derive_params_at_one_percent():
    p = derive_params(0.01)
    assert p.alpha == pytest.approx(math.log(100) - 1, rel=1e-15)
    assert p.alpha == pytest.approx(3.60517, abs=1e-5)
    assert p.beta == pytest.approx(0.174836010144595656, rel=1e-12)
    assert p.beta / p.alpha == pytest.approx(0.04850, abs=1e-5)


@pytest.mark.parametrize("eps", [1 / math.e, 0.5, 0.0, -0.1, 1.0])
def test_derive_params_rejects_outside_window(eps):
    with pytest.raises(ValueError):
        derive_params(eps)


def test_kappa1_reference_value():
    assert kappa1(0.01) == pytest.approx(KAPPA1_001, rel=1e-12)
    assert abs(kappa1(0.01) - 1.14) < 0.01


def test_kappa1_rejects_large_epsilon():
    with pytest.raises(ValueError):
        kappa1(0.5)


def test_kappa1_decreases_towards_one():
    assert 1 < kappa1(0.001) < kappa1(0.01)


def test_kappa2_reference_value():
    assert kappa2(0.01) == pytest.approx(KAPPA2_001, rel=1e-12)
    assert abs(kappa2(0.01) - 2.44) < 0.01
    assert kappa2(0.01) - kappa1(0.01) == pytest.approx(1.30, abs=0.005)


@pytest.mark.parametrize("eps", [0.3, math.exp(-1.5), 0.25])
def test_kappa2_domain(eps):
    with pytest.raises(ValueError):
        kappa2(eps)


def test_zeta_tail_against_closed_forms():
    assert zeta_tail(2, 6) == pytest.approx(math.pi**2 / 6 - (1 + 1 / 4 + 1 / 9 + 1 / 16 + 1 / 25), abs=1e-12)
    assert zeta_tail(2, 6) == pytest.approx(0.181323, abs=1e-6)
    assert abs(zeta_tail(2, 1) - math.pi**2 / 6) < 1e-10
    assert abs(zeta_tail(4, 1) - math.pi**4 / 90) < 1e-10


def test_zeta_tail_at_the_kappa2_exponent():
    s = 2 * derive_params(0.01).alpha
    assert s == pytest.approx(7.2103, abs=1e-4)
    assert zeta_tail(s, 6) == pytest.approx(ZETA_TAIL_2A_001, rel=1e-10)
    assert zeta_tail(s, 6) == pytest.approx(3.80e-6, rel=0.01)


def test_zeta_tail_large_exponent_is_leading_term():
    assert zeta_tail(80.0, 6) == pytest.approx(6.0**-80, rel=1e-6)


@pytest.mark.parametrize("s", [1.0, 0.5, -2.0])
def test_zeta_tail_domain(s):
    with pytest.raises(ValueError):
        zeta_tail(s, 1)


@settings(max_examples=200, deadline=None)
@given(s=st.floats(min_value=1.01, max_value=60.0), k=st.integers(min_value=1, max_value=40))
def test_zeta_tail_matches_hurwitz_zeta(s, k):
    assert zeta_tail(s, k) == pytest.approx(special.zeta(s, k), abs=1e-12, rel=1e-10)


def test_deadlines_of_the_worked_example():
    k1 = kappa1(0.01)
    assert deadline(2, k1, 0.01) == 11
    assert deadline(3, k1, 0.01) == 18
    k2 = kappa2(0.01)
    assert deadline(2, k2, 0.01) == 13
    assert deadline(3, k2, 0.01) == 20


@pytest.mark.parametrize("args", [(1, 1.2, 0.01), (0, 1.2, 0.01), (2, 1.2, 0.0), (2, 1.2, 1.0), (2, 0.5, 0.01)])
def test_deadline_domain(args):
    with pytest.raises(ValueError):
        deadline(*args)


def test_ceil_guard_rounds_near_integers_up():
    assert ceil_guarded(10.2) == 11
    assert ceil_guarded(11.0) == 12
    assert ceil_guarded(11.0 - 1e-12) == 12
    assert ceil_guarded(11.0 + 1e-12) == 12
    assert ceil_guarded(10.999) == 11


def test_sample_budget():
    k1 = kappa1(0.01)
    assert sample_budget(1, 0.01, k1) == deadline(2, k1, 0.01) == 11
    assert sample_budget(20, 0.01, k1) == 164
    budgets = [sample_budget(n, 0.01, k1) for n in range(1, 200)]
    assert all(b < c for b, c in zip(budgets, budgets[1:]))


EPS_GRID = np.geomspace(1e-6, 1 / math.e, 60)[:-1]
EPS_GRID_OPT = np.geomspace(1e-6, math.exp(-1.5), 60)[:-1]


@pytest.mark.parametrize("eps", EPS_GRID)
def test_kappa1_exceeds_one_and_deadlines_increase(eps):
    k1 = kappa1(eps)
    assert k1 > 1
    d = [deadline(m, k1, eps) for m in range(2, 10_001)]
    assert all(a < b for a, b in zip(d, d[1:]))


@pytest.mark.parametrize("eps", EPS_GRID_OPT)
def test_kappa2_decomposes_into_kappa1_plus_remainder(eps):
    p = derive_params(eps)
    q = math.exp(-p.alpha / (math.e - 1))
    remainder = 4**p.alpha / (1 - math.exp(-p.beta)) * zeta_tail(2 * p.alpha, 7) + (1 - q) ** -2
    assert kappa2(eps) > kappa1(eps)
    assert kappa2(eps) == pytest.approx(kappa1(eps) + remainder, rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(
    m=st.integers(min_value=2, max_value=10_000),
    kappa=st.floats(min_value=1.0, max_value=50.0),
    eps=st.floats(min_value=1e-6, max_value=0.99),
)
def test_kappa_free_deadline_is_a_lower_bound(m, kappa, eps):
    assert deadline(m, kappa, eps) >= coupon_deadline(m, eps)
