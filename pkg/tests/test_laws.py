import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats as sps

from rankcrank import laws
from rankcrank.errors import DomainError


def test_gumbel_cdf_values():
    assert laws.gumbel_cdf(0.0) == pytest.approx(math.exp(-1), abs=1e-15)
    assert laws.gumbel_cdf(50.0) == 1.0
    assert laws.gumbel_cdf(-math.log(math.log(2))) == pytest.approx(0.5, abs=1e-15)
    assert laws.gumbel_cdf(-800.0) == 0.0


def test_gumbel_matches_scipy():
    x = np.linspace(-4, 10, 57)
    np.testing.assert_allclose(laws.gumbel_cdf(x), sps.gumbel_r.cdf(x), rtol=1e-13, atol=1e-300)
    np.testing.assert_allclose(laws.gumbel_pdf(x), sps.gumbel_r.pdf(x), rtol=1e-12)
    u = np.linspace(0.01, 0.99, 33)
    np.testing.assert_allclose(laws.gumbel_quantile(u), sps.gumbel_r.ppf(u), rtol=1e-12)


def test_logistic_cdf_values():
    assert laws.logistic_cdf(0.0) == 0.5
    ref = float(laws.logistic_cdf_mp(1))
    assert abs(ref - 0.9585761678) < 1e-10
    assert laws.logistic_cdf(1.0) == pytest.approx(ref, abs=2e-16)
    for x in (0.1, 1.0, 5.0):
        assert laws.logistic_cdf(x) + laws.logistic_cdf(-x) == pytest.approx(1.0, abs=4e-16)


def test_logistic_quantile():
    assert laws.logistic_quantile(0.5) == 0.0
    assert laws.logistic_quantile(laws.logistic_cdf(1.0)) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DomainError):
        laws.logistic_quantile(0.0)
    assert laws.logistic_quantile(0.0, strict=False) == -math.inf
    assert laws.logistic_quantile(1.0, strict=False) == math.inf
    with pytest.raises(DomainError):
        laws.logistic_quantile(1.5, strict=False)


@given(st.floats(1e-6, 1 - 1e-6))
def test_quantile_round_trip(u):
    assert abs(float(laws.logistic_cdf(laws.logistic_quantile(u))) - u) < 1e-12


def test_bernoulli_values():
    assert laws.bernoulli(0) == 1
    assert laws.bernoulli(1) == Fraction(-1, 2)
    assert laws.bernoulli(2) == Fraction(1, 6)
    assert laws.bernoulli(4) == Fraction(-1, 30)
    assert laws.bernoulli(12) == Fraction(-691, 2730)
    assert laws.bernoulli(7) == 0
    with pytest.raises(DomainError):
        laws.bernoulli(-2)


def test_bernoulli_against_mpmath():
    for k in range(0, 41, 2):
        b = laws.bernoulli(k)
        with mpmath.workdps(60):
            assert abs(mpmath.bernoulli(k) - mpmath.mpf(b.numerator) / b.denominator) < mpmath.mpf(10) ** -40


def test_limit_even_moments():
    assert laws.limit_even_moment(1) == Fraction(1, 3)
    assert laws.limit_even_moment(2) == Fraction(7, 15)
    assert laws.limit_even_moment(3) == Fraction(31, 21)
    with pytest.raises(DomainError):
        laws.limit_even_moment(0)


def test_absolute_moments():
    assert laws.absolute_moment(2) == pytest.approx(1 / 3, abs=1e-14)
    assert laws.absolute_moment(4) == pytest.approx(7 / 15, abs=1e-14)
    assert laws.absolute_moment(1) == pytest.approx(2 / math.pi * math.log(2), abs=1e-15)
    for l in range(1, 7):
        assert abs(laws.absolute_moment(2 * l) - float(laws.limit_even_moment(l))) < 1e-10


@given(st.floats(0.05, 12.0))
def test_absolute_moment_against_50_digits(s):
    ref = float(laws.absolute_moment_mp(s))
    assert abs(laws.absolute_moment(s) - ref) <= 1e-13 * ref


def test_eta_and_zeta():
    assert laws.dirichlet_eta(1.0) == pytest.approx(math.log(2), abs=1e-15)
    assert laws.zeta(2.0) == pytest.approx(math.pi**2 / 6, abs=1e-14)
    assert laws.zeta(0.5) == pytest.approx(float(mpmath.zeta(0.5)), abs=1e-13)
    with pytest.raises(DomainError):
        laws.zeta(1.0)
    with pytest.raises(DomainError):
        laws.dirichlet_eta(0.0)


def test_gumbel_char_fn():
    assert laws.char_fn_gumbel(0.0) == 1.0
    for t in (0.5, 1.0, 2.0):
        assert abs(abs(laws.char_fn_gumbel(t)) ** 2 - laws.char_fn_gumbel_difference(t)) < 1e-10
    assert abs(laws.char_fn_gumbel(40.0)) < 1e-20


def test_reflection_grid():
    assert laws.gamma_reflection_error(np.linspace(-20, 20, 401)) < 1e-10


def test_rank_limit_char_fn():
    assert laws.char_fn_rank_limit(0.0) == 1.0
    assert laws.char_fn_rank_limit(1.0) == pytest.approx(1 / math.sinh(1), abs=1e-15)
    # the unscaled Gumbel difference at t = 1
    assert laws.char_fn_gumbel_difference(1.0) == pytest.approx(0.272029, abs=1e-6)
    assert laws.char_fn_beta_T(math.pi) == pytest.approx(laws.char_fn_gumbel_difference(1.0), abs=1e-16)
    for t in (0.5, 1.0, 2.0):
        q = laws.quad_char_fn(laws.RANK_LIMIT, t)
        assert abs(q - laws.char_fn_rank_limit(t)) < 1e-8
        assert abs(q.imag) < 1e-12


def test_x_over_sinh_branches():
    t = 0.01
    assert abs(laws.char_fn_beta_T(t) - (1 - t**2 / 6 + 7 * t**4 / 360 - 31 * t**6 / 15120)) < 1e-14
    for x in (1e-7, 5e-7, 2e-6, 0.3, 19.9, 20.1, 300.0, 800.0):
        ref = float(laws.char_fn_rank_limit_mp(x))
        assert abs(laws.char_fn_rank_limit(x) - ref) <= 1e-15 * max(ref, 1e-300) + 1e-300
        assert laws.char_fn_rank_limit(-x) == laws.char_fn_rank_limit(x)


def test_quadrature_oracles():
    assert laws.quad_mass(laws.RANK_LIMIT) == pytest.approx(1.0, abs=1e-10)
    assert abs(laws.quad_moment(laws.RANK_LIMIT, 2) - 1 / 3) < 1e-8
    for l in (1, 2, 3):
        assert abs(laws.quad_moment(laws.RANK_LIMIT, 2 * l) - float(laws.limit_even_moment(l))) < 1e-6
    assert abs(laws.quad_moment(laws.GUMBEL, 1) - laws.EULER_GAMMA) < 1e-8


def test_limit_law_objects():
    assert laws.RANK_LIMIT.variance() == pytest.approx(1 / 3)
    assert laws.GUMBEL.variance() == pytest.approx(math.pi**2 / 6)
    assert laws.GUMBEL.mean() == laws.EULER_GAMMA
    shifted = laws.LimitLaw("logistic_rank", location=1.0, scale=2.0)
    assert shifted.cdf(1.0) == 0.5
    assert shifted.quantile(0.5) == 1.0
    assert abs(shifted.char_fn(0.7) - np.exp(0.7j) * laws.char_fn_rank_limit(1.4)) < 1e-15
    with pytest.raises(ValueError):
        laws.LimitLaw("normal")
    with pytest.raises(ValueError):
        laws.LimitLaw("gumbel", scale=0.0)
