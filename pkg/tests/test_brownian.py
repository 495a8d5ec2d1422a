import io
import math

import numpy as np
import pytest

from rankcrank import brownian, stats
from rankcrank.errors import DomainError
from rankcrank.laws import char_fn_beta_T


def _cfg(**kw):
    base = dict(seed=21, step=1e-3, boundary_correction="none", count=20_000)
    base.update(kw)
    return brownian.BrownianConfig(**base)


def test_config_validation():
    with pytest.raises(DomainError):
        brownian.BrownianConfig(step=0.0)
    with pytest.raises(DomainError):
        brownian.BrownianConfig(count=0)
    with pytest.raises(ValueError):
        brownian.BrownianConfig(boundary_correction="reflect")


def test_exit_times_positive_and_deterministic(backend):
    cfg = _cfg(count=3000)
    t = brownian.sample_hitting_time(cfg)
    assert t.shape == (3000,) and (t > 0).all()
    assert np.array_equal(t, brownian.sample_hitting_time(cfg, workers=2))
    assert not np.array_equal(t, brownian.sample_hitting_time(_cfg(count=3000, seed=22)))


def test_bridge_mode_removes_exit_time_bias(backend):
    t = brownian.sample_hitting_time(_cfg(boundary_correction="bridge"))
    est, se = stats.moment_estimate(t, 1)
    assert abs(est - 1 / 3) < 3 * se


def test_uncorrected_exit_time_is_biased_upward():
    est, se = stats.moment_estimate(brownian.sample_hitting_time(_cfg()), 1)
    assert est - 1 / 3 > 3 * se


def test_halving_step_changes_mean_exit_time_little():
    a = brownian.sample_hitting_time(_cfg(boundary_correction="bridge"))
    b = brownian.sample_hitting_time(_cfg(boundary_correction="bridge", step=5e-4, seed=77))
    (ea, sa), (eb, sb) = stats.moment_estimate(a, 1), stats.moment_estimate(b, 1)
    assert abs(ea - eb) < 2 * math.hypot(sa, sb)


def test_moments_consistent_across_steps():
    a = brownian.sample_beta_T(_cfg())
    b = brownian.sample_beta_T(_cfg(step=5e-4, seed=78))
    for k in (2, 4):
        (ea, sa), (eb, sb) = stats.moment_estimate(a, k), stats.moment_estimate(b, k)
        assert abs(ea - eb) < 3 * math.hypot(sa, sb)


def test_beta_moments_and_char_fn():
    beta = brownian.sample_beta_T(_cfg(boundary_correction="bridge", count=40_000))
    for k, lim in ((2, 1 / 3), (4, 7 / 15)):
        est, se = stats.moment_estimate(beta, k)
        assert abs(est - lim) < 3 * se
    m, se = stats.moment_estimate(beta, 1)
    assert abs(m) < 3 * se
    grid = np.array([0.5, 1.0, 2.0, 4.0])
    phi = brownian.empirical_char_fn(beta, grid)
    assert np.max(np.abs(phi - char_fn_beta_T(grid))) < 4 / math.sqrt(beta.size)
    # imaginary part of a symmetric law's estimate: se <= 1/sqrt(N)
    assert np.max(np.abs(phi.imag)) < 3 / math.sqrt(beta.size)
    assert abs(phi[1].real - 1 / math.sinh(1)) < 3 / math.sqrt(beta.size)


def test_char_fn_at_zero_is_one():
    assert brownian.empirical_char_fn([0.3, -1.2, 5.0], [0.0])[0] == 1.0
    with pytest.raises(DomainError):
        brownian.empirical_char_fn([], [1.0])


def test_sign_symmetry_of_even_moments():
    s = brownian.simulate(_cfg(count=5000))
    pos = np.sqrt(s.T) * s.Z
    neg = np.sqrt(s.T) * -s.Z
    for k in (2, 4, 6):
        assert stats.moment_estimate(pos, k) == stats.moment_estimate(neg, k)


def test_distribution_equality_and_control():
    cfg = _cfg(boundary_correction="bridge", count=30_000)
    beta = brownian.sample_beta_T(cfg)
    same = brownian.distribution_equality_check(cfg, 0.01, beta=beta)
    assert same["same_distribution"]
    ctrl = brownian.distribution_equality_check(cfg, 0.01, against="gumbel", beta=beta)
    assert not ctrl["same_distribution"]
    assert stats.ks_two_sample(beta, beta) == 0.0
    with pytest.raises(ValueError):
        brownian.distribution_equality_check(cfg, beta=beta, against="normal")


def test_csv_layout():
    s = brownian.simulate(_cfg(count=10))
    buf = io.StringIO()
    s.to_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "seed,sample_index,T,beta_T"
    seed, idx, t, b = lines[1].split(",")
    assert (seed, idx) == ("21", "0")
    assert float(t) == s.T[0] and float(b) == s.beta[0]
