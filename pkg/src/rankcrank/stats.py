"""Empirical CDFs, Kolmogorov-Smirnov statistics, moments, chi-square, bootstrap.

Moment sums use ``math.fsum`` (exactly rounded), so every estimator here is
invariant under permutation of the sample.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy import stats as _sps


@dataclass(frozen=True)
class EmpiricalDistribution:
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.sort(np.asarray(self.values, dtype=float).ravel())
        if v.size < 1:
            raise ValueError("empirical distribution needs at least one value")
        if np.isnan(v).any():
            raise ValueError("NaN in sample")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def cdf(self, x):
        return np.searchsorted(self.values, x, side="right") / self.n


def _emp(x) -> EmpiricalDistribution:
    return x if isinstance(x, EmpiricalDistribution) else EmpiricalDistribution(x)


def ks_one_sample(emp, cdf: Callable) -> float:
    """``sup_x |F_emp(x) - cdf(x)|``, exact: both one-sided limits at each atom."""
    e = _emp(emp)
    v, counts = np.unique(e.values, return_counts=True)
    right = np.cumsum(counts) / e.n
    left = right - counts / e.n
    ref = np.asarray(cdf(v), dtype=float)
    return float(max(np.max(np.abs(right - ref)), np.max(np.abs(left - ref))))


def ks_two_sample(a, b) -> float:
    """``sup_x |F_a(x) - F_b(x)|`` over the merged sample points."""
    ea, eb = _emp(a), _emp(b)
    pts = np.union1d(ea.values, eb.values)
    return float(np.max(np.abs(ea.cdf(pts) - eb.cdf(pts))))


def ks_coefficient(alpha: float) -> float:
    """Asymptotic Kolmogorov coefficient ``c(alpha) = sqrt(-log(alpha/2) / 2)``."""
    return math.sqrt(-math.log(alpha / 2.0) / 2.0)


def ks_critical_one_sample(n: int, alpha: float = 0.01) -> float:
    return ks_coefficient(alpha) / math.sqrt(n)


def ks_critical_two_sample(n: int, m: int, alpha: float = 0.01) -> float:
    return ks_coefficient(alpha) * math.sqrt((n + m) / (n * m))


def moment_estimate(emp, k: int) -> tuple[float, float]:
    """Sample ``k``-th raw moment and its standard error ``sd(x^k) / sqrt(n)``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    x = emp.values if isinstance(emp, EmpiricalDistribution) else np.asarray(emp, dtype=float).ravel()
    n = x.size
    xk = x**k
    est = math.fsum(xk) / n
    if n < 2:
        return est, float("nan")
    var = math.fsum((xk - est) ** 2) / (n - 1)
    return est, math.sqrt(var / n)


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    low_expected: bool

    def critical(self, alpha: float = 0.001) -> float:
        return float(_sps.chi2.ppf(1.0 - alpha, self.dof))

    def passes(self, alpha: float = 0.001) -> bool:
        return self.statistic < self.critical(alpha)


def chi_square_uniformity(counts: Mapping | Sequence[int]) -> ChiSquareResult:
    """Pearson statistic of observed counts against equal expected counts.

    ``low_expected`` flags an expected cell count below 5.
    """
    obs = np.asarray(list(counts.values()) if isinstance(counts, Mapping) else counts, dtype=float)
    if obs.size < 2:
        raise ValueError("need at least two categories")
    total = obs.sum()
    if total < 1:
        raise ValueError("need at least one observation")
    expected = total / obs.size
    stat = math.fsum((obs - expected) ** 2) / expected
    return ChiSquareResult(stat, obs.size - 1, expected < 5)


def total_variation(p: Mapping, q: Mapping) -> float:
    """``(1/2) sum |p - q|`` for two probability mass functions given as dicts."""
    keys = set(p) | set(q)
    return 0.5 * math.fsum(abs(float(p.get(k, 0)) - float(q.get(k, 0))) for k in keys)


def empirical_pmf(values) -> dict[int, float]:
    v, c = np.unique(np.asarray(values), return_counts=True)
    return {int(a): b / c.sum() for a, b in zip(v, c)}


def pearson(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xc = x - x.mean()
    yc = y - y.mean()
    den = math.sqrt(float(xc @ xc) * float(yc @ yc))
    return float(xc @ yc) / den if den > 0 else float("nan")


def bootstrap_ci(x, y, fn: Callable, n_boot: int = 1000, level: float = 0.95, seed: int = 0) -> tuple[float, float]:
    """Percentile bootstrap interval for ``fn(x, y)`` resampling pairs."""
    x = np.asarray(x)
    y = np.asarray(y)
    rng = np.random.default_rng(seed)
    vals = np.empty(n_boot)
    for b in range(n_boot):
        idx = rng.integers(0, x.size, x.size)
        vals[b] = fn(x[idx], y[idx])
    a = (1.0 - level) / 2.0
    lo, hi = np.quantile(vals, [a, 1.0 - a])
    return float(lo), float(hi)


def distance_correlation(x, y) -> float:
    """Sample distance correlation (V-statistic); O(n^2) memory."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)

    def centered(v):
        d = np.abs(v[:, None] - v[None, :])
        return d - d.mean(axis=0) - d.mean(axis=1)[:, None] + d.mean()

    A, B = centered(x), centered(y)
    dcov = (A * B).mean()
    dvx, dvy = (A * A).mean(), (B * B).mean()
    if dvx <= 0 or dvy <= 0:
        return 0.0
    return math.sqrt(max(dcov, 0.0) / math.sqrt(dvx * dvy))
