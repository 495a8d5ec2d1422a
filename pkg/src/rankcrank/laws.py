"""Closed-form limit laws and the special functions behind them.

The rescaled rank (and crank) converges to the logistic law with CDF
``1 / (1 + exp(-pi x))``, which is also the law of ``(W1 - W2) / pi`` for
independent standard Gumbel ``W1, W2`` and of ``beta(T)``, a 1-D Brownian
motion read at the exit time of an independent 3-D Brownian motion from the
unit ball. This module evaluates those laws, their characteristic functions
and moments, and the quadrature oracles used to cross-check them.

Double precision is the default; the ``*_mp`` functions are 50-digit mpmath
references used to generate golden values.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import mpmath
import numpy as np
from scipy import integrate, special

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061
_SMALL_T = 1e-6


# ---------------------------------------------------------------------------
# distribution functions


def gumbel_cdf(x):
    """Standard Gumbel (extreme value) CDF ``exp(-exp(-x))``."""
    with np.errstate(over="ignore"):
        return np.exp(-np.exp(-np.asarray(x, dtype=float)))


def gumbel_pdf(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        return np.exp(-x - np.exp(-x))


def gumbel_quantile(u):
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u >= 1)):
        raise DomainError("gumbel_quantile needs 0 < u < 1")
    return -np.log(-np.log(u))


def logistic_cdf(x):
    """``1 / (1 + exp(-pi x))``, stable for large ``|x|``."""
    return special.expit(math.pi * np.asarray(x, dtype=float))


def logistic_pdf(x):
    f = logistic_cdf(x)
    return math.pi * f * (1.0 - f)


def logistic_quantile(u, strict: bool = True):
    """Inverse of :func:`logistic_cdf`: ``log(u / (1 - u)) / pi``.

    With ``strict`` (the default) ``u`` outside ``(0, 1)`` raises
    :class:`DomainError`; otherwise the endpoints map to ``-inf`` / ``+inf``.
    """
    u = np.asarray(u, dtype=float)
    bad = (u <= 0) | (u >= 1) | np.isnan(u)
    if np.any(bad):
        if strict or np.any(np.isnan(u) | (u < 0) | (u > 1)):
            raise DomainError("logistic_quantile needs 0 < u < 1")
    with np.errstate(divide="ignore"):
        return special.logit(u) / math.pi


@dataclass(frozen=True)
class LimitLaw:
    """A location-scale limit law: ``gumbel`` or ``logistic_rank``."""

    name: str
    location: float = 0.0
    scale: float = 1.0

    def __post_init__(self) -> None:
        if self.name not in ("gumbel", "logistic_rank"):
            raise ValueError(f"unknown law {self.name!r}")
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    def _z(self, x):
        return (np.asarray(x, dtype=float) - self.location) / self.scale

    def cdf(self, x):
        z = self._z(x)
        return gumbel_cdf(z) if self.name == "gumbel" else logistic_cdf(z)

    def pdf(self, x):
        z = self._z(x)
        base = gumbel_pdf(z) if self.name == "gumbel" else logistic_pdf(z)
        return base / self.scale

    def quantile(self, u):
        base = gumbel_quantile(u) if self.name == "gumbel" else logistic_quantile(u)
        return self.location + self.scale * base

    def char_fn(self, t):
        t = np.asarray(t, dtype=float)
        phase = np.exp(1j * t * self.location)
        ts = t * self.scale
        if self.name == "gumbel":
            return phase * char_fn_gumbel(ts)
        return phase * char_fn_rank_limit(ts)

    def mean(self) -> float:
        if self.name == "gumbel":
            return self.location + self.scale * EULER_GAMMA
        return self.location

    def variance(self) -> float:
        if self.name == "gumbel":
            return (self.scale * math.pi) ** 2 / 6.0
        return self.scale**2 / 3.0


GUMBEL = LimitLaw("gumbel")
RANK_LIMIT = LimitLaw("logistic_rank")


# ---------------------------------------------------------------------------
# Bernoulli numbers and moments


@lru_cache(maxsize=None)
def _bernoulli_list(m: int) -> tuple[Fraction, ...]:
    # sum_{j<=k} C(k+1, j) B_j = 0, B_1 = -1/2
    B = [Fraction(1)]
    for k in range(1, m + 1):
        if k > 1 and k % 2:
            B.append(Fraction(0))
            continue
        acc = Fraction(0)
        c = 1
        for j in range(k):
            acc += c * B[j]
            c = c * (k + 1 - j) // (j + 1)
        B.append(-acc / (k + 1))
    return tuple(B)


def bernoulli(index: int) -> Fraction:
    """Exact Bernoulli number ``B_index`` for ``t/(e^t - 1)`` (``B_1 = -1/2``).

    Odd indices above 1 return an exact zero.
    """
    if index < 0:
        raise DomainError("Bernoulli index must be non-negative")
    if index > 1 and index % 2:
        return Fraction(0)
    return _bernoulli_list(index)[index]


def bernoulli_table(max_index: int) -> dict[int, Fraction]:
    """``{2l: B_{2l}}`` for ``0 <= 2l <= max_index``."""
    return {k: bernoulli(k) for k in range(0, max_index + 1, 2)}


def limit_even_moment(l: int) -> Fraction:
    """``E[X^(2l)] = (2^(2l) - 2) |B_(2l)|`` for the logistic rank limit."""
    if l < 1:
        raise DomainError("l must be >= 1")
    return (2 ** (2 * l) - 2) * abs(bernoulli(2 * l))


@lru_cache(maxsize=8)
def _borwein_d(n: int) -> tuple[float, ...]:
    d = []
    acc = Fraction(0)
    for i in range(n + 1):
        acc += Fraction(math.factorial(n + i - 1) * 4**i, math.factorial(n - i) * math.factorial(2 * i))
        d.append(n * acc)
    dn = d[-1]
    return tuple(float((d[k] - dn) / dn) for k in range(n))


def dirichlet_eta(s: float, terms: int = 40) -> float:
    """``sum_{k>=1} (-1)^(k-1) k^(-s)`` for real ``s > 0`` (Borwein acceleration).

    Equals ``(1 - 2^(1-s)) zeta(s)`` and is regular at ``s = 1`` (value
    ``log 2``). Truncation error is below ``3 / 5.83^terms``.
    """
    if not s > 0:
        raise DomainError("dirichlet_eta implemented for s > 0 only")
    w = _borwein_d(terms)
    total = 0.0
    for k in range(terms):
        term = w[k] / (k + 1) ** s
        total += -term if k % 2 else term
    return -total


def zeta(s: float) -> float:
    """Riemann zeta for real ``s > 0``, ``s != 1``, via the eta function."""
    if s == 1:
        raise DomainError("zeta has a pole at s = 1")
    return dirichlet_eta(s) / -math.expm1((1.0 - s) * math.log(2.0))


def absolute_moment(s: float) -> float:
    """``E|X|^s = 2 Gamma(s+1) pi^(-s) (1 - 2^(1-s)) zeta(s)`` for the logistic limit.

    The factor ``(1 - 2^(1-s)) zeta(s)`` is evaluated as the eta function, so
    ``s = 1`` needs no special case.
    """
    if not s > 0:
        raise DomainError("absolute_moment needs s > 0")
    return 2.0 * math.gamma(s + 1.0) * math.pi ** (-s) * dirichlet_eta(s)


def absolute_moment_mp(s, dps: int = 50):
    with mpmath.workdps(dps):
        s = mpmath.mpf(s)
        return 2 * mpmath.gamma(s + 1) * mpmath.pi ** (-s) * mpmath.altzeta(s)


# ---------------------------------------------------------------------------
# characteristic functions


def _x_over_sinh(x):
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    out = np.empty_like(ax)
    small = ax < _SMALL_T
    big = ax > 20.0
    mid = ~(small | big)
    x2 = ax[small] ** 2
    out[small] = 1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0
    out[mid] = ax[mid] / np.sinh(ax[mid])
    xb = ax[big]
    out[big] = 2.0 * xb * np.exp(-xb) / -np.expm1(-2.0 * xb)
    return out if out.ndim else float(out)


def char_fn_gumbel(t):
    """``E[exp(itW)] = Gamma(1 - it)`` for standard Gumbel ``W``."""
    return special.gamma(1.0 - 1j * np.asarray(t, dtype=float))


def char_fn_gumbel_difference(t):
    """``pi t / sinh(pi t)``, the characteristic function of ``W1 - W2``."""
    return _x_over_sinh(math.pi * np.asarray(t, dtype=float))


def char_fn_rank_limit(t):
    """``t / sinh(t)``, the characteristic function of ``(W1 - W2) / pi``; 1 at ``t = 0``."""
    return _x_over_sinh(np.asarray(t, dtype=float))


def char_fn_beta_T(t):
    """``E[exp(i t beta(T))] = t / sinh(t)``."""
    return _x_over_sinh(t)


def char_fn_rank_limit_mp(t, dps: int = 50):
    with mpmath.workdps(dps):
        x = mpmath.mpf(t)
        return mpmath.mpf(1) if x == 0 else x / mpmath.sinh(x)


def logistic_cdf_mp(x, dps: int = 50):
    with mpmath.workdps(dps):
        return 1 / (1 + mpmath.exp(-mpmath.pi * mpmath.mpf(x)))


def gamma_reflection_error(t_grid) -> float:
    """``max |Gamma(1-it) Gamma(1+it) - pi t / sinh(pi t)|`` over the grid."""
    t = np.asarray(t_grid, dtype=float)
    lhs = char_fn_gumbel(t) * char_fn_gumbel(-t)
    return float(np.max(np.abs(lhs - char_fn_gumbel_difference(t))))


# ---------------------------------------------------------------------------
# quadrature oracles


def _quad_line(f: Callable[[float], float]) -> float:
    # tolerances sit at the roundoff floor; quad's roundoff warning is expected
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(f, -np.inf, np.inf, epsabs=1e-13, epsrel=1e-13, limit=400)
    return val


def quad_mass(law: LimitLaw) -> float:
    return _quad_line(lambda x: float(law.pdf(x)))


def quad_moment(law: LimitLaw, k: int) -> float:
    """``int x^k dF`` by adaptive quadrature."""
    return _quad_line(lambda x: x**k * float(law.pdf(x)))


def quad_char_fn(law: LimitLaw, t: float) -> complex:
    """``int exp(itx) dF`` by quadrature (real and imaginary parts)."""
    re = _quad_line(lambda x: math.cos(t * x) * float(law.pdf(x)))
    im = _quad_line(lambda x: math.sin(t * x) * float(law.pdf(x)))
    return complex(re, im)


def quad_absolute_moment(law: LimitLaw, s: float) -> float:
    return _quad_line(lambda x: abs(x) ** s * float(law.pdf(x)))
