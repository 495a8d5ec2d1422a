"""Exact rank and crank distributions ``N(n, m)``, ``M(n, m)`` and their moments.

Two independent routes build a :class:`CountTable`:

``enumeration``
    walk every partition of ``n`` and tally the statistic.
``qseries``
    extract coefficients of the two-variable generating functions

    .. math::

        R(z, q) = \\sum_{k \\ge 0} \\frac{q^{k^2}}{(zq;q)_k (q/z;q)_k}, \\qquad
        C(z, q) = \\frac{(q;q)_\\infty}{(zq;q)_\\infty (q/z;q)_\\infty}

    as Laurent polynomials in ``z`` truncated to degrees ``[-N, N]``. The
    kernels work modulo several primes below ``2**62`` and the exact big
    integers are recovered by the Chinese remainder theorem, with enough
    moduli that their product exceeds ``2 p(N) + 1``.

The crank generating function disagrees with the combinatorial crank at
``n = 1`` (coefficients ``z^-1 - 1 + z``); the qseries route therefore
refuses ``n = 1`` for the crank and :func:`crank_gf_coefficients` exposes the
raw row.
"""
from __future__ import annotations

import csv
import io
import math
import os
import threading
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import mpmath
import numpy as np

from . import kernels
from .errors import DomainError, ResourceError
from .laws import logistic_cdf
from .partitions import ENUMERATION_CEILING, _crank_sorted, iter_part_lists, partition_count

STATISTICS = ("rank", "crank")
METHODS = ("enumeration", "qseries")

#: Per-method size ceilings; configuration, adjust at runtime if needed.
CEILINGS = {"enumeration": ENUMERATION_CEILING, "qseries": 2000}

DEFAULT_DPS = 50


@dataclass(frozen=True)
class CountTable:
    """Exact counts of partitions of ``n`` by the value of a statistic."""

    n: int
    statistic: str
    counts: Mapping[int, int]
    method: str

    def __post_init__(self) -> None:
        if self.statistic not in STATISTICS:
            raise ValueError(f"statistic must be one of {STATISTICS}")
        clean = {int(m): int(c) for m, c in sorted(self.counts.items()) if c}
        object.__setattr__(self, "counts", MappingProxyType(clean))

    def __getitem__(self, m: int) -> int:
        return self.counts.get(m, 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def support(self) -> list[int]:
        return list(self.counts)

    def check(self) -> dict[str, bool]:
        """Structural invariants: mass ``p(n)``, rank symmetry, support bound."""
        bound = self.n - 1 if self.statistic == "rank" else self.n
        out = {
            "sum_equals_p": self.total == partition_count(self.n),
            "support_bounded": all(abs(m) <= bound for m in self.counts),
            "nonnegative": all(c > 0 for c in self.counts.values()),
        }
        if self.statistic == "rank":
            out["symmetric"] = all(self[-m] == c for m, c in self.counts.items())
        return out

    def same_counts(self, other: "CountTable") -> bool:
        return (self.n, self.statistic) == (other.n, other.statistic) and dict(self.counts) == dict(
            other.counts
        )


@dataclass(frozen=True)
class MomentVector:
    """``raw[k] = sum_m m^k * count(m)`` for ``0 <= k <= k_max``."""

    n: int
    statistic: str
    k_max: int
    raw: Mapping[int, int] = field(repr=False)

    def normalized(self, k: int) -> Fraction:
        """The ``k``-th moment of the statistic under the uniform measure."""
        return Fraction(self.raw[k], self.raw[0])


# ---------------------------------------------------------------------------
# enumeration route


@lru_cache(maxsize=128)
def _enumeration_counts(n: int) -> tuple[dict[int, int], dict[int, int]]:
    ranks: Counter[int] = Counter()
    cranks: Counter[int] = Counter()
    for parts in iter_part_lists(n):
        ranks[parts[0] - len(parts)] += 1
        cranks[_crank_sorted(parts)] += 1
    return dict(ranks), dict(cranks)


# ---------------------------------------------------------------------------
# qseries route


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=1)
def _prime_pool(count: int = 16) -> tuple[int, ...]:
    out = []
    c = (1 << 62) - 1
    while len(out) < count:
        if _is_prime(c):
            out.append(c)
        c -= 2
    return tuple(out)


def crt_moduli(bound: int) -> list[int]:
    """Primes below ``2**62`` whose product exceeds ``2 * bound + 1``."""
    need = 2 * bound + 1
    mods, prod = [], 1
    pool = _prime_pool()
    while prod <= need:
        if len(mods) == len(pool):
            pool = _prime_pool(2 * len(pool))
        mods.append(pool[len(mods)])
        prod *= mods[-1]
    return mods


def crt_reconstruct(residues: Sequence[Sequence[int]], moduli: Sequence[int]) -> list[int]:
    """Signed integers from their residues, in ``(-M/2, M/2]``, ``M = prod(moduli)``."""
    M = math.prod(moduli)
    basis = []
    for p in moduli:
        Mi = M // p
        basis.append(Mi * pow(Mi, -1, p))
    half = M // 2
    out = []
    for column in zip(*residues):
        x = sum(int(r) * b for r, b in zip(column, basis)) % M
        out.append(x - M if x > half else x)
    return out


class _GFStore:
    """Residue tables of the generating functions, grown on demand."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._data: dict[tuple[str, str], tuple[int, list[int], list[np.ndarray]]] = {}

    def tables(self, statistic: str, N: int) -> tuple[int, list[int], list[np.ndarray]]:
        from ._backend import get_backend

        key = (statistic, get_backend())
        with self._lock:
            have = self._data.get(key)
            if have is not None and have[0] >= N:
                return have
            mods = crt_moduli(partition_count(N))
            fn = kernels.rank_gf_mod if statistic == "rank" else kernels.crank_gf_mod
            arrays = [fn(N, p) for p in mods]
            self._data[key] = (N, mods, arrays)
            return self._data[key]

    def clear(self) -> None:
        with self._lock:
            self._data.clear()


_STORE = _GFStore()


def clear_cache() -> None:
    """Drop cached generating-function tables."""
    _STORE.clear()
    _enumeration_counts.cache_clear()


def gf_coefficients(statistic: str, n: int, n_max: int | None = None) -> dict[int, int]:
    """Signed coefficients of ``q^n`` in the generating function, keyed by ``z`` power."""
    N, mods, arrays = _STORE.tables(statistic, max(n, n_max or 0))
    lo, hi = N - n, N + n + 1
    values = crt_reconstruct([a[n, lo:hi] for a in arrays], mods)
    return {m - n: v for m, v in enumerate(values) if v}


def crank_gf_coefficients(n: int) -> dict[int, int]:
    """Raw crank generating-function row; differs from the crank only at ``n = 1``."""
    return gf_coefficients("crank", n)


def _check_request(n: int, statistic: str, method: str) -> None:
    if statistic not in STATISTICS:
        raise ValueError(f"statistic must be one of {STATISTICS}, got {statistic!r}")
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if n > CEILINGS[method]:
        raise ResourceError(f"n = {n} exceeds the {method} ceiling {CEILINGS[method]}")
    if statistic == "crank" and method == "qseries" and n == 1:
        raise DomainError(
            "crank generating function disagrees with the crank at n = 1; use method='enumeration'"
        )


def distribution(n: int, statistic: str = "rank", method: str = "qseries", n_max: int | None = None) -> CountTable:
    """Exact table of counts for ``statistic`` at size ``n``.

    ``n_max`` pre-sizes the qseries tables so later calls up to ``n_max`` reuse
    them.
    """
    _check_request(n, statistic, method)
    if method == "enumeration":
        ranks, cranks = _enumeration_counts(n)
        counts = ranks if statistic == "rank" else cranks
    else:
        counts = gf_coefficients(statistic, n, n_max)
    return CountTable(n, statistic, counts, method)


def rank_distribution(n: int, method: str = "qseries") -> CountTable:
    """``N(n, m)`` for all ``m``."""
    return distribution(n, "rank", method)


def crank_distribution(n: int, method: str = "qseries") -> CountTable:
    """``M(n, m)`` for all ``m`` (combinatorial crank)."""
    return distribution(n, "crank", method)


def distributions(ns: Iterable[int], statistic: str = "rank", method: str = "qseries") -> list[CountTable]:
    """Tables for several sizes, sharing one generating-function expansion."""
    ns = list(ns)
    top = max(ns)
    return [distribution(n, statistic, method, n_max=top) for n in ns]


# ---------------------------------------------------------------------------
# moments and convergence diagnostics


def moments(table: CountTable, k_max: int) -> MomentVector:
    if k_max < 0:
        raise DomainError("k_max must be >= 0")
    raw = {k: sum(m**k * c for m, c in table.counts.items()) for k in range(k_max + 1)}
    return MomentVector(table.n, table.statistic, k_max, MappingProxyType(raw))


def exact_moment_ratio(table: CountTable, l: int) -> Fraction:
    """``N_{2l}(n) / ((6n)^l p(n))`` as an exact rational."""
    if l < 1:
        raise DomainError("l must be >= 1")
    mv = moments(table, 2 * l)
    return Fraction(mv.raw[2 * l], (6 * table.n) ** l * mv.raw[0])


def moment_ratio(n: int, l: int, statistic: str = "rank", method: str = "qseries", dps: int = DEFAULT_DPS):
    """``N_{2l}(n) / ((6n)^l p(n))`` as an mpmath real with ``dps`` digits."""
    r = exact_moment_ratio(distribution(n, statistic, method), l)
    with mpmath.workdps(dps):
        return mpmath.mpf(r.numerator) / r.denominator


def rescaled_cdf(table: CountTable) -> list[tuple[float, Fraction]]:
    """Breakpoints ``(m / sqrt(6n), P(stat <= m))`` of the rescaled CDF."""
    p = table.total
    acc = 0
    scale = math.sqrt(6 * table.n)
    out = []
    for m, c in table.counts.items():
        acc += c
        out.append((m / scale, Fraction(acc, p)))
    return out


def ks_distance_to_limit(table: CountTable) -> float:
    """``sup_x |F_n(x) - F_r(x)|`` with both one-sided limits at every breakpoint."""
    steps = rescaled_cdf(table)
    xs = np.array([x for x, _ in steps])
    right = np.array([float(f) for _, f in steps])
    left = np.concatenate(([0.0], right[:-1]))
    ref = logistic_cdf(xs)
    return float(max(np.max(np.abs(right - ref)), np.max(np.abs(left - ref))))


# ---------------------------------------------------------------------------
# CSV


CSV_HEADER = ("n", "statistic", "m", "count")


def write_count_tables(dest, tables: Iterable[CountTable]) -> None:
    """Write tables as ``n,statistic,m,count`` rows; counts as decimal strings."""
    own = isinstance(dest, (str, os.PathLike))
    fh = open(dest, "w", newline="") if own else dest
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for t in tables:
            for m, c in t.counts.items():
                w.writerow((t.n, t.statistic, m, str(c)))
    finally:
        if own:
            fh.close()


def read_count_tables(src, method: str = "enumeration") -> list[CountTable]:
    """Inverse of :func:`write_count_tables`; ``method`` only labels the result."""
    own = isinstance(src, (str, os.PathLike))
    fh = open(src, newline="") if own else src
    try:
        rows = list(csv.reader(fh))
    finally:
        if own:
            fh.close()
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ValueError(f"expected header {','.join(CSV_HEADER)}")
    grouped: dict[tuple[int, str], dict[int, int]] = {}
    for n, stat, m, c in rows[1:]:
        grouped.setdefault((int(n), stat), {})[int(m)] = int(c)
    return [CountTable(n, stat, counts, method) for (n, stat), counts in grouped.items()]


def count_tables_csv(tables: Iterable[CountTable]) -> str:
    buf = io.StringIO()
    write_count_tables(buf, tables)
    return buf.getvalue()
