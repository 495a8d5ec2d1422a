"""Integer partitions, the rank and crank statistics, and exact counting.

Partitions are stored as weakly decreasing tuples of positive parts. The
partition function ``p(n)`` uses Euler's pentagonal recurrence over a shared,
lock-protected memo table that grows on demand.
"""
from __future__ import annotations

import bisect
import threading
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Partition",
    "rank",
    "crank",
    "conjugate",
    "partition_count",
    "partition_counts",
    "enumerate_partitions",
    "iter_part_lists",
    "ENUMERATION_CEILING",
]

#: Enumeration is exhaustive; beyond this size it is impractically slow.
ENUMERATION_CEILING = 60


@dataclass(frozen=True)
class Partition:
    """A weakly decreasing sequence of positive integers."""

    parts: tuple[int, ...]
    n: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        parts = tuple(int(x) for x in self.parts)
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"parts must be weakly decreasing, got {parts}")
        if parts and parts[-1] < 1:
            raise ValueError(f"parts must be positive, got {parts}")
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "n", sum(parts))

    @classmethod
    def from_parts(cls, parts: Iterable[int]) -> "Partition":
        """Build a partition from parts given in any order."""
        return cls(tuple(sorted(parts, reverse=True)))

    @classmethod
    def from_multiplicities(cls, mult: Sequence[int]) -> "Partition":
        """Build a partition from ``mult[k]`` = number of parts equal to ``k``."""
        parts: list[int] = []
        for k in range(len(mult) - 1, 0, -1):
            parts.extend([k] * int(mult[k]))
        return cls(tuple(parts))

    @property
    def largest(self) -> int:
        return self.parts[0] if self.parts else 0

    @property
    def length(self) -> int:
        return len(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)


def _parts(p: Partition | Sequence[int]) -> Sequence[int]:
    return p.parts if isinstance(p, Partition) else p


def rank(p: Partition | Sequence[int]) -> int:
    """Dyson's rank: largest part minus number of parts.

    Raises ``ValueError`` for the empty partition, where the rank is undefined.
    """
    parts = _parts(p)
    if not parts:
        raise ValueError("rank of the empty partition is undefined")
    return parts[0] - len(parts)


def crank(p: Partition | Sequence[int]) -> int:
    """Andrews-Garvan crank.

    With ``w`` the number of ones and ``u`` the number of parts larger than
    ``w``, the crank is the largest part when ``w == 0`` and ``u - w``
    otherwise. Parts must be weakly decreasing.
    """
    parts = _parts(p)
    if not parts:
        raise ValueError("crank of the empty partition is undefined")
    return _crank_sorted(parts)


def _crank_sorted(parts: Sequence[int]) -> int:
    ell = len(parts)
    if parts[-1] != 1:
        return parts[0]
    # parts descending: count of ones is ell minus the index of the first 1
    ones = ell - _first_index_at_most(parts, 1)
    larger = _first_index_at_most(parts, ones)
    return larger - ones


def _first_index_at_most(parts: Sequence[int], v: int) -> int:
    """Index of the first part ``<= v`` in a descending sequence."""
    lo, hi = 0, len(parts)
    while lo < hi:
        mid = (lo + hi) // 2
        if parts[mid] > v:
            lo = mid + 1
        else:
            hi = mid
    return lo


def conjugate(p: Partition) -> Partition:
    """Transpose of the Young diagram."""
    parts = p.parts
    if not parts:
        return Partition(())
    rev = parts[::-1]
    # column j has as many cells as there are parts > j
    out = tuple(len(parts) - bisect.bisect_right(rev, j) for j in range(parts[0]))
    return Partition(out)


_PN: list[int] = [1]
_PN_LOCK = threading.Lock()


def _extend_pn(n: int) -> None:
    with _PN_LOCK:
        table = _PN
        for m in range(len(table), n + 1):
            total = 0
            k = 1
            while True:
                g1 = k * (3 * k - 1) // 2
                if g1 > m:
                    break
                g2 = g1 + k
                term = table[m - g1]
                if g2 <= m:
                    term += table[m - g2]
                total += term if k % 2 else -term
                k += 1
            table.append(total)


def partition_count(n: int) -> int:
    """Exact ``p(n)`` by Euler's pentagonal-number recurrence; ``p(0) = 1``."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n >= len(_PN):
        _extend_pn(n)
    return _PN[n]


def partition_counts(n: int) -> list[int]:
    """``[p(0), ..., p(n)]`` as a fresh list."""
    partition_count(n)
    return _PN[: n + 1]


def iter_part_lists(n: int) -> Iterator[list[int]]:
    """Yield partitions of ``n`` as lists in lexicographically decreasing order.

    Zoghbi-Stojmenovic ZS1. The yielded list is a fresh slice each time.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n == 0:
        yield []
        return
    x = [1] * (n + 1)
    x[1] = n
    m = h = 1
    yield x[1:2]
    while x[1] != 1:
        if x[h] == 2:
            m += 1
            x[h] = 1
            h -= 1
        else:
            r = x[h] - 1
            t = m - h + 1
            x[h] = r
            while t >= r:
                h += 1
                x[h] = r
                t -= r
            if t == 0:
                m = h
            else:
                m = h + 1
                if t > 1:
                    h += 1
                    x[h] = t
        yield x[1 : m + 1]


def enumerate_partitions(n: int) -> Iterator[Partition]:
    """Every partition of ``n`` exactly once, lexicographically decreasing.

    Exhaustive; intended for ``n`` up to about ``ENUMERATION_CEILING``.
    """
    for parts in iter_part_lists(n):
        yield Partition(tuple(parts))
