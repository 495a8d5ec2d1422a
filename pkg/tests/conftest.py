import pytest

from rankcrank._backend import BACKENDS, HAVE_NUMBA, using_backend

AVAILABLE = [b for b in BACKENDS if b != "numba" or HAVE_NUMBA]


@pytest.fixture(params=AVAILABLE)
def backend(request):
    with using_backend(request.param):
        yield request.param


def naive_partitions(n, cap=None):
    """Partitions of n with parts <= cap, by plain recursion (ascending cap)."""
    cap = n if cap is None else cap
    if n == 0:
        yield ()
        return
    for first in range(min(n, cap), 0, -1):
        for rest in naive_partitions(n - first, first):
            yield (first,) + rest


def naive_crank(parts):
    ones = parts.count(1)
    if ones == 0:
        return max(parts)
    return sum(1 for x in parts if x > ones) - ones


def coin_change_counts(n):
    """p(0..n) by the unbounded-knapsack recurrence, independent of pentagonal numbers."""
    p = [1] + [0] * n
    for k in range(1, n + 1):
        for m in range(k, n + 1):
            p[m] += p[m - k]
    return p


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
