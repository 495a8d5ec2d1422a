import io
from collections import Counter
from fractions import Fraction

import mpmath
import pytest

from conftest import naive_crank, naive_partitions
from rankcrank import exact, laws
from rankcrank.errors import DomainError, ResourceError
from rankcrank.partitions import partition_count


def _naive_tables(n):
    parts = list(naive_partitions(n))
    return Counter(p[0] - len(p) for p in parts), Counter(naive_crank(list(p)) for p in parts)


def test_rank_table_for_four():
    t = exact.rank_distribution(4)
    assert dict(t.counts) == {-3: 1, -1: 1, 0: 1, 1: 1, 3: 1}
    assert t.total == 5
    assert exact.moments(t, 2).raw[2] == 20
    assert exact.exact_moment_ratio(t, 1) == Fraction(1, 6)


def test_crank_table_for_four():
    assert dict(exact.crank_distribution(4).counts) == {-4: 1, -2: 1, 0: 1, 2: 1, 4: 1}


def test_trivial_sizes():
    assert dict(exact.rank_distribution(1).counts) == {0: 1}
    assert dict(exact.crank_distribution(1, "enumeration").counts) == {-1: 1}


def test_crank_generating_function_exception_at_one():
    assert exact.crank_gf_coefficients(1) == {-1: 1, 0: -1, 1: 1}
    with pytest.raises(DomainError):
        exact.crank_distribution(1, "qseries")


@pytest.mark.parametrize("n", [2, 3, 7, 12, 18])
def test_both_routes_match_naive_definitions(n):
    ranks, cranks = _naive_tables(n)
    for method in exact.METHODS:
        assert dict(exact.rank_distribution(n, method).counts) == dict(ranks)
        assert dict(exact.crank_distribution(n, method).counts) == dict(cranks)


def test_qseries_rank_agrees_with_enumeration_to_forty(backend):
    exact.clear_cache()
    for n in range(1, 41):
        a = exact.distribution(n, "rank", "qseries", n_max=40)
        b = exact.distribution(n, "rank", "enumeration")
        assert a.same_counts(b), n


@pytest.mark.parametrize("statistic", exact.STATISTICS)
def test_structural_checks_to_two_hundred(statistic):
    for t in exact.distributions(range(2, 201), statistic):
        chk = t.check()
        assert all(chk.values()), (t.n, chk)
        assert all(t[-m] == c for m, c in t.counts.items())


@pytest.mark.parametrize(
    "statistic, modulus, residue",
    [("rank", 5, 4), ("rank", 7, 5), ("crank", 5, 4), ("crank", 7, 5), ("crank", 11, 6)],
)
def test_congruence_classes_equidistribute(statistic, modulus, residue):
    # each residue class of the statistic holds exactly p(n)/modulus partitions
    for n in range(residue, 180, modulus):
        t = exact.distribution(n, statistic, n_max=180)
        classes = Counter()
        for m, c in t.counts.items():
            classes[m % modulus] += c
        assert len(set(classes[r] for r in range(modulus))) == 1, n


def test_odd_moments_vanish():
    for t in exact.distributions([5, 50, 300], "rank") + exact.distributions([5, 50, 300], "crank"):
        raw = exact.moments(t, 9).raw
        assert all(raw[k] == 0 for k in (1, 3, 5, 7, 9))


def test_crank_second_moment_identity():
    # sum m^2 M(n, m) = 2 n p(n) for n >= 2
    for t in exact.distributions([2, 10, 77, 500], "crank"):
        assert exact.moments(t, 2).raw[2] == 2 * t.n * partition_count(t.n)
        assert exact.exact_moment_ratio(t, 1) == Fraction(1, 3)


def test_moment_ratio_high_precision():
    r = exact.moment_ratio(100, 1)
    frac = exact.exact_moment_ratio(exact.rank_distribution(100), 1)
    with mpmath.workdps(60):
        assert abs(r - mpmath.mpf(frac.numerator) / frac.denominator) < mpmath.mpf(10) ** -48
    assert abs(float(r) - 0.30629) < 1e-5


def test_rank_moment_error_shrinks():
    errs = [abs(exact.exact_moment_ratio(exact.rank_distribution(n), 1) - Fraction(1, 3)) for n in (100, 400, 1000)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 0.05


def test_ks_distance_to_limit_shrinks():
    d = [exact.ks_distance_to_limit(exact.rank_distribution(n)) for n in (25, 100, 400)]
    assert d[0] > d[1] > d[2]


def test_rescaled_cdf_ends_at_one():
    steps = exact.rescaled_cdf(exact.rank_distribution(30))
    assert steps[-1][1] == 1
    assert all(a[0] < b[0] and a[1] < b[1] for a, b in zip(steps, steps[1:]))


def test_csv_round_trip():
    tables = [exact.rank_distribution(60), exact.crank_distribution(60)]
    text = exact.count_tables_csv(tables)
    assert text.startswith("n,statistic,m,count\n")
    back = exact.read_count_tables(io.StringIO(text), method="qseries")
    assert all(a.same_counts(b) for a, b in zip(tables, back))
    with pytest.raises(ValueError):
        exact.read_count_tables(io.StringIO("a,b\n"))


def test_count_table_big_integers_survive_csv():
    t = exact.rank_distribution(500)
    back = exact.read_count_tables(io.StringIO(exact.count_tables_csv([t])))[0]
    assert back.total == partition_count(500)


def test_request_validation():
    with pytest.raises(DomainError):
        exact.rank_distribution(0)
    with pytest.raises(ResourceError):
        exact.rank_distribution(61, "enumeration")
    with pytest.raises(ResourceError):
        exact.rank_distribution(exact.CEILINGS["qseries"] + 1)
    with pytest.raises(ValueError):
        exact.distribution(5, "span")
    with pytest.raises(ValueError):
        exact.distribution(5, "rank", "magic")


def test_crt_moduli_cover_bound():
    bound = 2 * partition_count(1500) + 1
    mods = exact.crt_moduli(bound)
    prod = 1
    for m in mods:
        assert exact._is_prime(m) and m < 2**62
        prod *= m
    assert prod > bound
    vals = [-(10**40), 0, 12345, 10**40 + 7]
    residues = [[v % m for v in vals] for m in mods]
    assert exact.crt_reconstruct(residues, mods) == vals


def test_limit_moment_values():
    assert laws.limit_even_moment(1) == Fraction(1, 3)
    assert laws.limit_even_moment(2) == Fraction(7, 15)
