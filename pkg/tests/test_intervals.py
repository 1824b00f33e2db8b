import random
from fractions import Fraction

import pytest

from ocreach.automaton import ValidationError
from ocreach.intervals import (OMEGA, ConcreteIntervalSet,
                               canonical_decomposition, density_at,
                               density_infimum, density_plus_at, interval_set,
                               ratio_matrix)


def test_canonical_decomposition():
    s = interval_set([(None, 0), (3, 6), (8, 10)])
    intervals, gaps, types = canonical_decomposition(s)
    assert intervals == [(None, 0), (3, 6), (8, 10)]
    assert gaps == [(1, 2), (7, 7), (11, None)]
    assert types == ("-inf", "1", "1")


def test_canonical_full_line():
    intervals, gaps, types = canonical_decomposition(interval_set([(None, None)]))
    assert types == ("2inf",)
    assert gaps == []


def test_canonical_merges_contiguous():
    s = interval_set([(0, 2), (3, 4)])
    assert s.pieces == ((0, 4, 0),)


def test_ratio_matrix():
    s = interval_set([(None, 0), (3, 6), (8, 10)])
    assert ratio_matrix(s) == [[0, 1, 1], [0, 0, 0], [OMEGA, OMEGA, OMEGA]]


def test_ratio_matrix_halfline():
    assert ratio_matrix(interval_set([(0, None)])) == [[OMEGA]]


def test_ratio_matrix_full_line():
    assert ratio_matrix(interval_set([(None, None)])) == []


def test_ratio_matrix_empty_errors():
    with pytest.raises(ValidationError):
        ratio_matrix(interval_set([]))


def test_density_examples():
    s = interval_set([(None, 0), (5, 10)])
    assert density_at(s, 10, 1, 10) == Fraction(7, 21)
    assert density_at(s, 0, 1, 4) == Fraction(5, 9)
    assert density_at(interval_set([(None, None)]), 123, 7, 9) == 1


def test_density_plus_examples():
    assert density_plus_at(interval_set([(5, 10)]), 5, 1, 5) == Fraction(6, 11)
    assert density_plus_at(interval_set([(4, 8)]), 4, 1, 4) == Fraction(5, 9)
    assert density_plus_at(interval_set([(4, 8)]), 5, 1, 0) == 1


def test_density_plus_preconditions():
    with pytest.raises(ValidationError):
        density_plus_at(interval_set([(0, 5)]), 3, 1, 4)
    with pytest.raises(ValidationError):
        density_plus_at(interval_set([(None, 5)]), 3, 1, 1)


def test_density_counts_strided_sets():
    evens = interval_set([(None, None)], stride=(2, 0))
    assert density_at(evens, 0, 1, 5) == Fraction(5, 11)
    assert density_at(evens, 0, 2, 5) == 1


def test_density_scaling_fact():
    # With infima over a truncated range, the k-density dominates the
    # (k*l)-density scaled by 1/(2l).
    rng = random.Random(3)
    for _ in range(40):
        pieces = sorted(rng.sample(range(-30, 30), 4))
        s = interval_set([(pieces[0], pieces[1]), (pieces[2], pieces[3])])
        x = rng.choice([pieces[0], pieces[1], pieces[2], pieces[3]])
        k = rng.randint(1, 3)
        ell = rng.randint(1, 3)
        lhs = density_infimum(s, x, k, 50)
        rhs = density_infimum(s, x, k * ell, 50)
        assert lhs >= Fraction(1, 2 * ell) * rhs


def test_union_density_bound():
    rng = random.Random(4)
    for _ in range(25):
        vals = sorted(rng.sample(range(-25, 25), 8))
        s1 = interval_set([(vals[0], vals[1]), (vals[4], vals[5])])
        s2 = interval_set([(vals[2], vals[3]), (vals[6], vals[7])])
        union = s1.union(s2)
        for k in (1, 2):
            def truncated_density(s):
                pts = [x for (lo, hi, _r) in s.pieces
                       for x in range(lo, hi + 1)]
                return min(density_infimum(s, x, k, 50) for x in pts)

            du = truncated_density(union)
            assert du >= min(truncated_density(s1), truncated_density(s2))


def test_membership_and_counting():
    odds_up = interval_set([(1, None)], stride=(2, 1))
    assert 7 in odds_up and 8 not in odds_up and -3 not in odds_up
    assert odds_up.window_count(0, 10) == 5
    assert odds_up.min_member(4) == 5
    assert odds_up.min_member(0, congruence=(3, 0)) == 3


def test_complement_round_trip():
    rng = random.Random(9)
    for _ in range(50):
        pieces = []
        for _ in range(rng.randint(0, 3)):
            lo = rng.randint(-20, 20)
            pieces.append((lo, lo + rng.randint(0, 6),
                           rng.randint(0, 2)))
        s = ConcreteIntervalSet.build(pieces, 3)
        comp = s.complement()
        for x in range(-40, 41):
            assert (x in s) != (x in comp)
        assert s.complement().complement().same_set(s)


def test_intersect_union_pointwise():
    rng = random.Random(10)
    for _ in range(50):
        def rand_set():
            pieces = [(rng.randint(-15, 15), rng.randint(-15, 15), rng.randint(0, 1))
                      for _ in range(2)]
            pieces = [(min(a, b), max(a, b), r) for (a, b, r) in pieces]
            return ConcreteIntervalSet.build(pieces, 2)

        s1, s2 = rand_set(), rand_set()
        inter, union = s1.intersect(s2), s1.union(s2)
        for x in range(-25, 26):
            assert (x in inter) == ((x in s1) and (x in s2))
            assert (x in union) == ((x in s1) or (x in s2))


def test_negation():
    s = interval_set([(3, None)], stride=(2, 1))
    n = s.negated()
    for x in range(-30, 30):
        assert (x in n) == (-x in s)
