from fractions import Fraction as F
from itertools import product

import numpy as np
import pytest

from vdirichlet import ExplosionError, GeneratedSemigroup, OrdinaryIndexSet, enumerate_elements
from vdirichlet.semigroup import format_rational, parse_rational

from .helpers import GENERATED_WINDOWS, divisor_counts


def brute_elements(gens, horizon):
    gens = [F(g) for g in gens]
    horizon = F(horizon)
    bound = [int(horizon / g) for g in gens]
    found = set()
    for ks in product(*(range(b + 1) for b in bound)):
        v = sum(k * g for k, g in zip(ks, gens))
        if v <= horizon:
            found.add(v)
    return sorted(found)


@pytest.mark.parametrize(
    "gens,horizon,expected",
    [
        (("1", "3/2"), 3, ["0", "1", "3/2", "2", "5/2", "3"]),
        (("1",), 4, ["0", "1", "2", "3", "4"]),
        (("1", "2"), 3, ["0", "1", "2", "3"]),
    ],
)
def test_enumeration_examples(gens, horizon, expected):
    assert list(enumerate_elements(gens, horizon).elements) == [F(x) for x in expected]


@pytest.mark.parametrize("gens,horizon", GENERATED_WINDOWS + [(("2/7", "3/5", "1"), "3")])
def test_enumeration_matches_brute_force(gens, horizon):
    s = GeneratedSemigroup(gens, horizon)
    assert list(s.elements) == brute_elements(gens, horizon)
    assert len(set(s.elements)) == len(s)


def test_ordinary_decompositions():
    s = OrdinaryIndexSet(12)
    assert s.decompositions(6) == [(1, 6), (2, 3), (3, 2), (6, 1)]
    assert s.decompositions(1) == [(1, 1)]


def test_generated_decompositions_match_pair_scan():
    s = GeneratedSemigroup(("1", "3/2"), 3)
    target = F(5, 2)
    scan = [(a, b) for a in s.elements for b in s.elements if a + b == target]
    assert s.decompositions("5/2") == scan == [(0, F(5, 2)), (1, F(3, 2)), (F(3, 2), 1), (F(5, 2), 0)]


@pytest.mark.parametrize("gens,horizon", GENERATED_WINDOWS)
def test_decompositions_symmetric_and_exact(gens, horizon):
    s = GeneratedSemigroup(gens, horizon)
    for lam in s.elements:
        pairs = s.decompositions(lam)
        assert all(a + b == lam for a, b in pairs)
        assert sorted(pairs) == sorted((b, a) for a, b in pairs)
        assert len(pairs) == sum(1 for a in s.elements if lam - a in s)


def test_divisor_counts_against_sieve():
    N = 10_000
    s = OrdinaryIndexSet(N)
    out = s.pair_table[0]
    counts = np.bincount(out, minlength=N)
    assert np.array_equal(counts, divisor_counts(N)[1:])


def test_ordinary_decompositions_symmetric():
    s = OrdinaryIndexSet(360)
    for n in (1, 12, 60, 360, 359):
        pairs = s.decompositions(n)
        assert sorted(pairs) == sorted((b, a) for a, b in pairs)


def test_membership_and_positions():
    s = GeneratedSemigroup(("1", "3/2"), 3)
    assert F(1, 2) not in s
    assert "5/2" in s
    assert s.position(F(3, 2)) == 2
    with pytest.raises(KeyError):
        s.position("1/2")
    with pytest.raises(KeyError):
        OrdinaryIndexSet(5).position(6)


def test_explosion_guard():
    with pytest.raises(ExplosionError):
        GeneratedSemigroup(("1/97", "1/89"), 50, max_elements=1000)


@pytest.mark.parametrize("bad", [0.5, True, None])
def test_rationals_must_be_exact(bad):
    with pytest.raises(TypeError):
        parse_rational(bad)


def test_rational_text_roundtrip():
    assert format_rational(parse_rational("6/4")) == "3/2"
    assert parse_rational(" 7 ") == 7


def test_invalid_generators():
    with pytest.raises(ValueError):
        GeneratedSemigroup(("0",), 3)
    with pytest.raises(ValueError):
        GeneratedSemigroup((), 3)
    with pytest.raises(ValueError):
        OrdinaryIndexSet(0)
