import random

import pytest
from hypothesis import given, settings, strategies as st

from alexandroff import models
from alexandroff.finspace import (
    FiniteSpace,
    MonotoneMap,
    ParseError,
    SizeBoundError,
    brute_force_opens,
    parse_map,
    parse_space,
)


def test_circle4_opens():
    X = models.circle4()
    opens = X.all_opens()
    assert len(opens) == 7
    assert frozenset({X.index("0"), X.index("2")}) in opens
    assert X.minimal_open(X.index("1")) == frozenset(X.index(a) for a in "012")


def test_parse_error_has_line():
    with pytest.raises(ParseError) as e:
        parse_space("elements: a b\nle: a z\n", "demo.poset")
    assert "demo.poset:2:" in str(e.value)


def test_preorder_cycle_allowed_and_quotient():
    X = parse_space("elements: a b c\nle: a b\nle: b a\nle: b c\n")
    assert not X.is_t0
    q, nu = X.t0_quotient()
    assert q.n == 2 and q.is_t0
    assert nu(X.index("a")) == nu(X.index("b"))


def test_components_and_partitions():
    X = FiniteSpace.discrete(3)
    assert len(X.components().blocks) == 3
    # partitions of a discrete 3-point space: the Bell number
    assert len(X.partitions()) == 5


def test_partition_bound():
    with pytest.raises(SizeBoundError):
        FiniteSpace.discrete(12).partitions()


def test_map_fixture_is_monotone():
    f = models.fixture_map("circle4_fold.map")
    assert f.target.n == 2
    assert sorted(f.images) == [0, 0, 1, 1]


def test_non_monotone_map_rejected():
    X = models.circle4()
    C = FiniteSpace.chain(2)
    with pytest.raises(ValueError):
        MonotoneMap(X, C, [1, 0, 1, 0])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 7))
def test_opens_match_brute_force(seed, n):
    X = models.random_preorder(random.Random(seed), n)
    got = sorted(X.all_opens(), key=lambda U: (len(U), sorted(U)))
    assert got == brute_force_opens(X)
    for x in range(X.n):
        assert X.minimal_open(x) == frozenset.intersection(*[U for U in got if x in U])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 7))
def test_t0_quotient_opens_bijective(seed, n):
    X = models.random_preorder(random.Random(seed), n)
    q, nu = X.t0_quotient()
    pulled = {nu.preimage(V) for V in q.all_opens()}
    assert pulled == set(X.all_opens())
