import random

import pytest

from alexandroff import models
from alexandroff.algebra import QQ, ZZ, Matrix
from alexandroff.diagrams import (
    SHEAF,
    Diagram,
    Precosheaf,
    check_all_covers,
    colim0,
    constant_diagram,
    fiber_homology,
    lim0,
    parse_diagram,
    pushforward,
)


def test_parse_fixture_diagram():
    X = models.circle4()
    D = models.fixture_diagram("circle4_constant.diagram", X)
    assert D.is_constant() and D.ring == ZZ
    assert colim0(D).rank == 1


def test_functoriality_violation_rejected():
    X = models.fixture_space("chain2.poset")
    with pytest.raises(ValueError):
        Diagram(X, QQ, [1, 1], {})  # missing map on b <= t


def test_colim_counts_components():
    X = models.circle4()
    C = constant_diagram(X, ZZ, 2)
    U = frozenset({X.index("0"), X.index("2")})
    assert colim0(C, U).rank == 4
    assert colim0(C).rank == 2


def test_lim_of_sheaf_on_minimal_open_is_stalk():
    rng = random.Random(3)
    X = models.random_poset(rng, 5)
    S = models.random_sheaf_diagram(rng, X, QQ)
    assert S.orientation == SHEAF
    for x in range(X.n):
        assert lim0(S, X.minimal_open(x)).rank == S.ranks[x]


def test_induced_precosheaf_is_cosheaf():
    rng = random.Random(1)
    X = models.circle4()
    P = Precosheaf.from_diagram(models.random_diagram(rng, X, QQ))
    assert check_all_covers(P).holds


def test_constant_precosheaf_with_empty_value_is_not_cosheaf():
    X = models.circle4()
    P = Precosheaf.constant(X, QQ)
    assert P.value(frozenset()) == 1
    assert not check_all_covers(P).holds


def test_pushforward_along_identity():
    rng = random.Random(5)
    X = models.random_poset(rng, 4)
    D = models.random_diagram(rng, X, QQ)
    from alexandroff.finspace import MonotoneMap

    E = pushforward(MonotoneMap.identity(X), D)
    assert E.ranks == D.ranks
    L1 = fiber_homology(MonotoneMap.identity(X), D, 1)
    assert all(r == 0 for r in L1.ranks)
