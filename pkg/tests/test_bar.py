import random

from hypothesis import given, settings, strategies as st

from alexandroff import models
from alexandroff.algebra import GF, QQ, ZZ
from alexandroff.bar import (
    bar_chain,
    bar_homology,
    derived_lim_oracle,
    enumerate_chains,
    higher_lim,
    standard_injective,
)
from alexandroff.diagrams import constant_diagram


def test_circle4_constant_z():
    h = bar_homology(constant_diagram(models.circle4(), ZZ), 3)
    assert [h[n].format(ZZ) for n in range(4)] == ["Z", "Z", "0", "0"]


def test_sphere6_constant_z():
    h = bar_homology(constant_diagram(models.sphere6(), ZZ), 3)
    assert [h[n].format(ZZ) for n in range(4)] == ["Z", "0", "Z", "0"]


def test_normalized_chains_skip_repeats():
    X = models.fixture_space("chain2.poset")
    assert len(enumerate_chains(X, 1, True)) == 1
    assert len(enumerate_chains(X, 1, False)) == 3


def test_bar_differential_squares_to_zero():
    rng = random.Random(0)
    D = models.random_diagram(rng, models.sphere6(), ZZ)
    B = bar_chain(D, 4)
    C = B.complex
    for n in range(2, 5):
        assert (C.d(n - 1) @ C.d(n)).is_zero()


def test_standard_injective_acyclic():
    X = models.sphere6()
    J = standard_injective(X, 0, 2, QQ)
    h = bar_homology(J, 3)
    assert h[0].free_rank == 2
    assert all(h[n].is_zero for n in (1, 2, 3))


def test_circle_sheaf_cohomology_oracle():
    X = models.circle4()
    S = constant_diagram(X, QQ, 1, "sheaf")
    o = derived_lim_oracle(S)
    assert tuple(o.dims[:2]) == (1, 1)
    assert higher_lim(S, 1).free_rank == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_full_vs_normalized(seed):
    rng = random.Random(seed)
    X = models.random_poset(rng, rng.randint(1, 6))
    D = models.random_diagram(rng, X, GF(2))
    a = bar_homology(D, 3, True)
    b = bar_homology(D, 3, False)
    assert all(a[n] == b[n] for n in range(4))
