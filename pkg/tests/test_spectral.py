import random

import pytest
from hypothesis import given, settings, strategies as st

from alexandroff import models
from alexandroff.algebra import QQ, ZZ, chain_homology
from alexandroff.diagrams import constant_diagram
from alexandroff.finspace import MonotoneMap
from alexandroff.spectral import (
    Bicomplex,
    cartan_eilenberg_check,
    e2_pages,
    leray_degenerate_check,
    page_homology_consistent,
    run_pages,
    tot_homology_dims,
    total_complex,
)


def test_bicomplex_requires_field():
    with pytest.raises(ValueError):
        Bicomplex(ZZ, {(0, 0): 1}, {}, {})


def test_tensor_of_triangles():
    A = models.hollow_triangle(QQ)
    B = models.tensor_bicomplex(A, A)
    th = tot_homology_dims(B)
    # torus-like: Künneth gives 1, 2, 1
    assert [th.get(n, 0) for n in range(4)] == [1, 2, 1, 0]
    E = e2_pages(B)
    assert E.consistent
    assert E.ver.dim(1, 1) == 1


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10_000))
def test_pages_converge_to_total_homology(seed):
    rng = random.Random(seed)
    B = models.random_bicomplex(rng, QQ, rng.randint(1, 3), rng.randint(1, 3))
    T = total_complex(B).complex
    for n in range(2, B.S + B.T + 2):
        assert (T.d(n - 1) @ T.d(n)).is_zero()
    th = tot_homology_dims(B)
    for filt in ("column", "row"):
        pages, inf, _ = run_pages(B, 3, filt)
        assert page_homology_consistent(pages)
        for n, v in th.items():
            assert sum(inf.dim(s, n - s) for s in range(n + 1)) == v


@pytest.mark.parametrize("seed", range(4))
def test_cartan_eilenberg(seed):
    rng = random.Random(seed)
    X = models.random_chain_complex(rng, QQ, 3)
    v = cartan_eilenberg_check(X, 2, seed=seed)
    assert v.holds and v.columns_exact and v.hor_e2_on_bottom_row
    h = chain_homology(X, range(4))
    assert all(v.tot.get(n, 0) == h[n].free_rank for n in range(4))


def test_leray_identity_map():
    X = models.circle4()
    v = leray_degenerate_check(MonotoneMap.identity(X), constant_diagram(X, QQ))
    assert v.degenerate and v.agrees and v.chi_holds
    assert v.lhs == v.rhs


def test_leray_fold_not_degenerate_but_euler_holds():
    f = models.fixture_map("circle4_fold.map")
    v = leray_degenerate_check(f, constant_diagram(f.source, QQ))
    assert not v.degenerate
    assert v.agrees is None and v.chi_holds and v.chi_x == 0
