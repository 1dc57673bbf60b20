import random

import pytest

from alexandroff import models
from alexandroff.algebra import QQ, ZZ
from alexandroff.checks import large_vs_reduced
from alexandroff.diagrams import Precosheaf, constant_diagram
from alexandroff.nerve import (
    CechComplexSpec,
    cech_complex,
    cech_homology_of_diagram,
    cech_nerve,
    is_leray_cover,
    mayer_vietoris,
    minimal_open_cover,
    nerve_is_acyclic,
    order_complex,
    simplicial_homology,
)


def test_order_complex_circle():
    K = order_complex(models.circle4())
    assert K.f_vector() == (4, 4)
    assert simplicial_homology(K, ZZ, 2).ranks(range(3)) == (1, 1, 0)


def test_minimal_open_nerve_of_circle_is_contractible():
    # cover by all minimal opens; the intersections are not all acyclic
    X = models.circle4()
    cover = minimal_open_cover(X)
    K = cech_nerve(cover)
    assert K.f_vector() == (4, 5, 2)
    assert simplicial_homology(K, ZZ, 2).ranks(range(3)) == (1, 0, 0)
    assert not is_leray_cover(X, cover, ZZ)


def test_cech_with_induced_coefficients_recovers_circle():
    X = models.circle4()
    h, note = cech_homology_of_diagram(constant_diagram(X, ZZ), minimal_open_cover(X), 2)
    assert note is None
    assert h.ranks(range(3)) == (1, 1, 0)


def test_cech_not_applicable_on_sphere_cones():
    X = models.sphere6()
    cover = list(models.fixture_cover("sphere6.cover", X).values())
    h, note = cech_homology_of_diagram(constant_diagram(X, ZZ), cover, 2)
    assert h is None and "higher homology" in note


def test_mayer_vietoris_sphere():
    X = models.sphere6()
    c = models.fixture_cover("sphere6.cover", X)
    mv = mayer_vietoris(X, c["cone0"], c["cone1"], constant_diagram(X, ZZ), 2)
    assert mv.exact
    assert [mv.homology_X[n].format(ZZ) for n in range(3)] == ["Z", "0", "Z"]


def test_mayer_vietoris_requires_cover():
    X = models.sphere6()
    c = models.fixture_cover("sphere6.cover", X)
    with pytest.raises(ValueError):
        mayer_vietoris(X, c["cone0"], c["cone0"], constant_diagram(X, ZZ), 2)


def test_large_and_reduced_agree_with_acyclic_nerve():
    X = models.circle4()
    rng = random.Random(2)
    P = models.random_precosheaf(rng, X, QQ, empty_rank=2)
    cover = [X.minimal_open(X.index("1")), X.minimal_open(X.index("3"))]
    assert nerve_is_acyclic(cover, QQ)
    assert large_vs_reduced(P, cover)


def test_large_and_reduced_differ_on_disconnected_nerve():
    # two disjoint points: the empty-intersection tuple glues them in the large complex
    X = models.circle4()
    P = Precosheaf.constant(X, ZZ)
    cover = (frozenset({X.index("0")}), frozenset({X.index("2")}))
    large = cech_complex(CechComplexSpec(cover, P, "large"), 2).homology
    reduced = cech_complex(CechComplexSpec(cover, P, "reduced"), 2).homology
    assert large[0].free_rank == 1
    assert reduced[0].free_rank == 2
    assert not nerve_is_acyclic(cover, ZZ)


def test_empty_cover_of_empty_set():
    X = models.circle4()
    P = Precosheaf.constant(X, ZZ, 3)
    h = cech_complex(CechComplexSpec((frozenset(),), P, "large"), 3).homology
    assert h[0].free_rank == 3 and all(h[n].is_zero for n in (1, 2, 3))


def test_cover_members_must_be_open():
    X = models.circle4()
    with pytest.raises(ValueError):
        CechComplexSpec((frozenset({X.index("1")}),), Precosheaf.constant(X, ZZ))
