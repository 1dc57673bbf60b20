import pytest

from alexandroff import models
from alexandroff.algebra import ZZ, AbelianGroup, Matrix
from alexandroff.checks import idempotent_identities, splitting_identities
from alexandroff.tower import (
    Tower,
    TowerMorphism,
    bond_report,
    converging_sequence_model,
    gsharp_tower,
    hawaiian_tower,
    level_cokernel,
    morphisms_equal,
)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_hawaiian_ranks_and_bonds(k):
    T = hawaiian_tower(k, 1, 5)
    assert [G.free_rank for G in T.levels] == [1, 2, 3, 4, 5]
    assert all(surj and corank == 1 for _, surj, corank in bond_report(T))


def test_hawaiian_other_degrees():
    T = hawaiian_tower(1, 1, 4, degree=2)
    assert all(G.is_zero for G in T.levels)
    T0 = hawaiian_tower(2, 1, 4, degree=0)
    assert all(G.free_rank == 1 for G in T0.levels)


def test_gsharp_on_discrete_points():
    X = models.circle4()
    U = frozenset({X.index("0"), X.index("2")})
    T = gsharp_tower(X, U, 3)
    assert [G.free_rank for G in T.levels] == [3, 6]
    assert T.stabilized


def test_converging_sequence_levels():
    towers = converging_sequence_model(4)
    assert [G.free_rank for G in towers[1].levels] == [1, 2, 3, 4]
    assert [G.free_rank for G in towers[3].levels] == [0, 0, 1, 2]


def test_level_cokernel_of_doubling_is_z2():
    C = Tower.constant(ZZ, 1, 3)
    two = Matrix.from_rows(ZZ, [[2]])
    Q = level_cokernel(TowerMorphism(C, C, [0, 1, 2], [two] * 3))
    assert all(G == AbelianGroup(0, (2,)) for G in Q.levels)


def test_idempotent_open_tail_is_truncation_verdict():
    ids = idempotent_identities(5, None)
    assert ids["xi_phi"].equal and not ids["xi_phi"].exact
    assert ids["xi_phi"].unchecked_levels == [5]
    assert ids["phi_xi_not_identity"]


def test_idempotent_repeat_tail_exact():
    ids = idempotent_identities(5, "repeat")
    assert ids["xi_phi"].equal and ids["xi_phi"].exact
    assert ids["phi_xi_is_eps"].equal


def test_splitting_identities():
    s = splitting_identities(5)
    assert s["Phi_Xi"].equal and s["Xi_Phi"].equal
    assert s["Phi_Xi"].exact and s["Xi_Phi"].exact


def test_unequal_morphisms_detected():
    C = Tower.constant(ZZ, 1, 3)
    one = TowerMorphism.identity(C)
    zero = TowerMorphism(C, C, [0, 1, 2], [Matrix.zeros(ZZ, 1, 1)] * 3)
    assert not morphisms_equal(one, zero).equal


def test_bad_bond_shape_rejected():
    with pytest.raises(ValueError):
        Tower(ZZ, [AbelianGroup(1), AbelianGroup(2)], [Matrix.zeros(ZZ, 2, 1)])
