import pytest
from hypothesis import given, settings, strategies as st

from alexandroff.algebra import (
    GF,
    QQ,
    ZZ,
    AbelianGroup,
    ChainComplex,
    Matrix,
    Ring,
    chain_homology,
    cokernel_presentation,
    invariant_factors,
    kernel_basis,
    rank,
    smith_normal_form,
    solve,
)
from alexandroff.models import hollow_triangle


def test_snf_diag_2_3():
    M = Matrix.from_rows(ZZ, [[2, 0], [0, 3]])
    s = smith_normal_form(M)
    assert s.diagonal == (1, 6)
    assert s.U @ M @ s.V == s.D


def test_invariant_factors_frozen():
    M = Matrix.from_rows(ZZ, [[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert invariant_factors(M) == (2, 6, 12)


def test_cokernel_torsion():
    G = cokernel_presentation(Matrix.from_rows(ZZ, [[2, 0], [0, 4], [0, 0]]))
    assert G == AbelianGroup(1, (2, 4))
    assert G.format(ZZ) == "Z + Z/2 + Z/4"


def test_ring_parse():
    assert Ring.parse("Z") == ZZ
    assert Ring.parse("Q") == QQ
    assert Ring.parse("F5") == GF(5)
    with pytest.raises(ValueError):
        Ring.parse("F4")


def test_rank_depends_on_ring():
    rows = [[1, 1], [1, -1]]
    assert rank(Matrix.from_rows(QQ, rows)) == 2
    assert rank(Matrix.from_rows(GF(2), rows)) == 1


def test_hollow_triangle():
    h = chain_homology(hollow_triangle(ZZ), range(3))
    assert h.ranks(range(3)) == (1, 1, 0)


def test_boundary_check_rejects_bad_complex():
    with pytest.raises(ValueError):
        ChainComplex(ZZ, {0: 1, 1: 1, 2: 1}, {1: Matrix.from_rows(ZZ, [[1]]), 2: Matrix.from_rows(ZZ, [[1]])})


def test_torsion_homology_real_projective_plane_like():
    # Z --2--> Z gives H_0 = Z/2
    C = ChainComplex(ZZ, {0: 1, 1: 1}, {1: Matrix.from_rows(ZZ, [[2]])})
    h = chain_homology(C, range(2))
    assert h[0] == AbelianGroup(0, (2,))
    assert h[1].is_zero


small_int_matrices = st.integers(0, 4).flatmap(
    lambda r: st.integers(0, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r).map(
            lambda rows: Matrix.from_rows(ZZ, rows, c)
        )
    )
)


@settings(max_examples=80, deadline=None)
@given(small_int_matrices)
def test_snf_properties(M):
    s = smith_normal_form(M)
    assert s.U @ M @ s.V == s.D
    assert s.U @ s.U_inv == Matrix.identity(ZZ, M.rows)
    assert s.V @ s.V_inv == Matrix.identity(ZZ, M.cols)
    d = [x for x in s.diagonal if x]
    assert all(x > 0 for x in d)
    assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
    assert len(d) == rank(Matrix(QQ, M.rows, M.cols, M.data))


@settings(max_examples=60, deadline=None)
@given(small_int_matrices)
def test_kernel_and_solve(M):
    K = kernel_basis(M)
    assert (M @ K).is_zero()
    assert K.cols == M.cols - rank(M)
    x = solve(M, M)
    assert x is not None and M @ x == M
