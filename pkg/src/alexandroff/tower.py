"""Towers of finitely generated modules: a finite window onto pro-objects.

A :class:`Tower` stores levels ``M_0, ..., M_L`` and bonds ``M_{n+1} -> M_n``
on coordinates (torsion generators first, then free ones).  What happens
beyond level L is recorded by ``tail``:

* ``"identity"``  levels repeat M_L with identity bonds (the tower is stabilized);
* ``"repeat"``    levels repeat M_L with the last bond repeated;
* ``None``        nothing is known; verdicts are only valid at truncation L.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebra import (
    AbelianGroup,
    Matrix,
    Ring,
    ZZ,
    cokernel,
    format_matrix,
    homology_basis,
    induced_map,
    kernel_basis,
    rank,
    smith_normal_form,
    solve,
    block_diagonal,
)
from .bar import bar_chain, constant_chain_map
from .diagrams import colim0, constant_diagram
from .finspace import FiniteSpace, MonotoneMap


class LevelizationRequired(ValueError):
    """Level-wise kernels and cokernels need identity index functions."""


def _reduce(M: Matrix, moduli: Sequence[int]) -> Matrix:
    k = len(moduli)
    if not k:
        return M
    data = [[x % moduli[i] if i < k else x for x in row] for i, row in enumerate(M.data)]
    return Matrix(M.ring, M.rows, M.cols, data)


def _dim(G: AbelianGroup) -> int:
    return len(G.torsion) + G.free_rank


class Tower:
    def __init__(self, ring: Ring, levels: Sequence[AbelianGroup], bonds: Sequence[Matrix], tail: str | None = "identity"):
        levels = list(levels)
        bonds = list(bonds)
        if not levels:
            raise ValueError("a tower needs at least one level")
        if len(bonds) != len(levels) - 1:
            raise ValueError("need exactly one bond between consecutive levels")
        if tail not in ("identity", "repeat", None):
            raise ValueError("tail must be 'identity', 'repeat' or None")
        for n, b in enumerate(bonds):
            want = (_dim(levels[n]), _dim(levels[n + 1]))
            if b.shape != want:
                raise ValueError(f"bond {n} has shape {b.shape}, expected {want}")
            if b.ring != ring:
                raise ValueError("bond over the wrong ring")
        if tail == "repeat":
            if len(levels) < 2 or levels[-1] != levels[-2]:
                raise ValueError("a repeating tail needs the last two levels equal")
        self.ring = ring
        self.levels = levels
        self.bonds = [_reduce(b, levels[n].torsion) for n, b in enumerate(bonds)]
        self.tail = tail

    @property
    def stabilized(self) -> bool:
        return self.tail == "identity"

    @property
    def last(self) -> int:
        return len(self.levels) - 1

    def level(self, n: int) -> AbelianGroup:
        return self.levels[min(n, self.last)]

    def bond(self, n: int) -> Matrix:
        """Bond ``M_{n+1} -> M_n``, following the tail past the truncation."""
        if n < self.last:
            return self.bonds[n]
        if self.tail == "identity":
            return Matrix.identity(self.ring, _dim(self.levels[-1]))
        if self.tail == "repeat":
            return self.bonds[-1]
        raise IndexError(f"bond {n} lies beyond the truncation of an open-ended tower")

    def composite(self, i: int, s: int) -> Matrix:
        """``ρ_{i,s} : M_s -> M_i`` for ``i <= s``."""
        if s < i:
            raise ValueError("composite bonds go downwards")
        M = Matrix.identity(self.ring, _dim(self.level(s)))
        for n in range(s - 1, i - 1, -1):
            M = _reduce(self.bond(n) @ M, self.level(n).torsion)
        return M

    def known(self, s: int) -> bool:
        return s <= self.last or self.tail is not None

    def dump(self) -> list[str]:
        out = []
        for n, G in enumerate(self.levels):
            line = f"level {n}: rank {G.free_rank}"
            if G.torsion:
                line += " torsion " + " ".join(str(d) for d in G.torsion)
            out.append(line)
        for n, b in enumerate(self.bonds):
            out.append(f"bond {n}: {format_matrix(b)}")
        out.append(f"tail: {self.tail or 'open'}")
        return out

    def __repr__(self) -> str:
        return f"Tower({[G.format(self.ring) for G in self.levels]}, tail={self.tail})"

    @classmethod
    def constant(cls, ring: Ring, G: AbelianGroup | int, levels: int = 1) -> "Tower":
        G = AbelianGroup(G) if isinstance(G, int) else G
        I = Matrix.identity(ring, _dim(G))
        return cls(ring, [G] * levels, [I] * (levels - 1), "identity")


@dataclass
class TowerMorphism:
    """Level maps ``g_j : M_{index[j]} -> N_j`` commuting with bonds."""

    source: Tower
    target: Tower
    index: list
    maps: list

    def __post_init__(self):
        S, T = self.source, self.target
        if len(self.index) != len(T.levels) or len(self.maps) != len(T.levels):
            raise ValueError("one index and one map per target level")
        for j, (i, g) in enumerate(zip(self.index, self.maps)):
            if i < 0 or not S.known(i):
                raise ValueError(f"index {i} for level {j} is outside the source tower")
            if g.shape != (_dim(T.levels[j]), _dim(S.level(i))):
                raise ValueError(f"map at level {j} has shape {g.shape}")
        for j in range(len(T.levels) - 1):
            a, b = self.index[j], self.index[j + 1]
            if b < a:
                raise ValueError("index function must be monotone")
            lhs = _reduce(T.bond(j) @ self.maps[j + 1], T.levels[j].torsion)
            rhs = _reduce(self.maps[j] @ S.composite(a, b), T.levels[j].torsion)
            if lhs != rhs:
                raise ValueError(f"square at target level {j} does not commute")
        self.maps = [_reduce(g, T.levels[j].torsion) for j, g in enumerate(self.maps)]

    @classmethod
    def identity(cls, X: Tower) -> "TowerMorphism":
        return cls(X, X, list(range(len(X.levels))), [Matrix.identity(X.ring, _dim(G)) for G in X.levels])

    def compose_after(self, other: "TowerMorphism") -> "TowerMorphism":
        """``self ∘ other`` where other: A -> B and self: B -> C."""
        if other.target.levels != self.source.levels:
            raise ValueError("morphisms do not compose")
        B = self.source
        idx, maps = [], []
        for j, i in enumerate(self.index):
            if i > B.last:
                # past the truncation only an identity tail tells us other's level map
                if B.tail != "identity":
                    raise ValueError("cannot compose through levels past the truncation")
                i = B.last
            idx.append(other.index[i])
            maps.append(self.maps[j] @ other.maps[i])
        return TowerMorphism(other.source, self.target, idx, maps)


@dataclass
class Verdict:
    equal: bool
    exact: bool
    witnesses: dict = field(default_factory=dict)
    unchecked_levels: list = field(default_factory=list)

    def __bool__(self):
        return self.equal

    def describe(self) -> str:
        if not self.equal:
            return "not equal"
        if self.exact:
            return "equal"
        return f"equal at truncation (levels {self.unchecked_levels} unchecked)"


def _search_limit(S: Tower, start: int) -> int:
    """Largest s worth trying for a witness.

    For an identity tail nothing changes after the truncation.  For a
    repeating tail with bond B, the images of B^k decrease and stop changing
    once k reaches the rank, so a witness, if any, appears by then.
    """
    if S.tail == "identity":
        return max(S.last, start)
    if S.tail == "repeat":
        return max(S.last, start) + _dim(S.levels[-1]) + 1
    return S.last


def morphisms_equal(f: TowerMorphism, g: TowerMorphism) -> Verdict:
    """Equality of the classes of f and g in ``lim_j colim_i Hom(M_i, N_j)``.

    Level j agrees when some s at or above both indices gives
    ``f_j ∘ ρ = g_j ∘ ρ``.  Exact when the source tail is known; for an
    open-ended source a level whose indices already sit at the truncation
    has no look-ahead and is reported as unchecked.
    """
    if f.target.levels != g.target.levels or f.source.levels != g.source.levels:
        raise ValueError("morphisms must share source and target")
    S, T = f.source, f.target
    witnesses, unchecked = {}, []
    for j in range(len(T.levels)):
        a, b = f.index[j], g.index[j]
        start = max(a, b)
        if S.tail is None and start >= S.last and len(S.levels) > 1:
            unchecked.append(j)
            continue
        found = None
        for s in range(start, _search_limit(S, start) + 1):
            lhs = _reduce(f.maps[j] @ S.composite(a, s), T.levels[j].torsion)
            rhs = _reduce(g.maps[j] @ S.composite(b, s), T.levels[j].torsion)
            if lhs == rhs:
                found = s
                break
        if found is None:
            return Verdict(False, S.tail is not None and T.tail is not None, witnesses, unchecked)
        witnesses[j] = found
    exact = S.tail is not None and T.tail is not None and not unchecked
    return Verdict(True, exact, witnesses, unchecked)


# ---------------------------------------------------------------------------
# level-wise kernels and cokernels


def _check_levelized(f: TowerMorphism):
    if f.index != list(range(len(f.target.levels))) or len(f.source.levels) != len(f.target.levels):
        raise LevelizationRequired("morphism must use the identity index function on equally long towers")


def level_kernel(f: TowerMorphism) -> Tower:
    _check_levelized(f)
    S = f.source
    for G in S.levels:
        if G.torsion:
            raise ValueError("level_kernel supports torsion-free source levels only")
    Ks = [kernel_basis(g) for g in f.maps]
    levels = [AbelianGroup(K.cols) for K in Ks]
    bonds = []
    for n in range(len(Ks) - 1):
        X = solve(Ks[n], S.bond(n) @ Ks[n + 1])
        if X is None:
            raise ArithmeticError("bond does not preserve kernels")
        bonds.append(X)
    tail = S.tail if S.tail == f.target.tail else None
    return Tower(S.ring, levels, bonds, tail if len(levels) > 1 or tail != "repeat" else None)


def level_cokernel(f: TowerMorphism) -> Tower:
    _check_levelized(f)
    T = f.target
    for G in T.levels:
        if G.torsion:
            raise ValueError("level_cokernel supports torsion-free target levels only")
    cks = [cokernel(g) for g in f.maps]
    levels = [c.group for c in cks]
    bonds = [cks[n].Q @ T.bond(n) @ cks[n + 1].S for n in range(len(cks) - 1)]
    tail = T.tail if T.tail == f.source.tail else None
    return Tower(T.ring, levels, bonds, tail)


def is_zero_tower(X: Tower) -> bool:
    return all(G.is_zero for G in X.levels)


# ---------------------------------------------------------------------------
# finite models


def wedge_model(k: int, n: int) -> FiniteSpace:
    """Finite model of n wedged k-spheres (k = 1, 2) or of n points (k = 0).

    k = 1: n copies of the 4-point circle glued at the point 0.
    k = 2: n copies of the 6-point sphere glued at 0.
    k = 0: points 0, p1..pn with 0 <= pn, so n components.
    """
    if k == 0:
        labels = ["0"] + [f"p{s}" for s in range(1, n + 1)]
        pairs = [("0", f"p{n}")] if n else []
        return FiniteSpace.from_relations(labels, pairs)
    labels = ["0"]
    pairs = []
    for s in range(1, n + 1):
        a, b, c = f"a{s}", f"b{s}", f"c{s}"
        labels += [a, b, c]
        pairs += [("0", b), ("0", c), (a, b), (a, c)]
        if k == 2:
            u, v = f"u{s}", f"v{s}"
            labels += [u, v]
            pairs += [(b, u), (b, v), (c, u), (c, v)]
    if k not in (1, 2):
        raise ValueError(f"unsupported sphere dimension {k}")
    return FiniteSpace.from_relations(labels, pairs)


def collapse_map(k: int, n: int) -> MonotoneMap:
    """Model of ``Y_{n+1} -> Y_n`` sending the last sphere to the base point."""
    big, small = wedge_model(k, n + 1), wedge_model(k, n)
    assign = {}
    for lab in big.labels:
        if k == 0:
            assign[lab] = "0" if lab in ("0", f"p{n + 1}") else lab
        else:
            assign[lab] = "0" if lab == "0" or lab[1:] == str(n + 1) else lab
    return MonotoneMap.from_labels(big, small, assign)


def _adapt_surjective(bonds: list[Matrix]) -> tuple[list[Matrix], bool]:
    """Change bases level by level so surjective bonds become ``[I | 0]``."""
    out = []
    carry = None   # inverse basis change already applied on the target side
    ok = True
    for B in bonds:
        if carry is not None:
            B = carry @ B
        snf = smith_normal_form(B)
        if snf.rank != B.rows or any(d != 1 for d in snf.diagonal):
            ok = False
            out.append(B)
            carry = None
            continue
        m, n = B.shape
        T = snf.V @ block_diagonal(B.ring, [snf.U, Matrix.identity(B.ring, n - m)])
        Tinv = block_diagonal(B.ring, [snf.U_inv, Matrix.identity(B.ring, n - m)]) @ snf.V_inv
        out.append(B @ T)
        carry = Tinv
    return out, ok


def hawaiian_tower(k: int, g: int = 1, N: int = 3, degree: int | None = None, ring: Ring = ZZ) -> Tower:
    """``H_degree`` of the wedge models ``Y_1 <- Y_2 <- ... <- Y_N`` with coefficients ``ring^g``.

    Level i holds ``Y_{i+1}``.  Bonds are induced by the collapse maps and
    then written, after a change of basis, as coordinate projections.
    """
    if k not in (0, 1, 2):
        raise ValueError("hawaiian_tower supports k in {0, 1, 2}")
    if not 1 <= N <= 8:
        raise ValueError("hawaiian_tower supports 1 <= N <= 8 levels")
    degree = k if degree is None else degree
    spaces = [wedge_model(k, n) for n in range(1, N + 1)]
    complexes = [bar_chain(constant_diagram(Y, ring, g), degree) for Y in spaces]
    bases = [homology_basis(C.complex, degree) for C in complexes]
    levels = [b.group for b in bases]
    bonds = []
    for i in range(N - 1):
        f = collapse_map(k, i + 1)
        F = constant_chain_map(f, complexes[i + 1], complexes[i], degree)
        bonds.append(induced_map(F, bases[i + 1], bases[i]))
    if all(not G.torsion for G in levels):
        bonds, _ = _adapt_surjective(bonds)
    return Tower(ring, levels, bonds, None)


def _merge_matrix(ring: Ring, fine, coarse, g: int) -> Matrix:
    rows = [[0] * (g * len(fine.blocks)) for _ in range(g * len(coarse.blocks))]
    for a, b in enumerate(fine.blocks):
        t = next(k for k, c in enumerate(coarse.blocks) if b <= c)
        for e in range(g):
            rows[t * g + e][a * g + e] = 1
    return Matrix(ring, g * len(coarse.blocks), g * len(fine.blocks), rows)


def refinement_chain(X: FiniteSpace, U) -> list:
    """Greedy maximal chain ``{U} ≺ ... ≺ components(U)`` in the partition poset."""
    parts = X.partitions(U)
    chain = [parts[0]]
    while True:
        cur = chain[-1]
        nxt = next((P for P in parts if len(P.blocks) == len(cur.blocks) + 1 and P.refines(cur)), None)
        if nxt is None:
            break
        chain.append(nxt)
    return chain


def gsharp_tower(X: FiniteSpace, U, g: int = 1, ring: Ring = ZZ) -> Tower:
    """``H_0`` of partitions of U along a maximal refinement chain; stabilizes at the components."""
    U = frozenset(U)
    if not U:
        return Tower(ring, [AbelianGroup(0)], [], "identity")
    chain = refinement_chain(X, U)
    levels = [AbelianGroup(g * len(P.blocks)) for P in chain]
    bonds = [_merge_matrix(ring, chain[t + 1], chain[t], g) for t in range(len(chain) - 1)]
    return Tower(ring, levels, bonds, "identity")


def converging_sequence_space(n: int, k: int) -> FiniteSpace | None:
    """Finite model of ``{0} ∪ {1/n, ..., 1/k}`` with 0 placed below 1/k; None when k < n."""
    if k < n:
        return None
    labels = ["0"] + [f"1/{m}" for m in range(n, k + 1)]
    return FiniteSpace.from_relations(labels, [("0", f"1/{k}")])


def converging_sequence_model(N: int, g: int = 1, ring: Ring = ZZ) -> dict[int, Tower]:
    """Towers for the opens ``U_n``, n = 1..N, with levels k = 1..N.

    Level values are ``H_0`` of the finite models (rank ``g*(k-n+1)``, zero
    for k < n); bonds send 1/(k+1) to 1/k and fix the rest.
    """
    if not 1 <= N <= 12:
        raise ValueError("converging_sequence_model supports 1 <= N <= 12")
    out = {}
    for n in range(1, N + 1):
        spaces = [converging_sequence_space(n, k) for k in range(1, N + 1)]
        comps = [Y.components() if Y is not None else None for Y in spaces]
        levels = [AbelianGroup(g * len(c.blocks)) if c is not None else AbelianGroup(0) for c in comps]
        bonds = []
        for i in range(N - 1):
            Ybig, Ysmall = spaces[i + 1], spaces[i]
            rows, cols = _dim(levels[i]), _dim(levels[i + 1])
            if Ysmall is None or Ybig is None:
                bonds.append(Matrix.zeros(ring, rows, cols))
                continue
            k = i + 1   # Ysmall models level k, Ybig level k+1
            assign = {lab: (f"1/{k}" if lab == f"1/{k + 1}" else lab) for lab in Ybig.labels}
            f = MonotoneMap.from_labels(Ybig, Ysmall, assign)
            data = [[0] * cols for _ in range(rows)]
            for a, blk in enumerate(comps[i + 1].blocks):
                x = next(iter(blk))
                t = comps[i].block_of(f(x))
                for e in range(g):
                    data[t * g + e][a * g + e] = 1
            bonds.append(Matrix(ring, rows, cols, data))
        out[n] = Tower(ring, levels, bonds, None)
    return out


def is_surjective(M: Matrix) -> bool:
    return solve(M, Matrix.identity(M.ring, M.rows)) is not None


def bond_report(X: Tower) -> list[tuple[int, bool, int]]:
    """Per bond: (index, surjective, rank of kernel)."""
    out = []
    for n, b in enumerate(X.bonds):
        out.append((n, is_surjective(b), b.cols - rank(b)))
    return out


def gsharp_value_matches_colim(X: FiniteSpace, U, g: int = 1, ring: Ring = ZZ) -> bool:
    T = gsharp_tower(X, U, g, ring)
    c = colim0(constant_diagram(X, ring, g), U)
    return T.levels[-1].free_rank == c.rank == g * len(X.components(U).blocks)
