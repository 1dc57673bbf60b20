"""Bar complexes computing higher colimits and limits over a finite preorder.

Chain side, for a cosheaf-oriented F::

    C_n = (+)_{i_0 <= ... <= i_n} F(i_0)
    d(σ ⊗ v) = (i_1..i_n) ⊗ F(i_0 -> i_1) v + Σ_{k>=1} (-1)^k (σ without i_k) ⊗ v

Cochain side, for a sheaf-oriented F::

    (d φ)(i_0..i_{n+1}) = F(i_0 -> i_1) φ(i_1..i_{n+1}) + Σ_{k>=1} (-1)^k φ(.. î_k ..)

The normalized variant keeps chains with no two consecutive entries equal
(for a poset these are the strict chains); degenerate faces are dropped.

The module also holds the injective side used as an independent oracle:
the functors ``(ρ_j)_* X`` (value X on the up-set of j) and coresolutions
by finite sums of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .algebra import (
    AbelianGroup,
    ChainComplex,
    HomologySummary,
    Matrix,
    chain_homology,
    cokernel,
    image_basis,
    kernel_basis,
    rank,
    solve,
)
from .diagrams import COSHEAF, SHEAF, Diagram, colim0, lim0
from .finspace import FiniteSpace, MonotoneMap


def enumerate_chains(X: FiniteSpace, n: int, normalized: bool, support: Iterable[int] | None = None) -> list[tuple]:
    """Sequences i_0 <= ... <= i_n inside ``support``, lexicographic in indices."""
    if n < 0:
        return []
    allowed = sorted(range(X.n) if support is None else set(support))
    succ = {x: [y for y in allowed if X.leq[x][y] and not (normalized and y == x)] for x in allowed}
    out = []
    stack = [(x,) for x in reversed(allowed)]
    while stack:
        ch = stack.pop()
        if len(ch) == n + 1:
            out.append(ch)
            continue
        for y in reversed(succ[ch[-1]]):
            stack.append(ch + (y,))
    return out


@dataclass
class BarComplex:
    """A bar (co)chain complex together with its basis labels.

    ``chains[n]`` lists the degree-n chains and ``offsets[n][chain]`` is
    where the block ``chain ⊗ F(i_0)`` starts in the coordinate vector.
    Cochains are stored at negative degree: ``C^n`` sits at ``-n``.
    """

    complex: ChainComplex
    diagram: Diagram
    chains: dict
    offsets: dict
    normalized: bool
    cochain: bool = False
    top: int = 0

    @property
    def ring(self):
        return self.complex.ring

    def rank(self, n: int) -> int:
        return self.complex.rank(-n if self.cochain else n)

    def homology(self, degrees: Iterable[int] | None = None) -> HomologySummary:
        degrees = range(self.top + 1) if degrees is None else list(degrees)
        if self.cochain:
            h = chain_homology(self.complex, [-n for n in degrees])
            return HomologySummary(self.ring, {n: h[-n] for n in degrees})
        return chain_homology(self.complex, degrees)


def _layout(D: Diagram, chains: list[tuple]) -> tuple[dict, int]:
    offs, o = {}, 0
    for ch in chains:
        offs[ch] = o
        o += D.ranks[ch[0]]
    return offs, o


def bar_chain(D: Diagram, n_max: int, normalized: bool = True, support: Iterable[int] | None = None) -> BarComplex:
    """Chain bar complex through degree ``n_max + 1`` (homology valid up to ``n_max``)."""
    if D.orientation != COSHEAF:
        raise ValueError("bar_chain needs a cosheaf-oriented diagram")
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    X = D.space
    ring = D.ring
    support = None if support is None else frozenset(support)
    chains, offsets, ranks = {}, {}, {}
    for n in range(n_max + 2):
        chains[n] = enumerate_chains(X, n, normalized, support)
        offsets[n], ranks[n] = _layout(D, chains[n])
    bds = {}
    for n in range(1, n_max + 2):
        tgt_off = offsets[n - 1]
        z = ring.coerce(0)
        data = [[z] * ranks[n] for _ in range(ranks[n - 1])]
        for ch in chains[n]:
            c0 = offsets[n][ch]
            r = D.ranks[ch[0]]
            # k = 0: drop i_0 and push the vector along F(i_0 -> i_1)
            face = ch[1:]
            if face in tgt_off:
                m = D.maps[(ch[0], ch[1])]
                t0 = tgt_off[face]
                for i in range(m.rows):
                    row = data[t0 + i]
                    for k in range(r):
                        if m[i, k]:
                            row[c0 + k] = ring.reduce(row[c0 + k] + m[i, k])
            for k in range(1, n + 1):
                face = ch[:k] + ch[k + 1:]
                t0 = tgt_off.get(face)
                if t0 is None:
                    continue  # degenerate face in the normalized complex
                sign = -1 if k % 2 else 1
                for e in range(r):
                    data[t0 + e][c0 + e] = ring.reduce(data[t0 + e][c0 + e] + sign)
        bds[n] = Matrix(ring, ranks[n - 1], ranks[n], data)
    C = ChainComplex(ring, ranks, bds)
    return BarComplex(C, D, chains, offsets, normalized, cochain=False, top=n_max)


def bar_cochain(D: Diagram, n_max: int, normalized: bool = True, support: Iterable[int] | None = None) -> BarComplex:
    """Cochain bar complex through ``C^{n_max+1}``, stored at negative degrees."""
    if D.orientation != SHEAF:
        raise ValueError("bar_cochain needs a sheaf-oriented diagram")
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    X = D.space
    ring = D.ring
    support = None if support is None else frozenset(support)
    chains, offsets, ranks = {}, {}, {}
    for n in range(n_max + 2):
        chains[n] = enumerate_chains(X, n, normalized, support)
        offsets[n], ranks[n] = _layout(D, chains[n])
    bds = {}
    for n in range(n_max + 1):
        # d^n : C^n -> C^{n+1}; rows indexed by (n+1)-chains
        src_off = offsets[n]
        z = ring.coerce(0)
        data = [[z] * ranks[n] for _ in range(ranks[n + 1])]
        for ch in chains[n + 1]:
            r0 = offsets[n + 1][ch]
            r = D.ranks[ch[0]]
            face = ch[1:]
            if face in src_off:
                m = D.maps[(ch[0], ch[1])]  # F(i_1) -> F(i_0)
                c0 = src_off[face]
                for i in range(r):
                    row = data[r0 + i]
                    for k in range(m.cols):
                        if m[i, k]:
                            row[c0 + k] = ring.reduce(row[c0 + k] + m[i, k])
            for k in range(1, n + 2):
                face = ch[:k] + ch[k + 1:]
                c0 = src_off.get(face)
                if c0 is None:
                    continue
                sign = -1 if k % 2 else 1
                for e in range(r):
                    data[r0 + e][c0 + e] = ring.reduce(data[r0 + e][c0 + e] + sign)
        bds[-n] = Matrix(ring, ranks[n + 1], ranks[n], data)
    C = ChainComplex(ring, {-n: r for n, r in ranks.items()}, bds)
    return BarComplex(C, D, chains, offsets, normalized, cochain=True, top=n_max)


def higher_colim(D: Diagram, n: int, normalized: bool = True) -> AbelianGroup:
    """n-th higher colimit as the n-th homology of the bar complex."""
    if D.space.n == 0:
        return AbelianGroup(0)
    return bar_chain(D, n, normalized).homology([n])[n]


def higher_lim(D: Diagram, n: int, normalized: bool = True) -> AbelianGroup:
    if D.space.n == 0:
        return AbelianGroup(0)
    return bar_cochain(D, n, normalized).homology([n])[n]


def bar_homology(D: Diagram, n_max: int | None = None, normalized: bool = True) -> HomologySummary:
    """All homology (cosheaf orientation) or cohomology (sheaf orientation) through ``n_max``."""
    if n_max is None:
        n_max = default_degree_cap(D.space)
    if D.space.n == 0:
        return HomologySummary(D.ring, {n: AbelianGroup(0) for n in range(n_max + 1)})
    if D.orientation == COSHEAF:
        return bar_chain(D, n_max, normalized).homology()
    return bar_cochain(D, n_max, normalized).homology()


def default_degree_cap(X: FiniteSpace) -> int:
    """Height of the T0 quotient: normalized chains vanish above it for posets."""
    if X.n == 0:
        return 0
    q, _ = X.t0_quotient()
    return max(q.height(), 0)


def inclusion_chain_map(small: BarComplex, big: BarComplex, n: int) -> Matrix:
    """Degree-n map induced by inclusion of supports (chains of the smaller open are chains of the bigger)."""
    ring = small.ring
    D = small.diagram
    z = ring.coerce(0)
    data = [[z] * small.rank(n) for _ in range(big.rank(n))]
    for ch, o in small.offsets[n].items():
        t = big.offsets[n][ch]
        for e in range(D.ranks[ch[0]]):
            data[t + e][o + e] = ring.coerce(1)
    return Matrix(ring, big.rank(n), small.rank(n), data)


def constant_chain_map(f: MonotoneMap, src: BarComplex, tgt: BarComplex, n: int) -> Matrix:
    """Degree-n map of normalized bar complexes of constant diagrams along f.

    A chain goes to its image chain; images with a repeated consecutive
    entry are degenerate and go to zero.
    """
    ring = src.ring
    g = src.diagram.ranks[0] if src.diagram.ranks else 0
    z = ring.coerce(0)
    data = [[z] * src.rank(n) for _ in range(tgt.rank(n))]
    for ch, o in src.offsets[n].items():
        im = tuple(f(x) for x in ch)
        t = tgt.offsets[n].get(im)
        if t is None:
            continue
        for e in range(g):
            data[t + e][o + e] = ring.coerce(1)
    return Matrix(ring, tgt.rank(n), src.rank(n), data)


def strict_chain_counts(X: FiniteSpace, n_max: int) -> list[int]:
    return [len(enumerate_chains(X, n, True)) for n in range(n_max + 1)]


# ---------------------------------------------------------------------------
# injective side


def standard_injective(X: FiniteSpace, j: int, r: int, ring) -> Diagram:
    """``(ρ_j)_* k^r``: value k^r on the up-set of j, zero elsewhere (sheaf orientation).

    The restriction to a smaller point x is the identity when j <= x and zero
    otherwise.
    """
    ranks = [r if X.leq[j][k] else 0 for k in range(X.n)]
    maps = {}
    for x in range(X.n):
        for y in X.up[x]:
            if ranks[x] and ranks[y]:
                maps[(x, y)] = Matrix.identity(ring, r)
            else:
                maps[(x, y)] = Matrix.zeros(ring, ranks[x], ranks[y])
    return Diagram(X, ring, ranks, maps, SHEAF)


def standard_projective(X: FiniteSpace, j: int, r: int, ring) -> Diagram:
    """Left adjoint to evaluation at j, built as the transpose of :func:`standard_injective`."""
    return standard_injective(X, j, r, ring).dual()


@dataclass
class Stage:
    """One step ``C -> J = (+)_j (ρ_j)_* R_j`` of a coresolution."""

    source: Diagram
    summands: list            # (j, rank) pairs
    injective: Diagram
    embedding: dict           # x -> matrix C(x) -> J(x)
    cokernel: Diagram | None = None
    projection: dict = field(default_factory=dict)   # x -> quotient J(x) -> coker(x)


@dataclass
class Coresolution:
    stages: list
    complete: bool
    envelope: str

    @property
    def length(self) -> int:
        return len(self.stages)

    def differential(self, t: int) -> dict:
        """Pointwise matrices of ``J^t -> J^{t+1}``."""
        st, nxt = self.stages[t], self.stages[t + 1]
        X = st.source.space
        return {x: nxt.embedding[x] @ st.projection[x] for x in range(X.n)}


def _envelope(C: Diagram, envelope: str):
    """Summands and pointwise embedding of C into a sum of standard injectives."""
    X = C.space
    ring = C.ring
    summands = []   # (j, R_j rank, alpha_j : C(j) -> R_j)
    for j in range(X.n):
        if envelope == "canonical":
            alpha = Matrix.identity(ring, C.ranks[j])
        else:
            below = [i for i in X.down[j] if i != j]
            if below:
                res = Matrix.zeros(ring, 0, C.ranks[j]).vstack(*(C.maps[(i, j)] for i in below))
            else:
                res = Matrix.zeros(ring, 0, C.ranks[j])
            S = kernel_basis(res)        # the part of C(j) seen by no smaller point
            if S.cols == 0:
                continue
            # retraction onto S: extend S to a basis and read off S-coordinates
            full = S.hstack(Matrix.identity(ring, C.ranks[j]))
            basis = image_basis(full)
            coords = solve(basis, Matrix.identity(ring, C.ranks[j]))
            alpha = coords.submatrix(range(S.cols), None)
        if alpha.rows:
            summands.append((j, alpha.rows, alpha))
    ranks = [sum(r for j, r, _ in summands if X.leq[j][x]) for x in range(X.n)]
    emb = {}
    for x in range(X.n):
        blocks = [a @ C.maps[(j, x)] for j, r, a in summands if X.leq[j][x]]
        emb[x] = Matrix.zeros(ring, 0, C.ranks[x]).vstack(*blocks) if blocks else Matrix.zeros(ring, 0, C.ranks[x])
    maps = {}
    for x in range(X.n):
        for y in X.up[x]:
            # J(y) -> J(x): keep the summands with j <= x, drop the others
            ys = [(j, r) for j, r, _ in summands if X.leq[j][y]]
            rows, cols = ranks[x], ranks[y]
            data = [[ring.coerce(0)] * cols for _ in range(rows)]
            ro = co = 0
            for j, r in ys:
                if X.leq[j][x]:
                    for e in range(r):
                        data[ro + e][co + e] = ring.coerce(1)
                    ro += r
                co += r
            maps[(x, y)] = Matrix(ring, rows, cols, data)
    J = Diagram(X, ring, ranks, maps, SHEAF, check=False)
    return [(j, r) for j, r, _ in summands], J, emb


def injective_coresolution(D: Diagram, length_cap: int | None = None, envelope: str = "minimal") -> Coresolution:
    """``0 -> D -> J^0 -> J^1 -> ...`` by sums of standard injectives, field coefficients.

    ``envelope='minimal'`` uses for each j the subspace of C(j) killed by all
    restrictions to smaller points (this detects when D is already a
    standard injective).  ``'canonical'`` embeds C(x) into (+)_{j<=x} C(j).
    Exactness is verified pointwise by rank counts at every stage.
    """
    if not D.ring.is_field:
        raise ValueError("injective coresolutions are only available over a field")
    if D.orientation != SHEAF:
        raise ValueError("injective_coresolution needs a sheaf-oriented diagram")
    X = D.space
    if not X.is_t0:
        raise ValueError("injective_coresolution needs a poset; apply t0_quotient first")
    if envelope not in ("minimal", "canonical"):
        raise ValueError("envelope must be 'minimal' or 'canonical'")
    if length_cap is None:
        length_cap = max(X.height(), 0) + 2
    ring = D.ring
    stages = []
    C = D
    complete = False
    for _ in range(length_cap):
        if all(r == 0 for r in C.ranks):
            complete = True
            break
        summands, J, emb = _envelope(C, envelope)
        for x in range(X.n):
            if rank(emb[x]) != C.ranks[x]:
                raise ArithmeticError(f"embedding fails to be injective at {X.labels[x]}")
            for y in X.up[x]:
                if emb[x] @ C.maps[(x, y)] != J.maps[(x, y)] @ emb[y]:
                    raise ArithmeticError("embedding is not natural")
        st = Stage(C, summands, J, emb)
        # pointwise cokernel with induced restrictions
        Qs, Ss = {}, {}
        for x in range(X.n):
            ck = cokernel(emb[x])
            Qs[x], Ss[x] = ck.Q, ck.S
        ranks = [Qs[x].rows for x in range(X.n)]
        maps = {(x, y): Qs[x] @ J.maps[(x, y)] @ Ss[y] for x in range(X.n) for y in X.up[x]}
        Cn = Diagram(X, ring, ranks, maps, SHEAF)
        st.cokernel = Cn
        st.projection = Qs
        stages.append(st)
        C = Cn
    else:
        complete = all(r == 0 for r in C.ranks)
    return Coresolution(stages, complete, envelope)


@dataclass(frozen=True)
class OracleResult:
    dims: tuple              # dim H^n(lim J^•) for n < valid
    valid: int               # degrees below this are trustworthy
    complete: bool


def derived_lim_oracle(D: Diagram, length_cap: int | None = None, envelope: str = "minimal") -> OracleResult:
    """Cohomology of ``lim J^•`` for an injective coresolution of D."""
    res = injective_coresolution(D, length_cap, envelope)
    ring = D.ring
    limits = [lim0(st.injective) for st in res.stages]
    dims = [L.rank for L in limits]
    # lim J^t -> lim J^{t+1}
    ranks_of_maps = []
    for t in range(len(res.stages) - 1):
        diff = res.differential(t)
        src, tgt = limits[t], limits[t + 1]
        J, Jn = res.stages[t].injective, res.stages[t + 1].injective
        X = J.space
        blocks = []
        for x in range(X.n):
            if Jn.ranks[x]:
                blocks.append(diff[x] @ src.projection(J, x))
        image = Matrix.zeros(ring, 0, src.rank).vstack(*blocks) if blocks else Matrix.zeros(ring, 0, src.rank)
        coords = solve(tgt.basis, image) if tgt.rank else Matrix.zeros(ring, 0, src.rank)
        if coords is None:
            raise ArithmeticError("differential does not land in the limit")
        ranks_of_maps.append(rank(coords))
    L = len(dims)
    out = []
    for n in range(L):
        incoming = ranks_of_maps[n - 1] if n >= 1 else 0
        outgoing = ranks_of_maps[n] if n < L - 1 else 0
        out.append(dims[n] - outgoing - incoming)
    valid = L if res.complete else max(L - 1, 0)
    if res.complete and L == 0:
        valid = 0
    return OracleResult(tuple(out), valid, res.complete)


def derived_colim_oracle(D: Diagram, length_cap: int | None = None) -> OracleResult:
    """Higher colimit dimensions via the transpose: over a field colim_n F is dual to lim^n F^T."""
    return derived_lim_oracle(D.dual(), length_cap)
