"""Named fixture spaces and random generators for test corpora."""

from __future__ import annotations

import itertools
import random
from importlib import resources

from .algebra import ZZ, ChainComplex, Matrix, Ring, image_basis, solve
from .diagrams import COSHEAF, Diagram, Precosheaf, parse_diagram
from .finspace import FiniteSpace, MonotoneMap, parse_map, parse_space, product
from .nerve import parse_cover
from .spectral import Bicomplex

FIXTURES = {
    "circle4.poset": "four-point circle",
    "sphere6.poset": "six-point suspension of the circle",
    "cone5.poset": "cone over the four-point circle",
    "chain2.poset": "two-point chain b <= t",
    "sphere6.cover": "the two cones of the suspension",
    "circle4.cover": "two three-point opens of the circle",
    "circle4_constant.diagram": "constant Z cosheaf on the circle",
    "circle4_fold.map": "circle onto the two-point chain",
    "cone5_collapse.map": "cone onto the two-point chain, apex to the top",
    "cone5_fold.map": "cone onto the two-point chain with acyclic fibers",
}


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise KeyError(f"no embedded fixture named {name!r}")
    return resources.files(__package__).joinpath("fixtures").joinpath(name).read_text()


def fixture_space(name: str) -> FiniteSpace:
    if not name.endswith(".poset"):
        name += ".poset"
    return parse_space(fixture_text(name), name)


def fixture_cover(name: str, space: FiniteSpace) -> dict:
    if not name.endswith(".cover"):
        name += ".cover"
    return parse_cover(fixture_text(name), space, name)


def fixture_diagram(name: str, space: FiniteSpace) -> Diagram:
    if not name.endswith(".diagram"):
        name += ".diagram"
    return parse_diagram(fixture_text(name), space, name)


def fixture_map(name: str) -> MonotoneMap:
    if not name.endswith(".map"):
        name += ".map"
    spaces = {n: fixture_space(n) for n in FIXTURES if n.endswith(".poset")}
    return parse_map(fixture_text(name), name, spaces=spaces)


def circle4() -> FiniteSpace:
    return fixture_space("circle4")


def sphere6() -> FiniteSpace:
    return fixture_space("sphere6")


# ---------------------------------------------------------------------------
# random spaces


def random_poset(rng: random.Random, n: int, p: float = 0.35) -> FiniteSpace:
    """Relations i < j drawn independently along a shuffled linear order, then closed."""
    perm = list(range(n))
    rng.shuffle(perm)
    pairs = [(perm[a], perm[b]) for a in range(n) for b in range(a + 1, n) if rng.random() < p]
    return FiniteSpace.from_relations(range(n), pairs)


def random_preorder(rng: random.Random, n: int, p: float = 0.25) -> FiniteSpace:
    """Arbitrary random relation closed up; cycles give non-trivial equivalence classes."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < p]
    return FiniteSpace.from_relations(range(n), pairs)


def subdivision(P: FiniteSpace) -> tuple[FiniteSpace, MonotoneMap]:
    """Poset of nonempty chains of P under inclusion, with the 'largest element' map to P."""
    chains = []
    for k in range(P.n):
        for ch in itertools.combinations(range(P.n), k + 1):
            if all(P.le(a, b) or P.le(b, a) for a, b in itertools.combinations(ch, 2)):
                chains.append(frozenset(ch))
    labels = ["_".join(P.labels[i] for i in sorted(c)) for c in chains]
    S = FiniteSpace(labels, [[a <= b for b in chains] for a in chains])

    def top(c):
        return next(x for x in c if all(P.le(y, x) for y in c))

    return S, MonotoneMap(S, P, [top(c) for c in chains])


# ---------------------------------------------------------------------------
# random linear algebra


def random_invertible(rng: random.Random, ring: Ring, n: int, steps: int | None = None) -> tuple[Matrix, Matrix]:
    """A random unimodular (or invertible) matrix together with its inverse."""
    A = [[ring.coerce(int(i == j)) for j in range(n)] for i in range(n)]
    B = [row[:] for row in A]
    for _ in range(steps if steps is not None else 2 * n):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2]) if ring.kind != "Fp" else rng.randrange(1, ring.p)
        c = ring.coerce(c)
        # A <- E A with E = I + c e_ij ; inverse B <- B E^-1
        A[i] = [ring.reduce(a + c * b) for a, b in zip(A[i], A[j])]
        for row in B:
            row[j] = ring.reduce(row[j] - c * row[i])
    return Matrix(ring, n, n, A), Matrix(ring, n, n, B)


def _rand_entry(rng, ring):
    if ring.kind == "Fp":
        return rng.randrange(ring.p)
    return rng.randint(-2, 2)


def random_matrix(rng: random.Random, ring: Ring, rows: int, cols: int, density: float = 0.6) -> Matrix:
    return Matrix(ring, rows, cols,
                  [[_rand_entry(rng, ring) if rng.random() < density else 0 for _ in range(cols)] for _ in range(rows)])


# ---------------------------------------------------------------------------
# random diagrams


def random_diagram(rng: random.Random, X: FiniteSpace, ring: Ring, gens: int = 4,
                   orientation: str = COSHEAF) -> Diagram:
    """Image of a random natural map from a sum of representables to a sum of corepresentables.

    In cosheaf orientation ``P_j(x) = R`` for ``j <= x`` and ``I_k(x) = R``
    for ``x <= k`` (identity maps where defined).  A natural map ``P -> I`` is
    a scalar ``c_kj`` for each ``j <= k``; its image is a functor with free
    values (a sublattice of a free module over Z), and every functor over a
    field arises this way.
    """
    ps = [rng.randrange(X.n) for _ in range(rng.randint(1, gens))]
    # corepresentables sit above some representable, otherwise the image is mostly zero
    qs = [rng.choice(sorted(X.up[rng.choice(ps)])) for _ in range(rng.randint(1, gens))]
    c = {(a, b): _rand_entry(rng, ring) for a, k in enumerate(qs) for b, j in enumerate(ps) if X.le(j, k)}
    bases, incl = [], []
    for x in range(X.n):
        P_here = [b for b, j in enumerate(ps) if X.le(j, x)]
        I_here = [a for a, k in enumerate(qs) if X.le(x, k)]
        M = Matrix(ring, len(I_here), len(P_here), [[c.get((a, b), 0) for b in P_here] for a in I_here])
        bases.append(image_basis(M) if M.rows and M.cols else Matrix.zeros(ring, len(I_here), 0))
        incl.append(I_here)
    maps = {}
    for x, y in X.pairs():
        if x == y:
            continue
        # projection I(x) -> I(y) keeps the summands k >= y
        proj = Matrix(ring, len(incl[y]), len(incl[x]),
                      [[int(a == b) for b in incl[x]] for a in incl[y]])
        img = proj @ bases[x]
        m = solve(bases[y], img) if bases[y].cols else Matrix.zeros(ring, 0, bases[x].cols)
        if m is None:
            raise ArithmeticError("image is not preserved")
        maps[(x, y)] = m
    D = Diagram(X, ring, [b.cols for b in bases], maps, COSHEAF)
    return D if orientation == COSHEAF else D.dual()


def randomize_bases(rng: random.Random, D: Diagram) -> Diagram:
    """Conjugate by a random invertible matrix at each point."""
    T = [random_invertible(rng, D.ring, r) for r in D.ranks]
    maps = {}
    for (x, y), m in D.maps.items():
        if x == y:
            continue
        if D.orientation == COSHEAF:
            maps[(x, y)] = T[y][0] @ m @ T[x][1]
        else:
            maps[(x, y)] = T[x][0] @ m @ T[y][1]
    return Diagram(D.space, D.ring, D.ranks, maps, D.orientation)


def opens_poset(X: FiniteSpace) -> tuple[FiniteSpace, list]:
    opens = X.all_opens()
    labels = [X.format_set(U) for U in opens]
    return FiniteSpace(labels, [[U <= V for V in opens] for U in opens]), opens


def random_precosheaf(rng: random.Random, X: FiniteSpace, ring: Ring, empty_rank: int = 1, gens: int = 4) -> Precosheaf:
    """A random functor on the poset of opens, plus a constant summand so the empty set has a nonzero value."""
    O, opens = opens_poset(X)
    D = randomize_bases(rng, random_diagram(rng, O, ring, gens))
    vals = {U: D.ranks[i] for i, U in enumerate(opens)}
    maps = {(opens[i], opens[j]): m for (i, j), m in D.maps.items() if i != j}
    P = Precosheaf(X, ring, vals, maps)
    if empty_rank:
        P = P.direct_sum(Precosheaf.constant(X, ring, empty_rank))
    bases = {U: random_invertible(rng, ring, P.values[U]) for U in P.opens}
    return P.change_basis(bases)


# ---------------------------------------------------------------------------
# random complexes and bicomplexes


def random_chain_complex(rng: random.Random, ring: Ring, top: int = 3, pieces: int = 6,
                         torsion: bool = False) -> ChainComplex:
    """Sum of random dots and arrows ``n -> n-1``, then a random change of basis per degree.

    With ``torsion`` the arrows are scaled by 1, 2 or 3, which over Z leaves
    cyclic torsion in homology.
    """
    ranks = {n: 0 for n in range(top + 1)}
    arrows = []
    for _ in range(pieces):
        n = rng.randint(0, top)
        if n >= 1 and rng.random() < 0.6:
            arrows.append((n, ranks[n], ranks[n - 1], rng.choice((1, 2, 3)) if torsion else 1))
            ranks[n] += 1
            ranks[n - 1] += 1
        else:
            ranks[n] += 1
    bds = {}
    for n in range(1, top + 1):
        data = [[0] * ranks[n] for _ in range(ranks[n - 1])]
        for m, src, tgt, c in arrows:
            if m == n:
                data[tgt][src] = c
        bds[n] = Matrix(ring, ranks[n - 1], ranks[n], data)
    T = {n: random_invertible(rng, ring, ranks[n]) for n in ranks}
    bds = {n: T[n - 1][0] @ m @ T[n][1] for n, m in bds.items()}
    return ChainComplex(ring, ranks, bds)


def random_bicomplex(rng: random.Random, ring: Ring, S: int = 2, T: int = 2, pieces: int = 8,
                     kinds: tuple = ("dot", "h", "v", "square")) -> Bicomplex:
    """Sum of elementary pieces (dot, horizontal arrow, vertical arrow, unit square)
    with a random change of basis at every grid position."""
    dims = {(s, t): 0 for s in range(S + 1) for t in range(T + 1)}
    d_ent, v_ent = [], []

    def new(s, t):
        k = dims[(s, t)]
        dims[(s, t)] += 1
        return k

    for _ in range(pieces):
        kind = rng.choice(kinds)
        s, t = rng.randint(0, S), rng.randint(0, T)
        if kind in ("h", "square") and s == 0:
            s = 1 if S >= 1 else None
        if kind in ("v", "square") and t == 0:
            t = 1 if T >= 1 else None
        if s is None or t is None:
            continue
        if kind == "dot":
            new(s, t)
        elif kind == "h":
            a, b = new(s, t), new(s - 1, t)
            d_ent.append(((s, t), b, a))
        elif kind == "v":
            a, b = new(s, t), new(s, t - 1)
            v_ent.append(((s, t), b, a))
        else:
            a, b, c, e = new(s, t), new(s - 1, t), new(s, t - 1), new(s - 1, t - 1)
            d_ent += [((s, t), b, a), ((s, t - 1), e, c)]
            v_ent += [((s, t), c, a), ((s - 1, t), e, b)]

    def assemble(entries, src_of):
        out = {}
        for (s, t), i, j in entries:
            out.setdefault((s, t), []).append((i, j))
        mats = {}
        for pos, ij in out.items():
            tgt = src_of(*pos)
            data = [[0] * dims[pos] for _ in range(dims[tgt])]
            for i, j in ij:
                data[i][j] = 1
            mats[pos] = Matrix(ring, dims[tgt], dims[pos], data)
        return mats

    d = assemble(d_ent, lambda s, t: (s - 1, t))
    v = assemble(v_ent, lambda s, t: (s, t - 1))
    Tm = {pos: random_invertible(rng, ring, r) for pos, r in dims.items()}
    d = {(s, t): Tm[(s - 1, t)][0] @ m @ Tm[(s, t)][1] for (s, t), m in d.items()}
    v = {(s, t): Tm[(s, t - 1)][0] @ m @ Tm[(s, t)][1] for (s, t), m in v.items()}
    return Bicomplex(ring, dims, d, v)


def exact_rows_bicomplex(rng: random.Random, ring: Ring, S: int = 2, T: int = 2, pieces: int = 6) -> Bicomplex:
    """Only horizontal arrows and squares: every row is exact."""
    return random_bicomplex(rng, ring, S, T, pieces, kinds=("h", "square"))


def tensor_bicomplex(A: ChainComplex, C: ChainComplex) -> Bicomplex:
    """``B_{s,t} = A_s ⊗ C_t`` with ``d = d_A ⊗ 1`` and ``δ = 1 ⊗ d_C``."""
    ring = A.ring

    def kron(P, Q):
        return Matrix(ring, P.rows * Q.rows, P.cols * Q.cols,
                      [[P[i // Q.rows, j // Q.cols] * Q[i % Q.rows, j % Q.cols]
                        for j in range(P.cols * Q.cols)] for i in range(P.rows * Q.rows)])

    S = max(A.ranks, default=0)
    T = max(C.ranks, default=0)
    dims = {(s, t): A.rank(s) * C.rank(t) for s in range(S + 1) for t in range(T + 1)}
    d = {(s, t): kron(A.d(s), Matrix.identity(ring, C.rank(t))) for s in range(1, S + 1) for t in range(T + 1)}
    v = {(s, t): kron(Matrix.identity(ring, A.rank(s)), C.d(t)) for s in range(S + 1) for t in range(1, T + 1)}
    return Bicomplex(ring, dims, d, v)


def hollow_triangle(ring: Ring = ZZ) -> ChainComplex:
    d1 = Matrix.from_rows(ring, [[-1, 0, -1], [1, -1, 0], [0, 1, 1]])
    return ChainComplex(ring, {0: 3, 1: 3}, {1: d1})


# ---------------------------------------------------------------------------
# monotone maps


def random_projection(rng: random.Random, Y: FiniteSpace, extra: int = 3, keep: float = 0.6) -> MonotoneMap:
    """Projection to Y from a random subspace of ``Y × Z`` (Z a random poset); arbitrary but monotone."""
    Z = random_poset(rng, extra)
    pts = [(a, b) for a in range(Y.n) for b in range(Z.n) if rng.random() < keep]
    for a in range(Y.n):
        if not any(p[0] == a for p in pts):
            pts.append((a, rng.randrange(Z.n)))
    pts.sort()
    labels = [f"{Y.labels[a]}.{Z.labels[b]}" for a, b in pts]
    X = FiniteSpace(labels, [[Y.le(a, c) and Z.le(b, e) for c, e in pts] for a, b in pts])
    return MonotoneMap(X, Y, [a for a, _ in pts])


def with_top(X: FiniteSpace, label: str = "T") -> FiniteSpace:
    n = X.n
    leq = [list(row) + [True] for row in X.leq] + [[False] * n + [True]]
    return FiniteSpace(list(X.labels) + [label], leq)


def fiber_acyclic_maps(rng: random.Random, count: int = 12, size: int = 4):
    """Constructed maps whose fibers ``f^{-1}(U_y)`` carry no higher homology.

    Yields ``(name, f, constant_only)``; when ``constant_only`` is set the
    acyclicity is guaranteed for constant coefficients only.
    """
    out = []
    k = 0
    while len(out) < count:
        k += 1
        kind = k % 4
        Y = random_poset(rng, rng.randint(2, size))
        if kind == 0:
            out.append((f"identity-{k}", MonotoneMap.identity(Y), False))
        elif kind == 1:
            # every preimage of a minimal open is U_y × C, which has the maximum (y, top)
            C = with_top(random_poset(rng, rng.randint(1, 3)))
            X = product(Y, C)
            out.append((f"product-{k}", MonotoneMap(X, Y, [i // C.n for i in range(X.n)]), False))
        elif kind == 2:
            X = with_top(Y)
            out.append((f"to-point-{k}", MonotoneMap.to_point(X), False))
        else:
            S, f = subdivision(Y)
            out.append((f"subdivision-{k}", f, True))
    return out


def convex_indicator(X: FiniteSpace, S, ring: Ring, orientation: str = COSHEAF) -> Diagram:
    """R on a convex subset S (x <= y <= z with x, z in S forces y in S), zero elsewhere."""
    S = frozenset(S)
    for x in S:
        for z in S:
            if X.le(x, z) and any(X.le(x, y) and X.le(y, z) and y not in S for y in range(X.n)):
                raise ValueError("subset is not convex")
    ranks = [int(x in S) for x in range(X.n)]
    maps = {}
    for x, y in X.pairs():
        if x != y:
            v = 1 if x in S and y in S else 0
            shape = (ranks[y], ranks[x]) if orientation == COSHEAF else (ranks[x], ranks[y])
            maps[(x, y)] = Matrix(ring, *shape, [[v] * shape[1] for _ in range(shape[0])])
    return Diagram(X, ring, ranks, maps, orientation)


def diagram_sum(D: Diagram, E: Diagram) -> Diagram:
    from .algebra import block_diagonal

    maps = {k: block_diagonal(D.ring, [m, E.maps[k]]) for k, m in D.maps.items() if k[0] != k[1]}
    return Diagram(D.space, D.ring, [a + b for a, b in zip(D.ranks, E.ranks)], maps, D.orientation)


def random_convex_set(rng: random.Random, X: FiniteSpace) -> frozenset:
    """Difference of two random opens (V minus W with W inside V) is convex."""
    opens = X.all_opens()
    V = rng.choice(opens)
    W = rng.choice([U for U in opens if U <= V])
    return V - W


def random_sheaf_diagram(rng: random.Random, X: FiniteSpace, ring: Ring) -> Diagram:
    """Random image-type diagram plus a few convex indicators, in sheaf orientation, with scrambled bases."""
    D = random_diagram(rng, X, ring, orientation="sheaf")
    for _ in range(rng.randint(1, 2)):
        D = diagram_sum(D, convex_indicator(X, random_convex_set(rng, X), ring, "sheaf"))
    return randomize_bases(rng, D)
