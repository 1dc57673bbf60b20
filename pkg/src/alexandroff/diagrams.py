"""Functors from a finite preorder into free modules, and precosheaves on opens.

A *cosheaf-oriented* diagram has maps ``F(x) -> F(y)`` for ``x <= y``; a
*sheaf-oriented* one has maps ``F(y) -> F(x)``.  Either way ``maps[(x, y)]``
is stored for every comparable pair (including ``x == y``).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .algebra import (
    AbelianGroup,
    Matrix,
    Ring,
    TorsionError,
    block_matrix,
    cokernel,
    format_matrix,
    kernel_basis,
    parse_matrix,
    solve,
    span_contains,
)
from .finspace import FiniteSpace, MonotoneMap, ParseError, _content_lines

COSHEAF = "cosheaf"
SHEAF = "sheaf"


class Diagram:
    """A functor on a finite preorder with free-module values."""

    def __init__(self, space: FiniteSpace, ring: Ring, ranks: Sequence[int],
                 maps: Mapping[tuple, Matrix], orientation: str = COSHEAF, check: bool = True):
        if orientation not in (COSHEAF, SHEAF):
            raise ValueError(f"orientation must be 'cosheaf' or 'sheaf', got {orientation!r}")
        if len(ranks) != space.n:
            raise ValueError("one rank per element is required")
        self.space = space
        self.ring = ring
        self.ranks = tuple(int(r) for r in ranks)
        self.orientation = orientation
        full = {}
        for x in range(space.n):
            full[(x, x)] = Matrix.identity(ring, self.ranks[x])
        for (x, y), m in maps.items():
            if not space.le(x, y):
                raise ValueError(f"map given for incomparable pair ({space.labels[x]}, {space.labels[y]})")
            want = self._shape(x, y)
            if m.shape != want:
                raise ValueError(
                    f"map {space.labels[x]}->{space.labels[y]} has shape {m.shape}, expected {want}"
                )
            if x == y and m != full[(x, x)]:
                raise ValueError(f"map at {space.labels[x]} <= {space.labels[x]} must be the identity")
            full[(x, y)] = m
        for x, y in space.pairs():
            if (x, y) not in full:
                raise ValueError(f"missing map for {space.labels[x]} <= {space.labels[y]}")
        self.maps = full
        if check:
            self.check_functorial()

    def _shape(self, x: int, y: int) -> tuple[int, int]:
        if self.orientation == COSHEAF:
            return (self.ranks[y], self.ranks[x])
        return (self.ranks[x], self.ranks[y])

    def check_functorial(self):
        X = self.space
        for x in range(X.n):
            for y in X.up[x]:
                for z in X.up[y]:
                    if self.orientation == COSHEAF:
                        ok = self.maps[(x, z)] == self.maps[(y, z)] @ self.maps[(x, y)]
                    else:
                        ok = self.maps[(x, z)] == self.maps[(x, y)] @ self.maps[(y, z)]
                    if not ok:
                        raise ValueError(
                            f"functoriality fails on {X.labels[x]} <= {X.labels[y]} <= {X.labels[z]}"
                        )

    @classmethod
    def from_generators(cls, space: FiniteSpace, ring: Ring, ranks: Sequence[int],
                        generators: Mapping[tuple, Matrix], orientation: str = COSHEAF) -> "Diagram":
        """Compose maps given on covering pairs; every path must give the same map.

        Missing generators are allowed only when one end has rank zero.
        """
        gens = dict(generators)
        for x, y in space.covering_pairs():
            if (x, y) not in gens:
                if ranks[x] and ranks[y]:
                    raise ValueError(f"no matrix given for {space.labels[x]} <= {space.labels[y]}")
                shape = (ranks[y], ranks[x]) if orientation == COSHEAF else (ranks[x], ranks[y])
                gens[(x, y)] = Matrix.zeros(ring, *shape)
        out_edges: dict[int, list] = {}
        for (x, y) in gens:
            if x != y:
                out_edges.setdefault(x, []).append(y)

        def compose(first, second):
            # path x -> w -> y; first = map for (x,w), second = map for (w,y)
            return second @ first if orientation == COSHEAF else first @ second

        maps = {}
        for x in range(space.n):
            reach = {x: Matrix.identity(ring, ranks[x])}
            queue = deque([x])
            while queue:
                w = queue.popleft()
                for y in out_edges.get(w, ()):
                    cand = compose(reach[w], gens[(w, y)])
                    if y not in reach:
                        reach[y] = cand
                        queue.append(y)
            for w, m in reach.items():
                for y in out_edges.get(w, ()):
                    if compose(m, gens[(w, y)]) != reach[y]:
                        raise ValueError(
                            f"inconsistent compositions from {space.labels[x]} to {space.labels[y]}"
                        )
            for y, m in reach.items():
                maps[(x, y)] = m
        return cls(space, ring, ranks, maps, orientation)

    def map(self, x: int, y: int) -> Matrix:
        return self.maps[(x, y)]

    def total_rank(self, U: Iterable[int] | None = None) -> int:
        U = range(self.space.n) if U is None else U
        return sum(self.ranks[x] for x in U)

    def is_constant(self) -> bool:
        if len(set(self.ranks)) > 1:
            return False
        return all(m == Matrix.identity(self.ring, m.rows) for m in self.maps.values())

    def dual(self) -> "Diagram":
        """Transpose every map; flips the orientation on the same space."""
        flip = SHEAF if self.orientation == COSHEAF else COSHEAF
        return Diagram(self.space, self.ring, self.ranks, {k: m.T for k, m in self.maps.items()}, flip, check=False)

    def restrict(self, U: Iterable[int]) -> "Diagram":
        sub, keep = self.space.subspace(U)
        pos = {old: new for new, old in enumerate(keep)}
        maps = {(pos[x], pos[y]): m for (x, y), m in self.maps.items() if x in pos and y in pos}
        return Diagram(sub, self.ring, [self.ranks[i] for i in keep], maps, self.orientation, check=False)

    def transport(self, f: MonotoneMap) -> "Diagram":
        """Re-index along a bijective monotone map with monotone inverse."""
        inv = {y: x for x, y in enumerate(f.images)}
        T = f.target
        maps = {(f(x), f(y)): m for (x, y), m in self.maps.items()}
        return Diagram(T, self.ring, [self.ranks[inv[y]] for y in range(T.n)], maps, self.orientation)

    def to_text(self) -> str:
        X = self.space
        lines = [f"ring: {self.ring.name}", f"orientation: {self.orientation}"]
        lines += [f"rank {X.labels[x]}: {r}" for x, r in enumerate(self.ranks)]
        for x, y in X.covering_pairs():
            lines.append(f"matrix {X.labels[x]} {X.labels[y]}: {format_matrix(self.maps[(x, y)])}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"Diagram({self.orientation}, {self.ring.name}, ranks={self.ranks})"


def constant_diagram(X: FiniteSpace, ring: Ring, g: int = 1, orientation: str = COSHEAF) -> Diagram:
    maps = {(x, y): Matrix.identity(ring, g) for x in range(X.n) for y in X.up[x]}
    return Diagram(X, ring, [g] * X.n, maps, orientation, check=False)


# ---------------------------------------------------------------------------
# colimits and limits over open sets


@dataclass(frozen=True)
class Colimit:
    """``colim F|_U`` with coordinates.

    ``Q`` maps the generator module ``(+)_{y in U} F(y)`` (blocks in the
    order of ``elements``) to coordinates of the colimit; ``S`` lifts
    coordinates back.  ``offsets[y]`` locates F(y)'s block.
    """

    group: AbelianGroup
    elements: tuple
    offsets: dict
    Q: Matrix
    S: Matrix
    moduli: tuple
    relations: Matrix

    def structure_map(self, D: Diagram, y: int) -> Matrix:
        o = self.offsets[y]
        return self.Q.submatrix(None, range(o, o + D.ranks[y]))

    @property
    def rank(self) -> int:
        return self.group.free_rank


def _colim_generators(D: Diagram, U: Iterable[int]):
    U = sorted(set(U))
    offsets, o = {}, 0
    for y in U:
        offsets[y] = o
        o += D.ranks[y]
    return U, offsets, o


def colim0(D: Diagram, U: Iterable[int] | None = None) -> Colimit:
    """Coequalizer of ``(+)_{x<=y in U} F(x) => (+)_{y in U} F(y)`` (cosheaf orientation)."""
    if D.orientation != COSHEAF:
        raise ValueError("colim0 needs a cosheaf-oriented diagram")
    X = D.space
    U = range(X.n) if U is None else U
    U, offsets, total = _colim_generators(D, U)
    if not X.is_open(U):
        raise ValueError(f"{X.format_set(U)} is not open")
    inU = set(U)
    pairs = [(x, y) for x, y in X.covering_pairs() if x in inU and y in inU]
    ring = D.ring
    cols = []
    for x, y in pairs:
        m = D.maps[(x, y)]
        for k in range(D.ranks[x]):
            col = [ring.coerce(0)] * total
            for i in range(D.ranks[y]):
                col[offsets[y] + i] = m[i, k]
            col[offsets[x] + k] = ring.reduce(col[offsets[x] + k] - 1)
            cols.append(col)
    R = Matrix.from_columns(ring, cols, total)
    c = cokernel(R)
    return Colimit(c.group, tuple(U), offsets, c.Q, c.S, c.moduli, R)


def colim_map(D: Diagram, small: Colimit, big: Colimit) -> Matrix:
    """Map ``colim F|_V -> colim F|_U`` for ``V ⊆ U``, in colimit coordinates."""
    ring = D.ring
    total_big = big.Q.cols
    incl = [[ring.coerce(0)] * small.Q.cols for _ in range(total_big)]
    for y in small.elements:
        for k in range(D.ranks[y]):
            incl[big.offsets[y] + k][small.offsets[y] + k] = ring.coerce(1)
    I = Matrix(ring, total_big, small.Q.cols, incl)
    M = big.Q @ I @ small.S
    k = len(big.moduli)
    data = [[x % big.moduli[i] if i < k else x for x in row] for i, row in enumerate(M.data)]
    return Matrix(ring, M.rows, M.cols, data)


@dataclass(frozen=True)
class Limit:
    """``lim F|_U`` as the kernel of the equalizer map; ``basis`` columns live in ``(+)_{x in U} F(x)``."""

    group: AbelianGroup
    elements: tuple
    offsets: dict
    basis: Matrix

    def projection(self, D: Diagram, x: int) -> Matrix:
        o = self.offsets[x]
        return self.basis.submatrix(range(o, o + D.ranks[x]), None)

    @property
    def rank(self) -> int:
        return self.group.free_rank


def lim0(D: Diagram, U: Iterable[int] | None = None) -> Limit:
    """Equalizer of ``prod_x F(x) => prod_{x<=y} F(x)`` (sheaf orientation)."""
    if D.orientation != SHEAF:
        raise ValueError("lim0 needs a sheaf-oriented diagram")
    X = D.space
    U = range(X.n) if U is None else U
    U, offsets, total = _colim_generators(D, U)
    if not X.is_open(U):
        raise ValueError(f"{X.format_set(U)} is not open")
    inU = set(U)
    pairs = [(x, y) for x, y in X.covering_pairs() if x in inU and y in inU]
    ring = D.ring
    rows = []
    for x, y in pairs:
        m = D.maps[(x, y)]  # F(y) -> F(x)
        for i in range(D.ranks[x]):
            row = [ring.coerce(0)] * total
            for k in range(D.ranks[y]):
                row[offsets[y] + k] = m[i, k]
            row[offsets[x] + i] = ring.reduce(row[offsets[x] + i] - 1)
            rows.append(row)
    E = Matrix(ring, len(rows), total, rows)
    K = kernel_basis(E)
    return Limit(AbelianGroup(K.cols), tuple(U), offsets, K)


def lim_map(D: Diagram, big: Limit, small: Limit) -> Matrix:
    """Restriction ``lim F|_U -> lim F|_V`` for ``V ⊆ U``, in limit coordinates."""
    ring = D.ring
    sel = []
    for y in small.elements:
        o = big.offsets[y]
        sel += range(o, o + D.ranks[y])
    image = big.basis.submatrix(sel, None)
    X = solve(small.basis, image)
    if X is None:
        raise ArithmeticError("restricted limit element not in the smaller limit")
    return X


# ---------------------------------------------------------------------------
# precosheaves


class Precosheaf:
    """Free-module values on every open set with corestrictions along inclusions."""

    def __init__(self, space: FiniteSpace, ring: Ring, values: Mapping[frozenset, int],
                 maps: Mapping[tuple, Matrix], check: bool = True):
        self.space = space
        self.ring = ring
        self.opens = space.all_opens()
        missing = [U for U in self.opens if U not in values]
        if missing:
            raise ValueError(f"no value for open {space.format_set(missing[0])}")
        self.values = {U: int(values[U]) for U in self.opens}
        full = {}
        for V in self.opens:
            for U in self.opens:
                if V <= U:
                    if V == U:
                        full[(V, U)] = Matrix.identity(ring, self.values[U])
                        if (V, U) in maps and maps[(V, U)] != full[(V, U)]:
                            raise ValueError("corestriction along U ⊆ U must be the identity")
                    else:
                        m = maps.get((V, U))
                        if m is None:
                            raise ValueError(
                                f"missing corestriction {space.format_set(V)} ⊆ {space.format_set(U)}"
                            )
                        if m.shape != (self.values[U], self.values[V]):
                            raise ValueError("corestriction has the wrong shape")
                        full[(V, U)] = m
        self.maps = full
        if check:
            for (V, W), m in full.items():
                for U in self.opens:
                    if W <= U and W != U and V != W:
                        if full[(V, U)] != full[(W, U)] @ m:
                            raise ValueError("precosheaf corestrictions are not functorial")

    def value(self, U) -> int:
        return self.values[frozenset(U)]

    def map(self, V, U) -> Matrix:
        return self.maps[(frozenset(V), frozenset(U))]

    @classmethod
    def from_diagram(cls, D: Diagram) -> "Precosheaf":
        """``U -> colim F|_U``; requires torsion-free colimits."""
        X = D.space
        cache = {}
        for U in X.all_opens():
            c = colim0(D, U)
            if c.group.torsion:
                raise TorsionError(f"colimit over {X.format_set(U)} has torsion {c.group.torsion}")
            cache[U] = c
        maps = {}
        for V in cache:
            for U in cache:
                if V < U:
                    maps[(V, U)] = colim_map(D, cache[V], cache[U])
        return cls(X, D.ring, {U: c.rank for U, c in cache.items()}, maps, check=False)

    @classmethod
    def constant(cls, X: FiniteSpace, ring: Ring, g: int = 1) -> "Precosheaf":
        opens = X.all_opens()
        vals = {U: g for U in opens}
        maps = {(V, U): Matrix.identity(ring, g) for V in opens for U in opens if V < U}
        return cls(X, ring, vals, maps, check=False)

    @classmethod
    def component_sum(cls, X: FiniteSpace, ring: Ring, g: int = 1) -> "Precosheaf":
        """``U -> (+)_{components of U} G`` with maps induced by component inclusion."""
        opens = X.all_opens()
        comps = {U: X.components(U).blocks for U in opens}
        vals = {U: g * len(comps[U]) for U in opens}
        maps = {}
        for V in opens:
            for U in opens:
                if V < U:
                    rows = [[0] * vals[V] for _ in range(vals[U])]
                    for a, b in enumerate(comps[V]):
                        t = next(k for k, c in enumerate(comps[U]) if b <= c)
                        for e in range(g):
                            rows[t * g + e][a * g + e] = 1
                    maps[(V, U)] = Matrix(ring, vals[U], vals[V], rows)
        return cls(X, ring, vals, maps, check=False)

    def direct_sum(self, other: "Precosheaf") -> "Precosheaf":
        vals = {U: self.values[U] + other.values[U] for U in self.opens}
        maps = {}
        for (V, U), m in self.maps.items():
            if V != U:
                o = other.maps[(V, U)]
                maps[(V, U)] = block_matrix(self.ring, [[m, None], [None, o]],
                                            [m.rows, o.rows], [m.cols, o.cols])
        return Precosheaf(self.space, self.ring, vals, maps, check=False)

    def change_basis(self, bases: Mapping[frozenset, tuple]) -> "Precosheaf":
        """Conjugate by invertible ``(T_U, T_U^-1)`` per open: new map = T_U m T_V^-1."""
        maps = {}
        for (V, U), m in self.maps.items():
            if V != U:
                maps[(V, U)] = bases[U][0] @ m @ bases[V][1]
        return Precosheaf(self.space, self.ring, dict(self.values), maps, check=False)


@dataclass(frozen=True)
class AxiomVerdict:
    holds: bool
    open_set: frozenset | None = None
    cover: tuple | None = None
    reason: str = ""

    def __bool__(self):
        return self.holds


def _sieve(cover: Sequence[frozenset], opens: Sequence[frozenset]) -> list[frozenset]:
    return [V for V in opens if any(V <= W for W in cover)]


def check_cosheaf_axiom(P: Precosheaf, U: Iterable[int], cover: Sequence[Iterable[int]]) -> AxiomVerdict:
    """Is ``colim_{V in sieve(cover)} A(V) -> A(U)`` an isomorphism?

    The sieve is every open inside some member of the cover, so a nonempty
    cover always contains the empty set and the empty cover has an empty
    sieve (whose colimit is 0).
    """
    U = frozenset(U)
    cover = tuple(frozenset(c) for c in cover)
    X = P.space
    union = frozenset().union(*cover) if cover else frozenset()
    if union != U:
        raise ValueError("cover does not cover the open set")
    ring = P.ring
    S = _sieve(cover, P.opens)
    offsets, o = {}, 0
    for V in S:
        offsets[V] = o
        o += P.values[V]
    total = o
    rel_cols = []
    for V in S:
        for W in S:
            if V < W and not any(V < M < W for M in S):
                m = P.maps[(V, W)]
                for k in range(P.values[V]):
                    col = [ring.coerce(0)] * total
                    for i in range(P.values[W]):
                        col[offsets[W] + i] = m[i, k]
                    col[offsets[V] + k] = ring.reduce(col[offsets[V] + k] - 1)
                    rel_cols.append(col)
    R = Matrix.from_columns(ring, rel_cols, total)
    C = Matrix.zeros(ring, P.values[U], 0)
    if S:
        C = P.maps[(S[0], U)]
        C = C.hstack(*(P.maps[(V, U)] for V in S[1:])) if len(S) > 1 else C
    m = P.values[U]
    ident = Matrix.identity(ring, m)
    if solve(C, ident) is None:
        return AxiomVerdict(False, U, cover, "comparison map is not surjective")
    if not span_contains(R, kernel_basis(C)):
        return AxiomVerdict(False, U, cover, "comparison map is not injective")
    return AxiomVerdict(True, U, cover)


def covers_of(X: FiniteSpace, U: Iterable[int], opens: Sequence[frozenset] | None = None,
              bound: int = 5) -> list[tuple]:
    """Antichains of opens inside U whose union is U (one per sieve), deterministic order.

    For ``U = ∅`` both the empty cover and ``(∅,)`` are produced.
    """
    U = frozenset(U)
    if len(U) > bound:
        from .finspace import SizeBoundError
        raise SizeBoundError(f"cover enumeration: open set has {len(U)} elements, bound is {bound}")
    opens = X.all_opens() if opens is None else opens
    inside = [V for V in opens if V <= U]
    out = []

    def walk(k, chosen):
        if k == len(inside):
            if (frozenset().union(*chosen) if chosen else frozenset()) == U:
                out.append(tuple(chosen))
            return
        walk(k + 1, chosen)
        V = inside[k]
        if all(not (V <= W or W <= V) for W in chosen):
            walk(k + 1, chosen + [V])

    walk(0, [])
    return out


def check_all_covers(P: Precosheaf, bound: int = 5) -> AxiomVerdict:
    for U in P.opens:
        for cov in covers_of(P.space, U, P.opens, bound):
            v = check_cosheaf_axiom(P, U, cov)
            if not v:
                return v
    return AxiomVerdict(True)


# ---------------------------------------------------------------------------
# pushforward and fiber homology


def pushforward(f: MonotoneMap, D: Diagram) -> Diagram:
    """Costalk-wise ``(f_* D)(y) = colim D|_{f^-1(U_y)}``."""
    if f.source != D.space:
        raise ValueError("map source and diagram space differ")
    Y = f.target
    colims = []
    for y in range(Y.n):
        c = colim0(D, f.preimage(Y.down[y]))
        if c.group.torsion and not D.ring.is_field:
            raise TorsionError(
                f"pushforward value at {Y.labels[y]} has torsion {c.group.torsion}; use field coefficients"
            )
        colims.append(c)
    maps = {}
    for y in range(Y.n):
        for z in Y.up[y]:
            maps[(y, z)] = colim_map(D, colims[y], colims[z])
    return Diagram(Y, D.ring, [c.rank for c in colims], maps, COSHEAF)


def fiber_homology(f: MonotoneMap, D: Diagram, s: int) -> Diagram:
    """``y -> H_s`` of the bar complex of D over ``f^-1(U_y)`` (field coefficients)."""
    from .algebra import homology_basis, induced_map
    from .bar import bar_chain, inclusion_chain_map

    if not D.ring.is_field:
        raise ValueError("fiber_homology needs field coefficients")
    Y = f.target
    complexes, bases = [], []
    for y in range(Y.n):
        B = bar_chain(D, s, normalized=True, support=f.preimage(Y.down[y]))
        complexes.append(B)
        bases.append(homology_basis(B.complex, s))
    maps = {}
    for y in range(Y.n):
        for z in Y.up[y]:
            inc = inclusion_chain_map(complexes[y], complexes[z], s)
            maps[(y, z)] = induced_map(inc, bases[y], bases[z])
    return Diagram(Y, D.ring, [b.group.free_rank for b in bases], maps, COSHEAF)


# ---------------------------------------------------------------------------
# text format


def parse_diagram(text: str, space: FiniteSpace, source: str = "<string>") -> Diagram:
    from .algebra import Ring as _Ring

    ring = None
    orientation = COSHEAF
    ranks: dict[str, int] = {}
    gens = {}
    pending = []
    for no, line in _content_lines(text):
        head, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(source, no, f"unrecognised line {line!r}")
        words = head.split()
        if words == ["ring"]:
            try:
                ring = _Ring.parse(rest)
            except ValueError as e:
                raise ParseError(source, no, str(e)) from None
        elif words == ["orientation"]:
            orientation = rest.strip()
            if orientation not in (COSHEAF, SHEAF):
                raise ParseError(source, no, "orientation must be cosheaf or sheaf")
        elif len(words) == 2 and words[0] == "rank":
            lab = words[1]
            if lab not in space.labels:
                raise ParseError(source, no, f"unknown element {lab!r}")
            try:
                r = int(rest)
            except ValueError:
                raise ParseError(source, no, f"rank must be an integer, got {rest.strip()!r}") from None
            if r < 0:
                raise ParseError(source, no, "rank must be nonnegative")
            ranks[lab] = r
        elif len(words) == 3 and words[0] == "matrix":
            a, b = words[1], words[2]
            for lab in (a, b):
                if lab not in space.labels:
                    raise ParseError(source, no, f"unknown element {lab!r}")
            pending.append((no, a, b, rest))
        else:
            raise ParseError(source, no, f"unrecognised line {line!r}")
    if ring is None:
        raise ParseError(source, 0, "missing 'ring:' line")
    for lab in space.labels:
        if lab not in ranks:
            raise ParseError(source, 0, f"no rank given for element {lab!r}")
    rk = [ranks[lab] for lab in space.labels]
    covering = set(space.covering_pairs())
    for no, a, b, rest in pending:
        x, y = space.index(a), space.index(b)
        if (x, y) not in covering:
            raise ParseError(source, no, f"{a} <= {b} is not a covering pair")
        shape = (rk[y], rk[x]) if orientation == COSHEAF else (rk[x], rk[y])
        try:
            gens[(x, y)] = parse_matrix(ring, rest, *shape)
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(source, no, str(e)) from None
    try:
        return Diagram.from_generators(space, ring, rk, gens, orientation)
    except ValueError as e:
        raise ParseError(source, 0, str(e)) from None


def load_diagram(path, space: FiniteSpace) -> Diagram:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ParseError(str(path), 0, f"cannot read file: {e.strerror}") from None
    return parse_diagram(text, space, str(path))
