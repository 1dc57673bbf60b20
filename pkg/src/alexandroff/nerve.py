"""Order complexes, Čech nerves, Čech chain complexes and Mayer–Vietoris.

Čech complexes here are homological: ``C_n`` is the sum of ``A(U_{i_0} ∩ ... ∩ U_{i_n})``
over index tuples and the differential is the alternating sum of the
corestrictions that drop one index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .algebra import (
    AbelianGroup,
    ChainComplex,
    HomologySummary,
    Matrix,
    Ring,
    block_matrix,
    chain_homology,
    cokernel,
    kernel_basis,
    kernel_with_coordinates,
    same_span,
    solve,
)
from .bar import bar_chain, inclusion_chain_map
from .diagrams import Diagram, Precosheaf
from .finspace import FiniteSpace, ParseError, _content_lines


class SimplicialComplex:
    """Abstract simplicial complex on vertices ``0..n-1``; simplices are sorted tuples."""

    def __init__(self, n_vertices: int, simplices: Iterable[Sequence[int]], labels: Sequence[str] | None = None):
        simp = set()
        for s in simplices:
            t = tuple(sorted(s))
            if len(set(t)) != len(t):
                raise ValueError(f"simplex {t} repeats a vertex")
            if t:
                simp.add(t)
        for s in simp:
            for k in range(len(s)):
                face = s[:k] + s[k + 1:]
                if face and face not in simp:
                    raise ValueError(f"face {face} of {s} is missing")
        self.n_vertices = n_vertices
        self.labels = tuple(labels) if labels else tuple(str(i) for i in range(n_vertices))
        self.simplices = {}
        for s in simp:
            self.simplices.setdefault(len(s) - 1, []).append(s)
        for d in self.simplices:
            self.simplices[d].sort()

    @property
    def dimension(self) -> int:
        return max(self.simplices, default=-1)

    def count(self, d: int) -> int:
        return len(self.simplices.get(d, []))

    def f_vector(self) -> tuple:
        return tuple(self.count(d) for d in range(self.dimension + 1))

    def __repr__(self) -> str:
        return f"SimplicialComplex(f={self.f_vector()})"


def order_complex(P: FiniteSpace) -> SimplicialComplex:
    """Simplices are the strict chains; a preorder is first replaced by its T0 quotient."""
    if not P.is_t0:
        P, _ = P.t0_quotient()
    # grow cliques of the comparability graph, vertices added in increasing index order
    comparable = [[i != j and (P.leq[i][j] or P.leq[j][i]) for j in range(P.n)] for i in range(P.n)]
    simplices = []

    def grow(clique, start):
        simplices.append(tuple(clique))
        for v in range(start, P.n):
            if all(comparable[v][u] for u in clique):
                grow(clique + [v], v + 1)

    for v in range(P.n):
        grow([v], v + 1)
    return SimplicialComplex(P.n, simplices, P.labels)


def simplicial_chains(K: SimplicialComplex, ring: Ring, top: int | None = None) -> ChainComplex:
    """Ordered-simplex boundary ``d[v_0..v_n] = Σ (-1)^k [.. v̂_k ..]``."""
    top = K.dimension if top is None else top
    ranks = {d: K.count(d) for d in range(top + 1)}
    index = {d: {s: i for i, s in enumerate(K.simplices.get(d, []))} for d in range(top + 1)}
    bds = {}
    for d in range(1, top + 1):
        z = ring.coerce(0)
        data = [[z] * ranks[d] for _ in range(ranks[d - 1])]
        for j, s in enumerate(K.simplices.get(d, [])):
            for k in range(d + 1):
                i = index[d - 1][s[:k] + s[k + 1:]]
                data[i][j] = ring.coerce(-1 if k % 2 else 1)
        bds[d] = Matrix(ring, ranks[d - 1], ranks[d], data)
    return ChainComplex(ring, ranks, bds)


def simplicial_homology(K: SimplicialComplex, ring: Ring, n_max: int | None = None) -> HomologySummary:
    n_max = max(K.dimension, 0) if n_max is None else n_max
    C = simplicial_chains(K, ring, max(n_max + 1, 0))
    return chain_homology(C, range(n_max + 1))


def cech_nerve(cover: Sequence[Iterable[int]]) -> SimplicialComplex:
    """Index subsets of the cover with nonempty common intersection."""
    sets = [frozenset(U) for U in cover]
    simplices = []

    def grow(idx, inter, start):
        simplices.append(tuple(idx))
        for k in range(start, len(sets)):
            nxt = inter & sets[k]
            if nxt:
                grow(idx + [k], nxt, k + 1)

    for k, U in enumerate(sets):
        if U:
            grow([k], U, k + 1)
    return SimplicialComplex(len(sets), simplices)


@dataclass(frozen=True)
class CechComplexSpec:
    cover: tuple
    precosheaf: Precosheaf
    variant: str = "large"

    def __post_init__(self):
        if self.variant not in ("large", "reduced"):
            raise ValueError("variant must be 'large' or 'reduced'")
        for U in self.cover:
            if not self.precosheaf.space.is_open(U):
                raise ValueError("cover members must be open")


@dataclass
class CechResult:
    complex: ChainComplex
    homology: HomologySummary
    tuples: dict
    n_max: int


def cech_complex(spec: CechComplexSpec, n_max: int = 4) -> CechResult:
    """Homological Čech complex through degree ``n_max + 1``; homology through ``n_max``."""
    P = spec.precosheaf
    ring = P.ring
    cover = [frozenset(U) for U in spec.cover]
    m = len(cover)
    tuples, offsets, ranks, inters = {}, {}, {}, {}
    for n in range(n_max + 2):
        lst = []
        for tup in itertools.product(range(m), repeat=n + 1):
            inter = frozenset.intersection(*(cover[i] for i in tup))
            if spec.variant == "reduced" and not inter:
                continue
            lst.append(tup)
            inters[tup] = inter
        tuples[n] = lst
        o, offs = 0, {}
        for tup in lst:
            offs[tup] = o
            o += P.values[inters[tup]]
        offsets[n], ranks[n] = offs, o
    bds = {}
    for n in range(1, n_max + 2):
        z = ring.coerce(0)
        data = [[z] * ranks[n] for _ in range(ranks[n - 1])]
        for tup in tuples[n]:
            c0 = offsets[n][tup]
            src = inters[tup]
            for k in range(n + 1):
                face = tup[:k] + tup[k + 1:]
                r0 = offsets[n - 1][face]
                M = P.maps[(src, inters[face])]
                sign = -1 if k % 2 else 1
                for i in range(M.rows):
                    row = data[r0 + i]
                    for j in range(M.cols):
                        if M[i, j]:
                            row[c0 + j] = ring.reduce(row[c0 + j] + sign * M[i, j])
        bds[n] = Matrix(ring, ranks[n - 1], ranks[n], data)
    C = ChainComplex(ring, ranks, bds)
    return CechResult(C, chain_homology(C, range(n_max + 1)), tuples, n_max)


def nerve_is_acyclic(cover: Sequence[Iterable[int]], ring: Ring) -> bool:
    """Whether the nerve has the homology of a point.

    The tuples with empty intersection form the quotient of the large Čech
    complex by the reduced one, and that quotient computes the reduced
    homology of the nerve shifted up by one.  So large and reduced homology
    agree for every precosheaf once the nerve is acyclic.
    """
    K = cech_nerve(cover)
    if not K.simplices:
        return False
    h = simplicial_homology(K, ring, max(K.dimension, 0) + 1)
    return h[0].free_rank == 1 and not h[0].torsion and all(h[n].is_zero for n in range(1, K.dimension + 2))


def is_leray_cover(X: FiniteSpace, cover: Sequence[Iterable[int]], ring: Ring) -> bool:
    """Every nonempty finite intersection of members is acyclic (constant coefficients)."""
    from .bar import bar_homology
    from .diagrams import constant_diagram

    sets = [frozenset(U) for U in cover]
    seen = set()
    for r in range(1, len(sets) + 1):
        for idx in itertools.combinations(range(len(sets)), r):
            inter = frozenset.intersection(*(sets[i] for i in idx))
            if not inter or inter in seen:
                continue
            seen.add(inter)
            sub, _ = X.subspace(inter)
            h = bar_homology(constant_diagram(sub, ring))
            if h[0] != AbelianGroup(1) or any(not h[n].is_zero for n in h.groups if n > 0):
                return False
    return True


def cech_homology_of_diagram(D, cover: Sequence[Iterable[int]], n_max: int | None = None):
    """Čech homology of the precosheaf induced by a cosheaf-oriented diagram.

    Returns ``(summary, None)`` when every nonempty intersection of members
    carries no homology above degree 0 (then Čech homology computes the
    homology of the union), else ``(None, reason)``.
    """
    from .algebra import TorsionError
    from .bar import bar_homology, default_degree_cap

    X = D.space
    n_max = default_degree_cap(X) if n_max is None else n_max
    sets = [frozenset(U) for U in cover]
    seen = set()
    for r in range(1, len(sets) + 1):
        for idx in itertools.combinations(range(len(sets)), r):
            inter = frozenset.intersection(*(sets[i] for i in idx))
            if not inter or inter in seen:
                continue
            seen.add(inter)
            h = bar_homology(D.restrict(inter))
            if any(not h[n].is_zero for n in h.groups if n > 0):
                return None, f"intersection {X.format_set(inter)} has higher homology"
    try:
        P = Precosheaf.from_diagram(D)
    except TorsionError as e:
        return None, str(e)
    res = cech_complex(CechComplexSpec(tuple(sets), P, "reduced"), n_max)
    return res.homology, None


def minimal_open_cover(X: FiniteSpace) -> list[frozenset]:
    return [X.down[x] for x in range(X.n)]


def maximal_open_cover(X: FiniteSpace) -> list[frozenset]:
    """Minimal opens of the maximal points; these already cover X."""
    return [X.down[x] for x in range(X.n) if not any(X.lt(x, y) for y in range(X.n))]


# ---------------------------------------------------------------------------
# Mayer–Vietoris


@dataclass
class MVNode:
    name: str          # "A∩B", "A+B" or "X"
    degree: int
    group: AbelianGroup
    exact: bool


@dataclass
class MayerVietoris:
    ring: Ring
    n_max: int
    nodes: list
    homology_X: HomologySummary
    exact: bool

    def lines(self) -> list[str]:
        return self.homology_X.lines(range(self.n_max + 1)) + [f"exact: {'yes' if self.exact else 'no'}"]


def _lattice_kernel_of_composite(G: Matrix, Bn: Matrix) -> Matrix:
    """Basis of ``{u : G u ∈ span(Bn)}``."""
    stacked = G.hstack(-Bn) if Bn.cols else G
    K = kernel_basis(stacked)
    return K.submatrix(range(G.cols), None)


def mayer_vietoris(X: FiniteSpace, U0: Iterable[int], U1: Iterable[int], D: Diagram, n_max: int | None = None) -> MayerVietoris:
    """Long exact sequence of ``0 -> C(U0∩U1) -> C(U0)+C(U1) -> C(X) -> 0``.

    Every chain of X lies in U0 or U1 because opens are down-closed and a
    chain lies wholly in whichever open contains its top element.
    Exactness is tested at every node as equality of subgroups of the cycle
    lattice: image-plus-boundaries against the preimage of boundaries.
    """
    from .bar import default_degree_cap

    U0, U1 = frozenset(U0), frozenset(U1)
    if not (X.is_open(U0) and X.is_open(U1)):
        raise ValueError("Mayer-Vietoris needs open sets")
    if U0 | U1 != frozenset(range(X.n)):
        raise ValueError("the two opens must cover the space")
    if D.space != X:
        raise ValueError("diagram lives on a different space")
    n_max = default_degree_cap(X) if n_max is None else n_max
    ring = D.ring
    top = n_max + 1
    CA = bar_chain(D, top, support=U0 & U1)
    C0 = bar_chain(D, top, support=U0)
    C1 = bar_chain(D, top, support=U1)
    CX = bar_chain(D, top)

    def sum_complex_rank(n):
        return C0.rank(n) + C1.rank(n)

    def sum_d(n):
        a, b = C0.complex.d(n), C1.complex.d(n)
        return block_matrix(ring, [[a, None], [None, b]], [a.rows, b.rows], [a.cols, b.cols])

    def alpha(n):
        i0 = inclusion_chain_map(CA, C0, n)
        i1 = inclusion_chain_map(CA, C1, n)
        return i0.vstack(-i1)

    def beta(n):
        return inclusion_chain_map(C0, CX, n).hstack(inclusion_chain_map(C1, CX, n))

    def section(n):
        # lift each chain of X to U0 if it fits there, otherwise to U1
        z = ring.coerce(0)
        rows = sum_complex_rank(n)
        data = [[z] * CX.rank(n) for _ in range(rows)]
        for ch, o in CX.offsets[n].items():
            r = D.ranks[ch[0]]
            if ch in C0.offsets[n]:
                t = C0.offsets[n][ch]
            else:
                t = C0.rank(n) + C1.offsets[n][ch]
            for e in range(r):
                data[t + e][o + e] = ring.coerce(1)
        return Matrix(ring, rows, CX.rank(n), data)

    # cycle data: (K cycles basis, L coordinates, boundary lattice in coordinates)
    def cycles(dn, dn1):
        K, L = kernel_with_coordinates(dn)
        return K, L, L @ dn1

    nodes = []
    all_exact = True
    cyc = {}
    for n in range(0, top + 1):
        cyc[("A", n)] = cycles(CA.complex.d(n), CA.complex.d(n + 1))
        cyc[("S", n)] = cycles(sum_d(n), sum_d(n + 1))
        cyc[("X", n)] = cycles(CX.complex.d(n), CX.complex.d(n + 1))

    def chain_map_on_cycles(src, tgt, F):
        Ks, _, _ = cyc[src]
        _, Lt, _ = cyc[tgt]
        return Lt @ F @ Ks

    def connecting(n):
        # H_n(X) -> H_{n-1}(A∩B): z -> d(section z) restricted to the U0 part
        Kx, _, _ = cyc[("X", n)]
        lifted = sum_d(n) @ section(n) @ Kx
        first = lifted.submatrix(range(C0.rank(n - 1)), None)
        # that part lies in C(U0∩U1) ⊆ C(U0); read its coordinates there
        incl = inclusion_chain_map(CA, C0, n - 1)
        c = solve(incl, first)
        if c is None:
            raise ArithmeticError("connecting map did not land in the intersection")
        _, La, _ = cyc[("A", n - 1)]
        return La @ c

    def exact_at(node, incoming, outgoing):
        """incoming: matrix cycles(prev) -> cycles(node); outgoing: cycles(node) -> cycles(next), next key."""
        K, L, Bn = cyc[node]
        dim = K.cols
        parts = []
        if incoming is not None and incoming.cols:
            parts.append(incoming)
        if Bn.cols:
            parts.append(Bn)
        image = parts[0].hstack(*parts[1:]) if parts else Matrix.zeros(ring, dim, 0)
        if outgoing is None:
            kern = Matrix.identity(ring, dim)
        else:
            G, nxt = outgoing
            kern = _lattice_kernel_of_composite(G, cyc[nxt][2])
        return same_span(image, kern)

    hX = chain_homology(CX.complex, range(n_max + 1))
    for n in range(n_max, -1, -1):
        a_in = chain_map_on_cycles(("A", n), ("S", n), alpha(n))
        b_in = chain_map_on_cycles(("S", n), ("X", n), beta(n))
        d_out = connecting(n) if n >= 1 else None
        d_in = connecting(n + 1)
        ok_A = exact_at(("A", n), d_in, (a_in, ("S", n)))
        ok_S = exact_at(("S", n), a_in, (b_in, ("X", n)))
        ok_X = exact_at(("X", n), b_in, (d_out, ("A", n - 1)) if d_out is not None else None)
        for name, key, ok in (("X", ("X", n), ok_X), ("A+B", ("S", n), ok_S), ("A∩B", ("A", n), ok_A)):
            Bn = cyc[key][2]
            nodes.append(MVNode(name, n, cokernel(Bn).group, ok))
            all_exact &= ok
    return MayerVietoris(ring, n_max, nodes, hX, all_exact)


# ---------------------------------------------------------------------------
# cover files


def parse_cover(text: str, space: FiniteSpace, source: str = "<string>") -> dict[str, frozenset]:
    out = {}
    for no, line in _content_lines(text):
        head, sep, rest = line.partition(":")
        if head.strip() != "cover" or not sep:
            raise ParseError(source, no, f"unrecognised line {line!r}")
        name, eq, body = rest.partition("=")
        name, body = name.strip(), body.strip()
        if not eq or not name:
            raise ParseError(source, no, "expected 'cover: <name> = {a,b,...}'")
        if not (body.startswith("{") and body.endswith("}")):
            raise ParseError(source, no, "set must be written in braces")
        items = [s.strip() for s in body[1:-1].split(",") if s.strip()]
        for it in items:
            if it not in space.labels:
                raise ParseError(source, no, f"unknown element {it!r}")
        U = frozenset(space.index(it) for it in items)
        if not space.is_open(U):
            raise ParseError(source, no, f"{name} = {space.format_set(U)} is not open")
        if name in out:
            raise ParseError(source, no, f"duplicate cover member {name!r}")
        out[name] = U
    return out


def load_cover(path, space: FiniteSpace) -> dict[str, frozenset]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ParseError(str(path), 0, f"cannot read file: {e.strerror}") from None
    return parse_cover(text, space, str(path))
