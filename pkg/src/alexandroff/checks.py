"""Invariant suites, one per module, shared by the ``check`` command and the tests.

Each suite returns a list of :class:`CheckResult`; a suite is deterministic
for a given seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .algebra import GF, QQ, ZZ, AbelianGroup, ChainComplex, Matrix, chain_homology, rank, smith_normal_form
from .bar import (
    bar_chain,
    bar_homology,
    derived_lim_oracle,
    higher_colim,
    higher_lim,
    standard_injective,
    strict_chain_counts,
)
from .diagrams import (
    Diagram,
    Precosheaf,
    check_all_covers,
    colim0,
    constant_diagram,
    covers_of,
    lim0,
)
from .finspace import brute_force_opens
from . import models
from .nerve import (
    CechComplexSpec,
    cech_complex,
    cech_nerve,
    is_leray_cover,
    maximal_open_cover,
    mayer_vietoris,
    nerve_is_acyclic,
    order_complex,
    simplicial_homology,
)
from .spectral import (
    cartan_eilenberg_check,
    cartan_eilenberg_resolution,
    e2_pages,
    leray_degenerate_check,
    page_homology_consistent,
    run_pages,
    tot_homology_dims,
    total_complex,
)
from .tower import (
    Tower,
    TowerMorphism,
    bond_report,
    gsharp_value_matches_colim,
    hawaiian_tower,
    is_zero_tower,
    level_cokernel,
    level_kernel,
    morphisms_equal,
)

MODULES = ("exact-algebra", "finspace", "diagrams", "bar", "nerve-cech", "pro-tower", "spectral", "cli")


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}" + (f" ({self.detail})" if self.detail else "")


def _all(name, cases):
    """Fold an iterable of (ok, description) into one result naming the first failure."""
    n = 0
    for ok, what in cases:
        n += 1
        if not ok:
            return CheckResult(name, False, f"fails on {what}")
    return CheckResult(name, True, f"{n} cases")


# ---------------------------------------------------------------------------
# exact-algebra


def _snf_ok(M: Matrix) -> bool:
    s = smith_normal_form(M)
    if s.U @ M @ s.V != s.D:
        return False
    if s.U @ s.U_inv != Matrix.identity(ZZ, M.rows) or s.V @ s.V_inv != Matrix.identity(ZZ, M.cols):
        return False
    d = [x for x in s.diagonal if x]
    return all(x > 0 for x in d) and all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))


def check_exact_algebra(seed: int = 0) -> list[CheckResult]:
    rng = random.Random(seed)
    mats = [models.random_matrix(rng, ZZ, rng.randint(0, 5), rng.randint(0, 5)) for _ in range(40)]
    out = [_all("smith normal form U·M·V = D with unimodular U, V and a divisibility chain",
                ((_snf_ok(M), M) for M in mats))]

    def rank_nullity():
        for _ in range(30):
            C = models.random_chain_complex(rng, QQ, 3)
            h = chain_homology(C, range(4))
            for n in range(4):
                want = C.rank(n) - rank(C.d(n)) - rank(C.d(n + 1))
                yield h[n].free_rank == want, (C, n)

    out.append(_all("rank-nullity over a field", rank_nullity()))

    def z_vs_q():
        for _ in range(100):
            C = models.random_chain_complex(rng, ZZ, 3, torsion=True)
            Cq = ChainComplex(QQ, C.ranks, {n: Matrix(QQ, m.rows, m.cols, m.data) for n, m in C.boundaries.items()})
            hz, hq = chain_homology(C, range(4)), chain_homology(Cq, range(4))
            yield all(hz[n].free_rank == hq[n].free_rank for n in range(4)), C

    out.append(_all("homology over Q equals homology over Z with torsion dropped", z_vs_q()))
    return out


# ---------------------------------------------------------------------------
# finspace


def _spaces(rng, count, max_n, preorders=True):
    for i in range(count):
        n = rng.randint(1, max_n)
        if preorders and i % 2:
            yield models.random_preorder(rng, n)
        else:
            yield models.random_poset(rng, n)


def check_finspace(seed: int = 0) -> list[CheckResult]:
    rng = random.Random(seed)
    spaces = list(_spaces(rng, 40, 8))
    out = []

    def minimal_opens():
        for X in spaces:
            opens = X.all_opens()
            for x in range(X.n):
                inter = frozenset(range(X.n))
                for U in opens:
                    if x in U:
                        inter &= U
                yield X.minimal_open(x) == inter, (X, x)

    out.append(_all("minimal open is the intersection of all opens containing the point", minimal_opens()))
    out.append(_all("all_opens equals brute-force down-set enumeration",
                    ((sorted(X.all_opens(), key=lambda U: (len(U), sorted(U))) == brute_force_opens(X), X)
                     for X in spaces)))

    def partitions_ok():
        for X in spaces[:20]:
            for U in X.all_opens()[:6]:
                parts = X.partitions(U)
                blocks_ok = all(all(X.is_open(b) for b in p.blocks) and frozenset().union(*p.blocks) == U
                                and sum(len(b) for b in p.blocks) == len(U) for p in parts if U)
                keys = {tuple(sorted(tuple(sorted(b)) for b in p.blocks)) for p in parts}
                directed = all(
                    tuple(sorted(tuple(sorted(b)) for b in p.common_refinement(q).blocks)) in keys
                    for p in parts for q in parts
                )
                yield blocks_ok and directed, (X, U)

    out.append(_all("partition blocks are open, disjoint and covering; common refinements stay in the list",
                    partitions_ok()))

    def t0_idem():
        for X in spaces:
            q, _ = X.t0_quotient()
            q2, nu2 = q.t0_quotient()
            yield q2.n == q.n and q.is_t0 and q2.leq == q.leq, X

    out.append(_all("t0_quotient is idempotent", t0_idem()))

    def bijection():
        for X in spaces:
            q, nu = X.t0_quotient()
            pulled = {nu.preimage(V) for V in q.all_opens()}
            yield pulled == set(X.all_opens()) and len(pulled) == len(q.all_opens()), X

    out.append(_all("preimage under the quotient map is a bijection of open sets", bijection()))
    return out


# ---------------------------------------------------------------------------
# diagrams


def _t0_transport(D: Diagram):
    X = D.space
    q, nu = X.t0_quotient()
    reps = [nu.preimage([c]) for c in range(q.n)]
    reps = [min(r) for r in reps]
    maps = {(a, b): D.maps[(reps[a], reps[b])] for a in range(q.n) for b in q.up[a] if a != b}
    return Diagram(q, D.ring, [D.ranks[r] for r in reps], maps, D.orientation), nu


def check_diagrams(seed: int = 0) -> list[CheckResult]:
    rng = random.Random(seed)
    out = []
    corpus = []
    for i in range(25):
        X = models.random_poset(rng, rng.randint(2, 6)) if i % 3 else models.random_preorder(rng, rng.randint(2, 6))
        ring = (QQ, ZZ, GF(2))[i % 3]
        corpus.append(models.randomize_bases(rng, models.random_diagram(rng, X, ring)))
    out.append(_all("functoriality on every composable pair", ((D.check_functorial() is None, D) for D in corpus)))

    def costalks():
        for D in corpus:
            S = D.dual()
            for x in range(D.space.n):
                U = D.space.minimal_open(x)
                yield colim0(D, U).rank == D.ranks[x], (D, x)
                # limits over the up-set of x evaluate a sheaf at x
                yield lim0(S, U).rank == D.ranks[x], (S, x)

    out.append(_all("minimal opens evaluate to the value at the point", costalks()))

    def constant_components():
        for i in range(15):
            X = models.random_preorder(rng, rng.randint(1, 6))
            g = rng.randint(1, 3)
            C = constant_diagram(X, ZZ, g)
            for U in X.all_opens():
                yield colim0(C, U).rank == g * len(X.components(U).blocks), (X, U)

    out.append(_all("colim of constant coefficients counts components", constant_components()))

    def cosheaf_axiom():
        for i in range(8):
            X = models.random_poset(rng, rng.randint(1, 4))
            D = models.random_diagram(rng, X, QQ)
            P = Precosheaf.from_diagram(D)
            v = check_all_covers(P)
            yield v.holds, (X, v)

    out.append(_all("induced precosheaves satisfy the cosheaf axiom on every cover", cosheaf_axiom()))

    def t0_invariance():
        for i in range(15):
            X = models.random_preorder(rng, rng.randint(2, 6), 0.3)
            D = models.random_diagram(rng, X, QQ)
            Dq, nu = _t0_transport(D)
            for U in X.all_opens():
                V = frozenset(nu(x) for x in U)
                yield colim0(D, U).rank == colim0(Dq, V).rank, (X, U)
                yield lim0(D.dual(), U).rank == lim0(Dq.dual(), V).rank, (X, U)

    out.append(_all("colim and lim commute with the T0 quotient", t0_invariance()))
    return out


# ---------------------------------------------------------------------------
# bar


def check_bar(seed: int = 0, count: int = 50) -> list[CheckResult]:
    rng = random.Random(seed)
    out = []

    def normalization():
        for i in range(count):
            X = models.random_poset(rng, rng.randint(1, 7))
            ring = (QQ, GF(2))[i % 2]
            D = models.random_diagram(rng, X, ring)
            cap = min(X.height() + 1, 4)
            a = bar_homology(D, cap, normalized=True)
            b = bar_homology(D, cap, normalized=False)
            yield all(a[n] == b[n] for n in range(cap + 1)), D

    out.append(_all("normalized and full bar complexes have equal homology", normalization()))

    def degree_zero():
        for i in range(20):
            X = models.random_preorder(rng, rng.randint(1, 6))
            D = models.random_diagram(rng, X, QQ)
            yield higher_colim(D, 0).free_rank == colim0(D).rank, D
            S = D.dual()
            yield higher_lim(S, 0).free_rank == lim0(S).rank, S

    out.append(_all("degree-zero satellites are colim and lim", degree_zero()))

    def injectives():
        for i in range(12):
            X = models.random_poset(rng, rng.randint(1, 6))
            j = rng.randrange(X.n)
            r = rng.randint(1, 2)
            J = standard_injective(X, j, r, QQ)
            h = bar_homology(J, X.height() + 1)
            yield h[0].free_rank == r and all(h[n].is_zero for n in range(1, X.height() + 2)), (X, j)

    out.append(_all("standard injectives have no higher limits", injectives()))

    def oracle():
        for i in range(30):
            X = [models.random_poset(rng, 6, 0.5), models.circle4(), models.sphere6()][i % 3]
            D = models.random_sheaf_diagram(rng, X, QQ)
            o = derived_lim_oracle(D)
            h = tuple(higher_lim(D, n).free_rank for n in range(len(o.dims)))
            yield o.valid and h == tuple(o.dims), D

    out.append(_all("higher_lim equals the injective-resolution oracle", oracle()))

    def euler():
        for i in range(15):
            X = models.random_poset(rng, rng.randint(1, 6))
            top = X.height()
            counts = strict_chain_counts(X, top)
            chi = sum((-1) ** n * higher_colim(constant_diagram(X, QQ), n).free_rank for n in range(top + 1))
            yield chi == sum((-1) ** n * c for n, c in enumerate(counts)), X

    out.append(_all("Euler characteristic of constant coefficients counts strict chains", euler()))
    return out


# ---------------------------------------------------------------------------
# nerve-cech


def bar_vs_order_complex(X, ring) -> bool:
    cap = X.t0_quotient()[0].height()
    a = bar_homology(constant_diagram(X, ring), cap)
    b = simplicial_homology(order_complex(X), ring, cap)
    return all(a[n] == b[n] for n in range(cap + 1))


def large_vs_reduced(P: Precosheaf, cover, n_max: int = 3) -> bool:
    a = cech_complex(CechComplexSpec(tuple(cover), P, "large"), n_max).homology
    b = cech_complex(CechComplexSpec(tuple(cover), P, "reduced"), n_max).homology
    return all(a[n] == b[n] for n in range(n_max + 1))


def empty_cover_ok(P: Precosheaf, n_max: int = 3) -> bool:
    """The cover {∅} of ∅ has large Čech homology A(∅) in degree 0 and nothing above."""
    h = cech_complex(CechComplexSpec((frozenset(),), P, "large"), n_max).homology
    return h[0].free_rank == P.value(frozenset()) and all(h[n].is_zero for n in range(1, n_max + 1))


def check_nerve_cech(seed: int = 0, count: int = 50) -> list[CheckResult]:
    rng = random.Random(seed)
    out = []

    def bar_nerve():
        for i in range(count):
            X = models.random_poset(rng, rng.randint(1, 8))
            for ring in (ZZ, QQ, GF(2)):
                yield bar_vs_order_complex(X, ring), (X, ring)

    out.append(_all("bar homology of constant coefficients equals order-complex homology", bar_nerve()))

    def leray_nerves():
        n = 0
        while n < 12:
            X = models.random_poset(rng, rng.randint(2, 6))
            cover = maximal_open_cover(X)
            if not is_leray_cover(X, cover, QQ):
                continue
            n += 1
            a = simplicial_homology(cech_nerve(cover), QQ, 4)
            b = simplicial_homology(order_complex(X), QQ, 4)
            yield all(a[k] == b[k] for k in range(5)), (X, cover)

    out.append(_all("nerve of a cover with acyclic intersections has the homology of the space", leray_nerves()))

    def reduced():
        X = models.circle4()
        opens = X.all_opens()
        for i in range(20):
            P = models.random_precosheaf(rng, X, QQ, empty_rank=rng.randint(1, 2))
            for U in opens:
                if not U:
                    yield empty_cover_ok(P), "cover {∅} of ∅"
                    continue
                for cover in covers_of(X, U, opens):
                    if cover and nerve_is_acyclic(cover, QQ):
                        yield large_vs_reduced(P, cover), (U, cover)

    out.append(_all("large and reduced Čech complexes agree on nonempty opens when the nerve is acyclic",
                    reduced()))

    def mv():
        for i in range(15):
            X = models.random_poset(rng, rng.randint(2, 6))
            opens = X.all_opens()
            U0 = rng.choice(opens)
            rest = frozenset(range(X.n)) - U0
            U1 = X.closure_down(rest) | rng.choice(opens)
            D = models.random_diagram(rng, X, (ZZ, QQ)[i % 2])
            yield mayer_vietoris(X, U0, U1, D).exact, (X, U0, U1)

    out.append(_all("Mayer–Vietoris sequences are exact at every node", mv()))

    def t0():
        for i in range(20):
            X = models.random_preorder(rng, rng.randint(1, 7))
            yield bar_vs_order_complex(X, ZZ), X

    out.append(_all("order complex of the T0 quotient matches bar homology of the preorder", t0()))
    return out


# ---------------------------------------------------------------------------
# pro-tower


def idempotent_identities(truncation: int = 5, tail=None):
    """The idempotent tower Y <- Y <- ... with bond ε and the maps φ, ξ through Y."""
    e = Matrix.from_rows(ZZ, [[1, 1], [0, 0]])
    X = Tower(ZZ, [AbelianGroup(2)] * (truncation + 1), [e] * truncation, tail)
    Y = Tower.constant(ZZ, 2)
    phi = TowerMorphism(X, Y, [0], [Matrix.identity(ZZ, 2)])
    xi = TowerMorphism(Y, X, [0] * (truncation + 1), [e] * (truncation + 1))
    return {
        "xi_phi": morphisms_equal(xi.compose_after(phi), TowerMorphism.identity(X)),
        "phi_xi_is_eps": morphisms_equal(phi.compose_after(xi), TowerMorphism(Y, Y, [0], [e])),
        "phi_xi_not_identity": not morphisms_equal(phi.compose_after(xi), TowerMorphism.identity(Y)).equal,
    }


def splitting_identities(truncation: int = 5, tail="repeat"):
    """ε = ξ∘φ on Z = Y ⊕ Y' with φ∘ξ = 1_Y; the tower of ε is isomorphic to Y."""
    xi = Matrix.from_rows(ZZ, [[1], [0]])
    phi = Matrix.from_rows(ZZ, [[1, 0]])
    e = xi @ phi
    X = Tower(ZZ, [AbelianGroup(2)] * (truncation + 1), [e] * truncation, tail)
    Y = Tower.constant(ZZ, 1)
    Phi = TowerMorphism(X, Y, [0], [phi])
    Xi = TowerMorphism(Y, X, [0] * (truncation + 1), [xi] * (truncation + 1))
    return {
        "Phi_Xi": morphisms_equal(Phi.compose_after(Xi), TowerMorphism.identity(Y)),
        "Xi_Phi": morphisms_equal(Xi.compose_after(Phi), TowerMorphism.identity(X)),
    }


def check_pro_tower(seed: int = 0) -> list[CheckResult]:
    rng = random.Random(seed)
    out = []

    def random_tower(levels):
        ranks = [rng.randint(0, 3) for _ in range(levels)]
        bonds = [models.random_matrix(rng, ZZ, ranks[n], ranks[n + 1]) for n in range(levels - 1)]
        return Tower(ZZ, [AbelianGroup(r) for r in ranks], bonds, rng.choice(("identity", None)))

    def eq_props():
        for _ in range(20):
            X = random_tower(5)
            I = TowerMorphism.identity(X)
            shifted = TowerMorphism(X, X, [min(j + 1, X.last) for j in range(len(X.levels))],
                                    [X.composite(j, min(j + 1, X.last)) for j in range(len(X.levels))])
            v = morphisms_equal(I, shifted)
            yield morphisms_equal(I, I).equal, "reflexive"
            yield v.equal == morphisms_equal(shifted, I).equal, "symmetric"
            yield v.equal, "re-representation through one bond"

    out.append(_all("morphism equality is reflexive, symmetric and invariant under re-representation", eq_props()))

    def hawaiian():
        for k in (0, 1, 2):
            T = hawaiian_tower(k, 1, 6)
            yield [G.free_rank for G in T.levels] == list(range(1, 7)), (k, "ranks")
            yield all(s and kr == 1 for _, s, kr in bond_report(T)), (k, "bonds")

    out.append(_all("Hawaiian towers have level ranks 1..n and corank-one surjective bonds", hawaiian()))

    def gsharp():
        for i in range(10):
            X = models.random_preorder(rng, rng.randint(1, 6))
            for U in X.all_opens():
                yield gsharp_value_matches_colim(X, U, rng.randint(1, 2)), (X, U)

    out.append(_all("G-sharp towers stabilize at the colimit of constant coefficients", gsharp()))

    def kernels():
        for _ in range(10):
            r = rng.randint(1, 3)
            C = Tower.constant(ZZ, r, 4)
            T, Ti = models.random_invertible(rng, ZZ, r)
            epi = TowerMorphism(C, C, list(range(4)), [T] * 4)
            yield is_zero_tower(level_cokernel(epi)), "cokernel of an epimorphism"
            yield is_zero_tower(level_kernel(epi)), "kernel of a monomorphism"
            wide = Tower.constant(ZZ, r + 1, 4)
            proj = Matrix.identity(ZZ, r + 1).submatrix(range(r), None)
            yield is_zero_tower(level_cokernel(TowerMorphism(wide, C, list(range(4)), [proj] * 4))), "projection"
            yield is_zero_tower(level_kernel(TowerMorphism(C, wide, list(range(4)), [proj.T] * 4))), "inclusion"

    out.append(_all("level cokernels of epimorphisms and kernels of monomorphisms vanish", kernels()))
    ids = idempotent_identities(5, "repeat")
    spl = splitting_identities(5)
    out.append(CheckResult("idempotent tower: ξ∘φ is the identity class",
                           ids["xi_phi"].equal and ids["phi_xi_not_identity"], ids["xi_phi"].describe()))
    out.append(CheckResult("split idempotent tower: both retract identities",
                           spl["Phi_Xi"].equal and spl["Xi_Phi"].equal))
    return out


# ---------------------------------------------------------------------------
# spectral


def concentrated_line(page) -> str | None:
    cells = [pos for pos, v in page.dims.items() if v]
    if all(s == 0 for s, _ in cells):
        return "column"
    if all(t == 0 for _, t in cells):
        return "row"
    return None


def check_spectral(seed: int = 0, count: int = 20) -> list[CheckResult]:
    rng = random.Random(seed)
    out = []
    bis = [models.random_bicomplex(rng, QQ, rng.randint(1, 3), rng.randint(1, 3)) for _ in range(count)]

    def dd():
        for B in bis:
            T = total_complex(B).complex
            yield all((T.d(n - 1) @ T.d(n)).is_zero() for n in range(2, B.S + B.T + 2)), B

    out.append(_all("total differential squares to zero", dd()))

    def euler():
        for B in bis:
            E = e2_pages(B)
            chi = sum((-1) ** n * v for n, v in tot_homology_dims(B).items())
            yield E.consistent and E.hor.euler() == E.ver.euler() == chi, B

    out.append(_all("both E² pages match iterated homology and have Euler characteristic χ(Tot)", euler()))

    def pages():
        for B in bis:
            for filt in ("column", "row"):
                pg, inf, _ = run_pages(B, 3, filt)
                ok = page_homology_consistent(pg)
                th = tot_homology_dims(B)
                ok = ok and all(sum(inf.dim(s, n - s) for s in range(n + 1)) == v for n, v in th.items())
                yield ok, (B, filt)

    out.append(_all("each page is the homology of the previous one and E^∞ sums to H(Tot)", pages()))

    def degenerate():
        for i in range(10):
            X = models.random_chain_complex(rng, QQ, 3)
            B = cartan_eilenberg_resolution(X, 2, seed=i).bicomplex
            E = e2_pages(B).hor
            line = concentrated_line(E)
            th = tot_homology_dims(B)
            if line == "row":
                yield all(th.get(n, 0) == E.dim(n, 0) for n in range(B.S + B.T + 1)), X
            elif line == "column":
                yield all(th.get(n, 0) == E.dim(0, n) for n in range(B.S + B.T + 1)), X
            else:
                yield False, X

    out.append(_all("an E² page on a single line gives H(Tot)", degenerate()))

    def exact_rows():
        for _ in range(10):
            B = models.exact_rows_bicomplex(rng, QQ)
            E = e2_pages(B)
            yield not any(v for (s, t), v in E.ver.dims.items() if s) and E.hor.is_zero(), B

    out.append(_all("exact rows kill the E² page outside the first column", exact_rows()))
    out.append(_all("Cartan–Eilenberg resolutions compute H(X)",
                    ((cartan_eilenberg_check(models.random_chain_complex(rng, QQ, 3), 2, seed=i).holds, i)
                     for i in range(10))))

    def leray():
        for name, f, const in models.fiber_acyclic_maps(rng, 8):
            D = constant_diagram(f.source, QQ) if const else models.random_diagram(rng, f.source, QQ)
            v = leray_degenerate_check(f, D)
            yield v.degenerate and v.agrees and v.chi_holds, name
        for _ in range(8):
            Y = models.random_poset(rng, rng.randint(1, 4))
            f = models.random_projection(rng, Y)
            v = leray_degenerate_check(f, models.random_diagram(rng, f.source, QQ))
            yield v.chi_holds and v.agrees is not False, f

    out.append(_all("degenerate Leray comparison and the Euler identity", leray()))
    return out


# ---------------------------------------------------------------------------
# cli


def check_cli(seed: int = 0) -> list[CheckResult]:
    import tempfile
    from pathlib import Path

    from .cli import GOLDEN, MALFORMED, MALFORMED_FILES, run_capture

    out = []
    for argv, expected in GOLDEN:
        code, text = run_capture(argv)
        again = run_capture(argv)
        ok = code == 0 and all(line in text.splitlines() for line in expected) and again == (code, text)
        out.append(CheckResult("golden: " + " ".join(argv), ok))
    for argv, want in MALFORMED:
        code, text = run_capture(argv)
        out.append(CheckResult(f"exit code {want}: " + " ".join(argv), code == want, text.strip().splitlines()[-1] if text.strip() else ""))
    with tempfile.TemporaryDirectory() as tmp:
        for name, body, argv, mark in MALFORMED_FILES:
            path = Path(tmp) / name
            path.write_text(body)
            code, text = run_capture([a.replace("{f}", str(path)) for a in argv])
            last = text.strip().splitlines()[-1] if text.strip() else ""
            out.append(CheckResult(f"malformed file {name}", code == 2 and f"{name}{mark}" in last, last))
    return out


SUITES = {
    "exact-algebra": check_exact_algebra,
    "finspace": check_finspace,
    "diagrams": check_diagrams,
    "bar": check_bar,
    "nerve-cech": check_nerve_cech,
    "pro-tower": check_pro_tower,
    "spectral": check_spectral,
    "cli": check_cli,
}


def run_suite(module: str, seed: int = 0) -> list[CheckResult]:
    if module not in SUITES:
        raise KeyError(f"unknown module {module!r}; choose from {', '.join(MODULES)}")
    return SUITES[module](seed)
