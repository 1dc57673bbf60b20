"""Acceptance criteria 1-12.

Each criterion is a function returning ``(ok, detail)``.  The pytest wrappers
record one line per criterion (printed in the terminal summary by conftest)
and assert the verdict.  Run this file directly to print the lines alone.
"""

import random
import sys
import time

import pytest

from alexandroff import models
from alexandroff.algebra import GF, QQ, ZZ
from alexandroff.bar import bar_homology, derived_lim_oracle, higher_lim
from alexandroff.checks import _t0_transport, empty_cover_ok, large_vs_reduced
from alexandroff.cli import run_capture
from alexandroff.diagrams import constant_diagram, covers_of
from alexandroff.nerve import order_complex, simplicial_homology
from alexandroff.spectral import cartan_eilenberg_check, leray_degenerate_check
from alexandroff.tower import bond_report, gsharp_tower, gsharp_value_matches_colim, hawaiian_tower

RESULTS: dict[int, str] = {}


def _cli(argv):
    code, text = run_capture(argv)
    return code, text.splitlines()


def _poset_corpus(seed=11, count=50, max_n=8):
    rng = random.Random(seed)
    return [models.random_poset(rng, rng.randint(1, max_n)) for _ in range(count)]


# ---------------------------------------------------------------------------


def criterion_1():
    t = time.perf_counter()
    code, lines = _cli(["homology", "--space", "circle4.poset", "--ring", "Z", "--compare", "bar,nerve",
                        "--degree-cap", "3"])
    el = time.perf_counter() - t
    want = ["H_0: bar = Z, nerve = Z: AGREE", "H_1: bar = Z, nerve = Z: AGREE",
            "H_2: bar = 0, nerve = 0: AGREE", "H_3: bar = 0, nerve = 0: AGREE"]
    return code == 0 and lines == want and el < 1.0, f"{el:.3f}s"


def criterion_2():
    t = time.perf_counter()
    c1, cmp_lines = _cli(["homology", "--space", "sphere6.poset", "--ring", "Z", "--compare", "bar,nerve",
                          "--degree-cap", "3"])
    c2, mv_lines = _cli(["examples", "run", "sphere6"])
    el = time.perf_counter() - t
    want_cmp = ["H_0: bar = Z, nerve = Z: AGREE", "H_1: bar = 0, nerve = 0: AGREE",
                "H_2: bar = Z, nerve = Z: AGREE", "H_3: bar = 0, nerve = 0: AGREE"]
    want_mv = ["H_0 = Z", "H_1 = 0", "H_2 = Z", "exact: yes"]
    ok = c1 == 0 and c2 == 0 and cmp_lines == want_cmp and mv_lines[1:] == want_mv and el < 1.0
    return ok, f"{el:.3f}s"


def criterion_3():
    t = time.perf_counter()
    n = 0
    for X in _poset_corpus():
        cap = X.height() + 1
        for ring in (ZZ, QQ, GF(2)):
            a = bar_homology(constant_diagram(X, ring), cap)
            b = simplicial_homology(order_complex(X), ring, cap)
            n += 1
            if any(a[k] != b[k] for k in range(cap + 1)):
                return False, f"differs on {X.to_text()!r} over {ring.name}"
    el = time.perf_counter() - t
    return el < 60.0, f"{n} (space, ring) pairs, {el:.1f}s"


def criterion_4():
    n = 0
    for X in _poset_corpus():
        cap = X.height() + 1
        for ring in (ZZ, QQ, GF(2)):
            D = constant_diagram(X, ring)
            a = bar_homology(D, cap, normalized=True)
            b = bar_homology(D, cap, normalized=False)
            n += 1
            if any(a[k] != b[k] for k in range(cap + 1)):
                return False, f"differs on {X.to_text()!r} over {ring.name}"
    return True, f"{n} (space, ring) pairs"


def criterion_5():
    rng = random.Random(5)
    nonzero = 0
    for i in range(30):
        if i % 3 == 2:
            X = models.circle4()
        else:
            X = models.random_poset(rng, rng.randint(2, 6), 0.5)
        D = models.random_sheaf_diagram(rng, X, QQ)
        o = derived_lim_oracle(D)
        h = [higher_lim(D, n).free_rank for n in range(len(o.dims))]
        if not o.valid or h != list(o.dims):
            return False, f"diagram {i}: bar {h} vs oracle {list(o.dims)}"
        nonzero += any(h[1:])
    return True, f"30 diagrams, {nonzero} with nonzero higher limits"


def criterion_6():
    """Literal statement: large and reduced agree on every cover of every nonempty open."""
    rng = random.Random(6)
    X = models.circle4()
    opens = X.all_opens()
    pairs = bad = 0
    first = None
    for i in range(20):
        P = models.random_precosheaf(rng, X, QQ, empty_rank=rng.randint(1, 2))
        if not empty_cover_ok(P):
            return False, f"cover {{∅}} of ∅ fails for precosheaf {i}"
        for U in opens:
            if not U:
                continue
            for cover in covers_of(X, U, opens):
                if not cover:
                    continue
                pairs += 1
                if not large_vs_reduced(P, cover):
                    bad += 1
                    if first is None:
                        first = f"U = {X.format_set(U)}, cover = {[X.format_set(V) for V in cover]}"
    if bad:
        return False, f"empty-set part holds; {bad} of {pairs} (precosheaf, cover) cases disagree, first {first}"
    return True, f"{pairs} (precosheaf, cover) cases"


def criterion_7():
    for k in (0, 1, 2):
        for N in range(1, 7):
            T = hawaiian_tower(k, 1, N)
            if [G.free_rank for G in T.levels] != list(range(1, N + 1)) or any(G.torsion for G in T.levels):
                return False, f"k={k} N={N} ranks {[G.free_rank for G in T.levels]}"
            if not all(s and c == 1 for _, s, c in bond_report(T)):
                return False, f"k={k} N={N} bonds {bond_report(T)}"
        for d in range(4):
            if d == k:
                continue
            T = hawaiian_tower(k, 1, 6, degree=d)
            want = 1 if d == 0 else 0
            if any(G.free_rank != want or G.torsion for G in T.levels):
                return False, f"k={k} degree {d}: {[G.format(ZZ) for G in T.levels]}"
    code, lines = _cli(["tower", "hawaiian", "--k", "2", "--levels", "6"])
    if code or [l for l in lines if l.startswith("level")] != [f"level {n}: rank {n + 1}" for n in range(6)]:
        return False, "command-line tower output"
    return True, "k = 0, 1, 2; levels 1..6; degrees 0..3"


def criterion_8():
    rng = random.Random(8)
    spaces = [models.fixture_space(n) for n in ("circle4.poset", "sphere6.poset", "cone5.poset", "chain2.poset")]
    spaces += [models.random_preorder(rng, rng.randint(1, 6)) for _ in range(12)]
    n = 0
    for X in spaces:
        for U in X.all_opens():
            for g in (1, 2, 3):
                n += 1
                if not (gsharp_tower(X, U, g).stabilized and gsharp_value_matches_colim(X, U, g)):
                    return False, f"{X.to_text()!r} U = {X.format_set(U)} g = {g}"
    return True, f"{len(spaces)} spaces, {n} (open, g) cases"


def criterion_9():
    rng = random.Random(9)
    for i in range(20):
        C = models.random_chain_complex(rng, QQ, rng.randint(1, 3))
        v = cartan_eilenberg_check(C, rows=2, seed=i)
        if not v.holds:
            return False, f"complex {i}: Tot {v.tot} vs H {v.target}"
    return True, "20 complexes"


def criterion_10():
    rng = random.Random(10)
    maps = models.fiber_acyclic_maps(rng, 12)
    for name, f, const in maps:
        D = constant_diagram(f.source, QQ) if const else models.random_diagram(rng, f.source, QQ)
        v = leray_degenerate_check(f, D)
        if not (v.degenerate and v.agrees and v.chi_holds):
            return False, f"{name}: lhs {v.lhs} rhs {v.rhs}"
    for i in range(20):
        Y = models.random_poset(rng, rng.randint(1, 4))
        f = models.random_projection(rng, Y)
        v = leray_degenerate_check(f, models.random_diagram(rng, f.source, QQ))
        if not v.chi_holds or v.agrees is False:
            return False, f"arbitrary map {i}: chi {v.chi_x} vs {v.chi_e2}"
    code, lines = _cli(["examples", "run", "leray"])
    if code or "comparison: agree" not in lines:
        return False, "command-line Leray example"
    return True, f"{len(maps)} fiber-acyclic maps, 20 arbitrary maps"


def criterion_11():
    rng = random.Random(11)
    for i in range(20):
        X = models.random_preorder(rng, rng.randint(2, 7), 0.3)
        q, _ = X.t0_quotient()
        cap = q.height() + 1
        a = bar_homology(constant_diagram(X, ZZ), cap)
        b = bar_homology(constant_diagram(q, ZZ), cap)
        D = models.random_diagram(rng, X, QQ)
        Dq, _ = _t0_transport(D)
        c, d = bar_homology(D, cap), bar_homology(Dq, cap)
        if any(a[k] != b[k] or c[k] != d[k] for k in range(cap + 1)):
            return False, f"preorder {X.to_text()!r}"
    return True, "20 preorders, constant Z and random Q coefficients"


def criterion_12():
    out = {}
    for tail in ("open", "repeat"):
        code, lines = _cli(["tower", "idempotent", "--levels", "6", "--tail", tail])
        out[tail] = (code, dict(l.rsplit(": ", 1) for l in lines))
    ok = all(code == 0 for code, _ in out.values())
    rep = out["repeat"][1]
    ok = ok and rep["xi.phi == 1_X"] == "equal" and rep["phi.xi == 1_Y"] == "no"
    ok = ok and rep["split: Phi.Xi == 1_Y"] == "equal" and rep["split: Xi.Phi == 1_X"] == "equal"
    ok = ok and out["open"][1]["xi.phi == 1_X"].startswith("equal")
    return ok, f"repeat tail: {rep['xi.phi == 1_X']}; open tail: {out['open'][1]['xi.phi == 1_X']}"


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 13)}


def _record(n):
    t = time.perf_counter()
    ok, detail = CRITERIA[n]()
    el = time.perf_counter() - t
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail}; {el:.2f}s)"
    RESULTS[n] = line
    print(line)
    return ok, line


@pytest.mark.parametrize("n", range(1, 13))
def test_criterion(n):
    ok, line = _record(n)
    assert ok, line


if __name__ == "__main__":
    status = 0
    for n in CRITERIA:
        ok, _ = _record(n)
        status |= not ok
    sys.exit(status)
