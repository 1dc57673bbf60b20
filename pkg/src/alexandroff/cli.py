"""Command-line front end.

Exit status: 0 on success, 1 when a computed assertion fails (disagreeing
methods, an inexact sequence, a failed check), 2 on bad input.
"""

from __future__ import annotations

import argparse
import io
import sys
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

from . import models
from .algebra import ZZ, QQ, AbelianGroup, Ring, TorsionError
from .bar import bar_homology, default_degree_cap, derived_lim_oracle
from .checks import MODULES, run_suite
from .diagrams import COSHEAF, SHEAF, Diagram, constant_diagram, parse_diagram
from .finspace import FiniteSpace, ParseError, SizeBoundError, parse_map, parse_space
from .nerve import (
    CechComplexSpec,
    cech_complex,
    cech_homology_of_diagram,
    cech_nerve,
    mayer_vietoris,
    minimal_open_cover,
    order_complex,
    parse_cover,
    simplicial_homology,
)
from .diagrams import Precosheaf
from .spectral import leray_degenerate_check
from .tower import (
    Tower,
    TowerMorphism,
    converging_sequence_model,
    gsharp_tower,
    hawaiian_tower,
    morphisms_equal,
)


class InputError(Exception):
    pass


class AssertionFailure(Exception):
    """Raised after output is written when a computed check fails."""


# ---------------------------------------------------------------------------
# input resolution


def _read(path: str) -> tuple[str, str, Path]:
    """File text, a display name and its directory; falls back to embedded fixtures by name."""
    p = Path(path)
    if p.exists():
        try:
            return p.read_text(), str(p), p.parent
        except OSError as e:
            raise InputError(f"{p}:0: cannot read file: {e.strerror}") from None
    if p.name in models.FIXTURES and str(p) == p.name:
        return models.fixture_text(p.name), p.name, None
    raise InputError(f"{path}:0: no such file")


def load_space_arg(path: str) -> tuple[FiniteSpace, str, Path | None]:
    text, name, base = _read(path)
    return parse_space(text, name), name, base


def _ring(args, default=ZZ) -> Ring:
    if args.ring is None:
        return default
    try:
        return Ring.parse(args.ring)
    except ValueError as e:
        raise InputError(f"--ring: {e}") from None


def load_diagram_arg(args, X: FiniteSpace, default_ring=ZZ, orientation=COSHEAF) -> Diagram:
    if getattr(args, "diagram", None):
        text, name, _ = _read(args.diagram)
        D = parse_diagram(text, X, name)
        if args.ring is not None and _ring(args) != D.ring:
            raise InputError(f"--ring {args.ring} conflicts with the diagram's ring {D.ring.name}")
        if D.orientation != orientation:
            raise InputError(f"{name}:0: expected a {orientation}-oriented diagram")
        return D
    return constant_diagram(X, _ring(args, default_ring), 1, orientation)


def _sibling_cover(space_path: str, base: Path | None) -> str | None:
    stem = Path(space_path).stem + ".cover"
    if base is not None and (base / stem).exists():
        return str(base / stem)
    if base is None and stem in models.FIXTURES:
        return stem
    return None


def resolve_open(token: str, X: FiniteSpace, covers: dict) -> frozenset:
    """A cover member name, a literal ``{a,b}`` set, or an element label (its minimal open)."""
    token = token.strip()
    if token in covers:
        return covers[token]
    if token.startswith("{") and token.endswith("}"):
        items = [s.strip() for s in token[1:-1].split(",") if s.strip()]
        for it in items:
            if it not in X.labels:
                raise InputError(f"unknown element {it!r} in {token}")
        U = frozenset(X.index(it) for it in items)
        if not X.is_open(U):
            raise InputError(f"{token} is not open")
        return U
    if token in X.labels:
        return X.minimal_open(X.index(token))
    raise InputError(f"{token!r} is neither a cover member, a set literal nor an element")


def _degrees(args, X: FiniteSpace) -> range:
    cap = default_degree_cap(X) if args.degree_cap is None else args.degree_cap
    if cap < 0:
        raise InputError("--degree-cap must be nonnegative")
    return range(cap + 1)


# ---------------------------------------------------------------------------
# output helpers


def _group_text(G: AbelianGroup, ring: Ring) -> str:
    return G.format(ring)


def _homology_out(h, degrees, fmt: str, cohomology: bool = False):
    ring = h.ring
    if fmt == "tsv":
        print("degree\tfree_rank\ttorsion")
        for n in degrees:
            G = h[n]
            print(f"{n}\t{G.free_rank}\t{','.join(str(t) for t in G.torsion)}")
        return
    for line in h.lines(degrees):
        print(line.replace("H_", "H^") if cohomology else line)


# ---------------------------------------------------------------------------
# commands


def _method_homology(method: str, X: FiniteSpace, D: Diagram, degrees, cover_path=None, normalized=True):
    """(summary or None, note)."""
    n_max = degrees[-1]
    if method == "bar":
        return bar_homology(D, n_max, normalized), None
    if method == "nerve":
        if not D.is_constant() or any(r != 1 for r in D.ranks):
            raise InputError("method nerve needs constant rank-one coefficients")
        return simplicial_homology(order_complex(X), D.ring, n_max), None
    if method == "cech":
        if cover_path:
            text, name, _ = _read(cover_path)
            cover = list(parse_cover(text, X, name).values())
            if frozenset().union(*cover) != frozenset(range(X.n)):
                raise InputError(f"{name}:0: cover does not cover the space")
        else:
            cover = minimal_open_cover(X)
        return cech_homology_of_diagram(D, cover, n_max)
    raise InputError(f"unknown method {method!r}")


def cmd_homology(args):
    X, _, _ = load_space_arg(args.space)
    D = load_diagram_arg(args, X)
    degrees = _degrees(args, X)
    if args.compare:
        methods = [m.strip() for m in args.compare.split(",") if m.strip()]
        for m in methods:
            if m not in ("bar", "nerve", "cech"):
                raise InputError(f"unknown method {m!r} in --compare")
        if len(methods) < 2:
            raise InputError("--compare needs at least two methods")
        results = {m: _method_homology(m, X, D, degrees, args.cover, args.normalized == "yes") for m in methods}
        ok = True
        if args.format == "tsv":
            print("degree\t" + "\t".join(methods) + "\tverdict")
        for n in degrees:
            cells, values = [], []
            for m in methods:
                h, note = results[m]
                if h is None:
                    cells.append(f"{m} = n/a")
                    continue
                cells.append(f"{m} = {_group_text(h[n], D.ring)}")
                values.append(h[n])
            verdict = "AGREE" if all(v == values[0] for v in values) else "DISAGREE"
            ok = ok and verdict == "AGREE"
            if args.format == "tsv":
                print(f"{n}\t" + "\t".join(c.split(' = ', 1)[1] for c in cells) + f"\t{verdict}")
            else:
                print(f"H_{n}: " + ", ".join(cells) + f": {verdict}")
        for m in methods:
            if results[m][0] is None:
                print(f"{m}: NOT-APPLICABLE ({results[m][1]})")
        if not ok:
            raise AssertionFailure("methods disagree")
        return
    h, note = _method_homology(args.method, X, D, degrees, args.cover, args.normalized == "yes")
    if h is None:
        print(f"NOT-APPLICABLE: {note}")
        raise AssertionFailure(note)
    _homology_out(h, degrees, args.format)


def cmd_cohomology(args):
    X, _, _ = load_space_arg(args.space)
    D = load_diagram_arg(args, X, orientation=SHEAF)
    degrees = _degrees(args, X)
    h = bar_homology(D, degrees[-1], args.normalized == "yes")
    if args.method == "oracle":
        if not D.ring.is_field:
            raise InputError("the injective-resolution oracle needs a field (--ring Q or F<p>)")
        o = derived_lim_oracle(D, degrees[-1] + 1)
        bad = [n for n in degrees if n < len(o.dims) and o.dims[n] != h[n].free_rank]
        for n in degrees:
            val = o.dims[n] if n < len(o.dims) else "n/a"
            print(f"dim H^{n} = {h[n].free_rank} (oracle {val})")
        if bad:
            raise AssertionFailure("bar and oracle disagree")
        return
    _homology_out(h, degrees, args.format, cohomology=True)


def _load_cover_arg(args, X, space_path, base) -> dict:
    path = args.cover or _sibling_cover(space_path, base)
    if not path:
        return {}
    text, name, _ = _read(path)
    return parse_cover(text, X, name)


def cmd_cech(args):
    X, sname, base = load_space_arg(args.space)
    covers = _load_cover_arg(args, X, args.space, base)
    if args.members:
        members = [resolve_open(t, X, covers) for t in args.members.split(";")]
    elif covers:
        members = list(covers.values())
    else:
        raise InputError("cech needs --cover or --members")
    if args.empty_rank and args.diagram:
        raise InputError("--empty-rank applies to constant coefficients only")
    D = load_diagram_arg(args, X)
    try:
        P = Precosheaf.from_diagram(D)
    except TorsionError as e:
        raise InputError(str(e)) from None
    if args.empty_rank:
        P = P.direct_sum(Precosheaf.constant(X, D.ring, args.empty_rank))
    n_max = 3 if args.degree_cap is None else args.degree_cap
    res = cech_complex(CechComplexSpec(tuple(members), P, args.variant), n_max)
    U = frozenset().union(*members) if members else frozenset()
    print(f"covered set: {X.format_set(U)}")
    print(f"variant: {args.variant}")
    _homology_out(res.homology, range(n_max + 1), args.format)


def cmd_nerve(args):
    X, _, base = load_space_arg(args.space)
    ring = _ring(args)
    if args.cover or args.members:
        covers = _load_cover_arg(args, X, args.space, base)
        members = ([resolve_open(t, X, covers) for t in args.members.split(";")] if args.members
                   else list(covers.values()))
        K = cech_nerve(members)
        print("complex: Čech nerve")
    else:
        K = order_complex(X)
        print("complex: order complex")
    fv = [K.count(d) for d in range(K.dimension + 1)]
    print("f-vector: " + " ".join(str(v) for v in fv))
    top = max(K.dimension, 0) if args.degree_cap is None else args.degree_cap
    _homology_out(simplicial_homology(K, ring, top), range(top + 1), args.format)


def cmd_mv(args):
    X, _, base = load_space_arg(args.space)
    covers = _load_cover_arg(args, X, args.space, base)
    U0 = resolve_open(args.u0, X, covers)
    U1 = resolve_open(args.u1, X, covers)
    if U0 | U1 != frozenset(range(X.n)):
        raise InputError(f"{X.format_set(U0)} and {X.format_set(U1)} do not cover the space")
    D = load_diagram_arg(args, X)
    degrees = _degrees(args, X)
    mv = mayer_vietoris(X, U0, U1, D, degrees[-1])
    if args.format == "tsv":
        print("node\tdegree\tgroup\texact")
        for nd in mv.nodes:
            print(f"{nd.name}\t{nd.degree}\t{_group_text(nd.group, D.ring)}\t{'yes' if nd.exact else 'no'}")
        print(f"exact\t\t\t{'yes' if mv.exact else 'no'}")
    else:
        for line in mv.lines():
            print(line)
    if not mv.exact:
        raise AssertionFailure("sequence is not exact")


def _print_tower(T: Tower, fmt: str, title: str | None = None):
    if title:
        print(title)
    if fmt == "tsv":
        print("level\tfree_rank\ttorsion")
        for n, G in enumerate(T.levels):
            print(f"{n}\t{G.free_rank}\t{','.join(str(t) for t in G.torsion)}")
        return
    for line in T.dump():
        print(line)


def cmd_tower(args):
    ring = _ring(args)
    kind = args.kind
    if kind == "hawaiian":
        if args.k not in (0, 1, 2):
            raise InputError("--k must be 0, 1 or 2")
        if not 1 <= args.levels <= 8:
            raise InputError("--levels must be between 1 and 8")
        T = hawaiian_tower(args.k, args.g, args.levels, args.degree, ring)
        _print_tower(T, args.format)
    elif kind == "gsharp":
        if not args.space:
            raise InputError("tower gsharp needs --space")
        X, _, base = load_space_arg(args.space)
        covers = _load_cover_arg(args, X, args.space, base)
        U = resolve_open(args.open, X, covers) if args.open else frozenset(range(X.n))
        T = gsharp_tower(X, U, args.g, ring)
        print(f"open: {X.format_set(U)}")
        _print_tower(T, args.format)
    elif kind == "converging":
        if not 1 <= args.levels <= 12:
            raise InputError("--levels must be between 1 and 12")
        towers = converging_sequence_model(args.levels, args.g, ring)
        for n in sorted(towers):
            _print_tower(towers[n], args.format, f"# U_{n}")
    elif kind == "idempotent":
        from .checks import idempotent_identities, splitting_identities

        tail = None if args.tail == "open" else args.tail
        L = args.levels - 1
        if L < 1:
            raise InputError("--levels must be at least 2")
        ids = idempotent_identities(L, tail)
        spl = splitting_identities(L, tail)
        print(f"truncation: {L}")
        print(f"tail: {args.tail}")
        print(f"xi.phi == 1_X: {ids['xi_phi'].describe()}")
        print(f"phi.xi == eps: {ids['phi_xi_is_eps'].describe()}")
        print(f"phi.xi == 1_Y: {'no' if ids['phi_xi_not_identity'] else 'yes'}")
        print(f"split: Phi.Xi == 1_Y: {spl['Phi_Xi'].describe()}")
        print(f"split: Xi.Phi == 1_X: {spl['Xi_Phi'].describe()}")
        if not (ids["xi_phi"].equal and spl["Phi_Xi"].equal and spl["Xi_Phi"].equal):
            raise AssertionFailure("tower identities fail")
    else:
        raise InputError(f"unknown tower kind {kind!r}")


def cmd_leray(args):
    text, name, base = _read(args.map)
    spaces = {n: models.fixture_space(n) for n in models.FIXTURES if n.endswith(".poset")} if base is None else None
    f = parse_map(text, name, base, spaces)
    D = load_diagram_arg(args, f.source, default_ring=QQ)
    if not D.ring.is_field:
        raise InputError("leray needs field coefficients (--ring Q or F<p>)")
    v = leray_degenerate_check(f, D)
    print(f"degenerate: {'yes' if v.degenerate else 'no'}")
    for n in sorted(v.rhs):
        print(f"dim H_{n}(X, D) = {v.rhs[n]}")
    if v.degenerate:
        for n in sorted(v.lhs):
            print(f"dim H_{n}(Y, f_* D) = {v.lhs[n]}")
        print(f"comparison: {'agree' if v.agrees else 'DISAGREE'}")
    else:
        print("comparison: skipped (higher fiber homology present)")
    for (s, t), d in sorted(v.fiber_dims.items()):
        print(f"E2[{s},{t}] = {d}")
    print(f"euler: X {v.chi_x}, E2 {v.chi_e2}: {'holds' if v.chi_holds else 'FAILS'}")
    if not v.holds:
        raise AssertionFailure("Leray comparison failed")


def cmd_check(args):
    module = args.module_opt or args.module
    if not module:
        raise InputError("check needs a module name")
    mods = MODULES if module == "all" else [module]
    if module != "all" and module not in MODULES:
        raise InputError(f"unknown module {module!r}; choose from {', '.join(MODULES)} or all")
    ok = True
    for m in mods:
        for r in run_suite(m, args.seed):
            print(f"[{m}] {r.line()}" if len(mods) > 1 else r.line())
            ok = ok and r.ok
    if not ok:
        raise AssertionFailure("invariant check failed")


EXAMPLES = {
    "circle4": ["homology", "--space", "circle4.poset", "--ring", "Z", "--compare", "bar,nerve,cech"],
    "sphere6": ["mv", "--space", "sphere6.poset", "--u0", "cone0", "--u1", "cone1", "--ring", "Z"],
    "sphere6-compare": ["homology", "--space", "sphere6.poset", "--ring", "Z", "--compare", "bar,nerve"],
    "hawaiian": ["tower", "hawaiian", "--k", "1", "--levels", "3", "--ring", "Z"],
    "converging": ["tower", "converging", "--levels", "4", "--ring", "Z"],
    "idempotent": ["tower", "idempotent", "--levels", "6", "--tail", "repeat"],
    "leray": ["leray", "--map", "cone5_fold.map", "--ring", "Q"],
}


def cmd_examples(args):
    action = args.action
    if action == "list":
        for name, what in models.FIXTURES.items():
            print(f"fixture {name}: {what}")
        for name, argv in EXAMPLES.items():
            print(f"run {name}: {' '.join(argv)}")
    elif action == "show":
        if args.name not in models.FIXTURES:
            raise InputError(f"no fixture named {args.name!r}")
        sys.stdout.write(models.fixture_text(args.name))
    elif action == "write":
        if not args.name:
            raise InputError("examples write needs a target directory")
        out = Path(args.name)
        out.mkdir(parents=True, exist_ok=True)
        for name in models.FIXTURES:
            (out / name).write_text(models.fixture_text(name))
            print(f"wrote {out / name}")
    elif action == "run":
        if args.name not in EXAMPLES:
            raise InputError(f"no example named {args.name!r}; choose from {', '.join(EXAMPLES)}")
        print("$ " + " ".join(EXAMPLES[args.name]))
        code = main(EXAMPLES[args.name])
        if code == 1:
            raise AssertionFailure("example failed")
        if code == 2:
            raise InputError("example input error")
    else:
        raise InputError(f"unknown examples action {action!r}")


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="alexandroff", description="Homology of finite spaces, Čech complexes, towers and spectral sequences.",
                                allow_abbrev=False)
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, ring=True, space=True):
        if space:
            sp.add_argument("--space", required=True, help="poset file or embedded fixture name")
        if ring:
            sp.add_argument("--ring", help="Z, Q, F<p> (default Z)")
        sp.add_argument("--degree-cap", type=int, dest="degree_cap")
        sp.add_argument("--format", choices=("text", "tsv"), default="text")

    sp = sub.add_parser("homology", help="homology with cosheaf coefficients", allow_abbrev=False)
    common(sp)
    sp.add_argument("--diagram")
    sp.add_argument("--method", choices=("bar", "nerve", "cech"), default="bar")
    sp.add_argument("--compare", help="comma-separated methods, e.g. bar,nerve")
    sp.add_argument("--cover", help="cover file for the cech method")
    sp.add_argument("--normalized", choices=("yes", "no"), default="yes")
    sp.set_defaults(func=cmd_homology)

    sp = sub.add_parser("cohomology", help="higher limits with sheaf coefficients", allow_abbrev=False)
    common(sp)
    sp.add_argument("--diagram")
    sp.add_argument("--method", choices=("bar", "oracle"), default="bar")
    sp.add_argument("--normalized", choices=("yes", "no"), default="yes")
    sp.set_defaults(func=cmd_cohomology)

    sp = sub.add_parser("cech", help="Čech homology of a cover", allow_abbrev=False)
    common(sp)
    sp.add_argument("--diagram")
    sp.add_argument("--cover")
    sp.add_argument("--members", help="';'-separated cover members (names, {a,b} or element labels)")
    sp.add_argument("--variant", choices=("large", "reduced"), default="large")
    sp.add_argument("--empty-rank", type=int, default=0, dest="empty_rank",
                    help="add a constant summand so the empty set has this rank")
    sp.set_defaults(func=cmd_cech)

    sp = sub.add_parser("nerve", help="order complex or Čech nerve", allow_abbrev=False)
    common(sp)
    sp.add_argument("--cover")
    sp.add_argument("--members")
    sp.set_defaults(func=cmd_nerve)

    sp = sub.add_parser("mv", help="Mayer–Vietoris sequence of two opens", allow_abbrev=False)
    common(sp)
    sp.add_argument("--diagram")
    sp.add_argument("--cover")
    sp.add_argument("--u0", required=True)
    sp.add_argument("--u1", required=True)
    sp.set_defaults(func=cmd_mv)

    sp = sub.add_parser("tower", help="pro-homology towers", allow_abbrev=False)
    sp.add_argument("kind", choices=("hawaiian", "gsharp", "converging", "idempotent"))
    sp.add_argument("--ring")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--g", type=int, default=1)
    sp.add_argument("--levels", type=int, default=3)
    sp.add_argument("--degree", type=int)
    sp.add_argument("--space")
    sp.add_argument("--cover")
    sp.add_argument("--open")
    sp.add_argument("--tail", choices=("open", "repeat", "identity"), default="repeat")
    sp.add_argument("--format", choices=("text", "tsv"), default="text")
    sp.set_defaults(func=cmd_tower)

    sp = sub.add_parser("leray", help="degenerate Leray comparison for a monotone map", allow_abbrev=False)
    sp.add_argument("--map", required=True)
    sp.add_argument("--diagram")
    sp.add_argument("--ring")
    sp.set_defaults(func=cmd_leray)

    sp = sub.add_parser("check", help="run a module's invariant suite", allow_abbrev=False)
    sp.add_argument("module", nargs="?")
    sp.add_argument("--module", dest="module_opt")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("examples", help="embedded fixtures and canned runs", allow_abbrev=False)
    sp.add_argument("action", choices=("list", "show", "write", "run"))
    sp.add_argument("name", nargs="?")
    sp.set_defaults(func=cmd_examples)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        args.func(args)
    except AssertionFailure:
        return 1
    except (InputError, ParseError, SizeBoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as e:
        # structural problems in otherwise parseable input (non-open sets, bad shapes)
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


def run_capture(argv) -> tuple[int, str]:
    """Run with stdout and stderr captured together."""
    buf = io.StringIO()
    with redirect_stdout(buf), redirect_stderr(buf):
        code = main(list(argv))
    return code, buf.getvalue()


GOLDEN = [
    (["homology", "--space", "circle4.poset", "--ring", "Z", "--method", "bar"], ["H_0 = Z", "H_1 = Z"]),
    (["homology", "--space", "circle4.poset", "--ring", "Z", "--method", "nerve"], ["H_0 = Z", "H_1 = Z"]),
    (["mv", "--space", "sphere6.poset", "--u0", "cone0", "--u1", "cone1", "--ring", "Z"],
     ["H_0 = Z", "H_1 = 0", "H_2 = Z", "exact: yes"]),
    (["tower", "hawaiian", "--k", "1", "--levels", "3", "--ring", "Z"],
     ["level 0: rank 1", "level 1: rank 2", "level 2: rank 3"]),
    (["homology", "--space", "circle4.poset", "--ring", "Z", "--compare", "bar,nerve"],
     ["H_0: bar = Z, nerve = Z: AGREE", "H_1: bar = Z, nerve = Z: AGREE"]),
    (["homology", "--space", "sphere6.poset", "--ring", "Z", "--compare", "bar,nerve"],
     ["H_2: bar = Z, nerve = Z: AGREE"]),
]

# argv and the exit status it must produce
MALFORMED = [
    (["homology", "--space", "no-such-file.poset"], 2),
    (["frobnicate"], 2),
    (["homology", "--space", "circle4.poset", "--ring", "Z/4"], 2),
    (["mv", "--space", "sphere6.poset", "--u0", "cone0", "--u1", "{4}"], 2),
    (["mv", "--space", "sphere6.poset", "--u0", "cone0", "--u1", "{0,1}"], 2),
    (["check", "no-such-module"], 2),
    (["tower", "hawaiian", "--k", "3"], 2),
    (["homology", "--space", "circle4.poset", "--method", "cech", "--cover", "circle4.map"], 2),
]


# (file name, contents, argv template, expected line prefix); "{f}" is the written path
MALFORMED_FILES = [
    ("unknown.poset", "elements: a b\nle: a b\nle: a c\n", ["homology", "--space", "{f}"], ":3:"),
    ("junk.poset", "elements: a b\nwibble\n", ["homology", "--space", "{f}"], ":2:"),
    ("bad.diagram", "ring: Z\norientation: cosheaf\nrank 9: 1\n",
     ["homology", "--space", "circle4.poset", "--diagram", "{f}"], ":3:"),
    ("bad.cover", "cover: left = {0,1}\ncover: right = {0,9}\n", ["mv", "--space", "circle4.poset", "--cover", "{f}", "--u0", "left", "--u1", "left"], ":1:"),
]


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
