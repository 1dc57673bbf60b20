"""Finite preordered sets viewed as Alexandroff spaces.

Open sets are the down-closed subsets.  Elements are indexed 0..n-1 and
labels only appear at the I/O boundary.  Open sets are ``frozenset`` of
indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

OpenSet = frozenset

OPENS_BOUND = 20
PARTITION_BOUND = 10


class SizeBoundError(ValueError):
    """Raised when an exponential enumeration would exceed its configured bound."""


class ParseError(ValueError):
    """Input file problem, tagged with ``source:line``."""

    def __init__(self, source: str, line: int, msg: str):
        super().__init__(f"{source}:{line}: {msg}")
        self.source = source
        self.line = line


class FiniteSpace:
    """A finite preorder ``(X, <=)`` with its Alexandroff topology."""

    def __init__(self, labels: Sequence[str], leq: Sequence[Sequence[bool]]):
        labels = [str(x) for x in labels]
        if len(set(labels)) != len(labels):
            raise ValueError("element labels must be distinct")
        n = len(labels)
        leq = tuple(tuple(bool(v) for v in row) for row in leq)
        if len(leq) != n or any(len(r) != n for r in leq):
            raise ValueError("relation matrix does not match the element count")
        for i in range(n):
            if not leq[i][i]:
                raise ValueError(f"relation is not reflexive at {labels[i]}")
        for i in range(n):
            for j in range(n):
                if leq[i][j]:
                    for k in range(n):
                        if leq[j][k] and not leq[i][k]:
                            raise ValueError(
                                f"relation is not transitive: {labels[i]}<={labels[j]}<={labels[k]}"
                            )
        self.labels = tuple(labels)
        self.leq = leq
        self.n = n
        self._index = {lab: i for i, lab in enumerate(labels)}
        self.down = tuple(frozenset(j for j in range(n) if leq[j][i]) for i in range(n))
        self.up = tuple(frozenset(j for j in range(n) if leq[i][j]) for i in range(n))
        # set by t0_quotient when a space was produced by quotienting
        self.quotient_of = None

    @classmethod
    def from_relations(cls, labels: Iterable, pairs: Iterable[tuple]) -> "FiniteSpace":
        labels = [str(x) for x in labels]
        idx = {lab: i for i, lab in enumerate(labels)}
        if len(idx) != len(labels):
            raise ValueError("element labels must be distinct")
        n = len(labels)
        rel = [[i == j for j in range(n)] for i in range(n)]
        for a, b in pairs:
            a, b = str(a), str(b)
            if a not in idx or b not in idx:
                raise ValueError(f"unknown element in relation {a} <= {b}")
            rel[idx[a]][idx[b]] = True
        # Warshall closure
        for k in range(n):
            rk = rel[k]
            for i in range(n):
                if rel[i][k]:
                    ri = rel[i]
                    for j in range(n):
                        if rk[j]:
                            ri[j] = True
        return cls(labels, rel)

    @classmethod
    def discrete(cls, n: int) -> "FiniteSpace":
        return cls.from_relations(range(n), [])

    @classmethod
    def chain(cls, n: int) -> "FiniteSpace":
        return cls.from_relations(range(n), [(i, i + 1) for i in range(n - 1)])

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"FiniteSpace({list(self.labels)}, covers={self.covering_pairs_labels()})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteSpace) and self.labels == other.labels and self.leq == other.leq

    def __hash__(self):
        return hash((self.labels, self.leq))

    def index(self, label) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise KeyError(f"no element labelled {label!r}") from None

    def le(self, i: int, j: int) -> bool:
        return self.leq[i][j]

    def lt(self, i: int, j: int) -> bool:
        return self.leq[i][j] and not self.leq[j][i]

    @property
    def is_t0(self) -> bool:
        return all(not (self.leq[i][j] and self.leq[j][i]) for i in range(self.n) for j in range(i + 1, self.n))

    def pairs(self) -> list[tuple[int, int]]:
        """All ``(x, y)`` with ``x <= y`` and ``x != y``, lexicographic."""
        return [(i, j) for i in range(self.n) for j in range(self.n) if i != j and self.leq[i][j]]

    def covering_pairs(self) -> list[tuple[int, int]]:
        """Pairs x < y with nothing strictly between (for preorders: on the T0 level)."""
        out = []
        for i, j in self.pairs():
            if self.leq[j][i]:
                out.append((i, j))  # equivalent points: keep both directions
                continue
            if not any(self.lt(i, k) and self.lt(k, j) for k in range(self.n)):
                out.append((i, j))
        return out

    def covering_pairs_labels(self) -> list[tuple[str, str]]:
        return [(self.labels[i], self.labels[j]) for i, j in self.covering_pairs()]

    # -- topology -----------------------------------------------------------

    def minimal_open(self, x) -> OpenSet:
        """``U_x = {y : y <= x}``; accepts an index or a label."""
        i = x if isinstance(x, int) else self.index(x)
        return self.down[i]

    def is_open(self, U: Iterable[int]) -> bool:
        U = frozenset(U)
        return all(self.down[x] <= U for x in U)

    def closure_down(self, S: Iterable[int]) -> OpenSet:
        out = set()
        for x in S:
            out |= self.down[x]
        return frozenset(out)

    def all_opens(self, bound: int = OPENS_BOUND) -> list[OpenSet]:
        """Every down-closed subset, ordered by size and then by sorted index tuple."""
        if self.n > bound:
            raise SizeBoundError(f"all_opens: space has {self.n} elements, bound is {bound}")
        # An open set is determined by which equivalence classes it contains;
        # walk classes in a linear extension and include a class only if its
        # strict predecessors are already decided in.
        classes = self._classes_linear()
        found = []

        def walk(k, chosen: frozenset):
            if k == len(classes):
                found.append(chosen)
                return
            cls_ = classes[k]
            rep = next(iter(cls_))
            walk(k + 1, chosen)
            if self.down[rep] - cls_ <= chosen:
                walk(k + 1, chosen | cls_)

        walk(0, frozenset())
        return sorted(found, key=lambda U: (len(U), tuple(sorted(U))))

    def _classes_linear(self) -> list[frozenset]:
        seen = set()
        classes = []
        for i in range(self.n):
            if i in seen:
                continue
            c = frozenset(j for j in range(self.n) if self.leq[i][j] and self.leq[j][i])
            seen |= c
            classes.append(c)
        # sort by size of down-set: predecessors come first
        classes.sort(key=lambda c: (len(self.down[min(c)]), min(c)))
        return classes

    def components(self, U: Iterable[int] | None = None) -> "Partition":
        """Connected components of U under the equivalence generated by comparability."""
        U = frozenset(range(self.n)) if U is None else frozenset(U)
        parent = {x: x for x in U}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for x in U:
            for y in U:
                if x < y and (self.leq[x][y] or self.leq[y][x]):
                    rx, ry = find(x), find(y)
                    if rx != ry:
                        parent[max(rx, ry)] = min(rx, ry)
        groups: dict[int, set] = {}
        for x in U:
            groups.setdefault(find(x), set()).add(x)
        blocks = sorted((frozenset(g) for g in groups.values()), key=lambda b: min(b))
        return Partition(self, U, tuple(blocks))

    def is_connected(self, U: Iterable[int] | None = None) -> bool:
        return len(self.components(U).blocks) == 1

    def partitions(self, U: Iterable[int] | None = None, bound: int = PARTITION_BOUND) -> list["Partition"]:
        """All partitions of an open U into disjoint nonempty opens.

        Each block of such a partition is a union of components, so these
        are the set partitions of the component list.  Ordered coarsest
        first (by block count, then by sorted blocks); refinement is the
        relation :meth:`Partition.refines`.
        """
        U = frozenset(range(self.n)) if U is None else frozenset(U)
        if len(U) > bound:
            raise SizeBoundError(f"partitions: open set has {len(U)} elements, bound is {bound}")
        if not self.is_open(U):
            raise ValueError("partitions needs an open set")
        comps = self.components(U).blocks
        out = []
        for grouping in _set_partitions(list(range(len(comps)))):
            blocks = tuple(
                sorted((frozenset().union(*(comps[c] for c in g)) for g in grouping), key=lambda b: min(b))
            )
            out.append(Partition(self, U, blocks))
        out.sort(key=lambda P: (len(P.blocks), tuple(tuple(sorted(b)) for b in P.blocks)))
        return out

    def height(self) -> int:
        """Length of the longest strict chain (0 for a nonempty antichain, -1 if empty)."""
        if self.n == 0:
            return -1
        order = sorted(range(self.n), key=lambda i: len(self.down[i]))
        best = {}
        for i in order:
            best[i] = max((best[j] + 1 for j in self.down[i] if self.lt(j, i)), default=0)
        return max(best.values())

    def subspace(self, U: Iterable[int]) -> tuple["FiniteSpace", list[int]]:
        """Induced preorder on U, with the list mapping new index -> old index."""
        keep = sorted(set(U))
        sub = FiniteSpace([self.labels[i] for i in keep], [[self.leq[i][j] for j in keep] for i in keep])
        return sub, keep

    def opposite(self) -> "FiniteSpace":
        return FiniteSpace(self.labels, [[self.leq[j][i] for j in range(self.n)] for i in range(self.n)])

    def t0_quotient(self) -> tuple["FiniteSpace", "MonotoneMap"]:
        """Identify x ~ y when x <= y <= x.

        Class labels join member labels with ``~`` (a T0 space keeps its
        labels).  Classes are ordered by their smallest member.
        """
        reps = []
        cls_of = [None] * self.n
        for i in range(self.n):
            if cls_of[i] is None:
                members = [j for j in range(self.n) if self.leq[i][j] and self.leq[j][i]]
                for j in members:
                    cls_of[j] = len(reps)
                reps.append(members)
        labels = ["~".join(self.labels[j] for j in m) for m in reps]
        q = FiniteSpace(labels, [[self.leq[a[0]][b[0]] for b in reps] for a in reps])
        q.quotient_of = self
        nu = MonotoneMap(self, q, cls_of)
        return q, nu

    def to_text(self) -> str:
        lines = ["elements: " + " ".join(self.labels)]
        lines += [f"le: {a} {b}" for a, b in self.covering_pairs_labels()]
        return "\n".join(lines) + "\n"

    def format_set(self, U: Iterable[int]) -> str:
        return "{" + ",".join(self.labels[i] for i in sorted(U)) + "}"


def _set_partitions(items: list):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in _set_partitions(rest):
        yield [[first]] + p
        for k in range(len(p)):
            yield p[:k] + [[first] + p[k]] + p[k + 1:]


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty open blocks covering an open set."""

    space: FiniteSpace
    open_set: frozenset
    blocks: tuple

    def __post_init__(self):
        seen = set()
        for b in self.blocks:
            if not b:
                raise ValueError("partition block is empty")
            if not self.space.is_open(b):
                raise ValueError(f"partition block {sorted(b)} is not open")
            if seen & b:
                raise ValueError("partition blocks overlap")
            seen |= b
        if seen != set(self.open_set):
            raise ValueError("partition blocks do not cover the open set")

    def refines(self, other: "Partition") -> bool:
        """True when every block of self lies inside a block of other."""
        return all(any(b <= c for c in other.blocks) for b in self.blocks)

    def common_refinement(self, other: "Partition") -> "Partition":
        blocks = [b & c for b in self.blocks for c in other.blocks if b & c]
        return Partition(self.space, self.open_set, tuple(sorted(blocks, key=min)))

    def block_of(self, x: int) -> int:
        for k, b in enumerate(self.blocks):
            if x in b:
                return k
        raise KeyError(x)

    def __repr__(self) -> str:
        return "Partition(" + " | ".join(self.space.format_set(b) for b in self.blocks) + ")"


class MonotoneMap:
    """Order-preserving (equivalently continuous) map between finite spaces."""

    def __init__(self, source: FiniteSpace, target: FiniteSpace, images: Sequence[int]):
        images = tuple(images)
        if len(images) != source.n:
            raise ValueError("map must assign an image to every source element")
        for y in images:
            if not 0 <= y < target.n:
                raise ValueError(f"image index {y} out of range")
        for i, j in source.pairs():
            if not target.leq[images[i]][images[j]]:
                raise ValueError(
                    f"map is not monotone: {source.labels[i]} <= {source.labels[j]} but "
                    f"{target.labels[images[i]]} is not <= {target.labels[images[j]]}"
                )
        self.source = source
        self.target = target
        self.images = images

    @classmethod
    def from_labels(cls, source: FiniteSpace, target: FiniteSpace, assignment: dict) -> "MonotoneMap":
        missing = [lab for lab in source.labels if lab not in assignment]
        if missing:
            raise ValueError(f"map leaves {missing} unassigned")
        return cls(source, target, [target.index(assignment[lab]) for lab in source.labels])

    @classmethod
    def identity(cls, X: FiniteSpace) -> "MonotoneMap":
        return cls(X, X, range(X.n))

    @classmethod
    def to_point(cls, X: FiniteSpace) -> "MonotoneMap":
        return cls(X, FiniteSpace.from_relations(["*"], []), [0] * X.n)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def preimage(self, V: Iterable[int]) -> frozenset:
        V = set(V)
        return frozenset(i for i, y in enumerate(self.images) if y in V)

    def compose(self, other: "MonotoneMap") -> "MonotoneMap":
        """``self ∘ other``."""
        return MonotoneMap(other.source, self.target, [self.images[y] for y in other.images])

    def is_surjective(self) -> bool:
        return set(self.images) == set(range(self.target.n))

    def __repr__(self) -> str:
        pairs = ", ".join(f"{self.source.labels[i]}->{self.target.labels[y]}" for i, y in enumerate(self.images))
        return f"MonotoneMap({pairs})"


# ---------------------------------------------------------------------------
# text formats


def _content_lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def parse_space(text: str, source: str = "<string>") -> FiniteSpace:
    labels = None
    pairs = []
    for no, line in _content_lines(text):
        key, _, rest = line.partition(":")
        key = key.strip()
        if key == "elements":
            if labels is not None:
                raise ParseError(source, no, "duplicate 'elements:' line")
            labels = rest.split()
            if len(set(labels)) != len(labels):
                raise ParseError(source, no, "duplicate element labels")
        elif key == "le":
            parts = rest.split()
            if len(parts) != 2:
                raise ParseError(source, no, "expected 'le: <x> <y>'")
            if labels is None:
                raise ParseError(source, no, "'le:' before 'elements:'")
            for p in parts:
                if p not in labels:
                    raise ParseError(source, no, f"unknown element {p!r}")
            pairs.append((parts[0], parts[1]))
        else:
            raise ParseError(source, no, f"unrecognised line {line!r}")
    if labels is None:
        raise ParseError(source, 0, "missing 'elements:' line")
    return FiniteSpace.from_relations(labels, pairs)


def load_space(path) -> FiniteSpace:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ParseError(str(path), 0, f"cannot read file: {e.strerror}") from None
    return parse_space(text, str(path))


def parse_map(text: str, source: str = "<string>", base: Path | None = None,
              spaces: dict | None = None) -> MonotoneMap:
    """Parse ``source: <file>``, ``target: <file>`` and ``map: <x> -> <y>`` lines.

    ``spaces`` may pre-supply spaces by name (used for embedded fixtures).
    """
    src = tgt = None
    assign = {}
    base = base or Path(".")
    spaces = spaces or {}
    for no, line in _content_lines(text):
        key, _, rest = line.partition(":")
        key, rest = key.strip(), rest.strip()
        if key in ("source", "target"):
            if rest in spaces:
                sp = spaces[rest]
            else:
                try:
                    sp = load_space(base / rest)
                except ParseError as e:
                    raise ParseError(source, no, str(e)) from None
            if key == "source":
                src = sp
            else:
                tgt = sp
        elif key == "map":
            a, arrow, b = rest.partition("->")
            if not arrow:
                raise ParseError(source, no, "expected 'map: <x> -> <y>'")
            a, b = a.strip(), b.strip()
            if a in assign:
                raise ParseError(source, no, f"element {a!r} mapped twice")
            assign[a] = (b, no)
        else:
            raise ParseError(source, no, f"unrecognised line {line!r}")
    if src is None or tgt is None:
        raise ParseError(source, 0, "map file needs 'source:' and 'target:' lines")
    for a, (b, no) in assign.items():
        if a not in src.labels:
            raise ParseError(source, no, f"unknown source element {a!r}")
        if b not in tgt.labels:
            raise ParseError(source, no, f"unknown target element {b!r}")
    try:
        return MonotoneMap.from_labels(src, tgt, {a: b for a, (b, _) in assign.items()})
    except ValueError as e:
        raise ParseError(source, 0, str(e)) from None


def brute_force_opens(X: FiniteSpace) -> list[frozenset]:
    """Reference enumeration over all 2^n subsets (tests only, tiny spaces)."""
    out = []
    for mask in range(1 << X.n):
        U = frozenset(i for i in range(X.n) if mask >> i & 1)
        if X.is_open(U):
            out.append(U)
    return sorted(out, key=lambda U: (len(U), tuple(sorted(U))))


def strict_chains(X: FiniteSpace, length: int) -> list[tuple]:
    """Chains x_0 < x_1 < ... < x_length (strict in the preorder), lexicographic."""
    out = []

    def ext(ch):
        if len(ch) == length + 1:
            out.append(tuple(ch))
            return
        last = ch[-1]
        for y in range(X.n):
            if X.lt(last, y):
                ext(ch + [y])

    if length < 0:
        return []
    for x in range(X.n):
        ext([x])
    return out


def product(X: FiniteSpace, Y: FiniteSpace) -> FiniteSpace:
    pts = list(itertools.product(range(X.n), range(Y.n)))
    labels = [f"{X.labels[a]}.{Y.labels[b]}" for a, b in pts]
    return FiniteSpace(labels, [[X.leq[a][c] and Y.leq[b][d] for c, d in pts] for a, b in pts])
