"""Exact linear algebra over Z, Q and prime fields.

Everything here is exact: integers are Python ints (arbitrary precision),
rationals are :class:`fractions.Fraction`, and elements of F_p are ints
reduced into ``range(p)``.  Matrices act on column vectors, so a map
``k^n -> k^m`` is an ``m x n`` matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Ring:
    """One of the coefficient rings Z, Q or F_p."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Fp"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Fp" and not _is_prime(self.p):
            raise ValueError(f"F_p needs a prime p, got {self.p}")
        if self.kind != "Fp" and self.p:
            raise ValueError("only F_p carries a characteristic")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def name(self) -> str:
        return f"F{self.p}" if self.kind == "Fp" else self.kind

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Ring({self.name})"

    def coerce(self, x):
        if self.kind == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return x.numerator
            if isinstance(x, bool) or not isinstance(x, int):
                raise TypeError(f"cannot coerce {x!r} into Z")
            return x
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def reduce(self, x):
        return x % self.p if self.kind == "Fp" else x

    def inv(self, x):
        if self.kind == "Q":
            return 1 / Fraction(x)
        if self.kind == "Fp":
            return pow(x, -1, self.p)
        if x in (1, -1):
            return x
        raise ZeroDivisionError(f"{x} is not a unit in Z")

    def is_unit(self, x) -> bool:
        return x in (1, -1) if self.kind == "Z" else x != 0

    def size(self, x):
        """Pivot-selection key: absolute value over Z and Q, representative in F_p."""
        return x if self.kind == "Fp" else abs(x)

    def quo(self, a, b):
        """Quotient with |a - q*b| < |b| over Z; exact division over a field."""
        if self.kind == "Z":
            return a // b
        if self.kind == "Q":
            return a / b
        return a * pow(b, -1, self.p) % self.p

    @classmethod
    def parse(cls, text: str) -> "Ring":
        t = text.strip()
        if t in ("Z", "ZZ"):
            return ZZ
        if t in ("Q", "QQ"):
            return QQ
        if t.startswith("F") and t[1:].isdigit():
            return GF(int(t[1:]))
        if t.startswith("Z/") and t[2:].isdigit():
            return GF(int(t[2:]))
        raise ValueError(f"unknown ring {text!r} (expected Z, Q or Fp such as F2)")


ZZ = Ring("Z")
QQ = Ring("Q")


def GF(p: int) -> Ring:
    return Ring("Fp", p)


class Matrix:
    """Immutable dense matrix with exact entries in a :class:`Ring`."""

    __slots__ = ("ring", "rows", "cols", "data")

    def __init__(self, ring: Ring, rows: int, cols: int, data: Iterable[Iterable] = ()):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix shape")
        data = tuple(tuple(ring.coerce(x) for x in row) for row in data)
        if not data and rows:
            data = tuple((ring.coerce(0),) * cols for _ in range(rows))
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError(f"entries do not fit a {rows}x{cols} matrix")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def _raw(cls, ring: Ring, rows: int, cols: int, data) -> "Matrix":
        m = object.__new__(cls)
        object.__setattr__(m, "ring", ring)
        object.__setattr__(m, "rows", rows)
        object.__setattr__(m, "cols", cols)
        object.__setattr__(m, "data", tuple(tuple(r) for r in data))
        return m

    @classmethod
    def from_rows(cls, ring: Ring, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(ring, len(rows), cols, rows)

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int) -> "Matrix":
        z = ring.coerce(0)
        return cls._raw(ring, rows, cols, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        z, o = ring.coerce(0), ring.coerce(1)
        return cls._raw(ring, n, n, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, ring: Ring, entries: Sequence, rows: int | None = None, cols: int | None = None) -> "Matrix":
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        z = ring.coerce(0)
        data = [[z] * cols for _ in range(rows)]
        for i, e in enumerate(entries):
            data[i][i] = ring.coerce(e)
        return cls._raw(ring, rows, cols, data)

    @classmethod
    def from_columns(cls, ring: Ring, columns: Sequence[Sequence], rows: int) -> "Matrix":
        return cls(ring, len(columns), rows, columns).T if columns else cls.zeros(ring, rows, 0)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.ring == other.ring
            and self.shape == other.shape
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.ring, self.rows, self.cols, self.data))

    def __repr__(self) -> str:
        return f"Matrix({self.ring.name}, {self.rows}x{self.cols}, {format_matrix(self)})"

    def to_lists(self) -> list[list]:
        return [list(r) for r in self.data]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[tuple]:
        return list(zip(*self.data)) if self.rows else [()] * self.cols

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(self.ring, self.cols, self.rows, self.columns())

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.data)

    def _check(self, other: "Matrix"):
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ring = self.ring
        z = ring.coerce(0)
        other_rows = other.data
        out = []
        for row in self.data:
            acc = [z] * other.cols
            for k, a in enumerate(row):
                if a:
                    orow = other_rows[k]
                    for j, b in enumerate(orow):
                        if b:
                            acc[j] += a * b
            if ring.kind == "Fp":
                acc = [x % ring.p for x in acc]
            out.append(acc)
        return Matrix._raw(ring, self.rows, other.cols, out)

    def apply(self, vec: Sequence) -> tuple:
        ring = self.ring
        out = []
        for row in self.data:
            s = ring.coerce(0)
            for a, b in zip(row, vec):
                if a and b:
                    s += a * b
            out.append(ring.reduce(s))
        return tuple(out)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"cannot add {self.shape} and {other.shape}")
        r = self.ring.reduce
        return Matrix._raw(
            self.ring, self.rows, self.cols,
            [[r(a + b) for a, b in zip(x, y)] for x, y in zip(self.data, other.data)],
        )

    def __neg__(self) -> "Matrix":
        r = self.ring.reduce
        return Matrix._raw(self.ring, self.rows, self.cols, [[r(-a) for a in x] for x in self.data])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = self.ring.coerce(c)
        r = self.ring.reduce
        return Matrix._raw(self.ring, self.rows, self.cols, [[r(c * a) for a in x] for x in self.data])

    def submatrix(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> "Matrix":
        rows = range(self.rows) if rows is None else rows
        cols = range(self.cols) if cols is None else cols
        cols = list(cols)
        return Matrix._raw(self.ring, len(rows), len(cols), [[self.data[i][j] for j in cols] for i in rows])

    def hstack(self, *others: "Matrix") -> "Matrix":
        mats = (self,) + others
        for m in others:
            self._check(m)
            if m.rows != self.rows:
                raise ValueError("hstack needs equal row counts")
        data = [sum((m.data[i] for m in mats), ()) for i in range(self.rows)]
        return Matrix._raw(self.ring, self.rows, sum(m.cols for m in mats), data)

    def vstack(self, *others: "Matrix") -> "Matrix":
        mats = (self,) + others
        for m in others:
            self._check(m)
            if m.cols != self.cols:
                raise ValueError("vstack needs equal column counts")
        return Matrix._raw(self.ring, sum(m.rows for m in mats), self.cols, [r for m in mats for r in m.data])


def block_diagonal(ring: Ring, blocks: Sequence[Matrix]) -> Matrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    z = ring.coerce(0)
    data = [[z] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.data):
            data[r0 + i][c0:c0 + b.cols] = row
        r0 += b.rows
        c0 += b.cols
    return Matrix._raw(ring, rows, cols, data)


def block_matrix(ring: Ring, blocks: Sequence[Sequence[Matrix | None]], row_sizes: Sequence[int], col_sizes: Sequence[int]) -> Matrix:
    """Assemble a matrix from a grid of blocks; ``None`` means a zero block."""
    z = ring.coerce(0)
    data = [[z] * sum(col_sizes) for _ in range(sum(row_sizes))]
    r0 = 0
    for bi, rs in enumerate(row_sizes):
        c0 = 0
        for bj, cs in enumerate(col_sizes):
            b = blocks[bi][bj]
            if b is not None:
                if b.shape != (rs, cs):
                    raise ValueError(f"block ({bi},{bj}) has shape {b.shape}, expected {(rs, cs)}")
                for i, row in enumerate(b.data):
                    data[r0 + i][c0:c0 + cs] = row
            c0 += cs
        r0 += rs
    return Matrix._raw(ring, len(data), sum(col_sizes), data)


def format_matrix(m: Matrix) -> str:
    """``[[a b];[c d]]``; any matrix with an empty side prints as ``[[]]``."""
    if m.rows == 0 or m.cols == 0:
        return "[[]]"
    return "[" + ";".join("[" + " ".join(str(x) for x in row) + "]" for row in m.data) + "]"


def parse_matrix(ring: Ring, text: str, rows: int | None = None, cols: int | None = None) -> Matrix:
    t = text.strip()
    if not (t.startswith("[") and t.endswith("]")):
        raise ValueError(f"matrix must be bracketed: {text!r}")
    inner = t[1:-1].strip()
    if inner in ("", "[]"):
        return Matrix.zeros(ring, rows or 0, cols or 0)
    parsed = []
    for chunk in inner.split(";"):
        chunk = chunk.strip()
        if not (chunk.startswith("[") and chunk.endswith("]")):
            raise ValueError(f"bad matrix row {chunk!r}")
        entries = chunk[1:-1].replace(",", " ").split()
        parsed.append([Fraction(e) for e in entries])
    m = Matrix.from_rows(ring, parsed)
    if (rows is not None and m.rows != rows) or (cols is not None and m.cols != cols):
        raise ValueError(f"matrix is {m.rows}x{m.cols}, expected {rows}x{cols}")
    return m


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    """``U @ M @ V == D`` with ``U, V`` invertible over the ring.

    ``U_inv`` and ``V_inv`` are the inverses, kept because kernels, cokernels
    and lifts all need them.
    """

    U: Matrix
    D: Matrix
    V: Matrix
    U_inv: Matrix
    V_inv: Matrix
    rank: int

    @property
    def diagonal(self) -> tuple:
        return tuple(self.D[i, i] for i in range(self.rank))


def _snf_work(M: Matrix, transforms: bool):
    ring = M.ring
    m, n = M.rows, M.cols
    A = M.to_lists()
    Fp = ring.kind == "Fp"
    p = ring.p
    if transforms:
        U = Matrix.identity(ring, m).to_lists()
        Ui = Matrix.identity(ring, m).to_lists()
        V = Matrix.identity(ring, n).to_lists()
        Vi = Matrix.identity(ring, n).to_lists()
    size = ring.size
    quo = ring.quo

    # U, Ui: row op "row_i += c*row_t" on A and U; Ui gets "col_t -= c*col_i".
    def add_row(i, t, c):
        ri, rt = A[i], A[t]
        for j in range(n):
            if rt[j]:
                ri[j] = ri[j] + c * rt[j]
                if Fp:
                    ri[j] %= p
        if transforms:
            ui, ut = U[i], U[t]
            for j in range(m):
                if ut[j]:
                    ui[j] = ui[j] + c * ut[j]
                    if Fp:
                        ui[j] %= p
            for row in Ui:
                if row[i]:
                    row[t] = row[t] - c * row[i]
                    if Fp:
                        row[t] %= p

    def add_col(j, t, c):
        for row in A:
            if row[t]:
                row[j] = row[j] + c * row[t]
                if Fp:
                    row[j] %= p
        if transforms:
            for row in V:
                if row[t]:
                    row[j] = row[j] + c * row[t]
                    if Fp:
                        row[j] %= p
            vj, vt = Vi[j], Vi[t]
            for k in range(n):
                if vj[k]:
                    vt[k] = vt[k] - c * vj[k]
                    if Fp:
                        vt[k] %= p

    def swap_rows(i, t):
        if i == t:
            return
        A[i], A[t] = A[t], A[i]
        if transforms:
            U[i], U[t] = U[t], U[i]
            for row in Ui:
                row[i], row[t] = row[t], row[i]

    def swap_cols(j, t):
        if j == t:
            return
        for row in A:
            row[j], row[t] = row[t], row[j]
        if transforms:
            for row in V:
                row[j], row[t] = row[t], row[j]
            Vi[j], Vi[t] = Vi[t], Vi[j]

    def scale_row(t, c, cinv):
        A[t] = [ring.reduce(c * x) for x in A[t]]
        if transforms:
            U[t] = [ring.reduce(c * x) for x in U[t]]
            for row in Ui:
                row[t] = ring.reduce(row[t] * cinv)

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x:
                    key = (size(x), i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            break
        _, i, j = best
        swap_rows(i, t)
        swap_cols(j, t)
        while True:
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                x = A[i][t]
                if x:
                    add_row(i, t, -quo(x, piv))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                x = A[t][j]
                if x:
                    add_col(j, t, -quo(x, piv))
                    if A[t][j]:
                        dirty = True
            if dirty:
                cand = [(size(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(size(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                swap_rows(i, t)
                swap_cols(j, t)
                continue
            if ring.kind == "Z":
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % piv:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is not None:
                    add_row(t, bad, 1)
                    continue
            break
        piv = A[t][t]
        if ring.kind == "Z":
            if piv < 0:
                scale_row(t, -1, -1)
        elif piv != 1:
            scale_row(t, ring.inv(piv), piv)
        t += 1
    if transforms:
        return A, t, (U, Ui, V, Vi)
    return A, t, None


def smith_normal_form(M: Matrix) -> SmithForm:
    """Smith normal form with transforms.

    Pivot rule: smallest nonzero entry by absolute value, ties broken by the
    lexicographically smallest (row, col), so results are reproducible.  Over
    a field the nonzero diagonal entries are all 1.
    """
    ring = M.ring
    A, r, (U, Ui, V, Vi) = _snf_work(M, True)
    m, n = M.rows, M.cols
    return SmithForm(
        U=Matrix._raw(ring, m, m, U),
        D=Matrix._raw(ring, m, n, A),
        V=Matrix._raw(ring, n, n, V),
        U_inv=Matrix._raw(ring, m, m, Ui),
        V_inv=Matrix._raw(ring, n, n, Vi),
        rank=r,
    )


def _unit_pivot_reduce(M: Matrix) -> tuple[int, Matrix]:
    """Eliminate unit pivots on a sparse copy of M.

    Returns ``(k, R)`` where M is equivalent to ``I_k (+) R`` under invertible
    row and column operations.  Bar and simplicial boundaries are mostly
    signed 0/1 entries, so this usually leaves a tiny dense remainder for
    the full Smith form.
    """
    import heapq

    ring = M.ring
    Fp = ring.kind == "Fp"
    p = ring.p
    rows: dict[int, dict] = {}
    cols: dict[int, set] = {}
    for i, row in enumerate(M.data):
        d = {j: x for j, x in enumerate(row) if x}
        if d:
            rows[i] = d
            for j in d:
                cols.setdefault(j, set()).add(i)
    heap = [(len(d), i) for i, d in rows.items()]
    heapq.heapify(heap)
    units = 0
    while heap:
        ln, i = heapq.heappop(heap)
        d = rows.get(i)
        if d is None or len(d) != ln:
            continue
        best = None
        for j, x in d.items():
            if ring.is_unit(x):
                key = (len(cols[j]), j)
                if best is None or key < best[0]:
                    best = (key, j)
        if best is None:
            continue
        j = best[1]
        inv = ring.inv(d[j])
        units += 1
        del rows[i]
        for c in d:
            cols[c].discard(i)
        for r in list(cols[j]):
            rr = rows[r]
            f = rr[j] * inv
            for c, x in d.items():
                v = rr.get(c, 0) - f * x
                if Fp:
                    v %= p
                if v:
                    if c not in rr:
                        cols[c].add(r)
                    rr[c] = v
                elif c in rr:
                    del rr[c]
                    cols[c].discard(r)
            if rr:
                heapq.heappush(heap, (len(rr), r))
            else:
                del rows[r]
        del cols[j]
    live_rows = sorted(rows)
    live_cols = sorted({c for d in rows.values() for c in d})
    cidx = {c: k for k, c in enumerate(live_cols)}
    z = ring.coerce(0)
    data = []
    for r in live_rows:
        line = [z] * len(live_cols)
        for c, x in rows[r].items():
            line[cidx[c]] = x
        data.append(line)
    return units, Matrix._raw(ring, len(live_rows), len(live_cols), data)


def invariant_factors(M: Matrix) -> tuple:
    """Nonzero diagonal of the Smith form, computed without transforms."""
    if M.rows == 0 or M.cols == 0:
        return ()
    k, R = _unit_pivot_reduce(M)
    one = M.ring.coerce(1)
    if M.ring.is_field:
        return (one,) * (k + (len(_rref(R.to_lists(), R.ring, R.cols)) if R.rows else 0))
    if R.rows == 0:
        return (one,) * k
    A, r, _ = _snf_work(R, False)
    return (one,) * k + tuple(A[i][i] for i in range(r))


def _rref(rows: list[list], ring: Ring, ncols: int) -> list[int]:
    """In-place reduced row echelon form over a field; returns pivot columns."""
    Fp = ring.kind == "Fp"
    p = ring.p
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ring.inv(rows[r][c])
        prow = [ring.reduce(x * inv) for x in rows[r]]
        rows[r] = prow
        nz = [j for j in range(c, len(prow)) if prow[j]]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    row = rows[i]
                    for j in nz:
                        row[j] = row[j] - f * prow[j]
                        if Fp:
                            row[j] %= p
        pivots.append(c)
        r += 1
    return pivots


def rank(M: Matrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    return len(invariant_factors(M))


def kernel_basis(M: Matrix) -> Matrix:
    """Columns form a basis of ker M (over Z: a basis of the kernel lattice)."""
    ring = M.ring
    n = M.cols
    if ring.is_field:
        rows = M.to_lists()
        pivots = _rref(rows, ring, n) if M.rows else []
        free = [j for j in range(n) if j not in set(pivots)]
        cols = []
        for f in free:
            v = [ring.coerce(0)] * n
            v[f] = ring.coerce(1)
            for i, pc in enumerate(pivots):
                v[pc] = ring.reduce(-rows[i][f])
            cols.append(v)
        return Matrix.from_columns(ring, cols, n)
    snf = smith_normal_form(M)
    return snf.V.submatrix(None, range(snf.rank, n))


def kernel_with_coordinates(M: Matrix) -> tuple[Matrix, Matrix]:
    """``(K, L)``: K's columns are a kernel basis and ``L @ v`` gives coordinates of any v in ker M."""
    snf = smith_normal_form(M)
    n = M.cols
    K = snf.V.submatrix(None, range(snf.rank, n))
    L = snf.V_inv.submatrix(range(snf.rank, n), None)
    return K, L


def image_basis(M: Matrix) -> Matrix:
    """Columns form a basis of the column space (over Z: of the image lattice)."""
    ring = M.ring
    if ring.is_field:
        rows = M.to_lists()
        pivots = _rref(rows, ring, M.cols) if M.rows else []
        return M.submatrix(None, pivots)
    snf = smith_normal_form(M)
    d = snf.diagonal
    cols = [tuple(x * d[i] for x in snf.U_inv.column(i)) for i in range(snf.rank)]
    return Matrix.from_columns(ring, cols, M.rows)


def solve(A: Matrix, B: Matrix) -> Matrix | None:
    """Some X with ``A @ X == B``, or None when no solution exists over the ring."""
    ring = A.ring
    if A.rows != B.rows:
        raise ValueError("solve needs matching row counts")
    if B.cols == 0:
        return Matrix.zeros(ring, A.cols, 0)
    if ring.is_field:
        aug = [list(a) + list(b) for a, b in zip(A.data, B.data)]
        pivots = _rref(aug, ring, A.cols + B.cols) if aug else []
        if any(pc >= A.cols for pc in pivots):
            return None
        z = ring.coerce(0)
        X = [[z] * B.cols for _ in range(A.cols)]
        for i, pc in enumerate(pivots):
            X[pc] = aug[i][A.cols:]
        return Matrix._raw(ring, A.cols, B.cols, X)
    snf = smith_normal_form(A)
    UB = snf.U @ B
    d = snf.diagonal
    Y = [[0] * B.cols for _ in range(A.cols)]
    for i in range(A.rows):
        for j in range(B.cols):
            x = UB[i, j]
            if i < snf.rank:
                if x % d[i]:
                    return None
                Y[i][j] = x // d[i]
            elif x:
                return None
    return snf.V @ Matrix._raw(ring, A.cols, B.cols, Y)


def span_contains(A: Matrix, B: Matrix) -> bool:
    """True when every column of B lies in the column span (lattice) of A."""
    return solve(A, B) is not None


def same_span(A: Matrix, B: Matrix) -> bool:
    return span_contains(A, B) and span_contains(B, A)


def complement_basis(W: Matrix, Z: Matrix) -> Matrix:
    """Columns of Z that extend a basis of span(W) to one of span(W)+span(Z). Field only."""
    ring = W.ring
    chosen = []
    current = W
    r = rank(current)
    for j in range(Z.cols):
        col = Z.submatrix(None, [j])
        trial = current.hstack(col)
        rt = rank(trial)
        if rt > r:
            chosen.append(j)
            current, r = trial, rt
    return Z.submatrix(None, chosen)


# ---------------------------------------------------------------------------
# Abelian groups, cokernels and homology


@dataclass(frozen=True, order=True)
class AbelianGroup:
    """``k^free_rank`` plus cyclic torsion ``k/d_1 + ... + k/d_r`` with d_i | d_(i+1)."""

    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        t = self.torsion
        if any(d <= 1 for d in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion {t} is not a divisibility chain of factors > 1")

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def format(self, ring: Ring) -> str:
        name = ring.name
        parts = []
        if self.free_rank == 1:
            parts.append(name)
        elif self.free_rank > 1:
            parts.append(f"{name}^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Cokernel:
    """Presentation of ``coker M`` with explicit coordinates.

    ``Q`` maps the codomain of M onto generator coordinates (torsion
    generators first, then free ones); ``S`` lifts generators back, so
    ``Q @ S`` is the identity and ``Q @ M`` vanishes modulo ``moduli``.
    """

    group: AbelianGroup
    Q: Matrix
    S: Matrix
    moduli: tuple

    @property
    def free_rank(self) -> int:
        return self.group.free_rank

    @property
    def torsion(self) -> tuple:
        return self.group.torsion

    def reduce(self, M: Matrix) -> Matrix:
        """Reduce torsion coordinates of a generator-coordinate matrix modulo their orders."""
        k = len(self.moduli)
        data = [[x % self.moduli[i] if i < k else x for x in row] for i, row in enumerate(M.data)]
        return Matrix._raw(M.ring, M.rows, M.cols, data)


def cokernel(M: Matrix) -> Cokernel:
    ring = M.ring
    snf = smith_normal_form(M)
    d = snf.diagonal
    first = next((i for i, x in enumerate(d) if not ring.is_unit(x)), snf.rank)
    keep = list(range(first, M.rows))
    moduli = tuple(d[first:snf.rank])
    group = AbelianGroup(M.rows - snf.rank, moduli if not ring.is_field else ())
    return Cokernel(
        group=group,
        Q=snf.U.submatrix(keep, None),
        S=snf.U_inv.submatrix(None, keep),
        moduli=moduli if not ring.is_field else (),
    )


def cokernel_presentation(M: Matrix) -> AbelianGroup:
    """``coker M`` as free rank plus invariant factors > 1, read off the Smith form."""
    d = invariant_factors(M)
    torsion = () if M.ring.is_field else tuple(x for x in d if x != 1)
    return AbelianGroup(M.rows - len(d), torsion)


class TorsionError(ValueError):
    """A construction needed a free module but met torsion."""


def free_quotient(M: Matrix) -> tuple[Matrix, Matrix]:
    """``(Q, S)`` for a torsion-free cokernel: ``Q @ M == 0`` and ``Q @ S == I``."""
    c = cokernel(M)
    if c.torsion:
        raise TorsionError(f"cokernel has torsion {c.torsion}")
    return c.Q, c.S


class ChainComplex:
    """Bounded chain complex of free modules, ``d_n : C_n -> C_(n-1)``.

    ``ranks`` maps degree to rank (missing degrees are zero); ``boundaries``
    maps n to the matrix of d_n.  ``d∘d = 0`` is verified on construction.
    """

    def __init__(self, ring: Ring, ranks: Mapping[int, int], boundaries: Mapping[int, Matrix] | None = None, check: bool = True):
        self.ring = ring
        self.ranks = {n: r for n, r in ranks.items() if r}
        bds = {}
        for n, d in (boundaries or {}).items():
            if d.ring != ring:
                raise ValueError(f"boundary d_{n} is over {d.ring}, complex over {ring}")
            if d.shape != (self.rank(n - 1), self.rank(n)):
                raise ValueError(f"d_{n} has shape {d.shape}, expected {(self.rank(n - 1), self.rank(n))}")
            if d.rows and d.cols:
                bds[n] = d
        self.boundaries = bds
        if check:
            for n in bds:
                if n - 1 in bds and not (bds[n - 1] @ bds[n]).is_zero():
                    raise ValueError(f"d_{n - 1} ∘ d_{n} != 0")

    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0)

    def d(self, n: int) -> Matrix:
        m = self.boundaries.get(n)
        return m if m is not None else Matrix.zeros(self.ring, self.rank(n - 1), self.rank(n))

    @property
    def degrees(self) -> range:
        if not self.ranks:
            return range(0)
        return range(min(self.ranks), max(self.ranks) + 1)

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * r for n, r in self.ranks.items())

    def __repr__(self) -> str:
        return f"ChainComplex({self.ring.name}, ranks={dict(sorted(self.ranks.items()))})"


@dataclass(frozen=True)
class HomologySummary:
    """Per-degree homology groups of a complex."""

    ring: Ring
    groups: dict = field(default_factory=dict)

    def __getitem__(self, n: int) -> AbelianGroup:
        return self.groups.get(n, AbelianGroup(0))

    def ranks(self, degrees: Iterable[int]) -> tuple:
        return tuple(self[n].free_rank for n in degrees)

    def nonzero_degrees(self) -> list[int]:
        return sorted(n for n, g in self.groups.items() if not g.is_zero)

    def lines(self, degrees: Iterable[int]) -> list[str]:
        out = []
        for n in degrees:
            g = self[n]
            if self.ring.is_field:
                out.append(f"dim H_{n} = {g.free_rank}")
            else:
                out.append(f"H_{n} = {g.format(self.ring)}")
        return out


def chain_homology(C: ChainComplex, degrees: Iterable[int] | None = None) -> HomologySummary:
    """H_n = ker d_n / im d_(n+1) as free rank plus torsion for each requested degree."""
    ring = C.ring
    degrees = C.degrees if degrees is None else degrees
    groups = {}
    rank_cache: dict[int, tuple] = {}

    def factors(n):
        if n not in rank_cache:
            rank_cache[n] = invariant_factors(C.d(n)) if C.rank(n) and C.rank(n - 1) else ()
        return rank_cache[n]

    for n in degrees:
        out_rank = len(factors(n))
        incoming = factors(n + 1)
        free = C.rank(n) - out_rank - len(incoming)
        torsion = () if ring.is_field else tuple(x for x in incoming if x != 1)
        groups[n] = AbelianGroup(free, torsion)
    return HomologySummary(ring, groups)


@dataclass(frozen=True)
class HomologyBasis:
    """Explicit H_n: representatives and a projection from cycles to coordinates.

    Coordinates list torsion generators first (taken modulo ``moduli``)
    followed by free generators.  ``project @ z`` is only meaningful for a
    cycle z.
    """

    degree: int
    group: AbelianGroup
    representatives: Matrix
    project: Matrix
    moduli: tuple
    cycles: Matrix

    @property
    def free_slice(self) -> slice:
        return slice(len(self.moduli), len(self.moduli) + self.group.free_rank)


def homology_basis(C: ChainComplex, n: int) -> HomologyBasis:
    ring = C.ring
    K, L = kernel_with_coordinates(C.d(n))
    B = L @ C.d(n + 1)
    coker = cokernel(B)
    return HomologyBasis(
        degree=n,
        group=coker.group,
        representatives=K @ coker.S,
        project=coker.Q @ L,
        moduli=coker.moduli,
        cycles=K,
    )


def induced_map(f: Matrix, source: HomologyBasis, target: HomologyBasis) -> Matrix:
    """Matrix of H(f) in the coordinates of the two bases (torsion rows reduced)."""
    M = target.project @ f @ source.representatives
    k = len(target.moduli)
    data = [[x % target.moduli[i] if i < k else x for x in row] for i, row in enumerate(M.data)]
    return Matrix._raw(M.ring, M.rows, M.cols, data)


def free_part(M: Matrix, source: HomologyBasis, target: HomologyBasis) -> Matrix:
    return M.submatrix(range(target.free_slice.start, target.free_slice.stop),
                       range(source.free_slice.start, source.free_slice.stop))
