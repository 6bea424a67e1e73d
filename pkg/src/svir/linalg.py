"""Dense exact linear algebra over Q(i) on finite windows of basis symbols."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .algebra import AlgebraConfig, ConfigMismatch, Element, Symbol
from .scalar import Scalar, ZERO, ONE


class DimensionMismatch(ValueError):
    pass


class OutOfWindow(ValueError):
    """An element has support outside the coordinate window."""

    def __init__(self, escaping, window=None):
        self.escaping = sorted(escaping)
        super().__init__("support escapes window: %s" % ", ".join(map(str, self.escaping)))


class Window:
    """An ordered, duplicate-free list of basis symbols used as coordinates."""

    __slots__ = ("cfg", "symbols", "_index")

    def __init__(self, cfg: AlgebraConfig, symbols: Iterable[Symbol]):
        syms = sorted(set(symbols))
        for s in syms:
            cfg.check(s)
        self.cfg = cfg
        self.symbols = tuple(syms)
        self._index = {s: i for i, s in enumerate(self.symbols)}

    @classmethod
    def degree(cls, cfg: AlgebraConfig, radius, kinds="LGC") -> "Window":
        return cls(cfg, cfg.symbols(radius, kinds))

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, sym):
        return sym in self._index

    def __eq__(self, other):
        return isinstance(other, Window) and self.cfg == other.cfg and self.symbols == other.symbols

    def __hash__(self):
        return hash((self.cfg, self.symbols))

    def __repr__(self):
        return "Window(%s)" % ", ".join(map(str, self.symbols))

    def index(self, sym: Symbol) -> int:
        return self._index[sym]

    def union(self, other: Iterable[Symbol]) -> "Window":
        return Window(self.cfg, list(self.symbols) + list(other))

    def vector(self, x: Element) -> list[Scalar]:
        if x.cfg != self.cfg:
            raise ConfigMismatch("element of %s, window of %s" % (x.cfg, self.cfg))
        out = [ZERO] * len(self.symbols)
        bad = []
        for sym, c in x.items():
            i = self._index.get(sym)
            if i is None:
                bad.append(sym)
            else:
                out[i] = c
        if bad:
            raise OutOfWindow(bad, self)
        return out

    def element(self, vec: Sequence[Scalar]) -> Element:
        if len(vec) != len(self.symbols):
            raise DimensionMismatch("vector of length %d for window of size %d" % (len(vec), len(self)))
        return Element(self.cfg, {s: c for s, c in zip(self.symbols, vec) if not c.is_zero()})


class Matrix:
    """Dense rectangular array of Scalars."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries, cols: int | None = None):
        entries = [[Scalar.coerce(v) for v in row] for row in entries]
        if cols is None:
            cols = len(entries[0]) if entries else 0
        for row in entries:
            if len(row) != cols:
                raise DimensionMismatch("ragged matrix")
        self.rows = len(entries)
        self.cols = cols
        self.entries = entries

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[ZERO] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n):
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns, rows: int):
        return cls([[col[i] for col in columns] for i in range(rows)], len(columns))

    def column(self, j):
        return [row[j] for row in self.entries]

    def transpose(self) -> "Matrix":
        return Matrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)], self.rows)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def apply(self, vec):
        if len(vec) != self.cols:
            raise DimensionMismatch("matrix has %d columns, vector length %d" % (self.cols, len(vec)))
        out = []
        for row in self.entries:
            acc = ZERO
            for a, b in zip(row, vec):
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            out.append(acc)
        return out

    def __str__(self):
        return "\n".join("[" + ", ".join(str(v) for v in row) + "]" for row in self.entries)

    def __repr__(self):
        return "Matrix(%dx%d)" % (self.rows, self.cols)


def _rref_inplace(rows: list[list[Scalar]], ncols: int | None = None) -> list[int]:
    """Reduce `rows` to RREF using the first `ncols` columns for pivots.

    Among candidate pivot rows the one with the smallest entry is chosen;
    the reduced form itself does not depend on this choice.
    """
    if not rows:
        return []
    if ncols is None:
        ncols = len(rows[0])
    width = len(rows[0])
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        best = None
        for i in range(r, nrows):
            v = rows[i][c]
            if not v.is_zero() and (best is None or v.bit_size() < rows[best][c].bit_size()):
                best = i
        if best is None:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        piv = rows[r]
        inv = piv[c].inverse()
        if inv != ONE:
            piv[:] = [v * inv if not v.is_zero() else ZERO for v in piv]
        nz = [k for k in range(c, width) if not piv[k].is_zero()]
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][c]
            if f.is_zero():
                continue
            row = rows[i]
            for k in nz:
                row[k] = row[k] - f * piv[k]
        pivots.append(c)
        r += 1
    return pivots


def rref(m: Matrix) -> tuple[Matrix, list[int], int]:
    rows = [list(row) for row in m.entries]
    pivots = _rref_inplace(rows, m.cols)
    return Matrix(rows, m.cols), pivots, len(pivots)


def rank(m: Matrix) -> int:
    return rref(m)[2]


@dataclass
class Solution:
    kind: str  # "unique" | "parametrized" | "none"
    particular: list | None = None
    kernel: list = field(default_factory=list)
    # for "none": a functional y with y*A = 0 and y*b != 0
    obstruction: list | None = None

    @property
    def solvable(self) -> bool:
        return self.kind != "none"


def kernel(a: Matrix) -> list[list[Scalar]]:
    """Basis of the right null space, one vector per free column."""
    red, pivots, _ = rref(a)
    free = [j for j in range(a.cols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * a.cols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -red.entries[i][f]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Sequence) -> Solution:
    """Classify and describe the affine solution set of a x = b."""
    b = [Scalar.coerce(v) for v in b]
    if len(b) != a.rows:
        raise DimensionMismatch("matrix has %d rows, right-hand side length %d" % (a.rows, len(b)))
    n = a.cols
    aug = [list(row) + [bi] for row, bi in zip(a.entries, b)]
    pivots = _rref_inplace(aug, n)
    rk = len(pivots)
    for i in range(rk, a.rows):
        if not aug[i][n].is_zero():
            return Solution("none", obstruction=_obstruction(a, b))
    x = [ZERO] * n
    for i, p in enumerate(pivots):
        x[p] = aug[i][n]
    ker = []
    pivset = set(pivots)
    for f in range(n):
        if f in pivset:
            continue
        v = [ZERO] * n
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -aug[i][f]
        ker.append(v)
    return Solution("unique" if not ker else "parametrized", x, ker)


def _obstruction(a: Matrix, b) -> list[Scalar]:
    # reduce [A | b | I]; a row with zero A-part and nonzero b-part carries
    # the left multiplier in its identity block
    m = a.rows
    aug = [list(row) + [bi] + [ONE if i == j else ZERO for j in range(m)]
           for i, (row, bi) in enumerate(zip(a.entries, b))]
    pivots = _rref_inplace(aug, a.cols + 1)
    for i, p in enumerate(pivots):
        if p == a.cols:
            return aug[i][a.cols + 1:]
    raise AssertionError("system is consistent")


class Subspace:
    """A subspace of the span of a window, stored as canonical RREF rows."""

    __slots__ = ("window", "rows", "pivots")

    def __init__(self, window: Window, generators: Iterable[Sequence[Scalar]] = ()):
        gens = [list(Scalar.coerce(v) for v in g) for g in generators]
        for g in gens:
            if len(g) != len(window):
                raise DimensionMismatch("generator length %d for window of size %d" % (len(g), len(window)))
        pivots = _rref_inplace(gens, len(window))
        self.window = window
        self.rows = [tuple(r) for r in gens[:len(pivots)]]
        self.pivots = pivots

    @classmethod
    def span(cls, window: Window, elements: Iterable[Element]) -> "Subspace":
        return cls(window, [window.vector(e) for e in elements])

    @classmethod
    def full(cls, window: Window) -> "Subspace":
        return cls(window, Matrix.identity(len(window)).entries)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis_rows(self) -> Matrix:
        return Matrix([list(r) for r in self.rows], len(self.window))

    def basis(self) -> list[Element]:
        return [self.window.element(r) for r in self.rows]

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.window == other.window and self.rows == other.rows

    def __repr__(self):
        return "Subspace(dim=%d, basis=[%s])" % (self.dim, "; ".join(map(str, self.basis())))

    def coordinates(self, vec: Sequence[Scalar]):
        """Coefficients of vec in the RREF basis, or None if vec is not in the span."""
        coeffs = [vec[p] for p in self.pivots]
        acc = [ZERO] * len(vec)
        for c, row in zip(coeffs, self.rows):
            if c.is_zero():
                continue
            for k, v in enumerate(row):
                if not v.is_zero():
                    acc[k] = acc[k] + c * v
        if list(acc) != list(vec):
            return None
        return coeffs

    def contains(self, x: Element) -> bool:
        return self.coordinates(self.window.vector(x)) is not None

    def restrict(self, window: Window) -> "Subspace":
        """Re-express in a sub-window; every basis vector must already live there."""
        gens = []
        for e in self.basis():
            gens.append(window.vector(e))
        return Subspace(window, gens)

    def embed(self, window: Window) -> "Subspace":
        return Subspace(window, [window.vector(e) for e in self.basis()])


def column_image(a: Matrix, w: Window) -> Subspace:
    if a.rows != len(w):
        raise DimensionMismatch("matrix has %d rows, window has %d symbols" % (a.rows, len(w)))
    return Subspace(w, [a.column(j) for j in range(a.cols)])


def _check_same(s1: Subspace, s2: Subspace):
    if s1.window != s2.window:
        raise DimensionMismatch("subspaces live in different windows")


def intersect(s1: Subspace, s2: Subspace) -> Subspace:
    """Zassenhaus intersection: reduce [[U, U], [V, 0]] and read off rows [0, w]."""
    _check_same(s1, s2)
    n = len(s1.window)
    zero = [ZERO] * n
    rows = [list(u) + list(u) for u in s1.rows] + [list(v) + zero for v in s2.rows]
    pivots = _rref_inplace(rows, n)
    inter = [r[n:] for r in rows[len(pivots):] if any(not v.is_zero() for v in r[n:])]
    return Subspace(s1.window, inter)


def subspace_sum(s1: Subspace, s2: Subspace) -> Subspace:
    _check_same(s1, s2)
    return Subspace(s1.window, list(s1.rows) + list(s2.rows))


def member(s: Subspace, v: Element):
    """(True, coefficients) if v lies in s, else (False, None).

    Raises OutOfWindow when v is not even expressible in s's window.
    """
    coords = s.coordinates(s.window.vector(v))
    if coords is None:
        return False, None
    return True, coords
