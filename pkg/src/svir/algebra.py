"""The super Virasoro algebras SVir[0], SVir[1/2] and their centerless quotients.

Indices are stored doubled (d = 2m for L_m, d = 2r for G_r) so that both
grids share one integer encoding; C carries d = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

from .scalar import Scalar, ONE, ZERO


class ConfigMismatch(ValueError):
    """A symbol or element does not belong to the configuration in use."""


KIND_ORDER = {"L": 0, "G": 1, "C": 2}


@dataclass(frozen=True)
class AlgebraConfig:
    epsilon: Fraction = Fraction(0)
    with_center: bool = True

    def __post_init__(self):
        eps = Fraction(self.epsilon)
        if eps not in (0, Fraction(1, 2)):
            raise ValueError("epsilon must be 0 or 1/2, got %s" % eps)
        object.__setattr__(self, "epsilon", eps)

    @property
    def half(self) -> bool:
        return self.epsilon != 0

    def __str__(self):
        eps = "1/2" if self.half else "0"
        return "SVir[%s]%s" % (eps, "" if self.with_center else "/C")

    # -- basis constructors --

    def L(self, m: int) -> "Element":
        return Element.basis(self, Symbol("L", 2 * int(m)))

    def G(self, r) -> "Element":
        r = Fraction(r)
        if (2 * r).denominator != 1:
            raise ConfigMismatch("G index %s is not in Z/2" % r)
        return Element.basis(self, Symbol("G", int(2 * r)))

    def C(self) -> "Element":
        return Element.basis(self, Symbol("C", 0))

    def zero(self) -> "Element":
        return Element(self, {})

    def valid(self, sym: "Symbol") -> bool:
        if sym.kind == "L":
            return sym.d % 2 == 0
        if sym.kind == "G":
            return sym.d % 2 == (1 if self.half else 0)
        return sym.kind == "C" and sym.d == 0 and self.with_center

    def check(self, sym: "Symbol") -> "Symbol":
        if not self.valid(sym):
            raise ConfigMismatch("%s is not a basis symbol of %s" % (sym, self))
        return sym

    def symbols(self, radius, kinds: str = "LGC") -> list["Symbol"]:
        """All basis symbols of degree in [-radius, radius], canonically sorted."""
        R = int(Fraction(radius) * 2)
        out = []
        if "L" in kinds:
            out.extend(Symbol("L", d) for d in range(-R, R + 1) if d % 2 == 0)
        if "G" in kinds:
            par = 1 if self.half else 0
            out.extend(Symbol("G", d) for d in range(-R, R + 1) if d % 2 == par)
        if "C" in kinds and self.with_center:
            out.append(Symbol("C", 0))
        return sorted(out)


SVIR0 = AlgebraConfig(Fraction(0), True)
SVIR_HALF = AlgebraConfig(Fraction(1, 2), True)
CENTERLESS0 = AlgebraConfig(Fraction(0), False)
CENTERLESS_HALF = AlgebraConfig(Fraction(1, 2), False)
ALL_CONFIGS = (SVIR0, SVIR_HALF, CENTERLESS0, CENTERLESS_HALF)


@dataclass(frozen=True, order=False)
class Symbol:
    kind: str
    d: int

    def __post_init__(self):
        if self.kind not in KIND_ORDER:
            raise ValueError("unknown basis kind %r" % self.kind)
        if self.kind == "C" and self.d != 0:
            raise ValueError("C has no index")

    @property
    def parity(self) -> int:
        return 1 if self.kind == "G" else 0

    @property
    def degree(self) -> Fraction:
        return Fraction(self.d, 2)

    def sort_key(self):
        return (KIND_ORDER[self.kind], self.d)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __le__(self, other):
        return self.sort_key() <= other.sort_key()

    def __gt__(self, other):
        return self.sort_key() > other.sort_key()

    def __ge__(self, other):
        return self.sort_key() >= other.sort_key()

    def __str__(self):
        if self.kind == "C":
            return "C"
        deg = self.degree
        if deg.denominator == 1:
            return "%s(%d)" % (self.kind, deg.numerator)
        return "%s(%d/2)" % (self.kind, self.d)

    __repr__ = __str__


class Element:
    """A finitely supported linear combination of basis symbols."""

    __slots__ = ("cfg", "_terms", "_hash")

    def __init__(self, cfg: AlgebraConfig, terms=None):
        self.cfg = cfg
        clean = {}
        if terms:
            for sym, c in terms.items():
                c = Scalar.coerce(c)
                if not c.is_zero():
                    cfg.check(sym)
                    clean[sym] = c
        self._terms = dict(sorted(clean.items(), key=lambda kv: kv[0].sort_key()))
        self._hash = None

    @classmethod
    def basis(cls, cfg, sym, coeff=ONE):
        return cls(cfg, {cfg.check(sym): coeff})

    @classmethod
    def _raw(cls, cfg, terms):
        # trusted constructor: terms already valid, nonzero and sorted
        obj = cls.__new__(cls)
        obj.cfg = cfg
        obj._terms = terms
        obj._hash = None
        return obj

    # -- mapping-like access --

    def items(self):
        return self._terms.items()

    def support(self) -> list[Symbol]:
        return list(self._terms)

    def coeff(self, sym: Symbol) -> Scalar:
        return self._terms.get(sym, ZERO)

    def __getitem__(self, sym):
        return self.coeff(sym)

    def __len__(self):
        return len(self._terms)

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.cfg == other.cfg and self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.cfg, tuple(self._terms.items())))
        return self._hash

    # -- linear structure --

    def _same(self, other: "Element"):
        if not isinstance(other, Element):
            raise TypeError("expected an Element, got %r" % (other,))
        if other.cfg != self.cfg:
            raise ConfigMismatch("cannot combine elements of %s and %s" % (self.cfg, other.cfg))

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._same(other)
        terms = dict(self._terms)
        for sym, c in other._terms.items():
            v = terms.get(sym, ZERO) + c
            if v.is_zero():
                terms.pop(sym, None)
            else:
                terms[sym] = v
        return Element._raw(self.cfg, dict(sorted(terms.items(), key=lambda kv: kv[0].sort_key())))

    def __radd__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    def __neg__(self):
        return Element._raw(self.cfg, {s: -c for s, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Element":
        c = Scalar.coerce(c)
        if c.is_zero():
            return Element._raw(self.cfg, {})
        return Element._raw(self.cfg, {s: c * v for s, v in self._terms.items()})

    def __mul__(self, c):
        if isinstance(c, Element):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    # -- grading --

    def parity(self) -> str:
        return parity_of(self)

    def part(self, parity: int) -> "Element":
        return Element._raw(self.cfg, {s: c for s, c in self._terms.items() if s.parity == parity})

    def degrees(self) -> set[Fraction]:
        return {s.degree for s in self._terms}

    def __str__(self):
        from .textio import format_element
        return format_element(self)

    def __repr__(self):
        return "Element(%s)" % self


def lincomb(cfg: AlgebraConfig, pairs: Iterable) -> Element:
    """Sum of c*x over (c, x) pairs."""
    acc: dict[Symbol, Scalar] = {}
    for c, x in pairs:
        c = Scalar.coerce(c)
        if c.is_zero():
            continue
        if x.cfg != cfg:
            raise ConfigMismatch("element of %s used in %s" % (x.cfg, cfg))
        for sym, v in x.items():
            acc[sym] = acc.get(sym, ZERO) + c * v
    return Element(cfg, acc)


# -- structure constants -----------------------------------------------------

@lru_cache(maxsize=None)
def _bracket_terms(cfg: AlgebraConfig, a: Symbol, b: Symbol) -> tuple:
    if a.kind == "C" or b.kind == "C":
        return ()
    terms = []
    if a.kind == "L" and b.kind == "L":
        m, n = Fraction(a.d, 2), Fraction(b.d, 2)
        if m != n:
            terms.append((Symbol("L", a.d + b.d), Scalar(m - n)))
        if cfg.with_center and a.d + b.d == 0 and m ** 3 != m:
            terms.append((Symbol("C", 0), Scalar((m ** 3 - m) / 12)))
    elif a.kind == "L" and b.kind == "G":
        m, r = Fraction(a.d, 2), Fraction(b.d, 2)
        if m / 2 != r:
            terms.append((Symbol("G", a.d + b.d), Scalar(m / 2 - r)))
    elif a.kind == "G" and b.kind == "L":
        # odd-even pair: super-skew gives [G_r, L_m] = -[L_m, G_r]
        return tuple((s, -c) for s, c in _bracket_terms(cfg, b, a))
    else:
        r = Fraction(a.d, 2)
        terms.append((Symbol("L", a.d + b.d), Scalar(2)))
        if cfg.with_center and a.d + b.d == 0 and r * r != Fraction(1, 4):
            terms.append((Symbol("C", 0), Scalar((r * r - Fraction(1, 4)) / 3)))
    return tuple(terms)


def bracket_basis(cfg: AlgebraConfig, a: Symbol, b: Symbol) -> Element:
    cfg.check(a)
    cfg.check(b)
    return Element._raw(cfg, dict(_bracket_terms(cfg, a, b)))


def bracket(cfg: AlgebraConfig, x: Element, y: Element) -> Element:
    """Bilinear superbracket [x, y]."""
    for e in (x, y):
        if e.cfg != cfg:
            raise ConfigMismatch("element of %s used in %s" % (e.cfg, cfg))
    acc: dict[Symbol, Scalar] = {}
    for a, ca in x.items():
        for b, cb in y.items():
            t = _bracket_terms(cfg, a, b)
            if not t:
                continue
            c = ca * cb
            for sym, v in t:
                acc[sym] = acc.get(sym, ZERO) + c * v
    return Element(cfg, acc)


def parity_of(x: Element) -> str:
    pars = {s.parity for s in x}
    if not pars:
        return "zero"
    if pars == {0}:
        return "even"
    if pars == {1}:
        return "odd"
    return "mixed"


def parity_int(x: Element) -> int:
    p = parity_of(x)
    if p == "even":
        return 0
    if p == "odd":
        return 1
    raise ValueError("element %s is not homogeneous" % x)


def degree_decompose(x: Element) -> list[tuple[Fraction, Element]]:
    blocks: dict[Fraction, dict] = {}
    for sym, c in x.items():
        blocks.setdefault(sym.degree, {})[sym] = c
    return [(deg, Element(x.cfg, blocks[deg])) for deg in sorted(blocks)]


def _sign(p: int) -> int:
    return -1 if p % 2 else 1


def super_jacobi_report(cfg: AlgebraConfig, window_radius) -> list[dict]:
    """Check graded Jacobi and super-skew on every basis triple in a window.

    Returns the violations; an empty list means the structure constants
    define a Lie superalgebra on the window.
    """
    syms = cfg.symbols(window_radius)
    table = {(a, b): _bracket_terms(cfg, a, b) for a in syms for b in syms}

    def br(a, terms):
        # [a, sum c*s] for a basis symbol a
        acc = {}
        for s, c in terms:
            for t, v in _bracket_terms(cfg, a, s):
                acc[t] = acc.get(t, ZERO) + c * v
        return acc

    violations = []
    for x in syms:
        for y in syms:
            sign = _sign(x.parity * y.parity)
            acc = dict(table[x, y])
            for t, v in table[y, x]:
                acc[t] = acc.get(t, ZERO) + v * sign
            defect = Element(cfg, acc)
            if defect:
                violations.append({"kind": "skew", "triple": (x, y), "defect": defect})
    for x in syms:
        px = x.parity
        for y in syms:
            py = y.parity
            xy = table[x, y]
            for z in syms:
                pz = z.parity
                acc: dict = {}
                for part, sign in ((br(x, table[y, z]), _sign(px * pz)),
                                   (br(y, table[z, x]), _sign(py * px)),
                                   (br(z, xy), _sign(pz * py))):
                    for t, v in part.items():
                        acc[t] = acc.get(t, ZERO) + (v if sign == 1 else -v)
                if any(not v.is_zero() for v in acc.values()):
                    violations.append({"kind": "jacobi", "triple": (x, y, z),
                                       "defect": Element(cfg, acc)})
    return violations
