"""Inner derivations, local-derivation witnesses and image intersections.

Every derivation of SVir[eps] is inner, so "is there a derivation D with
D(x) = v" becomes "is v in the image of y -> [y, x]", an exact linear
system on a finite ansatz window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import (AlgebraConfig, ConfigMismatch, Element, Symbol, bracket,
                      bracket_basis, parity_of)
from .linalg import (Matrix, OutOfWindow, Subspace, Window, intersect,
                     solve)
from .scalar import Scalar, ZERO


class DomainError(ValueError):
    """A map table is asked for a value outside the span of its inputs."""

    def __init__(self, missing, message=None):
        self.missing = sorted(missing, key=lambda s: s.sort_key() if isinstance(s, Symbol) else ())
        super().__init__(message or "map table is not defined on: %s" % ", ".join(map(str, self.missing)))


class BracketEscape(ValueError):
    def __init__(self, escaping):
        self.escaping = sorted(escaping)
        super().__init__("bracket output escapes the target window: %s"
                         % ", ".join(map(str, self.escaping)))


class MapTable:
    """A linear map known by its values on linearly independent inputs."""

    def __init__(self, cfg: AlgebraConfig, entries: Iterable[tuple[Element, Element]],
                 declared_parity: int | None = None):
        self.cfg = cfg
        self.entries = [(x, y) for x, y in entries]
        self.declared_parity = declared_parity
        for x, y in self.entries:
            if x.cfg != cfg or y.cfg != cfg:
                raise ConfigMismatch("map table entry outside %s" % cfg)
        self._direct: dict[Symbol, Element] | None = {}
        for x, y in self.entries:
            if len(x) == 1:
                (sym, c), = x.items()
                if sym not in self._direct:
                    self._direct[sym] = y.scale(c.inverse())
                    continue
            self._direct = None
            break
        if self._direct is None:
            self._window = Window(cfg, {s for x, _ in self.entries for s in x})
            cols = [self._window.vector(x) for x, _ in self.entries]
            a = Matrix.from_columns(cols, len(self._window))
            sol = solve(a, [ZERO] * len(self._window))
            if sol.kernel:
                raise ValueError("map table inputs are linearly dependent")
            self._matrix = a
        elif any(x.is_zero() for x, _ in self.entries):
            raise ValueError("map table inputs are linearly dependent")
        if declared_parity is not None:
            for x, y in self.entries:
                px, py = parity_of(x), parity_of(y)
                if px in ("even", "odd") and py != "zero":
                    want = "even" if ((px == "odd") + declared_parity) % 2 == 0 else "odd"
                    if py != want:
                        raise ValueError("entry %s -> %s violates declared parity %d"
                                         % (x, y, declared_parity))

    @classmethod
    def from_function(cls, cfg, inputs: Iterable[Element], fn, declared_parity=None):
        return cls(cfg, [(x, fn(x)) for x in inputs], declared_parity)

    @classmethod
    def on_symbols(cls, cfg, symbols: Iterable[Symbol], fn, declared_parity=None):
        return cls.from_function(cfg, [Element.basis(cfg, s) for s in symbols], fn, declared_parity)

    def __len__(self):
        return len(self.entries)

    def inputs(self) -> list[Element]:
        return [x for x, _ in self.entries]

    def domain_symbols(self) -> set[Symbol] | None:
        return set(self._direct) if self._direct is not None else None

    def defined_at(self, x: Element) -> bool:
        try:
            self(x)
        except DomainError:
            return False
        return True

    def __call__(self, x: Element) -> Element:
        if x.cfg != self.cfg:
            raise ConfigMismatch("element of %s passed to map on %s" % (x.cfg, self.cfg))
        if self._direct is not None:
            missing = [s for s in x if s not in self._direct]
            if missing:
                raise DomainError(missing)
            acc: dict = {}
            for s, c in x.items():
                for t, v in self._direct[s].items():
                    acc[t] = acc.get(t, ZERO) + c * v
            return Element(self.cfg, acc)
        try:
            b = self._window.vector(x)
        except OutOfWindow as exc:
            raise DomainError(exc.escaping) from None
        sol = solve(self._matrix, b)
        if not sol.solvable:
            raise DomainError([], "%s is not in the span of the table inputs" % x)
        acc = {}
        for c, (_, y) in zip(sol.particular, self.entries):
            for t, v in y.items():
                acc[t] = acc.get(t, ZERO) + c * v
        return Element(self.cfg, acc)

    def split_parity(self) -> tuple["MapTable", "MapTable"]:
        """Even and odd parts of a map whose inputs are homogeneous."""
        even, odd = [], []
        for x, y in self.entries:
            px = parity_of(x)
            if px not in ("even", "odd"):
                raise ValueError("cannot split a map at the mixed input %s" % x)
            p = 0 if px == "even" else 1
            even.append((x, y.part(p)))
            odd.append((x, y.part(1 - p)))
        return MapTable(self.cfg, even, 0), MapTable(self.cfg, odd, 1)

    def __sub__(self, other: "MapTable") -> "MapTable":
        return MapTable(self.cfg, [(x, y - other(x)) for x, y in self.entries])


def ad_table(cfg: AlgebraConfig, u: Element, symbols: Iterable[Symbol]) -> MapTable:
    """ad(u) = [u, -] restricted to the given basis symbols."""
    p = parity_of(u)
    par = {"even": 0, "odd": 1}.get(p)
    return MapTable.on_symbols(cfg, symbols, lambda x: bracket(cfg, u, x), par)


# -- ad-operator matrices ------------------------------------------------------

def reachable(cfg: AlgebraConfig, x: Element, ansatz: Iterable[Symbol]) -> set[Symbol]:
    out = set()
    for s in ansatz:
        out.update(bracket(cfg, Element.basis(cfg, s), x).support())
    return out


def ad_matrix(cfg: AlgebraConfig, x: Element, ansatz: Window, target: Window) -> Matrix:
    """Matrix of y -> [y, x] from ansatz coordinates to target coordinates."""
    cols = []
    escaping = set()
    for s in ansatz:
        img = bracket(cfg, Element.basis(cfg, s), x)
        bad = [t for t in img if t not in target]
        if bad:
            escaping.update(bad)
            continue
        cols.append(target.vector(img))
    if escaping:
        raise BracketEscape(escaping)
    return Matrix.from_columns(cols, len(target))


# -- Leibniz rule --------------------------------------------------------------

def leibniz_violations(d: MapTable, check_radius) -> list[dict]:
    """Pairs of basis symbols where D[x,y] != [Dx,y] + (-1)^{|D||x|}[x,Dy].

    Maps without a declared parity are split into even and odd parts first.
    """
    cfg = d.cfg
    if d.declared_parity is None:
        even, odd = d.split_parity()
        return leibniz_violations(even, check_radius) + leibniz_violations(odd, check_radius)
    syms = cfg.symbols(check_radius)
    basis = {s: Element.basis(cfg, s) for s in syms}
    needed = set(syms)
    for x in syms:
        for y in syms:
            needed.update(bracket_basis(cfg, x, y).support())
    missing = [s for s in needed if not d.defined_at(Element.basis(cfg, s))]
    if missing:
        raise DomainError(missing)
    image = {s: d(basis[s]) for s in syms}
    out = []
    pd = d.declared_parity
    for x in syms:
        for y in syms:
            lhs = d(bracket_basis(cfg, x, y))
            rhs = bracket(cfg, image[x], basis[y])
            second = bracket(cfg, basis[x], image[y])
            rhs = rhs - second if (pd * x.parity) % 2 else rhs + second
            if lhs != rhs:
                out.append({"pair": (x, y), "parity": pd, "defect": lhs - rhs})
    return out


# -- inner witnesses -----------------------------------------------------------

@dataclass
class WitnessReport:
    status: str  # "witness" | "none_in_window" | "out_of_scope"
    ansatz: Window
    residual: Element
    witness: Element | None = None
    # for none_in_window: per-entry functionals that kill every [s, input_j]
    # for s in the ansatz but not the outputs
    obstruction: list[tuple[int, dict]] = field(default_factory=list)
    note: str = ""

    @property
    def found(self) -> bool:
        return self.status == "witness"


def _degrees(x: Element) -> set[Fraction]:
    return {s.degree for s in x}


def inner_witness(d: MapTable, ansatz: Window) -> WitnessReport:
    """Solve [y, input_j] = output_j for y supported on the ansatz.

    The returned witness is the particular solution with all free
    coordinates zero. Target windows are taken to be exactly the reachable
    support, so bracket escape cannot occur.
    """
    cfg = d.cfg
    if ansatz.cfg != cfg:
        raise ConfigMismatch("ansatz window of %s for map on %s" % (ansatz.cfg, cfg))
    zero = cfg.zero()
    ansatz_degrees = {s.degree for s in ansatz}
    for x, v in d.entries:
        for dv in _degrees(v):
            if not any(dv - dx in ansatz_degrees for dx in _degrees(x)):
                return WitnessReport("out_of_scope", ansatz, v, note=(
                    "output degree %s of %s is unreachable from ansatz degrees" % (dv, x)))
    blocks = []
    rows: list[list[Scalar]] = []
    rhs: list[Scalar] = []
    for x, v in d.entries:
        target = Window(cfg, reachable(cfg, x, ansatz) | set(v.support()))
        a = ad_matrix(cfg, x, ansatz, target)
        start = len(rows)
        rows.extend(a.entries)
        rhs.extend(target.vector(v))
        blocks.append((start, target))
    if not rows:
        return WitnessReport("witness", ansatz, zero, witness=zero)
    system = Matrix(rows, len(ansatz))
    sol = solve(system, rhs)
    if sol.solvable:
        y = ansatz.element(sol.particular)
        return WitnessReport("witness", ansatz, zero, witness=y)
    lam = sol.obstruction
    obstruction = []
    residual = None
    for j, (start, target) in enumerate(blocks):
        part = lam[start:start + len(target)]
        if any(not c.is_zero() for c in part):
            functional = {s: c for s, c in zip(target.symbols, part) if not c.is_zero()}
            obstruction.append((j, functional))
            if residual is None:
                residual = Element(cfg, functional)
    return WitnessReport("none_in_window", ansatz, residual, obstruction=obstruction,
                         note="no y on the ansatz window; window-relative verdict")


def check_obstruction(d: MapTable, report: WitnessReport) -> bool:
    """Re-verify a none_in_window certificate using brackets only."""
    if report.status != "none_in_window":
        return False
    cfg = d.cfg
    for s in report.ansatz:
        es = Element.basis(cfg, s)
        total = ZERO
        for j, fn in report.obstruction:
            img = bracket(cfg, es, d.entries[j][0])
            for t, c in fn.items():
                total = total + c * img.coeff(t)
        if not total.is_zero():
            return False
    value = ZERO
    for j, fn in report.obstruction:
        out = d.entries[j][1]
        for t, c in fn.items():
            value = value + c * out.coeff(t)
    return not value.is_zero()


def check_witness(d: MapTable, y: Element) -> bool:
    return all(bracket(d.cfg, y, x) == v for x, v in d.entries)


def local_der_at(cfg: AlgebraConfig, x: Element, v: Element, ansatz: Window) -> WitnessReport:
    """Is v = D(x) for some inner derivation D = ad(y), y on the ansatz?"""
    if x.cfg != cfg or v.cfg != cfg:
        raise ConfigMismatch("elements must belong to %s" % cfg)
    if x.is_zero():
        if v.is_zero():
            return WitnessReport("witness", ansatz, cfg.zero(), witness=cfg.zero())
        return WitnessReport("none_in_window", ansatz, v, note="every derivation kills 0")
    return inner_witness(MapTable(cfg, [(x, v)]), ansatz)


# -- image intersection --------------------------------------------------------

def max_degree(elements: Iterable[Element]) -> Fraction:
    return max((abs(s.degree) for e in elements for s in e), default=Fraction(0))


def padded_ansatz(cfg: AlgebraConfig, probes: Sequence[Element], target_radius) -> Window:
    """Degrees [-(M+N), M+N] for targets of radius M and probes of degree <= N."""
    r = Fraction(target_radius) + max_degree(probes)
    return Window.degree(cfg, r)


def image_of(cfg: AlgebraConfig, probe: Element, ansatz: Window, target: Window) -> Subspace:
    """Image(y -> [y, probe]) intersected with the span of target."""
    big = target.union(reachable(cfg, probe, ansatz))
    img = Subspace(big, ad_matrix(cfg, probe, ansatz, big).transpose().entries)
    inside = Subspace(big, [big.vector(Element.basis(cfg, s)) for s in target])
    return intersect(img, inside).restrict(target)


def image_intersection(cfg: AlgebraConfig, probes: Sequence[Element], ansatz: Window | None = None,
                       target: Window | None = None, target_radius=None) -> Subspace:
    """The intersection over probes p of Image(y -> [y, p]) inside target."""
    probes = list(probes)
    if not probes:
        raise ValueError("image_intersection needs at least one probe")
    if target is None:
        if target_radius is None:
            raise ValueError("give a target window or a target radius")
        target = Window.degree(cfg, target_radius)
    if ansatz is None:
        ansatz = padded_ansatz(cfg, probes, max_degree(Element.basis(cfg, s) for s in target))
    result = None
    for p in probes:
        img = image_of(cfg, p, ansatz, target)
        result = img if result is None else intersect(result, img)
    return result


def probe_family(base: Element, direction: Element, xs: Iterable) -> list[Element]:
    """[base + x*direction for x in xs]."""
    return [base + direction.scale(x) for x in xs]


def intersection_preimages(cfg, space: Subspace, probes: Sequence[Element], ansatz: Window):
    """For each basis vector v and probe p, a y on the ansatz with [y, p] = v."""
    out = []
    for v in space.basis():
        row = []
        for p in probes:
            rep = local_der_at(cfg, p, v, ansatz)
            row.append(rep.witness if rep.found else None)
        out.append((v, row))
    return out


# -- normalization pipeline ------------------------------------------------------

@dataclass
class PipelineResult:
    status: str  # "inner" | "not_inner" | "shape_violation" | "no_witness"
    witness: Element | None
    residuals: list[tuple[Element, Element]]
    steps: dict = field(default_factory=dict)

    @property
    def clean(self) -> bool:
        return self.status == "inner" and all(r.is_zero() for _, r in self.residuals)


def normalization_pipeline(d: MapTable, ansatz: Window | None = None) -> PipelineResult:
    """Strip an inner part off d by normalizing at L(0) and then at L(1).

    1. y0 with d(L0) = [y0, L0]; replace d by d - ad(y0).
    2. d(L1) = c L1 + e G1 (only c on the half-integer grid); replace d by
       d + c ad(L0) + 2e ad(G0), which kills d(L1) and keeps d(L0) = 0.
    3. What is left must vanish on every input of d.
    The accumulated witness is y0 - c L0 - 2e G0.
    """
    cfg = d.cfg
    L0, L1 = cfg.L(0), cfg.L(1)
    required = [L0, L1] + ([] if cfg.half else [cfg.G(0), cfg.G(1)])
    missing = [s for e in required if not d.defined_at(e) for s in e]
    if missing:
        raise DomainError(missing)
    v0 = d(L0)
    if ansatz is None:
        ansatz = Window.degree(cfg, max(max_degree([v0]), 1))
    rep = inner_witness(MapTable(cfg, [(L0, v0)]), ansatz)
    if not rep.found:
        return PipelineResult("no_witness", None, [], {"step": 1, "value": v0})
    y0 = rep.witness
    steps = {"y0": y0}
    v1 = d(L1) - bracket(cfg, y0, L1)
    shape = [s for s in v1 if s not in (L1.support()[0],) and (cfg.half or s != cfg.G(1).support()[0])]
    if shape:
        return PipelineResult("shape_violation", None, [], {"y0": y0, "value_at_L1": v1})
    c = v1.coeff(L1.support()[0])
    e = ZERO if cfg.half else v1.coeff(cfg.G(1).support()[0])
    steps["c"] = c
    steps["d"] = e
    w = y0 - L0.scale(c)
    if not cfg.half:
        w = w - cfg.G(0).scale(2 * e)
    residuals = [(x, v - bracket(cfg, w, x)) for x, v in d.entries]
    status = "inner" if all(r.is_zero() for _, r in residuals) else "not_inner"
    return PipelineResult(status, w, residuals, steps)
