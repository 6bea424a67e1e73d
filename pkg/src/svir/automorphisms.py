"""The automorphism family sigma(L_m) = eps a^m L_{eps m}, sigma(G_r) = s a^r G_{eps r},
sigma(C) = eps C, and decision procedures for local and 2-local automorphisms.

The odd factor s (with s^2 = eps) is an explicit parameter, so every branch
of the square root is its own map. On the half-integer grid a^r needs a
square root h of a; (s, h) and (-s, -h) give the same map and the
representative with s in {1, i} is kept.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .algebra import AlgebraConfig, ConfigMismatch, Element, Symbol, bracket, bracket_basis
from .derivations import DomainError, MapTable
from .scalar import I, ONE, Scalar, int_pow, nth_roots


class InvalidParams(ValueError):
    pass


class ProbeSetIncomplete(ValueError):
    def __init__(self, missing):
        self.missing = list(missing)
        super().__init__("probe set incomplete; table is not defined at: %s"
                         % ", ".join(map(str, self.missing)))


@dataclass(frozen=True)
class AutParams:
    eps: int
    a: Scalar
    s: Scalar
    h: Scalar | None = None

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise InvalidParams("eps must be +1 or -1")
        object.__setattr__(self, "a", Scalar.coerce(self.a))
        object.__setattr__(self, "s", Scalar.coerce(self.s))
        if self.h is not None:
            object.__setattr__(self, "h", Scalar.coerce(self.h))
        if self.a.is_zero():
            raise InvalidParams("a must be nonzero")
        if self.s * self.s != self.eps:
            raise InvalidParams("s^2 must equal eps (s=%s, eps=%d)" % (self.s, self.eps))
        if self.h is not None and self.h * self.h != self.a:
            raise InvalidParams("h^2 must equal a (h=%s, a=%s)" % (self.h, self.a))

    def canonical(self) -> "AutParams":
        if self.h is not None and self.s not in (ONE, I):
            return AutParams(self.eps, self.a, -self.s, -self.h)
        return self

    def for_config(self, cfg: AlgebraConfig) -> "AutParams":
        """Validate against a grid: h is required on the half-integer grid and dropped otherwise."""
        if cfg.half:
            if self.h is None:
                roots = nth_roots(self.a, 2)
                if not roots:
                    raise InvalidParams("a=%s has no square root in Q(i); unrepresentable on the "
                                        "half-integer grid" % self.a)
                raise InvalidParams("half-integer grid needs h with h^2 = a (candidates: %s)"
                                    % ", ".join(map(str, roots)))
            return self.canonical()
        if self.h is not None:
            return AutParams(self.eps, self.a, self.s)
        return self

    def to_json(self) -> dict:
        return {"eps": "+1" if self.eps == 1 else "-1", "a": str(self.a), "s": str(self.s),
                "h": None if self.h is None else str(self.h)}

    @classmethod
    def from_json(cls, doc: dict) -> "AutParams":
        eps = {"+1": 1, "1": 1, "-1": -1}.get(str(doc["eps"]).strip())
        if eps is None:
            raise InvalidParams("eps must be \"+1\" or \"-1\"")
        h = doc.get("h")
        return cls(eps, Scalar.coerce(str(doc["a"])), Scalar.coerce(str(doc["s"])),
                   None if h is None else Scalar.coerce(str(h)))

    def __str__(self):
        text = "(eps=%+d, a=%s, s=%s" % (self.eps, self.a, self.s)
        if self.h is not None:
            text += ", h=%s" % self.h
        return text + ")"


def identity_params(cfg: AlgebraConfig) -> AutParams:
    return AutParams(1, ONE, ONE, ONE if cfg.half else None)


def omega_params(cfg: AlgebraConfig) -> AutParams:
    """The grading involution as a member of the family."""
    if cfg.half:
        return AutParams(1, ONE, ONE, -ONE)
    return AutParams(1, ONE, -ONE)


def _power(cfg: AlgebraConfig, p: AutParams, sym: Symbol) -> Scalar:
    if cfg.half:
        return int_pow(p.h, sym.d)
    return int_pow(p.a, sym.d // 2)


def apply_aut(cfg: AlgebraConfig, p: AutParams, x: Element) -> Element:
    if x.cfg != cfg:
        raise ConfigMismatch("element of %s, automorphism on %s" % (x.cfg, cfg))
    if cfg.half and p.h is None:
        raise InvalidParams("half-integer grid needs h with h^2 = a")
    terms = {}
    for sym, c in x.items():
        if sym.kind == "C":
            terms[sym] = c * p.eps
        elif sym.kind == "L":
            terms[Symbol("L", p.eps * sym.d)] = c * p.eps * _power(cfg, p, sym)
        else:
            terms[Symbol("G", p.eps * sym.d)] = c * p.s * _power(cfg, p, sym)
    return Element(cfg, terms)


def aut_table(cfg: AlgebraConfig, p: AutParams, radius) -> MapTable:
    return MapTable.on_symbols(cfg, cfg.symbols(radius), lambda x: apply_aut(cfg, p, x), 0)


def compose(p1: AutParams, p2: AutParams) -> AutParams:
    """Parameters of sigma_{p1} o sigma_{p2}."""
    if (p1.h is None) != (p2.h is None):
        raise InvalidParams("cannot compose parameters from different grids")
    e2 = p2.eps
    a = p2.a * int_pow(p1.a, e2)
    h = None if p1.h is None else p2.h * int_pow(p1.h, e2)
    return AutParams(p1.eps * e2, a, p1.s * p2.s, h).canonical()


def invert(p: AutParams) -> AutParams:
    h = None if p.h is None else int_pow(p.h, -p.eps)
    return AutParams(p.eps, int_pow(p.a, -p.eps), p.s * p.eps, h).canonical()


def grading_involution(cfg: AlgebraConfig, radius) -> MapTable:
    """omega: identity on L and C, -1 on G."""
    def omega(x):
        return Element(cfg, {s: (-c if s.kind == "G" else c) for s, c in x.items()})
    return MapTable.on_symbols(cfg, cfg.symbols(radius), omega, 0)


@dataclass
class AutCheck:
    ok: bool
    violation: dict | None = None

    def __bool__(self):
        return self.ok


def is_automorphism_table(t: MapTable, check_radius) -> AutCheck:
    """Exact check of t([x,y]) == [t x, t y] on basis pairs within the radius."""
    cfg = t.cfg
    syms = cfg.symbols(check_radius)
    needed = set(syms)
    for x in syms:
        for y in syms:
            needed.update(bracket_basis(cfg, x, y).support())
    missing = [s for s in needed if not t.defined_at(Element.basis(cfg, s))]
    if missing:
        raise DomainError(missing)
    image = {s: t(Element.basis(cfg, s)) for s in syms}
    for x in syms:
        for y in syms:
            lhs = t(bracket_basis(cfg, x, y))
            rhs = bracket(cfg, image[x], image[y])
            if lhs != rhs:
                return AutCheck(False, {"pair": (x, y), "map_of_bracket": lhs,
                                        "bracket_of_maps": rhs})
    return AutCheck(True)


# -- fitting ---------------------------------------------------------------------

@dataclass(frozen=True)
class FitCandidate:
    """A branch of the family; a (and h) is None when it is unconstrained."""
    eps: int
    s: Scalar
    a: Scalar | None
    h: Scalar | None = None

    @property
    def free(self) -> bool:
        return self.a is None

    def params(self) -> AutParams:
        if self.a is None:
            raise InvalidParams("parameter a is free in this branch")
        return AutParams(self.eps, self.a, self.s, self.h)


@dataclass
class FitResult:
    cfg: AlgebraConfig
    candidates: list[FitCandidate]
    notes: list[str] = field(default_factory=list)

    @property
    def realizable(self) -> bool:
        return bool(self.candidates)

    def __bool__(self):
        return self.realizable

    def params(self) -> list[AutParams]:
        return [c.params() for c in self.candidates if not c.free]

    def families(self) -> list[dict]:
        """Group candidates that differ only in s."""
        groups: dict = {}
        for c in self.candidates:
            key = (c.eps, c.a, c.h)
            groups.setdefault(key, []).append(c.s)
        out = []
        for (eps, a, h), ss in groups.items():
            out.append({"eps": eps, "a": a, "h": h, "s": sorted(ss, key=lambda z: (z.re, z.im))})
        return out

    def describe(self) -> str:
        if not self.candidates:
            return "not realizable" + ("; " + "; ".join(self.notes) if self.notes else "")
        parts = []
        for f in self.families():
            a = "free" if f["a"] is None else str(f["a"])
            s = f["s"][0] if len(f["s"]) == 1 else "{%s}" % ", ".join(map(str, f["s"]))
            text = "eps=%+d, a=%s, s%s%s" % (f["eps"], a, "=" if len(f["s"]) == 1 else " in ", s)
            if f["h"] is not None:
                text += ", h=%s" % f["h"]
            elif self.cfg.half and f["a"] is None:
                text += ", h free"
            parts.append("{" + text + "}")
        return " | ".join(parts)


def _solve_powers(eqs: list[tuple[int, Scalar]]):
    """All z != 0 in Q(i) with z**k == t for every (k, t); None means unconstrained."""
    eqs = [(k, t) for k, t in eqs]
    for k, t in eqs:
        if k == 0 and t != ONE:
            return []
    eqs = [(k, t) for k, t in eqs if k != 0]
    if not eqs:
        return None
    # extended gcd over the exponents: z**g is a known product
    g, rhs = 0, ONE
    for k, t in eqs:
        if g == 0:
            g, rhs = k, t
            continue
        d, u, v = _egcd(g, k)
        rhs = int_pow(rhs, u) * int_pow(t, v)
        g = d
    if g < 0:
        g, rhs = -g, rhs.inverse()
    roots = nth_roots(rhs, g)
    return [z for z in roots if not z.is_zero() and all(int_pow(z, k) == t for k, t in eqs)]


def _egcd(a, b):
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    d, u, v = _egcd(b, a % b)
    return d, v, u - (a // b) * v


def _branches(cfg: AlgebraConfig):
    if cfg.half:
        return [(1, ONE), (-1, I)]
    return [(1, ONE), (1, -ONE), (-1, I), (-1, -I)]


def fit_pairs(cfg: AlgebraConfig, pairs: Sequence[tuple[Element, Element]]) -> FitResult:
    """Every family member sending each x to its image simultaneously."""
    for x, y in pairs:
        if x.cfg != cfg or y.cfg != cfg:
            raise ConfigMismatch("fit on %s with foreign elements" % cfg)
    candidates = []
    notes = []
    for eps, s in _branches(cfg):
        eqs = []
        ok = True
        for x, img in pairs:
            hit = set()
            for sym, c in x.items():
                if sym.kind == "C":
                    tgt = sym
                    ok = img.coeff(tgt) == c * eps
                elif sym.kind == "L":
                    tgt = Symbol("L", eps * sym.d)
                    v = img.coeff(tgt)
                    ok = not v.is_zero()
                    if ok:
                        k = sym.d if cfg.half else sym.d // 2
                        eqs.append((k, v / (c * eps)))
                else:
                    tgt = Symbol("G", eps * sym.d)
                    v = img.coeff(tgt)
                    ok = not v.is_zero()
                    if ok:
                        k = sym.d if cfg.half else sym.d // 2
                        eqs.append((k, v / (c * s)))
                hit.add(tgt)
                if not ok:
                    break
            if ok and any(t not in hit for t in img):
                ok = False
            if not ok:
                break
        if not ok:
            continue
        zs = _solve_powers(eqs)
        if zs is None:
            candidates.append(FitCandidate(eps, s, None, None))
        elif cfg.half:
            for h in zs:
                candidates.append(FitCandidate(eps, s, h * h, h))
            if not zs:
                # report when a exists but has no square root in Q(i)
                even = [(k // 2, t) for k, t in eqs if k % 2 == 0]
                if len(even) == len(eqs) and _solve_powers(even):
                    notes.append("eps=%+d: a exists but is not a square in Q(i)" % eps)
        else:
            candidates.extend(FitCandidate(eps, s, a) for a in zs)
    return FitResult(cfg, candidates, notes)


def fit_single(cfg: AlgebraConfig, x: Element, image: Element) -> FitResult:
    if x.is_zero():
        raise ValueError("cannot fit an automorphism at 0")
    return fit_pairs(cfg, [(x, image)])


# -- probe sets ------------------------------------------------------------------

def _g_indices(cfg: AlgebraConfig, radius) -> list[Fraction]:
    return [s.degree for s in cfg.symbols(radius, "G")]


def local_probes(cfg: AlgebraConfig, radius) -> list[Element]:
    """Probes for the local decision: L(1), L(m), L(m)+L(1), C, C+L(1), G(r),
    G(r)+L(1) and the coupled odd probes G(r)+G(r+1)+L(1)."""
    L1 = cfg.L(1)
    R = int(radius)
    probes = [L1]
    probes += [cfg.L(m) for m in range(-R, R + 1) if m != 1]
    probes += [cfg.L(m) + L1 for m in range(-R, R + 1) if m != 1]
    if cfg.with_center:
        probes += [cfg.C(), cfg.C() + L1]
    gs = _g_indices(cfg, radius)
    probes += [cfg.G(r) for r in gs]
    probes += [cfg.G(r) + L1 for r in gs]
    probes += [cfg.G(r) + cfg.G(r + 1) + L1 for r in gs if r + 1 in gs]
    return probes


def two_local_budget(cfg: AlgebraConfig, radius) -> list[Element]:
    """Basis symbols, then G(r)+G(r+1) pairs, then G(r)+L(1)."""
    probes = [Element.basis(cfg, s) for s in cfg.symbols(radius)]
    gs = _g_indices(cfg, radius)
    probes += [cfg.G(r) + cfg.G(r + 1) for r in gs if r + 1 in gs]
    probes += [cfg.G(r) + cfg.L(1) for r in gs]
    return probes


# -- decisions -------------------------------------------------------------------

@dataclass
class AutVerdict:
    status: str  # automorphism | pointwise_failure | global_inconsistency | pair_failure | underdetermined
    params: AutParams | None = None
    probe: Element | None = None
    image: Element | None = None
    pair: tuple | None = None
    reason: str = ""
    checked: list[tuple[Element, Element]] = field(default_factory=list)

    @property
    def is_automorphism(self) -> bool:
        return self.status == "automorphism"


def _matches(cfg, p: AutParams, pairs) -> bool:
    return all(apply_aut(cfg, p, x) == y for x, y in pairs)


def _conflicting_pair(cfg, anchor, values):
    for z, v in values:
        if not fit_pairs(cfg, [anchor, (z, v)]):
            return (anchor[0], z)
    for (z1, v1), (z2, v2) in combinations(values, 2):
        if not fit_pairs(cfg, [anchor, (z1, v1), (z2, v2)]):
            return (z1, z2)
    return None


def local_aut_decide(t: MapTable, radius=3, probes: Sequence[Element] | None = None) -> AutVerdict:
    """Decide whether a linear map, known on the probe set, is a family member.

    Every probe must be pointwise realizable (the local hypothesis); then the
    fit at L(1) leaves finitely many candidates, and the verdict is the one
    that reproduces the whole table.
    """
    cfg = t.cfg
    probes = list(probes) if probes is not None else local_probes(cfg, radius)
    missing = [z for z in probes if not t.defined_at(z)]
    if missing:
        raise ProbeSetIncomplete(missing)
    values = [(z, t(z)) for z in probes]
    for z, v in values:
        if not fit_single(cfg, z, v):
            return AutVerdict("pointwise_failure", probe=z, image=v,
                              reason="no automorphism sends %s to %s" % (z, v))
    L1 = cfg.L(1)
    anchor = (L1, t(L1))
    everything = values + [(x, y) for x, y in t.entries]
    for cand in fit_single(cfg, L1, anchor[1]).params():
        if _matches(cfg, cand, everything):
            return AutVerdict("automorphism", params=cand.for_config(cfg), checked=everything)
    pair = _conflicting_pair(cfg, anchor, values)
    return AutVerdict("global_inconsistency", pair=pair,
                      reason="every probe is realizable but no single automorphism fits all")


Oracle = Callable[[Element], Element]


class TableOracle:
    """Explicit values at chosen elements, falling back to a family member elsewhere."""

    def __init__(self, cfg: AlgebraConfig, values: dict | Iterable = (), fallback: AutParams | None = None):
        self.cfg = cfg
        self.values = dict(values)
        self.fallback = fallback

    def __call__(self, x: Element) -> Element:
        if x in self.values:
            return self.values[x]
        if self.fallback is None:
            raise DomainError(list(x.support()))
        return apply_aut(self.cfg, self.fallback, x)


def two_local_recover(cfg: AlgebraConfig, oracle: Oracle, budget: Sequence[Element] | None = None,
                      radius=3) -> AutVerdict:
    """Recover a 2-local automorphism from value queries.

    phi(L1) leaves finitely many candidates; every pair (L1, z) must be
    matched by one automorphism, and a single candidate must survive all z.
    """
    budget = list(budget) if budget is not None else two_local_budget(cfg, radius)
    L1 = cfg.L(1)
    v1 = oracle(L1)
    cands = fit_single(cfg, L1, v1).params()
    if not cands:
        return AutVerdict("pair_failure", pair=(L1, L1), reason="not-realizable: no automorphism "
                          "sends L(1) to %s" % v1)
    checked = [(L1, v1)]
    survivors = list(cands)
    for z in budget:
        vz = oracle(z)
        checked.append((z, vz))
        if not fit_pairs(cfg, [(L1, v1), (z, vz)]):
            return AutVerdict("pair_failure", pair=(L1, z), probe=z, image=vz,
                              reason="no automorphism matches both L(1) -> %s and %s -> %s" % (v1, z, vz),
                              checked=checked)
        survivors = [c for c in survivors if apply_aut(cfg, c, z) == vz]
    if len(survivors) == 1:
        return AutVerdict("automorphism", params=survivors[0].for_config(cfg), checked=checked)
    if not survivors:
        pair = _conflicting_pair(cfg, (L1, v1), checked[1:])
        return AutVerdict("pair_failure", pair=pair, checked=checked,
                          reason="each pair is realizable but no single automorphism fits the budget")
    return AutVerdict("underdetermined", checked=checked,
                      reason="budget does not separate %s" % ", ".join(map(str, survivors)))


def brute_fit(cfg: AlgebraConfig, x: Element, image: Element) -> list[FitCandidate]:
    """Independent fit: roots from one coefficient, confirmed by apply_aut.

    Slower than fit_pairs and only used to cross-check it.
    """
    out = []
    for eps, s in _branches(cfg):
        anchor = None
        for sym, c in x.items():
            if sym.kind != "C" and sym.d != 0:
                anchor = (sym, c)
                break
        if anchor is None:
            trial = [AutParams(eps, a, s, h) for a, h in
                     ((ONE, ONE), (Scalar(4), Scalar(2)))] if cfg.half else \
                [AutParams(eps, a, s) for a in (ONE, Scalar(2))]
            if all(apply_aut(cfg, p, x) == image for p in trial):
                out.append(FitCandidate(eps, s, None, None))
            continue
        sym, c = anchor
        tgt = Symbol(sym.kind, eps * sym.d)
        factor = c * (eps if sym.kind == "L" else s)
        t = image.coeff(tgt) / factor
        if t.is_zero():
            continue
        k = sym.d if cfg.half else sym.d // 2
        roots = nth_roots(t if k > 0 else t.inverse(), abs(k))
        for z in roots:
            p = AutParams(eps, z * z, s, z) if cfg.half else AutParams(eps, z, s)
            if apply_aut(cfg, p, x) == image:
                out.append(FitCandidate(eps, s, p.a, p.h))
    return out
