"""Parser and canonical printer for element text.

Grammar::

    element := ['-'] term (('+'|'-') term)*
    term    := [coeff '*'] gen | coeff
    gen     := 'L(' int ')' | 'G(' int ['/2'] ')' | 'C'
    coeff   := rational | '(' complex ')'

A bare coefficient is only accepted when it is zero, since the algebra
has no unit element.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import AlgebraConfig, ConfigMismatch, Element, Symbol
from .scalar import Scalar, parse_scalar, format_scalar, ONE


class ParseError(ValueError):
    def __init__(self, message, text="", pos=None):
        self.text = text
        self.pos = pos
        if pos is not None:
            message = "%s at position %d in %r" % (message, pos, text)
        super().__init__(message)


class GridMismatch(ParseError, ConfigMismatch):
    pass


def format_coeff(c: Scalar) -> str:
    s = format_scalar(c)
    if c.is_real() and c.re.denominator != 1:
        return "(%s)" % s
    return s


def format_term(sym: Symbol, c: Scalar, first: bool) -> str:
    neg = c.is_real() and c.re < 0
    mag = -c if neg else c
    body = str(sym) if mag == ONE else "%s*%s" % (format_coeff(mag), sym)
    if first:
        return "-" + body if neg else body
    return (" - " if neg else " + ") + body


def format_element(x: Element) -> str:
    if x.is_zero():
        return "0"
    return "".join(format_term(s, c, i == 0) for i, (s, c) in enumerate(x.items()))


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<gen>[LG]\s*\(\s*[+-]?\s*\d+\s*(?:/\s*\d+\s*)?\)|C\b|C$)
  | (?P<cplx>\([^()]*\))
  | (?P<rat>\d+(?:\s*/\s*\d+)?)
  | (?P<op>[+\-*])
""", re.VERBOSE)

_GEN = re.compile(r"([LG])\s*\(\s*([+-]?)\s*(\d+)\s*(?:/\s*(\d+)\s*)?\)")


def _tokens(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character %r" % text[pos], text, pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    return out


def _symbol(cfg: AlgebraConfig, tok: str, text: str, pos: int) -> Symbol:
    if tok.startswith("C"):
        if not cfg.with_center:
            raise GridMismatch("C does not exist in centerless %s" % cfg, text, pos)
        return Symbol("C", 0)
    m = _GEN.fullmatch(tok.strip())
    kind, sign, num, den = m.groups()
    idx = Fraction(int(num), int(den) if den else 1)
    if sign == "-":
        idx = -idx
    if kind == "L":
        if idx.denominator != 1:
            raise GridMismatch("L index must be an integer, got %s" % idx, text, pos)
        return Symbol("L", 2 * idx.numerator)
    if (2 * idx).denominator != 1:
        raise GridMismatch("G index %s is not in Z/2" % idx, text, pos)
    sym = Symbol("G", int(2 * idx))
    if not cfg.valid(sym):
        grid = "Z+1/2" if cfg.half else "Z"
        raise GridMismatch("G(%s) is not on the grid %s of %s" % (idx, grid, cfg), text, pos)
    return sym


def parse_element(cfg: AlgebraConfig, text: str) -> Element:
    toks = _tokens(text)
    if not toks:
        raise ParseError("empty element text", text, 0)
    acc: dict[Symbol, Scalar] = {}
    i = 0
    sign = 1
    if toks[0][0] == "op" and toks[0][1] in "+-":
        sign = -1 if toks[0][1] == "-" else 1
        i = 1
    while True:
        if i >= len(toks):
            raise ParseError("expected a term", text, len(text))
        kind, tok, pos = toks[i]
        coeff = ONE
        have_coeff = False
        if kind in ("rat", "cplx"):
            try:
                coeff = parse_scalar(tok)
            except ValueError:
                raise ParseError("malformed coefficient %r" % tok, text, pos) from None
            have_coeff = True
            i += 1
            if i < len(toks) and toks[i][0] == "op" and toks[i][1] == "*":
                i += 1
                if i >= len(toks) or toks[i][0] != "gen":
                    raise ParseError("expected a generator after '*'", text,
                                     toks[i][2] if i < len(toks) else len(text))
                kind, tok, pos = toks[i]
            else:
                if not coeff.is_zero():
                    raise ParseError("bare nonzero scalar %r is not an element" % tok, text, pos)
                kind = None
        if kind == "gen":
            sym = _symbol(cfg, tok, text, pos)
            acc[sym] = acc.get(sym, Scalar(0)) + coeff * sign
            i += 1
        elif kind is not None or not have_coeff:
            raise ParseError("expected a term, got %r" % tok, text, pos)
        if i >= len(toks):
            break
        kind, tok, pos = toks[i]
        if kind != "op" or tok not in "+-":
            raise ParseError("expected '+' or '-', got %r" % tok, text, pos)
        sign = -1 if tok == "-" else 1
        i += 1
    return Element(cfg, acc)


def parse_symbol(cfg: AlgebraConfig, text: str) -> Symbol:
    x = parse_element(cfg, text)
    if len(x) != 1 or x.coeff(x.support()[0]) != ONE:
        raise ParseError("expected a single basis symbol, got %r" % text, text, 0)
    return x.support()[0]
