"""Exact Gaussian rationals: the field Q(i) with Fraction components."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational


class ScalarError(ArithmeticError):
    pass


class ZeroDivision(ScalarError, ZeroDivisionError):
    pass


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError("cannot convert %r to an exact rational" % (v,))


class Scalar:
    """An element re + im*i of Q(i).

    Components are Fractions, so they are always reduced with a positive
    denominator and equality is structural.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, Scalar):
            assert im == 0
            re, im = re.re, re.im
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def coerce(cls, v) -> "Scalar":
        if isinstance(v, Scalar):
            return v
        if isinstance(v, complex):
            raise TypeError("floating complex values are not exact")
        if isinstance(v, str):
            return parse_scalar(v)
        return cls(v)

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Scalar):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            return Scalar(self.re + other, self.im)
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            return Scalar(self.re - other, self.im)
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            return Scalar(self.re * other, self.im * other)
        a, b, c, d = self.re, self.im, other.re, other.im
        if b == 0 and d == 0:
            return Scalar(a * c)
        return Scalar(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """|z|^2, a nonnegative rational."""
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivision("division by zero in Q(i)")
        if self.im == 0:
            return Scalar(1 / self.re)
        n = self.norm()
        return Scalar(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = Scalar(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, exponent):
        return int_pow(self, exponent)

    # -- text --------------------------------------------------------------

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return "Scalar(%s)" % format_scalar(self)

    def bit_size(self) -> int:
        """Rough size measure used for pivot selection."""
        return (abs(self.re.numerator).bit_length() + self.re.denominator.bit_length()
                + abs(self.im.numerator).bit_length() + self.im.denominator.bit_length())


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)


def field_arith(op: str, lhs, rhs) -> Scalar:
    lhs, rhs = Scalar.coerce(lhs), Scalar.coerce(rhs)
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs / rhs
    raise ValueError("unknown field operation %r" % op)


def int_pow(base, exponent: int) -> Scalar:
    """Exact integer power; int_pow(b, 0) == 1 for every b, including 0."""
    base = Scalar.coerce(base)
    if not isinstance(exponent, int):
        raise TypeError("exponent must be an int")
    if exponent == 0:
        return ONE
    if exponent < 0:
        if base.is_zero():
            raise ZeroDivision("zero base with negative exponent %d" % exponent)
        base = base.inverse()
        exponent = -exponent
    if base.im == 0:
        return Scalar(base.re ** exponent)
    result = ONE
    while exponent:
        if exponent & 1:
            result = result * base
        exponent >>= 1
        if exponent:
            base = base * base
    return result


# -- text form ---------------------------------------------------------------

def _fmt_rat(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


def _fmt_imag(q: Fraction) -> str:
    if q == 1:
        return "i"
    if q == -1:
        return "-i"
    return _fmt_rat(q) + "i"


def format_scalar(z: Scalar) -> str:
    """Canonical text: `p/q` for rationals, `(a+bi)` otherwise.

    Zero parts and unit denominators are omitted, so 2i prints as `(2i)`
    and 1-i as `(1-i)`.
    """
    if z.im == 0:
        return _fmt_rat(z.re)
    if z.re == 0:
        return "(%s)" % _fmt_imag(z.im)
    im = _fmt_imag(z.im)
    if not im.startswith("-"):
        im = "+" + im
    return "(%s%s)" % (_fmt_rat(z.re), im)


_RAT = r"[+-]?\d+(?:/\d+)?"
_COMPLEX_RE = re.compile(
    r"^\s*(?:(?P<re>%s)\s*(?=[+-]|$))?\s*(?:(?P<im>[+-]?\s*(?:\d+(?:/\d+)?)?)\s*\*?\s*i)?\s*$" % _RAT)


def parse_scalar(text: str) -> Scalar:
    """Parse `p/q`, `(a+bi)`, `(bi)`, `i` or `-i`."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1].strip()
    if not s:
        raise ValueError("empty scalar text")
    m = _COMPLEX_RE.match(s)
    if not m or (m.group("re") is None and m.group("im") is None):
        raise ValueError("malformed scalar %r" % text)
    re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
    im_text = m.group("im")
    im_part = Fraction(0)
    if im_text is not None:
        im_text = im_text.replace(" ", "")
        if im_text in ("", "+"):
            im_part = Fraction(1)
        elif im_text == "-":
            im_part = Fraction(-1)
        else:
            im_part = Fraction(im_text)
    return Scalar(re_part, im_part)


def nth_roots(c, n: int) -> list[Scalar]:
    """All z in Q(i) with z**n == c, sorted canonically.

    If z = w/D with D the common denominator of c, then w is a Gaussian
    integer (Z[i] is integrally closed). Candidates for w come from a
    high-precision complex root and are confirmed by exact arithmetic.
    """
    import mpmath

    c = Scalar.coerce(c)
    if n <= 0:
        raise ValueError("root order must be positive")
    if c.is_zero():
        return [ZERO]
    if n == 1:
        return [c]
    from math import lcm
    D = lcm(c.re.denominator, c.im.denominator)
    N = c * D ** (n - 1) * D
    A, B = int(N.re), int(N.im)
    digits = max(len(str(abs(A))), len(str(abs(B))), 1)
    found = set()
    with mpmath.workdps(digits // n + 30):
        base = mpmath.root(mpmath.mpc(A, B), n)
        unit = mpmath.expjpi(mpmath.mpf(2) / n)
        w = base
        for _ in range(n):
            cand = Scalar(int(mpmath.nint(w.real)), int(mpmath.nint(w.imag)))
            if int_pow(cand, n) == N:
                found.add(cand / D)
            w = w * unit
    return sorted(found, key=lambda z: (z.re, z.im))
