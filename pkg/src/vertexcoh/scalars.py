"""Exact scalar arithmetic: rationals and dual numbers.

Rational scalars are stdlib ``fractions.Fraction`` (arbitrary precision,
always reduced); the package re-exports it as ``Rational``.  ``DualScalar``
implements the ring Q[t]/(t^2): elements a + b t with exact rational value
part a and slope part b, so first-order computations are ring identities
rather than limits.

Also here: parsing/formatting of rational literals ("p/q" or "p") and the
generalized binomial coefficient C(m, i) for arbitrary integer m, which the
mode identities need for negative m.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

Rational = Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" into a Fraction; reject anything else (floats, exponents)."""
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator: {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(value: Fraction) -> str:
    """Render a Fraction as "p/q", or "p" when the denominator is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def binom(m: int, i: int) -> int:
    """Generalized binomial coefficient C(m, i) for integer m (m may be negative).

    For i < 0 the value is 0.  The falling factorial m(m-1)...(m-i+1) is always
    divisible by i!, so the result is an exact integer.
    """
    if i < 0:
        return 0
    if i == 0:
        return 1
    if m >= 0:
        return math.comb(m, i)
    num = 1
    for k in range(i):
        num *= m - k
    return num // math.factorial(i)


def inv_factorial(j: int) -> Fraction:
    """1 / j! as an exact rational."""
    return Fraction(1, math.factorial(j))


class DualScalar:
    """An element a + b t of Q[t]/(t^2), with Fraction value and slope parts.

    Mixes freely with int and Fraction (they embed as slope 0).  There is no
    general division: the ring has zero divisors, and the solvers only ever
    scale by rationals.
    """

    __slots__ = ("value", "slope")

    def __init__(self, value=0, slope=0):
        self.value = Fraction(value)
        self.slope = Fraction(slope)

    # -- coercion ----------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "DualScalar | None":
        if isinstance(other, DualScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return DualScalar(other)
        return None

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return DualScalar(self.value + o.value, self.slope + o.slope)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return DualScalar(self.value - o.value, self.slope - o.slope)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return DualScalar(o.value - self.value, o.slope - self.slope)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return DualScalar(
            self.value * o.value,
            self.value * o.slope + self.slope * o.value,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return DualScalar(self.value / other, self.slope / other)
        return NotImplemented

    def __neg__(self):
        return DualScalar(-self.value, -self.slope)

    def __pos__(self):
        return self

    # -- comparisons / hashing ----------------------------------------------

    def __bool__(self):
        return bool(self.value) or bool(self.slope)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.value == o.value and self.slope == o.slope

    def __hash__(self):
        if self.slope == 0:
            return hash(self.value)
        return hash((self.value, self.slope))

    def __repr__(self):
        return f"DualScalar({self.value!r}, {self.slope!r})"

    def __str__(self):
        sign = "-" if self.slope < 0 else "+"
        return f"{format_rational(self.value)} {sign} {format_rational(abs(self.slope))}*t"


#: the nilpotent generator t (t*t == 0)
DUAL_T = DualScalar(0, 1)


def value_part(scalar) -> Fraction:
    """Rational value part of a scalar from either ring."""
    if isinstance(scalar, DualScalar):
        return scalar.value
    return Fraction(scalar)


def slope_part(scalar) -> Fraction:
    """Rational slope part (zero for plain rationals)."""
    if isinstance(scalar, DualScalar):
        return scalar.slope
    return Fraction(0)
