"""Exact arithmetic in real quadratic fields Q(sqrt(d)).

Rotation numbers like the golden mean live in quadratic fields, and the
Gordon-set construction needs exact comparisons between points on the circle
that differ by amounts as small as |q_n * theta - p_n| ~ phi^-n.  Floating
point loses that race long before depth 30, so circle positions are kept as
``a + b*sqrt(d)`` with rational a, b and only converted to floats at the end
(through mpmath, because the final subtraction cancels catastrophically in
binary64).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

import mpmath

from .errors import RationalThetaError, ValidationError

RationalLike = Union[int, Fraction]

# Decimal digits used when collapsing exact values to floats.  50 digits is
# far beyond what any |q_n theta - p_n| at supported depths can cancel away.
CONVERSION_DPS = 50


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)  # exact binary value
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class Quadratic:
    """An element a + b*sqrt(d) of Q(sqrt(d)), d a positive non-square integer.

    Supports exact ring arithmetic, exact ordering, floor/mod-1, and accurate
    float conversion.  Rationals are represented with b == 0 and d == 0.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=0):
        a = _as_fraction(a)
        b = _as_fraction(b)
        if b == 0:
            d = 0
        else:
            if not isinstance(d, int) or d <= 0:
                raise ValidationError("surd part requires a positive integer radicand")
            root = math.isqrt(d)
            if root * root == d:
                # perfect square: fold into the rational part
                a += b * root
                b = Fraction(0)
                d = 0
        self.a = a
        self.b = b
        self.d = d

    # -- helpers -----------------------------------------------------------

    def _coerce(self, other) -> "Quadratic":
        if isinstance(other, Quadratic):
            if self.d and other.d and self.d != other.d:
                raise ValidationError("mixed radicands are not supported")
            return other
        return Quadratic(_as_fraction(other))

    def _field_d(self, other: "Quadratic") -> int:
        return self.d or other.d

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    # -- ring ops ----------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        return Quadratic(self.a + o.a, self.b + o.b, self._field_d(o))

    __radd__ = __add__

    def __neg__(self):
        return Quadratic(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        d = self._field_d(o)
        return Quadratic(
            self.a * o.a + self.b * o.b * d,
            self.a * o.b + self.b * o.a,
            d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        norm = o.a * o.a - o.b * o.b * self._field_d(o)
        if norm == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        conj = Quadratic(o.a, -o.b, o.d)
        num = self * conj
        return Quadratic(num.a / norm, num.b / norm, num.d)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    # -- order -------------------------------------------------------------

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d)."""
        a, b, d = self.a, self.b, self.d
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 against b^2 d
        lhs, rhs = a * a, b * b * d
        if a > 0:  # b < 0
            return 1 if lhs > rhs else (-1 if lhs < rhs else 0)
        return 1 if rhs > lhs else (-1 if rhs < lhs else 0)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, ValidationError):
            return NotImplemented
        return (self - o).sign() == 0

    def __hash__(self):
        if self.is_rational:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return (self - self._coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - self._coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - self._coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - self._coerce(other)).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- floor / mod 1 -----------------------------------------------------

    def __floor__(self) -> int:
        est = math.floor(float(self.a) + float(self.b) * math.sqrt(self.d or 1))
        # the float estimate can be off by one near integers; fix exactly
        while self < est:
            est -= 1
        while self >= est + 1:
            est += 1
        return est

    def frac(self) -> "Quadratic":
        """Fractional part, exactly in [0, 1)."""
        return self - math.floor(self)

    # -- conversion --------------------------------------------------------

    def to_mpf(self, dps: int = CONVERSION_DPS) -> mpmath.mpf:
        with mpmath.workdps(dps):
            val = mpmath.mpf(self.a.numerator) / self.a.denominator
            if self.b:
                val += (
                    mpmath.mpf(self.b.numerator)
                    / self.b.denominator
                    * mpmath.sqrt(self.d)
                )
            return +val

    def __float__(self) -> float:
        return float(self.to_mpf())

    def __repr__(self):
        if self.is_rational:
            return f"Quadratic({self.a})"
        return f"Quadratic({self.a} + {self.b}*sqrt({self.d}))"


GOLDEN_MEAN = Quadratic(Fraction(-1, 2), Fraction(1, 2), 5)  # (sqrt(5) - 1) / 2
SQRT2_MINUS_1 = Quadratic(-1, 1, 2)

_NAMED_THETAS = {
    "golden": GOLDEN_MEAN,
    "sqrt2-1": SQRT2_MINUS_1,
    "silver": SQRT2_MINUS_1,
}


def parse_theta(text: str, dps: int = CONVERSION_DPS):
    """Parse a rotation number: a named constant or a decimal literal.

    Named constants come back as exact Quadratic values; decimals as mpmath
    floats at ``dps`` digits (the irrationality of such an input can only be
    certified up to working precision -- the continued-fraction routine
    applies that guard).
    """
    key = text.strip().lower()
    if key in _NAMED_THETAS:
        return _NAMED_THETAS[key]
    try:
        with mpmath.workdps(dps):
            val = +mpmath.mpf(key)
    except ValueError:
        raise ValidationError(f"unrecognized rotation number {text!r}") from None
    if not 0 < val < 1:
        raise ValidationError("rotation number must lie strictly between 0 and 1")
    return val


def continued_fraction_terms(theta, depth: int, dps: int = CONVERSION_DPS) -> list:
    """First ``depth`` partial quotients a_0, ..., a_{depth-1} of theta in (0,1).

    theta may be exact (Quadratic / Fraction) or an mpmath/float value.  For
    inexact input a rationality guard aborts if the remainder drops below the
    precision floor, since further quotients would be noise.
    """
    if depth < 1:
        raise ValidationError("depth must be >= 1")
    terms = []
    if isinstance(theta, (Quadratic, Fraction, int)):
        x = theta if isinstance(theta, Quadratic) else Quadratic(theta)
        if not (Quadratic(0) < x < Quadratic(1)):
            raise ValidationError("rotation number must lie strictly between 0 and 1")
        for k in range(depth):
            a = math.floor(x)
            terms.append(a)
            x = x - a
            if k + 1 == depth:
                break
            if x.sign() == 0:
                raise RationalThetaError(
                    "continued fraction terminated: rotation number is rational"
                )
            x = 1 / x
        return terms
    with mpmath.workdps(dps):
        x = +mpmath.mpf(theta)
        if not 0 < x < 1:
            raise ValidationError("rotation number must lie strictly between 0 and 1")
        floor_eps = mpmath.mpf(10) ** (-(dps - 10))
        for k in range(depth):
            a = int(mpmath.floor(x))
            terms.append(a)
            x = x - a
            if k + 1 == depth:
                break
            if x < floor_eps:
                raise RationalThetaError(
                    "continued fraction terminated within working precision; "
                    "rotation number is rational (or precision too low)"
                )
            x = 1 / x
    return terms
