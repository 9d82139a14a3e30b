"""Exact arithmetic over a single quadratic extension of the rationals.

Values have the shape a + b*sqrt(d) with rational a, b and a squarefree
integer radicand d.  All comparisons are decided with rational arithmetic
only (isolate-and-square with sign tracking), never by floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from ..errors import DomainError

Rational = Fraction


def _split_square(n: int) -> tuple[int, int]:
    """Return (s, m) with n == s*s*m and m squarefree.  Requires n >= 0."""
    if n < 0:
        raise ValueError("radicand must be nonnegative")
    if n in (0, 1):
        return 1, n
    r = isqrt(n)
    if r * r == n:
        return r, 1
    s, m, i = 1, n, 2
    while i * i <= m:
        sq = i * i
        while m % sq == 0:
            m //= sq
            s *= i
        i += 1
    return s, m


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def _sign_with_root(a: Fraction, b: Fraction, d: int) -> int:
    """Sign of a + b*sqrt(d) for d >= 0, via squaring.  d need not be squarefree."""
    if b == 0 or d == 0:
        return _sign(a)
    if d == 1:
        return _sign(a + b)
    if b > 0 and a >= 0:
        return 1
    if b < 0 and a <= 0:
        return -1
    gap = a * a - b * b * d
    return _sign(gap) if a > 0 else -_sign(gap)


def _sign_two_roots(a: Fraction, b1: Fraction, d1: int, b2: Fraction, d2: int) -> int:
    """Sign of a + b1*sqrt(d1) + b2*sqrt(d2), rational arithmetic only."""
    if b1 == 0 or d1 == 0:
        return _sign_with_root(a, b2, d2)
    if b2 == 0 or d2 == 0:
        return _sign_with_root(a, b1, d1)
    if d1 == d2:
        return _sign_with_root(a, b1 + b2, d1)
    # u = b1*sqrt(d1) + b2*sqrt(d2); with distinct squarefree radicands u != 0.
    if b1 > 0 and b2 > 0:
        su = 1
    elif b1 < 0 and b2 < 0:
        su = -1
    else:
        su = _sign(b1 * b1 * d1 - b2 * b2 * d2)
        if b1 < 0:
            su = -su
    if a == 0 or _sign(a) == su:
        return su
    # Opposite signs: compare |a| against |u| where u^2 = b1^2 d1 + b2^2 d2 + 2 b1 b2 sqrt(d1 d2).
    w = _sign_with_root(b1 * b1 * d1 + b2 * b2 * d2 - a * a, 2 * b1 * b2, d1 * d2)
    if w == 0:
        return 0
    return su if w > 0 else -su


def surd_normalize(a: Fraction, b: Fraction, d: int) -> tuple[Fraction, Fraction, int]:
    """Canonicalize (a, b, d): extract square factors of d, fold trivial radicals."""
    if d < 0:
        raise ValueError("radicand must be nonnegative")
    if b == 0 or d == 0:
        return a, Fraction(0), 0
    s, m = _split_square(d)
    b = b * s
    if m == 1:
        return a + b, Fraction(0), 0
    return a, b, m


@dataclass(frozen=True, slots=True)
class ExactNumber:
    """A real number a + b*sqrt(d) in canonical form (d squarefree, d == 0 iff b == 0)."""

    a: Fraction
    b: Fraction
    d: int

    @staticmethod
    def make(a: Fraction | int, b: Fraction | int = 0, d: int = 0) -> "ExactNumber":
        na, nb, nd = surd_normalize(Fraction(a), Fraction(b), d)
        return ExactNumber(na, nb, nd)

    @staticmethod
    def from_rational(q: Fraction | int) -> "ExactNumber":
        return ExactNumber(Fraction(q), Fraction(0), 0)

    @staticmethod
    def sqrt_of_rational(c: Fraction) -> "ExactNumber":
        """Exact square root of a nonnegative rational: sqrt(p/q) = sqrt(p*q)/q."""
        if c < 0:
            raise DomainError("square root of a negative value")
        if c == 0:
            return ZERO
        return ExactNumber.make(0, Fraction(1, c.denominator), c.numerator * c.denominator)

    @property
    def is_rational(self) -> bool:
        return self.d == 0

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def as_fraction(self) -> Fraction:
        if self.d != 0:
            raise DomainError(f"{self} is irrational")
        return self.a

    def _join_radicand(self, other: "ExactNumber") -> int:
        if self.d == 0:
            return other.d
        if other.d == 0 or other.d == self.d:
            return self.d
        raise DomainError(f"cannot mix sqrt({self.d}) with sqrt({other.d})")

    def __add__(self, other: "ExactNumber | Fraction | int") -> "ExactNumber":
        other = _coerce(other)
        d = self._join_radicand(other)
        return ExactNumber.make(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __neg__(self) -> "ExactNumber":
        return ExactNumber(-self.a, -self.b, self.d)

    def __sub__(self, other: "ExactNumber | Fraction | int") -> "ExactNumber":
        return self + (-_coerce(other))

    def __rsub__(self, other: "ExactNumber | Fraction | int") -> "ExactNumber":
        return _coerce(other) + (-self)

    def __mul__(self, other: "ExactNumber | Fraction | int") -> "ExactNumber":
        other = _coerce(other)
        d = self._join_radicand(other)
        a = self.a * other.a + self.b * other.b * d
        b = self.a * other.b + self.b * other.a
        return ExactNumber.make(a, b, d)

    __rmul__ = __mul__

    def __truediv__(self, other: "ExactNumber | Fraction | int") -> "ExactNumber":
        other = _coerce(other)
        if other.is_zero:
            raise DomainError("division by zero")
        if other.is_rational:
            return ExactNumber.make(self.a / other.a, self.b / other.a, self.d)
        # Multiply by the conjugate; the norm a^2 - b^2 d is rational and nonzero.
        norm = other.a * other.a - other.b * other.b * other.d
        conj = ExactNumber(other.a, -other.b, other.d)
        return (self * conj) / ExactNumber.from_rational(norm)

    def __rtruediv__(self, other: "ExactNumber | Fraction | int") -> "ExactNumber":
        return _coerce(other) / self

    def __lt__(self, other: "ExactNumber") -> bool:
        return compare_exact(self, _coerce(other)) < 0

    def __le__(self, other: "ExactNumber") -> bool:
        return compare_exact(self, _coerce(other)) <= 0

    def __gt__(self, other: "ExactNumber") -> bool:
        return compare_exact(self, _coerce(other)) > 0

    def __ge__(self, other: "ExactNumber") -> bool:
        return compare_exact(self, _coerce(other)) >= 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * float(self.d) ** 0.5

    def __str__(self) -> str:
        if self.d == 0:
            return str(self.a)
        root = f"sqrt({self.d})"
        if self.b == 1:
            surd = root
        elif self.b == -1:
            surd = f"-{root}"
        else:
            surd = f"{self.b}*{root}"
        if self.a == 0:
            return surd
        sign = "+" if self.b > 0 else ""
        return f"{self.a}{sign}{surd}"


def _coerce(v: "ExactNumber | Fraction | int") -> ExactNumber:
    if isinstance(v, ExactNumber):
        return v
    return ExactNumber.from_rational(v)


ZERO = ExactNumber(Fraction(0), Fraction(0), 0)
ONE = ExactNumber(Fraction(1), Fraction(0), 0)


def compare_exact(x: ExactNumber, y: ExactNumber) -> int:
    """Exact three-way comparison of two values, possibly from different extensions."""
    return _sign_two_roots(x.a - y.a, x.b, x.d, -y.b, y.d)


def is_square_fraction(c: Fraction) -> bool:
    """True when c >= 0 is the square of a rational."""
    if c < 0:
        return False
    p, q = c.numerator, c.denominator
    return isqrt(p) ** 2 == p and isqrt(q) ** 2 == q


def sqrt_square_fraction(c: Fraction) -> Fraction:
    return Fraction(isqrt(c.numerator), isqrt(c.denominator))


def rounded_sqrt_2dp(c: Fraction) -> Fraction:
    """round(sqrt(c), 2) as an exact rational, computed with integer arithmetic."""
    if c < 0:
        raise DomainError("square root of a negative value")
    p, q = c.numerator, c.denominator
    m = isqrt(10000 * p * q) // q  # floor(100 * sqrt(c))
    # Round half up; for non-square c the tie cannot occur.
    if 40000 * p >= (2 * m + 1) ** 2 * q:
        m += 1
    return Fraction(m, 100)
