"""Term representations: integer sums, equation states, and final-answer normal forms."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from ..errors import DomainError
from .numbers import ZERO, ONE, ExactNumber, compare_exact


class SumExpr(tuple):
    """A sum of integers, stored as a nonempty tuple of its terms.

    Subclassing tuple keeps construction and hashing cheap; the search expands
    millions of these.
    """

    __slots__ = ()

    def __new__(cls, values: Iterable[int]) -> "SumExpr":
        return super().__new__(cls, values)

    @property
    def terms(self) -> tuple[int, ...]:
        return tuple(self)

    def __repr__(self) -> str:
        return f"SumExpr({'+'.join(str(v) for v in self)})"


@dataclass(frozen=True, slots=True)
class Polynomial:
    """Dense univariate polynomial of degree at most two: c2*x^2 + c1*x + c0."""

    c2: ExactNumber
    c1: ExactNumber
    c0: ExactNumber

    @staticmethod
    def constant(c: ExactNumber | Fraction | int) -> "Polynomial":
        if not isinstance(c, ExactNumber):
            c = ExactNumber.from_rational(c)
        return Polynomial(ZERO, ZERO, c)

    @staticmethod
    def monomial(degree: int, coeff: ExactNumber) -> "Polynomial":
        if degree == 2:
            return Polynomial(coeff, ZERO, ZERO)
        if degree == 1:
            return Polynomial(ZERO, coeff, ZERO)
        return Polynomial(ZERO, ZERO, coeff)

    @property
    def degree(self) -> int:
        if not self.c2.is_zero:
            return 2
        if not self.c1.is_zero:
            return 1
        return 0

    @property
    def is_zero(self) -> bool:
        return self.c2.is_zero and self.c1.is_zero and self.c0.is_zero

    @property
    def is_constant(self) -> bool:
        return self.c2.is_zero and self.c1.is_zero

    def coeff(self, degree: int) -> ExactNumber:
        return (self.c0, self.c1, self.c2)[degree]

    def add(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(self.c2 + other.c2, self.c1 + other.c1, self.c0 + other.c0)

    def sub(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(self.c2 - other.c2, self.c1 - other.c1, self.c0 - other.c0)

    def x_monomials(self) -> tuple[tuple[int, ExactNumber], ...]:
        """Nonzero monomials of degree >= 1 as (degree, coefficient) pairs."""
        out = []
        if not self.c2.is_zero:
            out.append((2, self.c2))
        if not self.c1.is_zero:
            out.append((1, self.c1))
        return tuple(out)


P_ZERO = Polynomial(ZERO, ZERO, ZERO)
P_X = Polynomial(ZERO, ONE, ZERO)


@dataclass(frozen=True, slots=True)
class Equation:
    lhs: Polynomial
    rhs: Polynomial

    @property
    def max_degree(self) -> int:
        return max(self.lhs.degree, self.rhs.degree)

    @property
    def is_solution_form(self) -> bool:
        """Exactly `x = value`."""
        return self.lhs == P_X and self.rhs.is_constant

    @property
    def is_constant_form(self) -> bool:
        """No unknown on either side (identity or contradiction)."""
        return self.lhs.is_constant and self.rhs.is_constant

    @property
    def is_resolved(self) -> bool:
        return self.is_solution_form or self.is_constant_form


@dataclass(frozen=True, slots=True)
class EqState:
    """One or two equations under joint consideration, or the no-solutions marker.

    Two-equation states are disjunctive: they arise from root splits, and their
    solution set is the union over members.
    """

    equations: tuple[Equation, ...]
    no_solutions: bool = False

    @staticmethod
    def of(*equations: Equation) -> "EqState":
        return EqState(tuple(equations))

    @property
    def is_final(self) -> bool:
        if self.no_solutions:
            return True
        return all(eq.is_resolved for eq in self.equations)

    def validate(self) -> "EqState":
        if self.no_solutions:
            return self
        if not 1 <= len(self.equations) <= 2:
            raise DomainError("a state holds one or two equations")
        for eq in self.equations:
            if eq.max_degree > 2:
                raise DomainError("degree above two is not supported")
        if len(self.equations) == 2 and any(eq.max_degree > 1 for eq in self.equations):
            raise DomainError("two-equation states must be linear")
        return self


EqState.NO_SOLUTIONS = EqState((), no_solutions=True)

Term = Union[SumExpr, EqState]


@dataclass(frozen=True, slots=True)
class NormalForm:
    """Canonical reading of a final state: a sum value or a set of solutions."""

    kind: str  # "sum" | "solutions" | "none" | "undef"
    value: int | tuple[ExactNumber, ...] | None = None

    @staticmethod
    def sum_value(v: int) -> "NormalForm":
        return NormalForm("sum", v)

    @staticmethod
    def solutions(values: Iterable[ExactNumber]) -> "NormalForm":
        ordered = sorted(values, key=functools.cmp_to_key(compare_exact))
        deduped: list[ExactNumber] = []
        for v in ordered:
            if not deduped or compare_exact(deduped[-1], v) != 0:
                deduped.append(v)
        return NormalForm("solutions", tuple(deduped))

    @staticmethod
    def no_real_solutions() -> "NormalForm":
        return NormalForm("none")

    @staticmethod
    def undefined() -> "NormalForm":
        return NormalForm("undef")

    def encode(self) -> str:
        """Injective canonical text key, used for table lookups and persistence."""
        if self.kind == "sum":
            return f"S:{self.value}"
        if self.kind == "none":
            return "Q:none"
        if self.kind == "undef":
            return "Q:undef"
        parts = ",".join(_encode_value(v) for v in self.value)
        return "Q:{" + parts + "}"


def _encode_frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _encode_value(v: ExactNumber) -> str:
    return f"{_encode_frac(v.a)}|{_encode_frac(v.b)}|{v.d}"
