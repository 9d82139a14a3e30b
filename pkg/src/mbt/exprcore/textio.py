"""Text forms for terms.

Sum grammar:       sum := int ("+" int)*            e.g. "1+2+3", "1+-5"
Equation grammar:  state := equation | "[" equation ("," equation)? "]" | "nosol"
                   equation := poly "=" poly
                   poly := ["-"] term (("+"|"-") term)*
                   term := coeff | coeff? "x" ("^" ("1"|"2"))?
                         | coeff "*" "(" "x" ("+"|"-") num ")" "^2"
                   coeff := int | int "/" posint | [int ["/" posint] "*"] "sqrt" "(" posint ")"

The printer emits a canonical form that parses back to the identical term.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import DomainError, ParseError
from .numbers import ZERO, ExactNumber
from .terms import EqState, Equation, P_X, Polynomial, SumExpr


def parse_sum(text: str) -> SumExpr:
    """Parse an integer sum; terms may be negative literals, as in "1+-5"."""
    src = text.strip()
    if not src:
        raise ParseError("empty input", position=0, expected="integer")
    values = []
    pos = 0
    chunks = src.split("+")
    for chunk in chunks:
        item = chunk.strip()
        if not re.fullmatch(r"-?\d+", item):
            raise ParseError(f"bad integer {item!r}", position=pos, expected="integer")
        values.append(int(item))
        pos += len(chunk) + 1
    return SumExpr(values)


def print_sum(term: SumExpr) -> str:
    return "+".join(str(v) for v in term)


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[a-z]+)|(?P<op>\^|\*|\+|-|/|=|\(|\)|\[|\]|,))"
)


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                if text[pos:].strip() == "":
                    break
                raise ParseError(f"unexpected character {text[pos]!r}", position=pos)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self, offset: int = 0) -> tuple[str, str, int]:
        j = self.i + offset
        if j < len(self.tokens):
            return self.tokens[j]
        return ("eof", "", len(self.text))

    def next(self) -> tuple[str, str, int]:
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value: str) -> tuple[str, str, int]:
        tok = self.next()
        if tok[1] != value:
            raise ParseError(f"unexpected {tok[1] or 'end of input'!r}", position=tok[2], expected=repr(value))
        return tok


class _StateParser:
    def __init__(self, text: str):
        self.s = _Scanner(text)

    def parse_state(self) -> EqState:
        kind, value, pos = self.s.peek()
        if kind == "name" and value == "nosol":
            self.s.next()
            self._expect_end()
            return EqState.NO_SOLUTIONS
        if value == "[":
            self.s.next()
            eqs = [self.parse_equation()]
            if self.s.peek()[1] == ",":
                self.s.next()
                eqs.append(self.parse_equation())
            self.s.expect("]")
            self._expect_end()
            return EqState(tuple(eqs)).validate()
        state = EqState((self.parse_equation(),))
        self._expect_end()
        return state.validate()

    def _expect_end(self) -> None:
        tok = self.s.peek()
        if tok[0] != "eof":
            raise ParseError(f"trailing input {tok[1]!r}", position=tok[2])

    def parse_equation(self) -> Equation:
        lhs = self.parse_poly()
        self.s.expect("=")
        rhs = self.parse_poly()
        return Equation(lhs, rhs)

    def parse_poly(self) -> Polynomial:
        poly = Polynomial(ZERO, ZERO, ZERO)
        sign = 1
        if self.s.peek()[1] == "-":
            self.s.next()
            sign = -1
        poly = poly.add(self.parse_term(sign))
        while self.s.peek()[1] in ("+", "-"):
            op = self.s.next()[1]
            sign = 1 if op == "+" else -1
            if self.s.peek()[1] == "-":  # tolerate "+-3"
                self.s.next()
                sign = -sign
            poly = poly.add(self.parse_term(sign))
        return poly

    def parse_term(self, sign: int) -> Polynomial:
        kind, value, pos = self.s.peek()
        if value == "(":
            return self._parse_binomial_square(ExactNumber.from_rational(sign))
        if kind == "name" and value == "x":
            self.s.next()
            deg = self._parse_exponent()
            return Polynomial.monomial(deg, ExactNumber.from_rational(sign))
        if kind == "name" and value == "sqrt":
            coeff = self._parse_sqrt(Fraction(1)) * sign
            return self._with_optional_x(coeff)
        if kind == "num":
            rat = self._parse_rational()
            nxt = self.s.peek()
            if nxt[1] == "*":
                after = self.s.peek(1)
                if after[1] == "(":
                    self.s.next()
                    return self._parse_binomial_square(ExactNumber.from_rational(rat * sign))
                if after[0] == "name" and after[1] == "sqrt":
                    self.s.next()
                    coeff = self._parse_sqrt(rat) * sign
                    return self._with_optional_x(coeff)
                if after[0] == "name" and after[1] == "x":
                    self.s.next()
                return self._with_optional_x(ExactNumber.from_rational(rat * sign))
            return self._with_optional_x(ExactNumber.from_rational(rat * sign))
        raise ParseError(f"unexpected {value or 'end of input'!r}", position=pos, expected="term")

    def _with_optional_x(self, coeff: ExactNumber) -> Polynomial:
        if self.s.peek()[0] == "name" and self.s.peek()[1] == "x":
            self.s.next()
            return Polynomial.monomial(self._parse_exponent(), coeff)
        return Polynomial.constant(coeff)

    def _parse_exponent(self) -> int:
        if self.s.peek()[1] != "^":
            return 1
        self.s.next()
        tok = self.s.next()
        if tok[0] != "num":
            raise ParseError("bad exponent", position=tok[2], expected="1 or 2")
        if tok[1] == "1":
            return 1
        if tok[1] == "2":
            return 2
        raise DomainError("degree above two is not supported")

    def _parse_rational(self) -> Fraction:
        tok = self.s.next()
        if tok[0] != "num":
            raise ParseError(f"unexpected {tok[1]!r}", position=tok[2], expected="number")
        num = int(tok[1])
        if self.s.peek()[1] == "/":
            self.s.next()
            den_tok = self.s.next()
            if den_tok[0] != "num" or int(den_tok[1]) == 0:
                raise ParseError("bad denominator", position=den_tok[2], expected="positive integer")
            return Fraction(num, int(den_tok[1]))
        return Fraction(num)

    def _parse_sqrt(self, multiplier: Fraction) -> ExactNumber:
        self.s.expect("sqrt")
        self.s.expect("(")
        tok = self.s.next()
        if tok[0] != "num" or int(tok[1]) == 0:
            raise ParseError("bad radicand", position=tok[2], expected="positive integer")
        self.s.expect(")")
        return ExactNumber.make(0, multiplier, int(tok[1]))

    def _parse_binomial_square(self, coeff: ExactNumber) -> Polynomial:
        """coeff * (x +/- p)^2, expanded to dense form."""
        self.s.expect("(")
        tok = self.s.next()
        if tok[1] != "x":
            raise ParseError(f"unexpected {tok[1]!r}", position=tok[2], expected="'x'")
        op = self.s.next()
        if op[1] not in ("+", "-"):
            raise ParseError(f"unexpected {op[1]!r}", position=op[2], expected="'+' or '-'")
        p = self._parse_rational()
        if op[1] == "-":
            p = -p
        self.s.expect(")")
        self.s.expect("^")
        tok = self.s.next()
        if tok[1] != "2":
            raise ParseError("squared binomial required", position=tok[2], expected="2")
        return Polynomial(coeff, coeff * (2 * p), coeff * (p * p))


def parse_state(text: str) -> EqState:
    return _StateParser(text).parse_state()


def _frac_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _pieces(poly: Polynomial) -> list[tuple[int, str]]:
    """(sign, text) pieces per degree, splitting rational and radical parts."""
    out: list[tuple[int, str]] = []
    for deg in (2, 1, 0):
        c = poly.coeff(deg)
        xpart = {2: "x^2", 1: "x", 0: ""}[deg]
        if c.a != 0:
            mag = abs(c.a)
            body = _frac_text(mag) if (deg == 0 or mag != 1) else ""
            out.append((1 if c.a > 0 else -1, body + xpart))
        if c.b != 0:
            mag = abs(c.b)
            root = f"sqrt({c.d})"
            body = root if mag == 1 else f"{_frac_text(mag)}*{root}"
            out.append((1 if c.b > 0 else -1, body + xpart))
    return out


def print_poly(poly: Polynomial) -> str:
    pieces = _pieces(poly)
    if not pieces:
        return "0"
    text = ("-" if pieces[0][0] < 0 else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        text += ("-" if sign < 0 else "+") + body
    return text


def print_state(state: EqState) -> str:
    if state.no_solutions:
        return "nosol"
    eqs = ", ".join(f"{print_poly(eq.lhs)}={print_poly(eq.rhs)}" for eq in state.equations)
    return f"[{eqs}]"
