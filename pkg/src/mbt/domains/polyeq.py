"""Stepwise solving of linear and quadratic equations in x, with buggy variants.

States hold one equation of degree at most two, or a disjunctive pair of
linear equations produced by a root split.  Rules never touch a resolved
equation (solution form `x = v` or a constant identity/contradiction), so
resolved members stay put and a state with only resolved members is final.

The correct rules strictly decrease an integer potential (see `potential`),
which makes the solving strategy total.  The in-place sign bug keeps the
potential constant, so exhaustive buggy search needs a finite cap on buggy
applications; the diagnosis default is 2.

Deliberate limitation: square roots never nest, so a quadratic whose isolated
square equals an irrational constant has no applicable rule and counts as
stuck.  Rational tasks never reach such states.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import DomainError
from ..exprcore import (
    EqState,
    Equation,
    ExactNumber,
    NormalForm,
    P_X,
    P_ZERO,
    Polynomial,
    is_square_fraction,
    parse_state,
    print_state,
    rounded_sqrt_2dp,
)
from ..exprcore.numbers import ONE, ZERO
from ..strategy import Rule, RuleSet, atom, choice_of, repeat
from .base import DomainContract

DEFAULT_MAX_BUGGY = 2

GROUP_LABELS = {
    "negate-a-term": "negate a term",
    "forget-an-equation": "forget an equation",
    "forget-divide": "forget divide",
    "reverse-divide": "reverse divide",
    "approximate-root": "approximate root",
}

Position = tuple[int, str]
Result = list[tuple[Position, EqState]]


def _replace(state: EqState, idx: int, *replacement: Equation) -> EqState:
    eqs = state.equations[:idx] + tuple(replacement) + state.equations[idx + 1 :]
    return EqState(eqs).validate()


def _each_equation(state: EqState):
    if not state.no_solutions:
        yield from enumerate(state.equations)


def _move_candidates(eq: Equation):
    """Terms the correct move rule may shift: x-monomials sitting on the right,
    and the left constant once only x-terms remain on the left."""
    if eq.is_resolved:
        return
    for deg, coeff in eq.rhs.x_monomials():
        yield ("x", Polynomial.monomial(deg, coeff))
    if eq.lhs.degree == 1 and not eq.lhs.c0.is_zero and eq.rhs.is_constant:
        yield ("c", Polynomial.constant(eq.lhs.c0))


def _apply_move(state: EqState) -> Result:
    out: Result = []
    for idx, eq in _each_equation(state):
        for kind, m in _move_candidates(eq):
            moved = Equation(eq.lhs.sub(m), eq.rhs.sub(m))
            out.append(((idx + 1, f"move-{kind}-{m}"), _replace(state, idx, moved)))
    return out


def _divide_shape(eq: Equation) -> ExactNumber | None:
    """Coefficient a when the equation reads a*x = constant with a not 0 or 1."""
    lhs = eq.lhs
    if lhs.c2.is_zero and lhs.c0.is_zero and not lhs.c1.is_zero and eq.rhs.is_constant:
        if lhs.c1 != ONE:
            return lhs.c1
    return None


def _apply_divide(state: EqState) -> Result:
    out: Result = []
    for idx, eq in _each_equation(state):
        a = _divide_shape(eq)
        if a is not None:
            solved = Equation(P_X, Polynomial.constant(eq.rhs.c0 / a))
            out.append((idx + 1, _replace(state, idx, solved)))
    return out


def _is_monic_square(p: Polynomial) -> bool:
    half = p.c1 / 2
    return p.c2 == ONE and p.c0 == half * half


def _apply_isolate_square(state: EqState) -> Result:
    out: Result = []
    for idx, eq in _each_equation(state):
        if eq.lhs.degree != 2 or not eq.rhs.is_constant or _is_monic_square(eq.lhs):
            continue
        a = eq.lhs.c2
        p = eq.lhs.c1 / (a * 2)
        q = eq.lhs.c0 - a * p * p
        square = Polynomial(ONE, p * 2, p * p)
        rhs = Polynomial.constant((eq.rhs.c0 - q) / a)
        out.append((idx + 1, _replace(state, idx, Equation(square, rhs))))
    return out


def _root_shape(eq: Equation) -> tuple[ExactNumber, Fraction] | None:
    """(p, c) when the equation reads (x+p)^2 = c with rational c."""
    if eq.lhs.degree == 2 and _is_monic_square(eq.lhs) and eq.rhs.is_constant:
        if eq.rhs.c0.is_rational:
            return eq.lhs.c1 / 2, eq.rhs.c0.as_fraction()
    return None


def _linear(p: ExactNumber, rhs: ExactNumber | Fraction) -> Equation:
    return Equation(Polynomial(ZERO, ONE, p), Polynomial.constant(rhs))


def _apply_take_root(state: EqState) -> Result:
    out: Result = []
    for idx, eq in _each_equation(state):
        shape = _root_shape(eq)
        if shape is None:
            continue
        p, c = shape
        if c < 0:
            nxt = EqState.NO_SOLUTIONS
        elif c == 0:
            nxt = _replace(state, idx, _linear(p, ZERO))
        else:
            r = ExactNumber.sqrt_of_rational(c)
            nxt = _replace(state, idx, _linear(p, r), _linear(p, -r))
        out.append((idx + 1, nxt))
    return out


def _zero_quadratic(eq: Equation) -> tuple[Fraction, Fraction, Fraction] | None:
    """Rational (a, b, c) when the equation reads a*x^2 + b*x + c = 0."""
    lhs = eq.lhs
    if eq.rhs.is_zero and lhs.degree == 2:
        if lhs.c2.is_rational and lhs.c1.is_rational and lhs.c0.is_rational:
            return lhs.c2.as_fraction(), lhs.c1.as_fraction(), lhs.c0.as_fraction()
    return None


def _apply_quadratic_formula(state: EqState) -> Result:
    out: Result = []
    for idx, eq in _each_equation(state):
        abc = _zero_quadratic(eq)
        if abc is None:
            continue
        a, b, c = abc
        disc = b * b - 4 * a * c
        if disc < 0:
            nxt = EqState.NO_SOLUTIONS
        elif disc == 0:
            nxt = _replace(state, idx, Equation(P_X, Polynomial.constant(Fraction(-b, 2) / a)))
        else:
            root = ExactNumber.sqrt_of_rational(disc)
            x_plus = (root - b) / (2 * a)
            x_minus = (-root - b) / (2 * a)
            nxt = _replace(
                state,
                idx,
                Equation(P_X, Polynomial.constant(x_plus)),
                Equation(P_X, Polynomial.constant(x_minus)),
            )
        out.append((idx + 1, nxt))
    return out


def _apply_null_factor(state: EqState) -> Result:
    out: Result = []
    for idx, eq in _each_equation(state):
        abc = _zero_quadratic(eq)
        if abc is None:
            continue
        a, b, c = abc
        disc = b * b - 4 * a * c
        if disc < 0 or not is_square_fraction(disc):
            continue
        root = ExactNumber.sqrt_of_rational(disc).as_fraction()
        r_plus = Fraction(-b + root, 2) / a
        r_minus = Fraction(-b - root, 2) / a
        factors = (
            Equation(Polynomial(ZERO, ONE, ExactNumber.from_rational(-r_plus)), P_ZERO),
            Equation(Polynomial(ZERO, ONE, ExactNumber.from_rational(-r_minus)), P_ZERO),
        )
        out.append((idx + 1, _replace(state, idx, *factors)))
    return out


def _apply_negate(state: EqState) -> Result:
    """Sign errors: move a term across without flipping it, or drop the sign
    of a constant in place."""
    out: Result = []
    for idx, eq in _each_equation(state):
        for kind, m in _move_candidates(eq):
            if kind == "x":
                bad = Equation(eq.lhs.add(m), eq.rhs.sub(m))
            else:
                bad = Equation(eq.lhs.sub(m), eq.rhs.add(m))
            out.append(((idx + 1, f"noflip-{kind}-{m}"), _replace(state, idx, bad)))
        if eq.is_resolved:
            continue
        if not eq.lhs.c0.is_zero:
            flipped = Polynomial(eq.lhs.c2, eq.lhs.c1, -eq.lhs.c0)
            out.append(((idx + 1, "flip-l"), _replace(state, idx, Equation(flipped, eq.rhs))))
        if not eq.rhs.c0.is_zero:
            flipped = Polynomial(eq.rhs.c2, eq.rhs.c1, -eq.rhs.c0)
            out.append(((idx + 1, "flip-r"), _replace(state, idx, Equation(eq.lhs, flipped))))
    return out


def _apply_forget_equation(state: EqState) -> Result:
    if state.no_solutions or len(state.equations) != 2 or state.is_final:
        return []
    first, second = state.equations
    return [
        (1, EqState.of(second).validate()),
        (2, EqState.of(first).validate()),
    ]


def _apply_forget_divide(state: EqState) -> Result:
    out: Result = []
    for idx, eq in _each_equation(state):
        if _divide_shape(eq) is not None:
            bad = Equation(P_X, Polynomial.constant(eq.rhs.c0))
            out.append((idx + 1, _replace(state, idx, bad)))
    return out


def _apply_reverse_divide(state: EqState) -> Result:
    out: Result = []
    for idx, eq in _each_equation(state):
        a = _divide_shape(eq)
        if a is not None and not eq.rhs.c0.is_zero:
            bad = Equation(P_X, Polynomial.constant(a / eq.rhs.c0))
            out.append((idx + 1, _replace(state, idx, bad)))
    return out


def _apply_approx_root(state: EqState) -> Result:
    out: Result = []
    for idx, eq in _each_equation(state):
        shape = _root_shape(eq)
        if shape is None:
            continue
        p, c = shape
        if c <= 0 or is_square_fraction(c):
            continue
        r = rounded_sqrt_2dp(c)
        nxt = _replace(state, idx, _linear(p, r), _linear(p, -r))
        out.append((idx + 1, nxt))
    return out


CORRECT_RULE_IDS = (
    "move-term",
    "divide-coefficient",
    "isolate-square",
    "take-root",
    "quadratic-formula",
    "null-factor",
)
BUGGY_RULE_IDS = (
    "negate-a-term",
    "forget-equation",
    "forget-divide",
    "reverse-divide",
    "approx-root",
)

RULES = RuleSet(
    [
        Rule("move-term", _apply_move),
        Rule("divide-coefficient", _apply_divide),
        Rule("isolate-square", _apply_isolate_square),
        Rule("take-root", _apply_take_root),
        Rule("quadratic-formula", _apply_quadratic_formula),
        Rule("null-factor", _apply_null_factor),
        Rule("negate-a-term", _apply_negate, buggy=True, group="negate-a-term"),
        Rule("forget-equation", _apply_forget_equation, buggy=True, group="forget-an-equation"),
        Rule("forget-divide", _apply_forget_divide, buggy=True, group="forget-divide"),
        Rule("reverse-divide", _apply_reverse_divide, buggy=True, group="reverse-divide"),
        Rule("approx-root", _apply_approx_root, buggy=True, group="approximate-root"),
    ],
    version="polyeq/1",
)


def potential(state: EqState) -> int:
    """Nonnegative measure every correct rule strictly decreases.

    Resolved equations score 0.  A linear equation pays 1, plus 2 per x-term
    still on the right, plus 1 while its left constant still needs moving.
    A quadratic pays 10, plus 2 per right x-term, plus 1 until the square is
    isolated; 10 exceeds the score of any state a split can produce.
    """
    if state.no_solutions:
        return 0
    total = 0
    for eq in state.equations:
        if eq.is_resolved:
            continue
        pending_moves = 2 * len(eq.rhs.x_monomials())
        if eq.max_degree == 2:
            ready = _root_shape(eq) is not None or (
                _is_monic_square(eq.lhs) and eq.rhs.is_constant
            )
            total += 10 + pending_moves + (0 if ready else 1)
        else:
            const_pending = (
                eq.lhs.degree == 1 and not eq.lhs.c0.is_zero and eq.rhs.is_constant
            )
            total += 1 + pending_moves + (1 if const_pending else 0)
    return total


def normal_form_of_final(state: EqState) -> NormalForm:
    """Solution set of a final state; pair members contribute disjunctively."""
    if state.no_solutions:
        return NormalForm.no_real_solutions()
    solutions = []
    saw_identity = False
    for eq in state.equations:
        if eq.is_solution_form:
            solutions.append(eq.rhs.c0)
        elif eq.is_constant_form:
            if eq.lhs.c0 == eq.rhs.c0:
                saw_identity = True
            # A contradiction contributes no solutions.
        else:
            raise DomainError("state is not final")
    if saw_identity:
        # An identity is satisfied by every x; no finite list describes that.
        return NormalForm.undefined()
    if not solutions:
        return NormalForm.no_real_solutions()
    return NormalForm.solutions(solutions)


def _parse(text: str) -> EqState:
    return parse_state(text)


def make_domain() -> DomainContract:
    return DomainContract(
        domain_id="polyeq",
        rule_set=RULES,
        solving_strategy=repeat(choice_of([atom(r) for r in CORRECT_RULE_IDS])),
        buggy_strategy=repeat(
            choice_of([atom(r) for r in CORRECT_RULE_IDS + BUGGY_RULE_IDS])
        ),
        parse_text=_parse,
        print_text=print_state,
        normal_form_of_final=normal_form_of_final,
        default_max_buggy=DEFAULT_MAX_BUGGY,
        group_labels=GROUP_LABELS,
        measure=potential,
    )
