"""Adjacent-pair reduction of integer sums.

The correct rule adds an adjacent pair; the buggy rules subtract the pair or
forget its first term.  Every rule shortens the sum by one, so any strategy
over these rules terminates, and a final term is a single integer.
"""

from __future__ import annotations

from ..errors import DomainError
from ..exprcore import NormalForm, SumExpr, parse_sum, print_sum
from ..strategy import Rule, RuleSet, atom, choice_of, repeat
from .base import DomainContract


def _combine_adjacent(e: SumExpr, combine) -> list[tuple[int, SumExpr]]:
    out = []
    for i in range(len(e) - 1):
        out.append((i + 1, SumExpr(e[:i] + (combine(e[i], e[i + 1]),) + e[i + 2 :])))
    return out


def _apply_add(e: SumExpr):
    return _combine_adjacent(e, lambda a, b: a + b)


def _apply_subtract(e: SumExpr):
    return _combine_adjacent(e, lambda a, b: a - b)


def _apply_forget_first(e: SumExpr):
    # Of the pair at i, keep only the second element.
    return [(i + 1, SumExpr(e[:i] + e[i + 1 :])) for i in range(len(e) - 1)]


RULES = RuleSet(
    [
        Rule("add-adjacent", _apply_add),
        Rule("subtract-adjacent", _apply_subtract, buggy=True),
        Rule("forget-first", _apply_forget_first, buggy=True),
    ],
    version="sumreduce/1",
)


def _normal_form(e: SumExpr) -> NormalForm:
    if len(e) != 1:
        raise DomainError(f"sum of {len(e)} terms is not final")
    return NormalForm.sum_value(e[0])


def make_domain() -> DomainContract:
    return DomainContract(
        domain_id="sumreduce",
        rule_set=RULES,
        solving_strategy=repeat(atom("add-adjacent")),
        buggy_strategy=repeat(
            choice_of([atom("add-adjacent"), atom("subtract-adjacent"), atom("forget-first")])
        ),
        parse_text=parse_sum,
        print_text=print_sum,
        normal_form_of_final=_normal_form,
        measure=len,
    )
