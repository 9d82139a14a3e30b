"""Seeded synthetic domain for benchmarking the search modes.

`n` rules each map an adjacent pair of integers to a pseudo-random integer in
the open range (-10^6, 10^6); for a fixed pair the n rule outputs are pairwise
distinct, so distinct rule choices never collapse into one branch.  The start
expression is a seeded sum of `k` such integers.  Everything derives from a
fixed 64-bit avalanche mix, so runs are reproducible across machines.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from ..errors import DomainError
from ..exprcore import NormalForm, SumExpr, parse_sum, print_sum
from ..strategy import Rule, RuleSet, atom, choice_of, repeat
from .base import DomainContract

_MASK = (1 << 64) - 1
_BOUND = 10**6
_SPAN = 2 * _BOUND - 1  # integers v with |v| < 10^6

_RULE_STREAM = 0x52554C45  # "RULE"
_EPS_STREAM = 0x45505349  # "EPSI"


def _mix(x: int) -> int:
    # splitmix64 finalizer
    x &= _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def _hash_parts(*parts: int) -> int:
    h = 0x9E3779B97F4A7C15
    for p in parts:
        h = _mix((h + p) & _MASK)
    return h


def _fold(h: int) -> int:
    return h % _SPAN - (_BOUND - 1)


def rule_value(i: int, a: int, b: int, seed: int) -> int:
    """Output of rule i on the adjacent pair (a, b); distinct across i."""
    if i < 1:
        raise DomainError("rule index starts at 1")
    return _rule_values(i, a, b, seed)[-1]


def _rule_values(n: int, a: int, b: int, seed: int) -> list[int]:
    vals: list[int] = []
    for i in range(1, n + 1):
        v = _fold(_hash_parts(seed, _RULE_STREAM, i, a, b))
        while v in vals:
            # Linear probe within the range so outputs stay pairwise distinct.
            v = v + 1 if v < _BOUND - 1 else -(_BOUND - 1)
        vals.append(v)
    return vals


@dataclass(frozen=True, slots=True)
class HypoStratParams:
    n: int
    k: int
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("need at least one rule")
        if self.k < 2:
            raise DomainError("need at least two summands")


def make_epsilon(params: HypoStratParams) -> SumExpr:
    return SumExpr(
        _fold(_hash_parts(params.seed, _EPS_STREAM, j)) for j in range(1, params.k + 1)
    )


def predicted_normal_expansions(params: HypoStratParams) -> int:
    """Exact node count of the normal-mode search tree over epsilon.

    After i of the k-1 combining steps there are n^i rule choices and
    (k-1)!/(k-1-i)! position orders, and no two nodes are ever merged.
    """
    n, k = params.n, params.k
    return sum(n**i * factorial(k - 1) // factorial(k - 1 - i) for i in range(k))


def _normal_form(e: SumExpr) -> NormalForm:
    if len(e) != 1:
        raise DomainError(f"sum of {len(e)} terms is not final")
    return NormalForm.sum_value(e[0])


def make_domain(params: HypoStratParams) -> DomainContract:
    cache: dict[tuple[int, int], list[int]] = {}
    n, seed = params.n, params.seed

    def values_for(a: int, b: int) -> list[int]:
        pair = (a, b)
        vals = cache.get(pair)
        if vals is None:
            vals = _rule_values(n, a, b, seed)
            cache[pair] = vals
        return vals

    def make_apply(index: int):
        def apply(e: SumExpr):
            out = []
            for pos in range(len(e) - 1):
                v = values_for(e[pos], e[pos + 1])[index - 1]
                out.append((pos + 1, SumExpr(e[:pos] + (v,) + e[pos + 2 :])))
            return out

        return apply

    rules = RuleSet(
        [Rule(f"R{i}", make_apply(i)) for i in range(1, n + 1)],
        version=f"hypostrat/{n}/{seed}/1",
    )
    strat = repeat(choice_of([atom(f"R{i}") for i in range(1, n + 1)]))
    return DomainContract(
        domain_id=f"hypostrat:{params.n}:{params.k}:{params.seed}",
        rule_set=rules,
        solving_strategy=strat,
        buggy_strategy=strat,
        parse_text=parse_sum,
        print_text=print_sum,
        normal_form_of_final=_normal_form,
        measure=len,
        predicted_normal_expansions=predicted_normal_expansions(params),
    )
