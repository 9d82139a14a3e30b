"""Strategy combinators with small-step enumeration semantics.

A strategy describes which rule applications are admissible next.  `steps`
enumerates every admissible (rule, next term, remaining strategy) transition;
`done` says whether the strategy accepts stopping at the current term.
Nodes are hash-consed: structurally equal strategies are the same object, so
identity comparison and `key` are safe for heavy deduplication.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from typing import Any, Callable, Iterable, NamedTuple, Sequence

from .errors import ParseError, UnknownRule

Position = Any
Term = Any


@dataclass(frozen=True, slots=True)
class Rule:
    """A named rewrite rule; `apply` yields (position, next term) pairs."""

    id: str
    apply: Callable[[Term], Sequence[tuple[Position, Term]]]
    buggy: bool = False
    group: str = ""
    label: str = ""

    def __post_init__(self):
        if not self.group:
            object.__setattr__(self, "group", self.id)
        if not self.label:
            object.__setattr__(self, "label", self.id.replace("-", " "))


class RuleSet:
    """Rules in definition order with id lookup and a stable fingerprint."""

    def __init__(self, rules: Iterable[Rule], version: str):
        self.rules = tuple(rules)
        self.version = version
        self.by_id = {r.id: r for r in self.rules}
        if len(self.by_id) != len(self.rules):
            raise ValueError("duplicate rule id")

    def __iter__(self):
        return iter(self.rules)

    def __getitem__(self, rule_id: str) -> Rule:
        try:
            return self.by_id[rule_id]
        except KeyError:
            raise UnknownRule(rule_id) from None

    def __contains__(self, rule_id: str) -> bool:
        return rule_id in self.by_id

    def fingerprint_payload(self) -> list:
        return [self.version] + [[r.id, r.buggy, r.group] for r in sorted(self.rules, key=lambda r: r.id)]


class Strategy:
    __slots__ = ("key",)
    tag = "?"

    def __repr__(self) -> str:
        return f"<strategy {self.key}: {to_text(self)}>"


class _Succeed(Strategy):
    __slots__ = ()
    tag = "succeed"


class Atom(Strategy):
    __slots__ = ("rule_id",)
    tag = "atom"


class Seq(Strategy):
    __slots__ = ("first", "second")
    tag = "seq"


class Choice(Strategy):
    __slots__ = ("left", "right")
    tag = "choice"


class Many(Strategy):
    __slots__ = ("body",)
    tag = "many"


class Repeat(Strategy):
    __slots__ = ("body",)
    tag = "repeat"


_intern_lock = threading.Lock()
_intern_table: dict[tuple, Strategy] = {}
_next_key = 0


def _intern(shape: tuple, build: Callable[[], Strategy]) -> Strategy:
    global _next_key
    with _intern_lock:
        node = _intern_table.get(shape)
        if node is None:
            node = build()
            node.key = _next_key
            _next_key += 1
            _intern_table[shape] = node
        return node


def _make_succeed() -> Strategy:
    return _intern(("succeed",), _Succeed)


SUCCEED = _make_succeed()


def atom(rule_id: str) -> Strategy:
    def build():
        node = Atom()
        node.rule_id = rule_id
        return node

    return _intern(("atom", rule_id), build)


def seq(first: Strategy, second: Strategy) -> Strategy:
    def build():
        node = Seq()
        node.first = first
        node.second = second
        return node

    return _intern(("seq", first.key, second.key), build)


def choice(left: Strategy, right: Strategy) -> Strategy:
    def build():
        node = Choice()
        node.left = left
        node.right = right
        return node

    return _intern(("choice", left.key, right.key), build)


def many(body: Strategy) -> Strategy:
    def build():
        node = Many()
        node.body = body
        return node

    return _intern(("many", body.key), build)


def repeat(body: Strategy) -> Strategy:
    def build():
        node = Repeat()
        node.body = body
        return node

    return _intern(("repeat", body.key), build)


def choice_of(parts: Sequence[Strategy]) -> Strategy:
    """Right-nested choice over one or more alternatives."""
    if not parts:
        raise ValueError("empty choice")
    out = parts[-1]
    for part in reversed(parts[:-1]):
        out = choice(part, out)
    return out


def strategy_key(s: Strategy) -> int:
    """Stable within a process; equal keys iff structurally identical nodes."""
    return s.key


class Transition(NamedTuple):
    rule_id: str
    term: Term
    strategy: Strategy


def done(term: Term, strat: Strategy, rules: RuleSet) -> bool:
    tag = strat.tag
    if tag == "succeed" or tag == "many":
        return True
    if tag == "atom":
        if strat.rule_id not in rules:
            raise UnknownRule(strat.rule_id)
        return False
    if tag == "seq":
        return done(term, strat.first, rules) and done(term, strat.second, rules)
    if tag == "choice":
        return done(term, strat.left, rules) or done(term, strat.right, rules)
    if tag == "repeat":
        return not steps_with_multiplicity(term, strat.body, rules)
    raise TypeError(f"unknown strategy node {strat!r}")


def steps_with_multiplicity(term: Term, strat: Strategy, rules: RuleSet) -> dict[Transition, int]:
    """Admissible transitions, deduplicated, with distinct-position counts.

    Two redex positions yielding the same next term collapse to one transition
    of multiplicity two; the engine decides which arity it counts.
    """
    tag = strat.tag
    if tag == "succeed":
        return {}
    if tag == "atom":
        rule = rules[strat.rule_id]
        out: dict[Transition, int] = {}
        for _pos, nxt in rule.apply(term):
            key = Transition(rule.id, nxt, SUCCEED)
            out[key] = out.get(key, 0) + 1
        return out
    if tag == "seq":
        out = {
            Transition(t.rule_id, t.term, seq(t.strategy, strat.second)): m
            for t, m in steps_with_multiplicity(term, strat.first, rules).items()
        }
        if done(term, strat.first, rules):
            # Multiplicity is determined by (rule, term, next term), so a
            # collision between both parts carries an equal count.
            out.update(steps_with_multiplicity(term, strat.second, rules))
        return out
    if tag == "choice":
        out = steps_with_multiplicity(term, strat.left, rules)
        out.update(steps_with_multiplicity(term, strat.right, rules))
        return out
    if tag in ("many", "repeat"):
        return {
            Transition(t.rule_id, t.term, seq(t.strategy, strat)): m
            for t, m in steps_with_multiplicity(term, strat.body, rules).items()
        }
    raise TypeError(f"unknown strategy node {strat!r}")


def steps(term: Term, strat: Strategy, rules: RuleSet) -> frozenset[Transition]:
    return frozenset(steps_with_multiplicity(term, strat, rules))


def is_stuck(term: Term, strat: Strategy, rules: RuleSet) -> bool:
    return not steps_with_multiplicity(term, strat, rules) and not done(term, strat, rules)


# Textual notation: `r`, `s .*. t`, `s <|> t`, `many(s)`, `repeat(s)`, `succeed`.
# Precedence: choice < seq < primary; both operators associate to the right.

_NOTATION_TOKEN = re.compile(r"\s*(?:(?P<id>[A-Za-z0-9_-]+)|(?P<op>\.\*\.|<\|>|\(|\)))")


def parse_strategy(text: str) -> Strategy:
    tokens: list[tuple[str, int]] = []
    pos = 0
    while pos < len(text):
        m = _NOTATION_TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r}", position=pos)
        tokens.append((m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()

    idx = 0

    def peek() -> tuple[str, int]:
        return tokens[idx] if idx < len(tokens) else ("", len(text))

    def advance() -> tuple[str, int]:
        nonlocal idx
        tok = peek()
        idx += 1
        return tok

    def parse_choice() -> Strategy:
        left = parse_seq()
        if peek()[0] == "<|>":
            advance()
            return choice(left, parse_choice())
        return left

    def parse_seq() -> Strategy:
        first = parse_primary()
        if peek()[0] == ".*.":
            advance()
            return seq(first, parse_seq())
        return first

    def parse_primary() -> Strategy:
        tok, at = advance()
        if tok == "(":
            inner = parse_choice()
            closing, cat = advance()
            if closing != ")":
                raise ParseError("unclosed group", position=cat, expected="')'")
            return inner
        if tok in ("many", "repeat"):
            opening, oat = advance()
            if opening != "(":
                raise ParseError(f"{tok} needs parentheses", position=oat, expected="'('")
            inner = parse_choice()
            closing, cat = advance()
            if closing != ")":
                raise ParseError("unclosed group", position=cat, expected="')'")
            return many(inner) if tok == "many" else repeat(inner)
        if tok == "succeed":
            return SUCCEED
        if tok and tok not in (")", ".*.", "<|>"):
            return atom(tok)
        raise ParseError(f"unexpected {tok or 'end of input'!r}", position=at, expected="strategy")

    out = parse_choice()
    tok, at = peek()
    if tok:
        raise ParseError(f"trailing input {tok!r}", position=at)
    return out


def to_text(strat: Strategy, _ctx: int = 0) -> str:
    # Context levels: 0 choice, 1 seq, 2 primary.
    tag = strat.tag
    if tag == "succeed":
        return "succeed"
    if tag == "atom":
        return strat.rule_id
    if tag == "many":
        return f"many({to_text(strat.body)})"
    if tag == "repeat":
        return f"repeat({to_text(strat.body)})"
    if tag == "seq":
        text = f"{to_text(strat.first, 2)} .*. {to_text(strat.second, 1)}"
        return f"({text})" if _ctx >= 2 else text
    if tag == "choice":
        text = f"{to_text(strat.left, 1)} <|> {to_text(strat.right, 0)}"
        return f"({text})" if _ctx >= 1 else text
    raise TypeError(f"unknown strategy node {strat!r}")
