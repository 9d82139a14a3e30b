"""Search over strategy transitions: path statistics and final-answer tables.

Two modes share one semantics.  `normal` walks the full transition tree.
`reduce` walks level by level and merges states that agree on (term,
remaining strategy), taking the union of their explanation payloads; the
resulting table is provably identical, only cheaper.  A state is terminal
when it admits no transition; it is a final answer if its strategy accepts
there, otherwise it is stuck and excluded from the table.
"""

from __future__ import annotations

import gc
import hashlib
import json
import time
from dataclasses import dataclass
from typing import Any, Iterable

from .errors import BudgetExceeded, ConfigMismatch
from .strategy import Rule, RuleSet, SUCCEED, Strategy, done, seq, steps_with_multiplicity

Term = Any

MODE_NORMAL = "normal"
MODE_REDUCE = "reduce"


@dataclass(frozen=True, slots=True)
class SearchConfig:
    """Search knobs.  `max_buggy_applications=None` means unlimited; callers
    that want a domain's diagnosis default resolve it before reaching here."""

    mode: str = MODE_REDUCE
    reduce_limit: int = 5000
    reduce_at_repeat_boundary: bool = True
    max_buggy_applications: int | None = None
    count_positions_distinct: bool = True
    expansion_budget: int = 10**8
    time_budget_ms: float | None = None

    def __post_init__(self):
        if self.mode not in (MODE_NORMAL, MODE_REDUCE):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.reduce_limit < 1:
            raise ValueError("reduce_limit must be positive")
        if self.max_buggy_applications is not None and self.max_buggy_applications < 0:
            raise ValueError("max_buggy_applications must be nonnegative")


@dataclass(frozen=True, slots=True)
class PathStats:
    path_count: int
    prefix_count: int
    unique_final_count: int
    stuck_count: int


@dataclass(frozen=True, slots=True)
class Antichain:
    """Pairwise subset-incomparable sets of buggy-group symbols."""

    sets: frozenset[frozenset[str]]

    @staticmethod
    def empty() -> "Antichain":
        return Antichain(frozenset())

    @staticmethod
    def from_sets(sets: Iterable[Iterable[str]]) -> "Antichain":
        acc: set[frozenset[str]] = set()
        for s in sets:
            _antichain_add(acc, frozenset(s))
        return Antichain(frozenset(acc))

    def insert(self, s: Iterable[str]) -> "Antichain":
        acc = set(self.sets)
        if not _antichain_add(acc, frozenset(s)):
            return self
        return Antichain(frozenset(acc))

    def union(self, other: "Antichain") -> "Antichain":
        acc = set(self.sets)
        for s in other.sets:
            _antichain_add(acc, s)
        return Antichain(frozenset(acc))

    def is_valid(self) -> bool:
        for s in self.sets:
            for t in self.sets:
                if s is not t and s <= t:
                    return False
        return True

    def sorted_lists(self) -> list[list[str]]:
        inner = [sorted(s) for s in self.sets]
        return sorted(inner, key=lambda xs: (len(xs), xs))

    def __contains__(self, s: Iterable[str]) -> bool:
        return frozenset(s) in self.sets

    def __iter__(self):
        return iter(self.sets)

    def __len__(self) -> int:
        return len(self.sets)


def antichain_insert(antichain: Antichain, s: Iterable[str]) -> Antichain:
    """If some member is a subset of s, drop s; otherwise remove supersets, add s."""
    return antichain.insert(s)


def _antichain_add(sets: set[frozenset[str]], s: frozenset[str]) -> bool:
    for member in sets:
        if member <= s:
            return False
    for member in [m for m in sets if s < m]:
        sets.discard(member)
    sets.add(s)
    return True


def _pairs_add(pairs: dict[frozenset[str], int], s: frozenset[str], c: int) -> bool:
    """Keep (group set, application count) pairs minimal under (subset, <=).

    A merged state must remember, per distinct group set, the cheapest way it
    was reached: a costlier or larger explanation can never produce a final
    diagnosis the cheaper subset could not.
    """
    for s2, c2 in pairs.items():
        if c2 <= c and s2 <= s:
            return False
    for s2 in [s2 for s2, c2 in pairs.items() if c <= c2 and s <= s2]:
        del pairs[s2]
    pairs[s] = c
    return True


@dataclass(slots=True)
class TableMeta:
    mode: str
    expanded_states: int = 0
    merge_events: int = 0
    stuck_paths: int = 0
    wall_ms: float = 0.0


@dataclass(eq=False, slots=True)
class DiagnosisTable:
    """Final-answer key -> antichain of minimal buggy-group sets."""

    domain_id: str
    task_text: str
    entries: dict[str, Antichain]
    ruleset_fingerprint: str
    config_fingerprint: str
    meta: TableMeta

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiagnosisTable):
            return NotImplemented
        return (
            self.domain_id == other.domain_id
            and self.task_text == other.task_text
            and self.entries == other.entries
        )

    def canonical_entries(self) -> list[list]:
        return [[key, self.entries[key].sorted_lists()] for key in sorted(self.entries)]


def ruleset_fingerprint(rules: RuleSet) -> str:
    payload = json.dumps(rules.fingerprint_payload(), separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


def config_fingerprint(cfg: SearchConfig) -> str:
    """Covers only table-shaping settings; mode and reduction knobs cannot
    change the resulting table and are deliberately excluded."""
    budget = cfg.max_buggy_applications
    payload = json.dumps({"max_buggy": budget if budget is not None else "unlimited"})
    return hashlib.sha256(payload.encode()).hexdigest()


class _Expander:
    """Transition generator; special-cases repeat-of-rule-choices, which the
    reference strategies use, to skip the generic recursion in hot loops."""

    def __init__(self, rules: RuleSet, root: Strategy):
        self.rules = rules
        self._fast_nodes: dict[int, tuple[Rule, ...]] = {}
        self._stable: Strategy | None = None
        flat = _flatten_repeat_of_atoms(root)
        if flat is not None:
            rep, rule_ids = flat
            stable = seq(SUCCEED, rep)
            self._stable = stable
            fast_rules = tuple(rules[rid] for rid in rule_ids)
            self._fast_nodes[rep.key] = fast_rules
            self._fast_nodes[stable.key] = fast_rules

    def expand(self, term: Term, strat: Strategy) -> list[tuple[Rule, Term, Strategy, int]]:
        fast = self._fast_nodes.get(strat.key)
        if fast is not None:
            out = []
            stable = self._stable
            for rule in fast:
                seen: dict[Term, int] = {}
                for _pos, nxt in rule.apply(term):
                    seen[nxt] = seen.get(nxt, 0) + 1
                for nxt, mult in seen.items():
                    out.append((rule, nxt, stable, mult))
            return out
        return [
            (self.rules[t.rule_id], t.term, t.strategy, m)
            for t, m in steps_with_multiplicity(term, strat, self.rules).items()
        ]

    def is_done(self, term: Term, strat: Strategy) -> bool:
        if strat.key in self._fast_nodes:
            return True  # repeat accepts exactly when no rule applies
        return done(term, strat, self.rules)


def _flatten_repeat_of_atoms(root: Strategy):
    node = root
    if node.tag == "seq" and node.first is SUCCEED:
        node = node.second
    if node.tag != "repeat":
        return None
    rule_ids: list[str] = []

    def walk(b: Strategy) -> bool:
        if b.tag == "choice":
            return walk(b.left) and walk(b.right)
        if b.tag == "atom":
            rule_ids.append(b.rule_id)
            return True
        return False

    if not walk(node.body):
        return None
    return node, tuple(rule_ids)


class _Budget:
    __slots__ = ("cap", "deadline", "expanded", "_check_mask")

    def __init__(self, cfg: SearchConfig):
        self.cap = cfg.expansion_budget
        self.deadline = None
        if cfg.time_budget_ms is not None:
            self.deadline = time.perf_counter() + cfg.time_budget_ms / 1000.0
        self.expanded = 0
        self._check_mask = 0x7FF

    def tick(self) -> None:
        self.expanded += 1
        if self.expanded > self.cap:
            raise BudgetExceeded(f"state expansions exceeded {self.cap}")
        if self.deadline is not None and (self.expanded & self._check_mask) == 0:
            if time.perf_counter() > self.deadline:
                raise BudgetExceeded("wall-clock budget exceeded")


def enumerate_paths(task: Term, strategy: Strategy, domain, cfg: SearchConfig) -> PathStats:
    """Exhaustive path statistics; requires normal mode (counts are per path)."""
    if cfg.mode != MODE_NORMAL:
        raise ValueError("enumerate_paths requires mode='normal'")
    expander = _Expander(domain.rule_set, strategy)
    budget = _Budget(cfg)
    max_buggy = cfg.max_buggy_applications
    use_mult = cfg.count_positions_distinct

    paths = 0
    prefixes = 0
    stuck = 0
    finals: set[str] = set()
    stack: list[tuple[Term, Strategy, int, int]] = [(task, strategy, 1, 0)]
    while stack:
        term, strat, weight, buggy_count = stack.pop()
        budget.tick()
        trans = expander.expand(term, strat)
        live = 0
        for rule, nxt, nstrat, mult in trans:
            count = buggy_count
            if rule.buggy:
                count += 1
                if max_buggy is not None and count > max_buggy:
                    continue
            w = weight * (mult if use_mult else 1)
            prefixes += w
            stack.append((nxt, nstrat, w, count))
            live += 1
        if live == 0:
            if trans or not expander.is_done(term, strat):
                # Pruned or genuinely stuck: either way not a final answer.
                stuck += weight
            else:
                paths += weight
                finals.add(domain.normal_form_of_final(term).encode())
    return PathStats(paths, prefixes, len(finals), stuck)


def build_table(task: Term, strategy: Strategy, domain, cfg: SearchConfig) -> DiagnosisTable:
    start = time.perf_counter()
    meta = TableMeta(mode=cfg.mode)
    # Large builds allocate containers by the million; cyclic collection in
    # the middle of that is pure overhead, nothing cyclic is created here.
    gc_was_enabled = gc.isenabled()
    if gc_was_enabled:
        gc.disable()
    try:
        if cfg.mode == MODE_NORMAL:
            entries = _build_normal(task, strategy, domain, cfg, meta)
        else:
            entries = _build_reduce(task, strategy, domain, cfg, meta)
    finally:
        if gc_was_enabled:
            gc.enable()
    meta.wall_ms = (time.perf_counter() - start) * 1000.0
    return DiagnosisTable(
        domain_id=domain.domain_id,
        task_text=domain.print_text(task),
        entries={key: Antichain(frozenset(sets)) for key, sets in entries.items()},
        ruleset_fingerprint=ruleset_fingerprint(domain.rule_set),
        config_fingerprint=config_fingerprint(cfg),
        meta=meta,
    )


def _build_normal(task, strategy, domain, cfg, meta) -> dict[str, set[frozenset[str]]]:
    expander = _Expander(domain.rule_set, strategy)
    budget = _Budget(cfg)
    max_buggy = cfg.max_buggy_applications
    entries: dict[str, set[frozenset[str]]] = {}
    stack: list[tuple[Term, Strategy, frozenset[str], int]] = [(task, strategy, frozenset(), 0)]
    while stack:
        term, strat, groups, count = stack.pop()
        budget.tick()
        trans = expander.expand(term, strat)
        live = 0
        for rule, nxt, nstrat, _mult in trans:
            if rule.buggy:
                c2 = count + 1
                if max_buggy is not None and c2 > max_buggy:
                    continue
                stack.append((nxt, nstrat, groups | {rule.group}, c2))
            else:
                stack.append((nxt, nstrat, groups, count))
            live += 1
        if live == 0:
            if trans or not expander.is_done(term, strat):
                meta.stuck_paths += 1
            else:
                key = domain.normal_form_of_final(term).encode()
                _antichain_add(entries.setdefault(key, set()), groups)
    meta.expanded_states = budget.expanded
    return entries


def _build_reduce(task, strategy, domain, cfg, meta) -> dict[str, set[frozenset[str]]]:
    expander = _Expander(domain.rule_set, strategy)
    budget = _Budget(cfg)
    max_buggy = cfg.max_buggy_applications
    entries: dict[str, set[frozenset[str]]] = {}

    def fold(items: list) -> list:
        # Payload dicts may be shared between frontier entries, so a slot is
        # copied the first time something merges into it, never before.
        merged: dict[tuple, list] = {}
        for term, strat, pairs in items:
            k = (term, strat.key)
            slot = merged.get(k)
            if slot is None:
                merged[k] = [term, strat, pairs, False]
            else:
                target = slot[2]
                if not slot[3]:
                    target = dict(target)
                    slot[2] = target
                    slot[3] = True
                for s, c in pairs.items():
                    _pairs_add(target, s, c)
        return [(term, strat, pairs) for term, strat, pairs, _ in merged.values()]

    frontier: list[tuple[Term, Strategy, dict[frozenset[str], int]]] = [
        (task, strategy, {frozenset(): 0})
    ]
    while frontier:
        buffer: list = []
        fold_at = cfg.reduce_limit + 1
        for term, strat, pairs in frontier:
            budget.tick()
            trans = expander.expand(term, strat)
            live = 0
            for rule, nxt, nstrat, _mult in trans:
                if rule.buggy:
                    stepped: dict[frozenset[str], int] = {}
                    for s, c in pairs.items():
                        if max_buggy is not None:
                            c2 = c + 1
                            if c2 > max_buggy:
                                continue
                        else:
                            c2 = 0
                        _pairs_add(stepped, s | {rule.group}, c2)
                    if not stepped:
                        continue
                else:
                    stepped = pairs
                buffer.append((nxt, nstrat, stepped))
                live += 1
                if len(buffer) >= fold_at:
                    buffer = fold(buffer)
                    meta.merge_events += 1
                    fold_at = max(cfg.reduce_limit + 1, 2 * len(buffer))
            if live == 0:
                if trans or not expander.is_done(term, strat):
                    meta.stuck_paths += 1
                else:
                    key = domain.normal_form_of_final(term).encode()
                    bucket = entries.setdefault(key, set())
                    for s in pairs:
                        _antichain_add(bucket, s)
        if cfg.reduce_at_repeat_boundary and buffer:
            folded = fold(buffer)
            if len(folded) < len(buffer):
                meta.merge_events += 1
            buffer = folded
        frontier = buffer
    meta.expanded_states = budget.expanded
    return entries


def merge_tables(a: DiagnosisTable, b: DiagnosisTable) -> DiagnosisTable:
    """Key-wise antichain union of two tables for the same task and config."""
    same = (
        a.domain_id == b.domain_id
        and a.task_text == b.task_text
        and a.ruleset_fingerprint == b.ruleset_fingerprint
        and a.config_fingerprint == b.config_fingerprint
    )
    if not same:
        raise ConfigMismatch("tables disagree on task, rules, or configuration")
    entries = dict(a.entries)
    for key, ac in b.entries.items():
        entries[key] = entries[key].union(ac) if key in entries else ac
    meta = TableMeta(
        mode=a.meta.mode if a.meta.mode == b.meta.mode else "merged",
        expanded_states=a.meta.expanded_states + b.meta.expanded_states,
        merge_events=a.meta.merge_events + b.meta.merge_events,
        stuck_paths=a.meta.stuck_paths + b.meta.stuck_paths,
        wall_ms=a.meta.wall_ms + b.meta.wall_ms,
    )
    return DiagnosisTable(
        domain_id=a.domain_id,
        task_text=a.task_text,
        entries=entries,
        ruleset_fingerprint=a.ruleset_fingerprint,
        config_fingerprint=a.config_fingerprint,
        meta=meta,
    )
