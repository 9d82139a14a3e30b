"""Final-answer diagnosis: complete a student input with the correct strategy,
then look the result up in the task's precomputed table of reachable finals.

A hit whose antichain is exactly {{}} means the input sits on a correct path.
Any other hit lists the minimal buggy-group sets that explain the answer.
A miss stays a miss: no nearest-match guessing.
"""

from __future__ import annotations

import hashlib
import os
import threading
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Sequence

from .domains.base import DomainContract
from .engine import (
    Antichain,
    DiagnosisTable,
    SearchConfig,
    build_table,
    config_fingerprint,
    ruleset_fingerprint,
)
from .errors import (
    AmbiguousCompletion,
    BudgetExceeded,
    CompletionStuck,
    DomainError,
    FingerprintMismatch,
    TableFileError,
)
from .exprcore import NormalForm
from .strategy import done, steps_with_multiplicity

Term = Any

COMPLETION_EXPANSION_BUDGET = 10**6

STATUS_CORRECT = "correct"
STATUS_DIAGNOSED = "diagnosed"
STATUS_NOT_DIAGNOSED = "not-diagnosed"
STATUS_ERROR = "error"


def effective_config(cfg: SearchConfig, domain: DomainContract) -> SearchConfig:
    """Fill in the domain's diagnosis default when no buggy cap was requested."""
    if cfg.max_buggy_applications is None and domain.default_max_buggy is not None:
        return replace(cfg, max_buggy_applications=domain.default_max_buggy)
    return cfg


def complete(input_term: Term, domain: DomainContract) -> NormalForm:
    """Normal form reached from the input by correct rules alone.

    All maximal correct runs are explored (deduplicated on term and remaining
    strategy); they must agree on a single normal form.
    """
    rules = domain.rule_set
    strat = domain.solving_strategy
    finals: dict[str, NormalForm] = {}
    stuck = 0
    seen = {(input_term, strat.key)}
    stack = [(input_term, strat)]
    expanded = 0
    while stack:
        term, s = stack.pop()
        expanded += 1
        if expanded > COMPLETION_EXPANSION_BUDGET:
            raise BudgetExceeded("completion exceeded its expansion budget")
        transitions = steps_with_multiplicity(term, s, rules)
        if not transitions:
            # Student input is arbitrary, so a run may end on a state the
            # domain cannot read as an answer; that run is stuck, not final.
            if done(term, s, rules):
                try:
                    nf = domain.normal_form_of_final(term)
                except DomainError:
                    stuck += 1
                else:
                    finals.setdefault(nf.encode(), nf)
            else:
                stuck += 1
            continue
        for t in transitions:
            key = (t.term, t.strategy.key)
            if key not in seen:
                seen.add(key)
                stack.append((t.term, t.strategy))
    if not finals:
        raise CompletionStuck(f"no final state reachable ({stuck} stuck states)")
    if len(finals) > 1:
        raise AmbiguousCompletion(
            "correct runs disagree: " + ", ".join(sorted(finals))
        )
    return next(iter(finals.values()))


@dataclass(frozen=True)
class DiagnosisResult:
    status: str
    alternatives: Antichain | None = None
    completed: NormalForm | None = None
    reason: str | None = None

    @property
    def is_correct(self) -> bool:
        return self.status == STATUS_CORRECT


def _result_for_antichain(ac: Antichain, completed: NormalForm) -> DiagnosisResult:
    if frozenset() in ac:
        # Empty-set dominance makes {{}} the only possible such antichain.
        return DiagnosisResult(STATUS_CORRECT, completed=completed)
    return DiagnosisResult(STATUS_DIAGNOSED, alternatives=ac, completed=completed)


class TableCache:
    """Tables keyed by (domain, canonical task, rule set, config).

    In-memory always; optionally persisted as JSON files named by the key's
    sha256 in `persist_dir` (default: $MBT_TABLE_CACHE_DIR if set).  Disk
    entries that are unreadable or built under different fingerprints are
    ignored and rebuilt; persistence failures are swallowed, the cache is
    only an optimization.
    """

    def __init__(self, persist_dir: str | Path | None = None):
        if persist_dir is None:
            persist_dir = os.environ.get("MBT_TABLE_CACHE_DIR") or None
        self._dir = Path(persist_dir) if persist_dir else None
        self._mem: dict[tuple[str, str, str, str], DiagnosisTable] = {}
        self._lock = threading.Lock()

    @staticmethod
    def _key(domain: DomainContract, task_text: str, cfg: SearchConfig):
        return (
            domain.domain_id,
            task_text,
            ruleset_fingerprint(domain.rule_set),
            config_fingerprint(cfg),
        )

    def _path_for(self, key) -> Path:
        digest = hashlib.sha256("\x1f".join(key).encode()).hexdigest()
        return self._dir / f"{digest}.json"

    def get_or_build(
        self, domain: DomainContract, task: Term, cfg: SearchConfig
    ) -> tuple[DiagnosisTable, bool]:
        """Returns (table, hit)."""
        task_text = domain.print_text(task)
        key = self._key(domain, task_text, cfg)
        with self._lock:
            table = self._mem.get(key)
        if table is not None:
            return table, True
        if self._dir is not None:
            table = self._load(key)
            if table is not None:
                with self._lock:
                    self._mem.setdefault(key, table)
                return table, True
        table = build_table(task, domain.buggy_strategy, domain, cfg)
        with self._lock:
            self._mem.setdefault(key, table)
        if self._dir is not None:
            self._store(key, table)
        return table, False

    def _load(self, key) -> DiagnosisTable | None:
        from .interface.tablefile import load_table

        try:
            table = load_table(
                self._path_for(key),
                expect_ruleset_fingerprint=key[2],
                expect_config_fingerprint=key[3],
            )
        except (TableFileError, FingerprintMismatch, OSError):
            return None
        if table.domain_id != key[0] or table.task_text != key[1]:
            return None
        return table

    def _store(self, key, table: DiagnosisTable) -> None:
        from .interface.tablefile import save_table

        try:
            self._dir.mkdir(parents=True, exist_ok=True)
            save_table(table, self._path_for(key))
        except OSError:
            pass


def diagnose(
    task: Term,
    input_term: Term,
    domain: DomainContract,
    cfg: SearchConfig | None = None,
    cache: TableCache | None = None,
) -> DiagnosisResult:
    result, _hit = diagnose_with_cache_info(task, input_term, domain, cfg, cache)
    return result


def diagnose_with_cache_info(
    task: Term,
    input_term: Term,
    domain: DomainContract,
    cfg: SearchConfig | None = None,
    cache: TableCache | None = None,
) -> tuple[DiagnosisResult, bool]:
    cfg = effective_config(cfg or SearchConfig(), domain)
    cache = cache or TableCache()
    table, hit = cache.get_or_build(domain, task, cfg)
    try:
        completed = complete(input_term, domain)
    except (CompletionStuck, AmbiguousCompletion) as exc:
        return DiagnosisResult(STATUS_ERROR, reason=str(exc)), hit
    entry = table.entries.get(completed.encode())
    if entry is None:
        return DiagnosisResult(STATUS_NOT_DIAGNOSED, completed=completed), hit
    return _result_for_antichain(entry, completed), hit


def try_single_rule(prev: Term, cur: Term, domain: DomainContract) -> str | None:
    """Some rule mapping prev to cur in one application; correct rules win
    ties, then lexicographic id."""
    candidates = sorted(domain.rule_set, key=lambda r: (r.buggy, r.id))
    for rule in candidates:
        for _pos, nxt in rule.apply(prev):
            if nxt == cur:
                return rule.id
    return None


@dataclass(frozen=True)
class DisambiguationEntry:
    task_text: str
    unique_final_count: int | None
    mean_alternatives: float | None
    failed: bool = False


@dataclass(frozen=True)
class DisambiguationReport:
    entries: tuple[DisambiguationEntry, ...]

    def ranked_tasks(self) -> list[str]:
        return [e.task_text for e in self.entries]


def disambiguate(
    candidates: Sequence[Term],
    domain: DomainContract,
    cfg: SearchConfig | None = None,
    cache: TableCache | None = None,
) -> DisambiguationReport:
    """Rank candidate tasks by how many distinct final answers they expose;
    more distinct finals means fewer colliding explanations."""
    if not candidates:
        raise ValueError("no candidate tasks")
    cfg0 = effective_config(cfg or SearchConfig(), domain)
    cache = cache or TableCache()
    scored: list[DisambiguationEntry] = []
    failed: list[DisambiguationEntry] = []
    for term in candidates:
        text = domain.print_text(term)
        try:
            table, _hit = cache.get_or_build(domain, term, cfg0)
        except BudgetExceeded:
            failed.append(DisambiguationEntry(text, None, None, failed=True))
            continue
        count = len(table.entries)
        mean = (
            sum(len(ac) for ac in table.entries.values()) / count if count else 0.0
        )
        scored.append(DisambiguationEntry(text, count, mean))
    # Stable sort keeps input order among equal counts.
    scored.sort(key=lambda e: -e.unique_final_count)
    return DisambiguationReport(tuple(scored + failed))
