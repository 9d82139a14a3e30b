"""Diagnosis of erroneous final answers in stepwise math tasks.

A task and a rule strategy span a search space of every answer a student
could reach, with or without known buggy rules.  The engine enumerates that
space (optionally folding duplicate intermediate states), producing a table
from each reachable final answer to the minimal sets of buggy-rule groups
that explain it.  Diagnosing a student input is then: complete the input
with correct rules only, look up the result.
"""

from .diagnose import (
    DiagnosisResult,
    DisambiguationReport,
    TableCache,
    complete,
    diagnose,
    disambiguate,
    effective_config,
    try_single_rule,
)
from .domains import available_domains, get_domain
from .engine import (
    Antichain,
    DiagnosisTable,
    PathStats,
    SearchConfig,
    antichain_insert,
    build_table,
    enumerate_paths,
    merge_tables,
)
from .errors import (
    AmbiguousCompletion,
    BudgetExceeded,
    CompletionStuck,
    ConfigMismatch,
    DomainError,
    FingerprintMismatch,
    MbtError,
    ParseError,
    TableFileError,
    UnknownDomain,
    UnknownRule,
    VersionMismatch,
)
from .strategy import Rule, RuleSet, Strategy, parse_strategy, to_text

__version__ = "0.1.0"

__all__ = [
    "Antichain",
    "AmbiguousCompletion",
    "BudgetExceeded",
    "CompletionStuck",
    "ConfigMismatch",
    "DiagnosisResult",
    "DiagnosisTable",
    "DisambiguationReport",
    "DomainError",
    "FingerprintMismatch",
    "MbtError",
    "ParseError",
    "PathStats",
    "Rule",
    "RuleSet",
    "SearchConfig",
    "Strategy",
    "TableCache",
    "TableFileError",
    "UnknownDomain",
    "UnknownRule",
    "VersionMismatch",
    "antichain_insert",
    "available_domains",
    "build_table",
    "complete",
    "diagnose",
    "disambiguate",
    "effective_config",
    "enumerate_paths",
    "get_domain",
    "merge_tables",
    "parse_strategy",
    "to_text",
    "try_single_rule",
]
