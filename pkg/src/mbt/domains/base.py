"""The plug-in contract a domain exposes to the search and diagnosis layers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from ..exprcore import NormalForm
from ..strategy import RuleSet, Strategy

Term = Any


@dataclass(frozen=True)
class DomainContract:
    """Everything the engine needs to search a domain and read off results.

    `solving_strategy` uses correct rules only and must reach a final state
    from every well-formed term.  `buggy_strategy` adds the buggy rules.
    `measure` is a termination witness used by tests, not by the engine.
    `predicted_normal_expansions`, when known in closed form, lets callers
    refuse hopeless normal-mode searches without running them.
    """

    domain_id: str
    rule_set: RuleSet
    solving_strategy: Strategy
    buggy_strategy: Strategy
    parse_text: Callable[[str], Term]
    print_text: Callable[[Term], str]
    normal_form_of_final: Callable[[Term], NormalForm]
    default_max_buggy: int | None = None
    group_labels: Mapping[str, str] = field(default_factory=dict)
    measure: Callable[[Term], Any] | None = None
    predicted_normal_expansions: int | None = None

    def label_of(self, group: str) -> str:
        return self.group_labels.get(group, group.replace("-", " "))
