"""One diagnose entry point shared by the CLI and the HTTP service, so both
emit the same payload for the same request."""

from __future__ import annotations

import time
from dataclasses import replace
from typing import Any

from ..diagnose import (
    STATUS_DIAGNOSED,
    STATUS_ERROR,
    TableCache,
    diagnose_with_cache_info,
    try_single_rule,
)
from ..domains import get_domain
from ..engine import SearchConfig


def build_config(
    mode: str | None = None,
    reduce_limit: int | None = None,
    max_buggy: int | None = None,
    budget_ms: int | None = None,
) -> SearchConfig:
    cfg = SearchConfig()
    if mode is not None:
        cfg = replace(cfg, mode=mode)
    if reduce_limit is not None:
        cfg = replace(cfg, reduce_limit=reduce_limit)
    if max_buggy is not None:
        cfg = replace(cfg, max_buggy_applications=max_buggy)
    if budget_ms is not None:
        cfg = replace(cfg, time_budget_ms=budget_ms)
    return cfg


def execute_diagnose(
    domain_id: str,
    task_text: str,
    input_text: str,
    previous_text: str | None = None,
    cfg: SearchConfig | None = None,
    cache: TableCache | None = None,
) -> dict[str, Any]:
    """Payload dict with stable key order.

    Raises ParseError/DomainError/UnknownDomain for unusable requests and
    BudgetExceeded for overruns; completion failures are reported in-band
    as status "error".
    """
    start = time.perf_counter()
    domain = get_domain(domain_id)
    task = domain.parse_text(task_text)
    input_term = domain.parse_text(input_text)
    single_rule = None
    if previous_text is not None:
        previous = domain.parse_text(previous_text)
        single_rule = try_single_rule(previous, input_term, domain)
    result, hit = diagnose_with_cache_info(task, input_term, domain, cfg, cache)
    payload: dict[str, Any] = {"status": result.status}
    if single_rule is not None:
        payload["single_rule"] = single_rule
    if result.status == STATUS_DIAGNOSED:
        payload["alternatives"] = result.alternatives.sorted_lists()
    if result.status == STATUS_ERROR:
        payload["reason"] = result.reason
    payload["completed_final_answer"] = (
        result.completed.encode() if result.completed is not None else None
    )
    payload["timing_ms"] = round((time.perf_counter() - start) * 1000.0, 3)
    payload["table_cache"] = "hit" if hit else "miss"
    return payload
