"""Benchmark grid over the synthetic hash-rule domain.

Each cell builds the unique-final-answer table for n rules applied to a
k-term expression, once per requested mode.  Cells that blow the per-cell
budget are marked "-"; normal-mode cells whose exact expansion count is
known in advance to exceed the expansion budget are marked without running.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..domains.hypostrat import HypoStratParams, make_domain, make_epsilon
from ..engine import MODE_NORMAL, SearchConfig, build_table
from ..errors import BudgetExceeded

DASH = "-"


@dataclass(frozen=True, slots=True)
class BenchCell:
    n: int
    k: int
    mode: str
    status: str
    wall_ms: float | None = None
    expanded_states: int | None = None
    unique_finals: int | None = None
    finals: frozenset[str] | None = field(default=None, repr=False)

    @property
    def completed(self) -> bool:
        return self.status == "ok"


@dataclass(frozen=True)
class BenchReport:
    cells: tuple[BenchCell, ...]
    seed: int

    def cell(self, n: int, k: int, mode: str) -> BenchCell:
        for c in self.cells:
            if (c.n, c.k, c.mode) == (n, k, mode):
                return c
        raise KeyError((n, k, mode))

    def text(self) -> str:
        ns = sorted({c.n for c in self.cells})
        ks = sorted({c.k for c in self.cells})
        modes = list(dict.fromkeys(c.mode for c in self.cells))
        width = 10
        lines = ["wall seconds per cell (" + DASH + " = over budget)"]
        header = " " * 12 + "".join(f"k={k}".rjust(width) for k in ks)
        lines.append(header)
        for n in ns:
            for i, mode in enumerate(modes):
                label = f"n={n}" if i == 0 else ""
                row = f"{label:<4}{mode:<8}"
                for k in ks:
                    try:
                        c = self.cell(n, k, mode)
                    except KeyError:
                        row += "".rjust(width)
                        continue
                    mark = f"{c.wall_ms / 1000.0:.2f}" if c.completed else DASH
                    row += mark.rjust(width)
                lines.append(row)
        return "\n".join(lines)

    def csv(self) -> str:
        lines = ["n,k,mode,wall_ms,expanded_states,unique_finals,status"]
        for c in self.cells:
            if c.completed:
                lines.append(
                    f"{c.n},{c.k},{c.mode},{c.wall_ms:.1f},"
                    f"{c.expanded_states},{c.unique_finals},ok"
                )
            else:
                lines.append(f"{c.n},{c.k},{c.mode},,,,{DASH}")
        return "\n".join(lines) + "\n"


def run_benchmark(
    grid: Iterable[tuple[int, int]],
    seed: int = 0,
    modes: Sequence[str] = ("normal", "reduce"),
    time_budget_per_cell_ms: int | None = None,
    expansion_budget: int | None = None,
) -> BenchReport:
    cells: list[BenchCell] = []
    for n, k in sorted(set(grid)):
        params = HypoStratParams(n=n, k=k, seed=seed)
        domain = make_domain(params)
        task = make_epsilon(params)
        per_mode: dict[str, BenchCell] = {}
        for mode in modes:
            cell = _run_cell(
                domain, task, n, k, mode, time_budget_per_cell_ms, expansion_budget
            )
            per_mode[mode] = cell
            cells.append(cell)
        done = [c for c in per_mode.values() if c.completed]
        if len(done) > 1:
            first = done[0]
            for other in done[1:]:
                if other.finals != first.finals:
                    raise AssertionError(
                        f"modes disagree on finals at n={n}, k={k}: "
                        f"{first.mode} vs {other.mode}"
                    )
    return BenchReport(cells=tuple(cells), seed=seed)


def _run_cell(
    domain,
    task,
    n: int,
    k: int,
    mode: str,
    time_budget_ms: int | None,
    expansion_budget: int | None,
) -> BenchCell:
    predicted = domain.predicted_normal_expansions
    if (
        mode == MODE_NORMAL
        and expansion_budget is not None
        and predicted is not None
        and predicted > expansion_budget
    ):
        # The normal-mode expansion count is exact, so the overflow is certain.
        return BenchCell(n=n, k=k, mode=mode, status=DASH)
    cfg = SearchConfig(
        mode=mode,
        expansion_budget=expansion_budget if expansion_budget is not None else 10**8,
        time_budget_ms=time_budget_ms,
    )
    start = time.perf_counter()
    try:
        table = build_table(task, domain.buggy_strategy, domain, cfg)
    except BudgetExceeded:
        return BenchCell(n=n, k=k, mode=mode, status=DASH)
    wall_ms = (time.perf_counter() - start) * 1000.0
    return BenchCell(
        n=n,
        k=k,
        mode=mode,
        status="ok",
        wall_ms=wall_ms,
        expanded_states=table.meta.expanded_states,
        unique_finals=len(table.entries),
        finals=frozenset(table.entries),
    )
