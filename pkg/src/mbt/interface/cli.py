"""Command-line front end.

Exit codes: 0 success, 1 user error (bad flags, unknown domain, unparsable
text, I/O problems), 2 search budget exceeded.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Sequence

from ..diagnose import TableCache, disambiguate, effective_config
from ..domains import get_domain
from ..engine import SearchConfig, build_table, enumerate_paths
from ..errors import (
    BudgetExceeded,
    DomainError,
    MbtError,
    ParseError,
    UnknownDomain,
    UnknownRule,
)
from .api import build_config, execute_diagnose
from .tablefile import save_table


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; 2 is reserved for budget
    # overruns here, so usage problems are rerouted to exit code 1.
    def error(self, message: str):
        raise _UsageError(message)


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=["normal", "reduce"], default=None)
    p.add_argument("--reduce-limit", type=int, default=None, metavar="N")
    p.add_argument("--max-buggy", type=int, default=None, metavar="N")
    p.add_argument("--budget-ms", type=int, default=None, metavar="N")


def _make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mbt", description="final-answer diagnosis toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diagnose", help="diagnose a student input for a task")
    p.add_argument("--domain", required=True)
    p.add_argument("--task", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--previous", default=None)
    _add_search_flags(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("stats", help="path and final-answer counts for a task")
    p.add_argument("--domain", required=True)
    p.add_argument("--task", required=True)
    _add_search_flags(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("table", help="build a diagnosis table and save it")
    p.add_argument("--domain", required=True)
    p.add_argument("--task", required=True)
    p.add_argument("--out", required=True, metavar="PATH")
    _add_search_flags(p)

    p = sub.add_parser("bench", help="run the synthetic benchmark grid")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid-n", default="2,3,4", metavar="LIST")
    p.add_argument("--grid-k", default="6,7,8", metavar="LIST")
    p.add_argument("--modes", default="normal,reduce", metavar="LIST")
    p.add_argument("--budget-ms", type=int, default=None, metavar="N",
                   help="per-cell wall budget")
    p.add_argument("--expansion-budget", type=int, default=None, metavar="N")
    p.add_argument("--out", default=None, metavar="PATH", help="CSV output path")

    p = sub.add_parser("disambiguate", help="rank candidate tasks")
    p.add_argument("--domain", required=True)
    p.add_argument("--task", action="append", required=True,
                   help="candidate task (repeat the flag)")
    _add_search_flags(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("serve", help="start the HTTP diagnose service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")

    return parser


def cli_run(argv: Sequence[str]) -> int:
    parser = _make_parser()
    try:
        args = parser.parse_args(argv)
        return _dispatch(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, DomainError, UnknownDomain, UnknownRule) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except MbtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(cli_run(sys.argv[1:]))


def _dispatch(args: argparse.Namespace) -> int:
    handler = {
        "diagnose": _cmd_diagnose,
        "stats": _cmd_stats,
        "table": _cmd_table,
        "bench": _cmd_bench,
        "disambiguate": _cmd_disambiguate,
        "serve": _cmd_serve,
    }[args.command]
    return handler(args)


def _config_from(args: argparse.Namespace) -> SearchConfig:
    return build_config(
        mode=args.mode,
        reduce_limit=args.reduce_limit,
        max_buggy=args.max_buggy,
        budget_ms=args.budget_ms,
    )


def _cmd_diagnose(args: argparse.Namespace) -> int:
    payload = execute_diagnose(
        args.domain,
        args.task,
        args.input,
        previous_text=args.previous,
        cfg=_config_from(args),
        cache=TableCache(),
    )
    if args.json:
        print(json.dumps(payload, indent=2))
        return 0
    domain = get_domain(args.domain)
    print(f"status: {payload['status']}")
    if "single_rule" in payload:
        print(f"single rule: {payload['single_rule']}")
    if payload.get("completed_final_answer") is not None:
        print(f"completed final answer: {payload['completed_final_answer']}")
    if "reason" in payload:
        print(f"reason: {payload['reason']}")
    for i, group_set in enumerate(payload.get("alternatives", []), start=1):
        labels = ", ".join(domain.label_of(g) for g in group_set) or "(no buggy rules)"
        print(f"  {i}. {labels}")
    print(f"table cache: {payload['table_cache']}, {payload['timing_ms']:.1f} ms")
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    domain = get_domain(args.domain)
    task = domain.parse_text(args.task)
    # Path counting is only defined for the plain tree walk.
    cfg = dataclasses.replace(_config_from(args), mode="normal")
    stats = enumerate_paths(task, domain.buggy_strategy, domain, cfg)
    payload = {
        "paths": stats.path_count,
        "prefixes": stats.prefix_count,
        "unique_finals": stats.unique_final_count,
        "stuck": stats.stuck_count,
    }
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(
            f"paths={stats.path_count} prefixes={stats.prefix_count} "
            f"unique_finals={stats.unique_final_count} stuck={stats.stuck_count}"
        )
    return 0


def _cmd_table(args: argparse.Namespace) -> int:
    domain = get_domain(args.domain)
    task = domain.parse_text(args.task)
    cfg = effective_config(_config_from(args), domain)
    table = build_table(task, domain.buggy_strategy, domain, cfg)
    save_table(table, args.out)
    print(
        f"saved {len(table.entries)} entries to {args.out} "
        f"({table.meta.mode} mode, {table.meta.expanded_states} expansions, "
        f"{table.meta.wall_ms:.1f} ms)"
    )
    return 0


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise _UsageError(f"{flag} expects a comma-separated integer list")


def _cmd_bench(args: argparse.Namespace) -> int:
    from .bench import run_benchmark

    ns = _parse_int_list(args.grid_n, "--grid-n")
    ks = _parse_int_list(args.grid_k, "--grid-k")
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    for m in modes:
        if m not in ("normal", "reduce"):
            raise _UsageError(f"unknown mode: {m}")
    report = run_benchmark(
        [(n, k) for n in ns for k in ks],
        seed=args.seed,
        modes=modes,
        time_budget_per_cell_ms=args.budget_ms,
        expansion_budget=args.expansion_budget,
    )
    print(report.text())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.csv())
        print(f"wrote CSV to {args.out}")
    return 0


def _cmd_disambiguate(args: argparse.Namespace) -> int:
    domain = get_domain(args.domain)
    candidates = [domain.parse_text(t) for t in args.task]
    report = disambiguate(candidates, domain, _config_from(args))
    if args.json:
        print(
            json.dumps(
                [
                    {
                        "task": e.task_text,
                        "unique_finals": e.unique_final_count,
                        "mean_alternatives": e.mean_alternatives,
                        "failed": e.failed,
                    }
                    for e in report.entries
                ],
                indent=2,
            )
        )
        return 0
    for rank, e in enumerate(report.entries, start=1):
        if e.failed:
            print(f"{rank}. {e.task_text}  (budget exceeded)")
        else:
            print(
                f"{rank}. {e.task_text}  unique_finals={e.unique_final_count} "
                f"mean_alternatives={e.mean_alternatives:.2f}"
            )
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0
