"""Acceptance gate: one test per shipped guarantee.

Frozen constants were computed once with the brute-force oracles in
tests/oracle.py and are asserted exactly; none of them is tuned to the
engine's output.
"""

import dataclasses
import json
import random
import time
from fractions import Fraction

import pytest
from fastapi.testclient import TestClient

from oracle import oracle_matches_table, sum_search, table_oracle

from mbt.diagnose import TableCache, complete, diagnose
from mbt.engine import Antichain, SearchConfig, antichain_insert, build_table, enumerate_paths
from mbt.exprcore import parse_sum
from mbt.interface.bench import run_benchmark
from mbt.interface.cli import cli_run
from mbt.interface.service import create_app
from mbt.strategy import steps_with_multiplicity

NORMAL = SearchConfig(mode="normal")
REDUCE = SearchConfig(mode="reduce")

# unique final answers of 1+2+3+4+5+6 under the buggy strategy, frozen from
# the brute-force oracle (the reachable values are -19..21 minus gaps)
SIX_TERM_UNIQUE_FINALS = 40

POLYEQ_FIXTURES = [
    "2=x-3",
    "x-5=-2x+4",
    "(x+6)^2=9",
    "4*(x+6)^2+3=39",
    "[2x-5=0, x-5=-2x+4]",
]

QUAD_X9_ANTICHAIN = [["forget-an-equation", "negate-a-term"]]
PAIR_ANTICHAIN = [["forget-divide"], ["negate-a-term"]]


def test_c1_exact_path_counts(sums):
    started = time.perf_counter()
    stats = enumerate_paths(parse_sum("1+2+3+4+5+6"), sums.buggy_strategy, sums, NORMAL)
    assert stats.path_count == 29160
    assert stats.prefix_count == 40695
    assert stats.unique_final_count <= 41
    assert stats.unique_final_count == SIX_TERM_UNIQUE_FINALS
    assert stats.stuck_count == 0

    four = enumerate_paths(parse_sum("1+2+3+4"), sums.buggy_strategy, sums, NORMAL)
    assert four.path_count == 162
    assert four.unique_final_count == 18

    spread = enumerate_paths(parse_sum("1+9+3+4"), sums.buggy_strategy, sums, NORMAL)
    assert spread.unique_final_count == 23
    assert time.perf_counter() - started < 60.0


def test_c2_reduction_soundness(sums, polyeq):
    rng = random.Random(20260814)
    for _ in range(200):
        values = tuple(rng.randint(-9, 9) for _ in range(rng.randint(2, 5)))
        task = parse_sum("+".join(str(v) for v in values))
        normal = build_table(task, sums.buggy_strategy, sums, NORMAL)
        reduced = build_table(task, sums.buggy_strategy, sums, REDUCE)
        assert normal == reduced
        _, _, finals = sum_search(values)
        assert set(normal.entries) == {f"S:{v}" for v in finals}
        for value, minimal in finals.items():
            assert normal.entries[f"S:{value}"].sets == frozenset(minimal)

    for text in POLYEQ_FIXTURES:
        task = polyeq.parse_text(text)
        oracle_finals = table_oracle(task, polyeq.buggy_strategy, polyeq, max_buggy=2)
        for cfg in (NORMAL, REDUCE):
            bounded = dataclasses.replace(cfg, max_buggy_applications=2)
            table = build_table(task, polyeq.buggy_strategy, polyeq, bounded)
            assert oracle_matches_table(oracle_finals, table)


def test_c3_same_answer_for_all_three_transforms(polyeq):
    task = polyeq.parse_text("2=x-3")
    results = []
    for text in ["x=2-3", "2-3=x", "2=x+3"]:
        r = diagnose(task, polyeq.parse_text(text), polyeq)
        assert r.completed.encode() == "Q:{-1|0|0}"
        results.append(r)
    assert results[0] == results[1] == results[2]
    assert results[0].status == "diagnosed"
    correct = diagnose(task, polyeq.parse_text("2=x-3"), polyeq)
    assert correct.status == "correct"
    assert correct.completed.encode() == "Q:{5|0|0}"


def test_c4_reference_diagnoses(polyeq):
    quad = diagnose(
        polyeq.parse_text("4*(x+6)^2+3=39"), polyeq.parse_text("[x=9]"), polyeq
    )
    assert quad.status == "diagnosed"
    listed = quad.alternatives.sorted_lists()
    assert ["forget-an-equation", "negate-a-term"] in listed
    assert listed == QUAD_X9_ANTICHAIN

    pair = diagnose(
        polyeq.parse_text("[2x-5=0, x-5=-2x+4]"),
        polyeq.parse_text("[x=5/2, x=9]"),
        polyeq,
    )
    assert pair.status == "diagnosed"
    listed = pair.alternatives.sorted_lists()
    assert ["forget-divide"] in listed
    assert listed == PAIR_ANTICHAIN


def test_c5_antichain_and_zero_buggy_properties(sums):
    rng = random.Random(5)
    universe = [str(i) for i in range(9)]
    ac = Antichain.empty()
    for _ in range(100_000):
        ac = antichain_insert(ac, frozenset(rng.sample(universe, rng.randint(0, 4))))
        assert ac.is_valid()

    dominated = antichain_insert(ac, frozenset())
    assert dominated.sets == frozenset([frozenset()])
    assert antichain_insert(dominated, frozenset({"0", "1"})) is dominated

    for cfg in (NORMAL, REDUCE):
        bounded = dataclasses.replace(cfg, max_buggy_applications=0)
        table = build_table(parse_sum("1+2+3+4"), sums.buggy_strategy, sums, bounded)
        assert set(table.entries) == {"S:10"}

    # every correct-only intermediate of every task over a value grid
    # diagnoses as correct
    cache = TableCache()
    tasks = [(a, b, c) for a in (-2, 0, 3) for b in (-2, 0, 3) for c in (-2, 0, 3)]
    tasks += [(a, b, c, d) for a in (1, 7) for b in (1, 7) for c in (1, 7) for d in (1, 7)]
    for values in tasks:
        task = parse_sum("+".join(str(v) for v in values))
        seen = {(task, sums.solving_strategy.key)}
        stack = [(task, sums.solving_strategy)]
        while stack:
            term, strat = stack.pop()
            r = diagnose(task, term, sums, cache=cache)
            assert r.status == "correct", sums.print_text(term)
            for t in steps_with_multiplicity(term, strat, sums.rule_set):
                key = (t.term, t.strategy.key)
                if key not in seen:
                    seen.add(key)
                    stack.append((t.term, t.strategy))


def test_c6_benchmark_grid():
    grid = [(n, k) for n in (2, 3, 4) for k in (6, 7, 8)]
    report = run_benchmark(grid, seed=0, expansion_budget=1_100_000)

    for n, k in grid:
        normal = report.cell(n, k, "normal")
        reduced = report.cell(n, k, "reduce")
        if normal.completed and reduced.completed:
            assert normal.finals == reduced.finals, (n, k)
            assert reduced.expanded_states < normal.expanded_states, (n, k)

    fast = report.cell(2, 8, "reduce")
    slow = report.cell(2, 8, "normal")
    assert fast.completed and slow.completed
    assert fast.wall_ms <= slow.wall_ms / 3.0

    assert report.cell(4, 8, "normal").status == "-"
    dashed = [c for c in report.cells if not c.completed]
    assert dashed, "budget must bite somewhere on this grid"
    for c in dashed:
        assert c.status == "-"
        assert c.wall_ms is None and c.finals is None


def test_c7_linear_closed_form(polyeq):
    rng = random.Random(20240814)
    for _ in range(500):
        a1 = rng.randint(-9, 9)
        a2 = rng.randint(-9, 9)
        while a2 == a1:
            a2 = rng.randint(-9, 9)
        b1, b2 = rng.randint(-9, 9), rng.randint(-9, 9)
        task = polyeq.parse_text(f"{a1}x{b1:+}={a2}x{b2:+}")
        nf = complete(task, polyeq)
        assert nf.encode() == f"Q:{{{Fraction(b2 - b1, a1 - a2)}|0|0}}"


def test_c8_service_matches_cli(capsys):
    client = TestClient(create_app())
    fixtures = [
        ("sumreduce", "1+2", "-1"),
        ("sumreduce", "1+2", "3"),
        ("polyeq", "2=x-3", "2=x+3"),
        ("polyeq", "4*(x+6)^2+3=39", "[x=9]"),
        ("polyeq", "[2x-5=0, x-5=-2x+4]", "[x=5/2, x=9]"),
    ]
    for domain_id, task, input_text in fixtures:
        http = client.post(
            "/diagnose", json={"domain_id": domain_id, "task": task, "input": input_text}
        )
        assert http.status_code == 200
        code = cli_run(
            ["diagnose", "--domain", domain_id, "--task", task,
             "--input", input_text, "--json"]
        )
        assert code == 0
        cli_doc = json.loads(capsys.readouterr().out)
        stable = lambda doc: json.dumps(
            {"status": doc["status"], "alternatives": doc.get("alternatives")},
            sort_keys=True,
            separators=(",", ":"),
        ).encode()
        assert stable(http.json()) == stable(cli_doc)

    assert client.post("/diagnose", json={"task": "1+2"}).status_code == 400

    fresh = TestClient(create_app())
    first = fresh.post(
        "/diagnose", json={"domain_id": "sumreduce", "task": "1+2", "input": "3"}
    )
    second = fresh.post(
        "/diagnose", json={"domain_id": "sumreduce", "task": "1+2", "input": "3"}
    )
    assert first.json()["table_cache"] == "miss"
    assert second.json()["table_cache"] == "hit"
