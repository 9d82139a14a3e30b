"""Versioned JSON persistence for diagnosis tables."""

from __future__ import annotations

import json
import os
from pathlib import Path

from ..engine import Antichain, DiagnosisTable, TableMeta
from ..errors import FingerprintMismatch, TableFileError, VersionMismatch

FORMAT_VERSION = 1


def save_table(table: DiagnosisTable, path: str | Path) -> None:
    """Writes atomically: a torn write must not leave a half-readable file."""
    doc = {
        "format_version": FORMAT_VERSION,
        "domain_id": table.domain_id,
        "task": table.task_text,
        "config_fingerprint": table.config_fingerprint,
        "ruleset_fingerprint": table.ruleset_fingerprint,
        "meta": {
            "mode": table.meta.mode,
            "expanded_states": table.meta.expanded_states,
            "merge_events": table.meta.merge_events,
            "stuck_paths": table.meta.stuck_paths,
            "wall_ms": table.meta.wall_ms,
        },
        "entries": table.canonical_entries(),
    }
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    os.replace(tmp, path)


def load_table(
    path: str | Path,
    *,
    expect_ruleset_fingerprint: str | None = None,
    expect_config_fingerprint: str | None = None,
) -> DiagnosisTable:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableFileError(f"corrupt table file {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise TableFileError(f"corrupt table file {path}: not an object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"unsupported table format version: {version!r}")
    try:
        domain_id = doc["domain_id"]
        task_text = doc["task"]
        config_fp = doc["config_fingerprint"]
        ruleset_fp = doc["ruleset_fingerprint"]
        raw_entries = doc["entries"]
        raw_meta = doc.get("meta", {})
        entries = {
            key: Antichain.from_sets(map(frozenset, lists))
            for key, lists in raw_entries
        }
        meta = TableMeta(
            mode=raw_meta.get("mode", "unknown"),
            expanded_states=raw_meta.get("expanded_states", 0),
            merge_events=raw_meta.get("merge_events", 0),
            stuck_paths=raw_meta.get("stuck_paths", 0),
            wall_ms=raw_meta.get("wall_ms", 0.0),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise TableFileError(f"corrupt table file {path}: {exc}") from exc
    if (
        expect_ruleset_fingerprint is not None
        and ruleset_fp != expect_ruleset_fingerprint
    ):
        raise FingerprintMismatch(
            "table was built under a different rule set: "
            f"{ruleset_fp} != {expect_ruleset_fingerprint}"
        )
    if (
        expect_config_fingerprint is not None
        and config_fp != expect_config_fingerprint
    ):
        raise FingerprintMismatch(
            "table was built under a different configuration: "
            f"{config_fp} != {expect_config_fingerprint}"
        )
    return DiagnosisTable(
        domain_id=domain_id,
        task_text=task_text,
        entries=entries,
        ruleset_fingerprint=ruleset_fp,
        config_fingerprint=config_fp,
        meta=meta,
    )
