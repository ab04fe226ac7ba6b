"""Minimal readers for the line-delimited question/table files.

Only what the exporter needs: table headers and (question, table_id)
pairs. Examples whose table is unknown are skipped and counted, mirroring
the consumer's loader so example indices line up between the two sides.
"""

from __future__ import annotations

import json
from pathlib import Path


class DataError(ValueError):
    pass


def _records(path: str | Path):
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as e:
                raise DataError(f"{path}: line {lineno}: invalid JSON ({e.msg})") from e


def load_headers(path: str | Path) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    for lineno, rec in _records(path):
        try:
            table_id = str(rec["id"])
            headers = [str(h) for h in rec["header"]]
        except KeyError as e:
            raise DataError(f"{path}: line {lineno}: missing field {e.args[0]!r}") from e
        if table_id in out:
            raise DataError(f"{path}: line {lineno}: duplicate table id {table_id!r}")
        out[table_id] = headers
    return out


def load_questions(
    path: str | Path, headers: dict[str, list[str]]
) -> tuple[list[tuple[str, str]], int]:
    """(question, table_id) pairs plus the count of skipped unknown tables."""
    pairs: list[tuple[str, str]] = []
    skipped = 0
    for lineno, rec in _records(path):
        try:
            question = str(rec["question"])
            table_id = str(rec["table_id"])
        except KeyError as e:
            raise DataError(f"{path}: line {lineno}: missing field {e.args[0]!r}") from e
        if table_id not in headers:
            skipped += 1
            continue
        pairs.append((question, table_id))
    return pairs, skipped
