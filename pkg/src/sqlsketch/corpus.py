"""WikiSQL-format ingestion, schema/row separation, and the zero-shot split.

Data files are line-delimited JSON. A tables file carries one record per
table with fields ``id``, ``header``, ``types`` and ``rows``; an examples
file carries ``question``, ``table_id`` and ``sql`` (with ``sel``, ``agg``,
``conds``). Loading keeps schemas and rows apart on purpose: schemas flow
into feature and model code, rows are handed only to the evaluator. Nothing
upstream of evaluation ever sees a cell value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .sketch import MAX_CONDITIONS, Aggregate, Condition, Operator, SQLQuery, render_number

COLUMN_TYPES = ("text", "real")


class CorpusError(ValueError):
    """Base class for data-file problems."""


class ParseError(CorpusError):
    """A line was not valid JSON or missed required fields."""


class SchemaError(CorpusError):
    """A table record violated the schema invariants."""


class AnnotationError(CorpusError):
    """An example's gold annotation was out of range."""


@dataclass(frozen=True)
class TableSchema:
    """Column names and types of one table. Never holds cell values."""

    table_id: str
    headers: tuple[str, ...]
    col_types: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.headers:
            raise SchemaError(f"table {self.table_id!r}: no headers")
        if len(self.headers) != len(self.col_types):
            raise SchemaError(
                f"table {self.table_id!r}: {len(self.headers)} headers but "
                f"{len(self.col_types)} types"
            )
        for h in self.headers:
            if not h.strip():
                raise SchemaError(f"table {self.table_id!r}: blank header name")
        for t in self.col_types:
            if t not in COLUMN_TYPES:
                raise SchemaError(f"table {self.table_id!r}: unknown column type {t!r}")


@dataclass(frozen=True)
class TableRows:
    """Cell values of one table, kept apart from the schema for the evaluator."""

    table_id: str
    rows: tuple[tuple[object, ...], ...]


@dataclass(frozen=True)
class Example:
    question: str
    table_id: str
    gold: SQLQuery


@dataclass
class LoadStats:
    """Loader-side statistics surfaced to callers and the CLI."""

    n_loaded: int = 0
    n_skipped_unknown_table: int = 0
    max_conditions_seen: int = 0
    skipped_table_ids: list[str] = field(default_factory=list)


def _records(path: str | Path) -> Iterable[tuple[int, dict]]:
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise ParseError(f"{path}: line {lineno}: invalid JSON ({e.msg})") from e
            if not isinstance(rec, dict):
                raise ParseError(f"{path}: line {lineno}: expected an object")
            yield lineno, rec


def load_tables(path: str | Path) -> dict[str, tuple[TableSchema, TableRows]]:
    """Load a tables file into table_id -> (schema, rows).

    Duplicate ids are rejected; every row must match its schema's width and
    hold only strings or numbers.
    """
    out: dict[str, tuple[TableSchema, TableRows]] = {}
    for lineno, rec in _records(path):
        try:
            table_id = str(rec["id"])
            headers = tuple(str(h) for h in rec["header"])
            types = tuple(str(t).lower() for t in rec["types"])
            raw_rows = rec.get("rows", [])
        except KeyError as e:
            raise ParseError(f"{path}: line {lineno}: missing field {e.args[0]!r}") from e
        if table_id in out:
            raise SchemaError(f"{path}: line {lineno}: duplicate table id {table_id!r}")
        schema = TableSchema(table_id, headers, types)
        rows = []
        for r in raw_rows:
            if len(r) != len(headers):
                raise SchemaError(
                    f"{path}: line {lineno}: row of length {len(r)} in table "
                    f"{table_id!r} with {len(headers)} columns"
                )
            for v in r:
                if isinstance(v, bool) or not isinstance(v, (str, int, float)):
                    raise SchemaError(
                        f"{path}: line {lineno}: cell {v!r} is neither string nor number"
                    )
            rows.append(tuple(r))
        out[table_id] = (schema, TableRows(table_id, tuple(rows)))
    return out


def load_schemas(path: str | Path) -> dict[str, TableSchema]:
    """Schema-only view of a tables file.

    Row payloads are never materialized here, so code paths that must stay
    blind to cell data (prediction, feature extraction) can load through
    this function alone.
    """
    out: dict[str, TableSchema] = {}
    for lineno, rec in _records(path):
        try:
            table_id = str(rec["id"])
            headers = tuple(str(h) for h in rec["header"])
            types = tuple(str(t).lower() for t in rec["types"])
        except KeyError as e:
            raise ParseError(f"{path}: line {lineno}: missing field {e.args[0]!r}") from e
        if table_id in out:
            raise SchemaError(f"{path}: line {lineno}: duplicate table id {table_id!r}")
        out[table_id] = TableSchema(table_id, headers, types)
    return out


def _schema_of(tables: dict, table_id: str) -> TableSchema | None:
    entry = tables.get(table_id)
    if entry is None:
        return None
    if isinstance(entry, TableSchema):
        return entry
    return entry[0]


def _coerce_value(value: object, lineno: int, path: str | Path) -> str:
    if isinstance(value, bool):
        raise AnnotationError(f"{path}: line {lineno}: boolean condition value")
    if isinstance(value, (int, float)):
        return render_number(float(value))
    if isinstance(value, str):
        return value
    raise AnnotationError(f"{path}: line {lineno}: condition value {value!r}")


def load_examples(
    path: str | Path,
    tables: dict,
) -> tuple[list[Example], LoadStats]:
    """Load an examples file, pairing each question with a loaded schema.

    ``tables`` may map ids to (schema, rows) pairs or to bare schemas.
    Records pointing at unknown tables are skipped and counted rather than
    aborting the load; range violations in the annotation itself raise
    :class:`AnnotationError`. Numeric condition values are coerced to their
    canonical string rendering.
    """
    examples: list[Example] = []
    stats = LoadStats()
    for lineno, rec in _records(path):
        try:
            question = str(rec["question"])
            table_id = str(rec["table_id"])
            sql = rec["sql"]
            sel = sql["sel"]
            agg = sql["agg"]
            conds = sql.get("conds", [])
        except (KeyError, TypeError) as e:
            raise ParseError(f"{path}: line {lineno}: missing field ({e})") from e
        schema = _schema_of(tables, table_id)
        if schema is None:
            stats.n_skipped_unknown_table += 1
            stats.skipped_table_ids.append(table_id)
            continue
        n_cols = len(schema.headers)
        if not isinstance(agg, int) or not 0 <= agg <= 5:
            raise AnnotationError(f"{path}: line {lineno}: aggregate id {agg!r}")
        if not isinstance(sel, int) or not 0 <= sel < n_cols:
            raise AnnotationError(
                f"{path}: line {lineno}: select column {sel!r} out of range for "
                f"{n_cols} columns"
            )
        if len(conds) > MAX_CONDITIONS:
            raise AnnotationError(
                f"{path}: line {lineno}: {len(conds)} conditions exceeds {MAX_CONDITIONS}"
            )
        parsed = []
        for cond in conds:
            col, op, value = cond[0], cond[1], cond[2]
            if not isinstance(op, int) or not 0 <= op <= 2:
                raise AnnotationError(f"{path}: line {lineno}: operator id {op!r}")
            if not isinstance(col, int) or not 0 <= col < n_cols:
                raise AnnotationError(
                    f"{path}: line {lineno}: condition column {col!r} out of range"
                )
            rendered = _coerce_value(value, lineno, path)
            if not rendered:
                raise AnnotationError(f"{path}: line {lineno}: empty condition value")
            parsed.append(Condition(col, Operator(op), rendered))
        stats.max_conditions_seen = max(stats.max_conditions_seen, len(parsed))
        examples.append(
            Example(question, table_id, SQLQuery(Aggregate(agg), sel, tuple(parsed)))
        )
        stats.n_loaded += 1
    return examples, stats


def write_examples(examples: Iterable[Example], path: str | Path) -> None:
    """Serialize examples back to the line-delimited input format."""
    with open(path, "w", encoding="utf-8") as fh:
        for ex in examples:
            rec = {
                "question": ex.question,
                "table_id": ex.table_id,
                "sql": {
                    "sel": ex.gold.sel,
                    "agg": int(ex.gold.agg),
                    "conds": [[c.col, int(c.op), c.value] for c in ex.gold.conds],
                },
            }
            fh.write(json.dumps(rec) + "\n")


def write_tables(
    tables: dict[str, tuple[TableSchema, TableRows]], path: str | Path
) -> None:
    """Serialize tables back to the line-delimited input format."""
    with open(path, "w", encoding="utf-8") as fh:
        for table_id, (schema, rows) in tables.items():
            rec = {
                "id": table_id,
                "header": list(schema.headers),
                "types": list(schema.col_types),
                "rows": [list(r) for r in rows.rows],
            }
            fh.write(json.dumps(rec) + "\n")


def build_zero_shot_split(train: list[Example], test: list[Example]) -> list[Example]:
    """Test examples whose tables never occur in training, order preserved.

    This is the unseen-schema protocol: drop every test example whose
    table_id also backs at least one training example.
    """
    train_ids = {ex.table_id for ex in train}
    return [ex for ex in test if ex.table_id not in train_ids]
