"""Query execution over held rows and the accuracy metrics.

This is the only module that reads table rows. Execution follows the
sketch's semantics: a row matches when every condition holds, equality
compares canonically normalized strings, and the ordering operators compare
numeric parses (failing closed when either side is not a number). On top of
the executor sit the two headline metrics, logical-form accuracy
(order-insensitive sketch equality) and execution accuracy (equality of
result sets), plus one accuracy per predicted slot.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Example, TableRows, TableSchema
from .sketch import (
    Aggregate,
    Operator,
    SQLQuery,
    logical_form_equal,
    normalize_value,
    parse_number,
    render_number,
)

ROWS = "rows"
SCALAR = "scalar"
EMPTY = "empty"


@dataclass(frozen=True)
class ExecResult:
    """Outcome of executing one query: a value multiset, a scalar, or empty.

    Aggregates over zero matching (or zero numeric) rows yield the empty
    marker, mirroring SQL's NULL without dragging in an engine. COUNT never
    goes empty; it returns 0.
    """

    kind: str
    values: tuple = ()
    scalar: float | None = None

    @classmethod
    def of_rows(cls, values) -> "ExecResult":
        return cls(ROWS, values=tuple(values))

    @classmethod
    def of_scalar(cls, x: float) -> "ExecResult":
        return cls(SCALAR, scalar=float(x))

    @classmethod
    def empty(cls) -> "ExecResult":
        return cls(EMPTY)


def _cell_text(value: object) -> str:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return render_number(float(value))
    return normalize_value(str(value))


def _cell_number(value: object) -> float | None:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    return parse_number(str(value))


def _matches(row: tuple, query: SQLQuery) -> bool:
    for cond in query.conds:
        cell = row[cond.col]
        if cond.op == Operator.EQ:  # canonical string comparison
            if _cell_text(cell) != normalize_value(cond.value):
                return False
        else:  # GT / LT: numeric only, false when unparseable
            a = _cell_number(cell)
            b = parse_number(cond.value)
            if a is None or b is None:
                return False
            if cond.op == Operator.GT and not a > b:
                return False
            if cond.op == Operator.LT and not a < b:
                return False
    return True


def execute(query: SQLQuery, schema: TableSchema, rows: TableRows) -> ExecResult:
    """Run ``query`` against in-memory rows.

    Aggregate NONE returns the multiset of select-column values of matching
    rows; COUNT counts matches; MAX/MIN/SUM/AVG aggregate the numeric parses
    of the select column, skipping values that fail to parse.
    """
    if not (0 <= query.sel < len(schema.headers)):
        raise ValueError(f"select column {query.sel} out of range")
    for cond in query.conds:
        if not (0 <= cond.col < len(schema.headers)):
            raise ValueError(f"condition column {cond.col} out of range")
    matching = [r for r in rows.rows if _matches(r, query)]
    if query.agg == Aggregate.NONE:
        return ExecResult.of_rows(r[query.sel] for r in matching)
    if query.agg == Aggregate.COUNT:
        return ExecResult.of_scalar(len(matching))
    nums = [n for r in matching if (n := _cell_number(r[query.sel])) is not None]
    if not nums:
        return ExecResult.empty()
    if query.agg == Aggregate.MAX:
        return ExecResult.of_scalar(max(nums))
    if query.agg == Aggregate.MIN:
        return ExecResult.of_scalar(min(nums))
    if query.agg == Aggregate.SUM:
        return ExecResult.of_scalar(sum(nums))
    return ExecResult.of_scalar(sum(nums) / len(nums))  # AVG


def execution_equal(r1: ExecResult, r2: ExecResult, tol: float = 1e-6) -> bool:
    """Order-insensitive, normalization-aware result equality."""
    if r1.kind != r2.kind:
        return False
    if r1.kind == EMPTY:
        return True
    if r1.kind == SCALAR:
        return abs(r1.scalar - r2.scalar) <= tol
    return Counter(map(_cell_text, r1.values)) == Counter(map(_cell_text, r2.values))


@dataclass
class EvalReport:
    """Aggregate metrics of one evaluation run."""

    acc_lf: float = 0.0
    acc_ex: float = 0.0
    acc_sa: float = 0.0
    acc_sc: float = 0.0
    acc_wn: float = 0.0
    acc_wc: float = 0.0
    acc_wo: float = 0.0
    acc_wv: float = 0.0
    acc_wv_strict: float = 0.0
    n_evaluated: int = 0
    n_skipped: int = 0
    strict_values: bool = False
    label: str = ""
    extra: dict = field(default_factory=dict)

    _TABLE = (
        ("Select Aggregate", "acc_sa"),
        ("Select Column", "acc_sc"),
        ("Where Number", "acc_wn"),
        ("Where Column", "acc_wc"),
        ("Where Operator", "acc_wo"),
        ("Where Value", "acc_wv"),
        ("Where Value (strict)", "acc_wv_strict"),
        ("Logical Form Acc", "acc_lf"),
        ("Execution Acc", "acc_ex"),
    )

    def to_text(self) -> str:
        lines = []
        if self.label:
            lines.append(f"dataset: {self.label}")
        lines.append(f"examples: {self.n_evaluated} (skipped {self.n_skipped})")
        lines.append(
            "value comparison: " + ("strict" if self.strict_values else "normalized")
        )
        width = max(len(name) for name, _ in self._TABLE)
        for name, attr in self._TABLE:
            lines.append(f"{name:<{width}}  {getattr(self, attr) * 100:6.2f}")
        for key, value in self.extra.items():
            lines.append(f"{key}: {value}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        out = {attr: getattr(self, attr) for _, attr in self._TABLE}
        out.update(
            n_evaluated=self.n_evaluated,
            n_skipped=self.n_skipped,
            strict_values=self.strict_values,
            label=self.label,
        )
        out.update(self.extra)
        return out

    def write(self, path: str | Path) -> None:
        path = Path(path)
        path.write_text(self.to_text() + "\n", encoding="utf-8")
        path.with_suffix(path.suffix + ".json").write_text(
            json.dumps(self.to_json(), indent=2) + "\n", encoding="utf-8"
        )


def _value_key(value: str, strict: bool) -> str:
    return value if strict else normalize_value(value)


def evaluate(
    predictions: list[SQLQuery],
    examples: list[Example],
    tables: dict[str, tuple[TableSchema, TableRows]],
    strict_values: bool = False,
    label: str = "",
) -> EvalReport:
    """Score aligned predictions against gold annotations.

    Logical form uses order-insensitive sketch equality; execution runs both
    queries against the held rows. A where-column prediction is correct when
    the predicted column set equals the gold set; where-value when the
    (column, value) multisets match, reported for both normalized and strict
    string comparison.
    """
    if len(predictions) != len(examples):
        raise ValueError(
            f"{len(predictions)} predictions for {len(examples)} examples"
        )
    report = EvalReport(strict_values=strict_values, label=label)
    if not examples:
        return report
    counts = Counter()
    for pred, ex in zip(predictions, examples):
        entry = tables.get(ex.table_id)
        if entry is None:
            report.n_skipped += 1
            continue
        schema, rows = entry
        gold = ex.gold
        counts["n"] += 1
        counts["lf"] += logical_form_equal(pred, gold, strict_values)
        counts["ex"] += execution_equal(
            execute(pred, schema, rows), execute(gold, schema, rows)
        )
        counts["sa"] += pred.agg == gold.agg
        counts["sc"] += pred.sel == gold.sel
        counts["wn"] += len(pred.conds) == len(gold.conds)
        counts["wc"] += {c.col for c in pred.conds} == {c.col for c in gold.conds}
        counts["wo"] += Counter((c.col, c.op) for c in pred.conds) == Counter(
            (c.col, c.op) for c in gold.conds
        )
        for strict, key in ((False, "wv"), (True, "wv_strict")):
            counts[key] += Counter(
                (c.col, _value_key(c.value, strict)) for c in pred.conds
            ) == Counter((c.col, _value_key(c.value, strict)) for c in gold.conds)
    n = counts["n"]
    report.n_evaluated = n
    if n:
        report.acc_lf = counts["lf"] / n
        report.acc_ex = counts["ex"] / n
        report.acc_sa = counts["sa"] / n
        report.acc_sc = counts["sc"] / n
        report.acc_wn = counts["wn"] / n
        report.acc_wc = counts["wc"] / n
        report.acc_wo = counts["wo"] / n
        report.acc_wv = counts["wv"] / n
        report.acc_wv_strict = counts["wv_strict"] / n
    return report
