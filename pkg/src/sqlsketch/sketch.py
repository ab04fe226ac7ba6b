"""SQL sketch abstract syntax, serialization, and order-insensitive equality.

Every query this toolkit produces or consumes fits one template:

    SELECT {aggregate} {column} FROM {table} WHERE {col} {op} {val} AND ...

A query is therefore a triple (aggregate, select column, conditions). The
relative order of WHERE conditions carries no meaning, so logical-form
comparison canonicalizes the conditions into a multiset first; a prediction
is never penalized for listing correct clauses in a different order than
the reference.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum


class Aggregate(IntEnum):
    NONE = 0
    MAX = 1
    MIN = 2
    COUNT = 3
    SUM = 4
    AVG = 5


class Operator(IntEnum):
    EQ = 0
    GT = 1
    LT = 2


AGGREGATE_SQL = ("", "MAX", "MIN", "COUNT", "SUM", "AVG")
OPERATOR_SQL = ("=", ">", "<")

MAX_CONDITIONS = 4

_NUMBER = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")


@dataclass(frozen=True)
class Condition:
    col: int
    op: Operator
    value: str

    def __post_init__(self) -> None:
        if not self.value:
            raise ValueError("condition value must be non-empty")


@dataclass(frozen=True)
class SQLQuery:
    agg: Aggregate
    sel: int
    conds: tuple[Condition, ...]

    def __post_init__(self) -> None:
        if len(self.conds) > MAX_CONDITIONS:
            raise ValueError(f"at most {MAX_CONDITIONS} conditions, got {len(self.conds)}")


def parse_number(text: str) -> float | None:
    """Parse ``text`` as a number, tolerating thousands separators.

    Returns None when the string is not a plain numeral ("inf", "nan" and
    anything with stray characters included). Used both for value
    normalization and for numeric WHERE comparisons.
    """
    s = text.strip().replace(",", "")
    if not _NUMBER.fullmatch(s):
        return None
    return float(s)


def render_number(x: float) -> str:
    """Canonical numeral rendering: integral values lose their '.0' suffix."""
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def normalize_value(value: str) -> str:
    """Canonical form for value comparison.

    Trims, collapses internal whitespace, case-folds, and renders numerals
    canonically ("1,000.0" and "1000" compare equal).
    """
    s = " ".join(value.split()).casefold()
    num = parse_number(s)
    if num is not None:
        return render_number(num)
    return s


def _quote_identifier(name: str) -> str:
    return '"' + name.replace('"', '""') + '"'


def _quote_literal(value: str) -> str:
    return "'" + value.replace("'", "''") + "'"


def serialize(query: SQLQuery, schema) -> str:
    """Render ``query`` as SQL text against ``schema``.

    Output only: the toolkit never re-parses this text. Column identifiers
    are double-quoted with embedded quotes doubled; values are single-quoted
    literals. Conditions appear in stored order.
    """
    headers = schema.headers
    if not (0 <= query.sel < len(headers)):
        raise ValueError(f"select column {query.sel} out of range")
    sel = _quote_identifier(headers[query.sel])
    if query.agg is not Aggregate.NONE:
        sel = f"{AGGREGATE_SQL[query.agg]}({sel})"
    text = f"SELECT {sel} FROM {schema.table_id}"
    if query.conds:
        parts = []
        for c in query.conds:
            if not (0 <= c.col < len(headers)):
                raise ValueError(f"condition column {c.col} out of range")
            parts.append(
                f"{_quote_identifier(headers[c.col])} {OPERATOR_SQL[c.op]} {_quote_literal(c.value)}"
            )
        text += " WHERE " + " AND ".join(parts)
    return text


@dataclass(frozen=True)
class CanonicalQuery:
    """Order-free view of a query: conditions as a sorted multiset."""

    agg: Aggregate
    sel: int
    conds: tuple[tuple[int, Operator, str], ...]


def canonicalize(query: SQLQuery, strict_values: bool = False) -> CanonicalQuery:
    """Reduce ``query`` to its canonical comparison form.

    With ``strict_values`` the condition values are compared as exact
    strings; otherwise they are normalized via :func:`normalize_value`.
    """
    items = [
        (c.col, c.op, c.value if strict_values else normalize_value(c.value))
        for c in query.conds
    ]
    return CanonicalQuery(query.agg, query.sel, tuple(sorted(items)))


def logical_form_equal(a: SQLQuery, b: SQLQuery, strict_values: bool = False) -> bool:
    """Sketch equality: same aggregate, same select column, same condition multiset."""
    return canonicalize(a, strict_values) == canonicalize(b, strict_values)
