"""Shared randomized generators for the test suite.

All generators take an explicit numpy Generator so every test run is
seed-reproducible.
"""

from __future__ import annotations

import numpy as np

from sqlsketch.corpus import TableRows, TableSchema
from sqlsketch.heads import SlotDistributions
from sqlsketch.sketch import Aggregate, Condition, Operator, SQLQuery

WORDS = (
    "player no. nationality years toronto city country population rank team "
    "points season wins losses coach title director budget rating year name "
    "height weight games goals"
).split()

VALUE_WORDS = (
    "camby ross gasol madrid zurich nairobi arsenal ajax boca solaris stalker "
    "spain canada kenya"
).split()


def random_headers(rng: np.random.Generator, max_cols: int = 5) -> tuple[str, ...]:
    n = int(rng.integers(1, max_cols + 1))
    picks = rng.choice(len(WORDS), size=n, replace=False)
    headers = []
    for p in picks:
        w = WORDS[int(p)]
        if rng.random() < 0.25:  # occasional multi-word header
            w = f"{w} {WORDS[int(rng.integers(len(WORDS)))]}"
        headers.append(w)
    return tuple(headers)


def random_schema(rng: np.random.Generator, table_id: str = "t", max_cols: int = 5) -> TableSchema:
    headers = random_headers(rng, max_cols)
    types = tuple(str(rng.choice(["text", "real"])) for _ in headers)
    return TableSchema(table_id, headers, types)


def random_cell(rng: np.random.Generator, col_type: str):
    if col_type == "real":
        if rng.random() < 0.5:
            return int(rng.integers(-20, 100))
        return float(np.round(rng.uniform(-50, 50), 2))
    r = rng.random()
    if r < 0.6:
        return str(rng.choice(VALUE_WORDS))
    if r < 0.8:  # numeric-looking strings exercise normalization
        return str(int(rng.integers(0, 3000)))
    return f"{rng.choice(VALUE_WORDS)} {rng.choice(VALUE_WORDS)}"


def random_table(
    rng: np.random.Generator, table_id: str = "t", max_rows: int = 8, max_cols: int = 5
) -> tuple[TableSchema, TableRows]:
    schema = random_schema(rng, table_id, max_cols)
    n_rows = int(rng.integers(0, max_rows + 1))
    rows = tuple(
        tuple(random_cell(rng, t) for t in schema.col_types) for _ in range(n_rows)
    )
    return schema, TableRows(table_id, rows)


def random_value(rng: np.random.Generator, schema: TableSchema, rows: TableRows, col: int) -> str:
    # Half the time pick an actual cell value so conditions sometimes match.
    if rows.rows and rng.random() < 0.5:
        row = rows.rows[int(rng.integers(len(rows.rows)))]
        v = row[col]
        return str(v)
    if schema.col_types[col] == "real" or rng.random() < 0.4:
        return str(int(rng.integers(-10, 60)))
    return str(rng.choice(VALUE_WORDS))


def random_query(
    rng: np.random.Generator,
    schema: TableSchema,
    rows: TableRows | None = None,
    max_conds: int = 4,
) -> SQLQuery:
    rows = rows if rows is not None else TableRows(schema.table_id, ())
    agg = Aggregate(int(rng.integers(0, 6)))
    sel = int(rng.integers(0, len(schema.headers)))
    n_conds = int(rng.integers(0, min(max_conds, len(schema.headers)) + 1))
    cols = rng.choice(len(schema.headers), size=n_conds, replace=False)
    conds = tuple(
        Condition(
            int(c),
            Operator(int(rng.integers(0, 3))),
            random_value(rng, schema, rows, int(c)),
        )
        for c in cols
    )
    return SQLQuery(agg, sel, conds)


def random_distributions(
    rng: np.random.Generator, n_headers: int, n_tokens: int, wn: int | None = None
) -> SlotDistributions:
    def categorical(k: int) -> np.ndarray:
        p = rng.random(k) + 1e-3
        return p / p.sum()

    p_wn = categorical(5)
    if wn is not None:  # force the argmax where a test needs a specific count
        p_wn = np.full(5, 0.01)
        p_wn[wn] = 1.0
        p_wn /= p_wn.sum()
    p_wo = rng.random((n_headers, 3)) + 1e-3
    p_wo /= p_wo.sum(axis=1, keepdims=True)

    def logp(shape) -> np.ndarray:
        raw = rng.random(shape) + 1e-3
        raw /= raw.sum(axis=-1, keepdims=True)
        return np.log(raw)

    return SlotDistributions(
        p_sa=categorical(6),
        p_sc=categorical(n_headers),
        p_wn=p_wn,
        p_wc=rng.uniform(0.05, 0.95, n_headers),
        p_wo=p_wo,
        wv_start_logp=logp((n_headers, 3, n_tokens)),
        wv_end_logp=logp((n_headers, 3, n_tokens)),
    )
