"""Deterministic synthetic corpus for demos and desk-scale training runs.

Small hand-built tables plus templated questions whose slots line up with
the gold annotation: the aggregate is cued by a fixed phrase, the operator
by "is" / "is above" / "is below", and every condition value appears
verbatim in the question. A toy encoder can drive training accuracy to the
ceiling on this corpus, which is exactly what the overfit sanity check
needs.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .corpus import Example, TableRows, TableSchema, write_examples, write_tables
from .sketch import Aggregate, Condition, Operator, SQLQuery

AGG_PHRASE = {
    Aggregate.NONE: "what is",
    Aggregate.MAX: "what is the highest",
    Aggregate.MIN: "what is the lowest",
    Aggregate.COUNT: "how many",
    Aggregate.SUM: "what is the total",
    Aggregate.AVG: "what is the average",
}

OP_PHRASE = {Operator.EQ: "is", Operator.GT: "is above", Operator.LT: "is below"}

_TABLES = {
    "players": {
        "header": ["player", "nationality", "points", "rank"],
        "types": ["text", "text", "real", "real"],
        "rows": [
            ["marcus camby", "united states", 18, 2],
            ["terrence ross", "canada", 10, 5],
            ["pau gasol", "spain", 21, 1],
            ["luol deng", "britain", 14, 3],
            ["manu ginobili", "argentina", 12, 4],
        ],
    },
    "cities": {
        "header": ["city", "country", "population", "founded"],
        "types": ["text", "text", "real", "real"],
        "rows": [
            ["madrid", "spain", 3200, 860],
            ["toronto", "canada", 2800, 1793],
            ["new york", "united states", 8400, 1624],
            ["nairobi", "kenya", 4400, 1899],
            ["zurich", "switzerland", 430, 1262],
        ],
    },
    "teams": {
        "header": ["team", "coach", "wins", "losses"],
        "types": ["text", "text", "real", "real"],
        "rows": [
            ["arsenal", "arteta", 26, 6],
            ["liverpool", "slot", 24, 8],
            ["ajax", "farioli", 20, 10],
            ["porto", "conceicao", 22, 9],
            ["boca", "gago", 18, 12],
        ],
    },
    "films": {
        "header": ["film", "director", "budget", "rating"],
        "types": ["text", "text", "real", "real"],
        "rows": [
            ["solaris", "tarkovsky", 40, 9],
            ["stalker", "tarkovsky", 35, 10],
            ["ran", "kurosawa", 120, 9],
            ["playtime", "tati", 150, 7],
            ["brazil", "gilliam", 90, 8],
        ],
    },
}


def build_tables() -> dict[str, tuple[TableSchema, TableRows]]:
    out = {}
    for tid, spec in _TABLES.items():
        schema = TableSchema(tid, tuple(spec["header"]), tuple(spec["types"]))
        rows = TableRows(tid, tuple(tuple(r) for r in spec["rows"]))
        out[tid] = (schema, rows)
    return out


def _text_pool(spec: dict, col: int) -> list[str]:
    return [str(r[col]) for r in spec["rows"]]


def _number_pool(spec: dict, col: int) -> list[str]:
    return [str(r[col]) for r in spec["rows"]] + ["5", "15", "25", "100", "1000"]


def generate_examples(n: int, seed: int = 13) -> list[Example]:
    """Templated examples cycling through aggregates, counts, and operators."""
    rng = np.random.default_rng(seed)
    table_ids = list(_TABLES)
    seen_questions: set[str] = set()
    examples: list[Example] = []
    i = 0
    while len(examples) < n:
        tid = table_ids[i % len(table_ids)]
        spec = _TABLES[tid]
        agg = Aggregate(i % 6)
        wn = 0 if i % 8 == 7 else 1 + (i % 2)
        headers = spec["header"]
        numeric_cols = [j for j, t in enumerate(spec["types"]) if t == "real"]
        text_cols = [j for j, t in enumerate(spec["types"]) if t == "text"]
        sel = (
            int(rng.choice(numeric_cols))
            if agg in (Aggregate.MAX, Aggregate.MIN, Aggregate.SUM, Aggregate.AVG)
            else int(rng.choice(len(headers)))
        )
        cond_cols = list(rng.choice(len(headers), size=wn, replace=False)) if wn else []
        conds = []
        phrases = []
        for k, col in enumerate(cond_cols):
            col = int(col)
            if col in text_cols:
                op = Operator.EQ
                value = str(rng.choice(_text_pool(spec, col)))
            else:
                op = Operator((i + k) % 3)
                value = str(rng.choice(_number_pool(spec, col)))
            conds.append(Condition(col, op, value))
            phrases.append(f"{headers[col]} {OP_PHRASE[op]} {value}")
        question = f"{AGG_PHRASE[agg]} {headers[sel]}"
        if phrases:
            question += " when " + " and ".join(phrases)
        i += 1
        if question in seen_questions:
            continue
        seen_questions.add(question)
        examples.append(Example(question, tid, SQLQuery(agg, sel, tuple(conds))))
    return examples


def write_corpus(out_dir: str | Path, n_train: int = 32, n_dev: int = 16, seed: int = 13):
    """Write tables.jsonl, train.jsonl and dev.jsonl under ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tables = build_tables()
    write_tables(tables, out / "tables.jsonl")
    train = generate_examples(n_train, seed)
    write_examples(train, out / "train.jsonl")
    dev = generate_examples(n_dev, seed + 1)
    write_examples(dev, out / "dev.jsonl")
    return out / "tables.jsonl", out / "train.jsonl", out / "dev.jsonl"
