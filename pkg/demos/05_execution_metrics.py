"""Executing queries over held rows and scoring predictions.

Row access lives entirely in the evaluator. Execution accuracy counts a
prediction correct when its result multiset matches the gold query's
result, which is strictly more forgiving than logical-form equality.
"""

from sqlsketch import (
    Aggregate,
    Condition,
    Operator,
    SQLQuery,
    evaluate,
    execute,
    serialize,
)
from sqlsketch.corpus import Example
from sqlsketch.synth import build_tables

tables = build_tables()
schema, rows = tables["teams"]
print("table 'teams':", schema.headers)
for r in rows.rows:
    print("  ", r)

queries = [
    SQLQuery(Aggregate.COUNT, 0, (Condition(2, Operator.GT, "20"),)),
    SQLQuery(Aggregate.NONE, 0, (Condition(2, Operator.GT, "20"),)),
    SQLQuery(Aggregate.AVG, 3, (Condition(0, Operator.EQ, "Arsenal"),)),
    SQLQuery(Aggregate.SUM, 2, ()),
]
print("\nexecution:")
for q in queries:
    result = execute(q, schema, rows)
    shown = result.scalar if result.kind == "scalar" else sorted(result.values) or result.kind
    print(f"  {serialize(q, schema)}")
    print(f"    -> {shown}")

# Metrics: a prediction with reordered conditions and different value casing
# still scores full logical form and execution accuracy.
gold = SQLQuery(
    Aggregate.NONE, 1,
    (Condition(0, Operator.EQ, "arsenal"), Condition(2, Operator.GT, "20")),
)
pred = SQLQuery(
    Aggregate.NONE, 1,
    (Condition(2, Operator.GT, "20.0"), Condition(0, Operator.EQ, "Arsenal")),
)
example = Example("who coaches arsenal when wins is above 20", "teams", gold)
report = evaluate([pred], [example], tables)
print("\nreordered, re-cased prediction:")
print(report.to_text())
