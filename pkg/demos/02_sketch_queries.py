"""The SQL sketch: a fixed template whose slots the model fills.

Every query is SELECT {agg} {col} FROM {table} WHERE {col} {op} {val} AND
... so a query is just (aggregate, select column, conditions). Comparing
sketches ignores condition order and normalizes values, which is what the
logical-form accuracy metric needs.
"""

from sqlsketch import (
    Aggregate,
    Condition,
    Operator,
    SQLQuery,
    TableSchema,
    canonicalize,
    logical_form_equal,
    serialize,
)

schema = TableSchema("games", ("team", "season", "wins"), ("text", "real", "real"))

query = SQLQuery(
    Aggregate.MAX,
    2,
    (Condition(0, Operator.EQ, "Arsenal"), Condition(1, Operator.GT, "2,010")),
)
print("serialized:", serialize(query, schema))

flipped = SQLQuery(query.agg, query.sel, (query.conds[1], query.conds[0]))
print("conditions flipped:", serialize(flipped, schema))
print("logical_form_equal:", logical_form_equal(query, flipped))

# Value normalization: case, whitespace, numerals.
a = SQLQuery(Aggregate.NONE, 0, (Condition(1, Operator.EQ, "2,010.0"),))
b = SQLQuery(Aggregate.NONE, 0, (Condition(1, Operator.EQ, "2010"),))
print("\n'2,010.0' vs '2010':")
print("  normalized mode:", logical_form_equal(a, b))
print("  strict mode:    ", logical_form_equal(a, b, strict_values=True))
print("  canonical form: ", canonicalize(a))

# Quoting survives awkward identifiers and values.
odd = TableSchema("t", ('say "hi"',), ("text",))
q = SQLQuery(Aggregate.NONE, 0, (Condition(0, Operator.EQ, "o'brien"),))
print("\nescaping:", serialize(q, odd))
