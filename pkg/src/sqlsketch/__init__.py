"""Data-agnostic natural-language-to-SQL sketch filling.

The pipeline: tokenize the question, compute knowledge vectors against the
table headers, encode question and schema into contextual vectors, run six
slot predictors, and assemble the WHERE clause by beam search. Table rows
never enter the model; they are read only by the evaluator when computing
execution accuracy.
"""

from .corpus import (
    Example,
    TableRows,
    TableSchema,
    build_zero_shot_split,
    load_examples,
    load_schemas,
    load_tables,
    write_examples,
    write_tables,
)
from .evaluate import ExecResult, EvalReport, evaluate, execute, execution_equal
from .knowledge import KnowledgeVectors
from .sketch import (
    Aggregate,
    Condition,
    Operator,
    SQLQuery,
    canonicalize,
    logical_form_equal,
    serialize,
)
from .tokens import Token, extract_span, find_value_span, tokenize

__version__ = "0.1.0"

__all__ = [
    "Aggregate",
    "Condition",
    "EvalReport",
    "Example",
    "ExecResult",
    "KnowledgeVectors",
    "Operator",
    "SQLQuery",
    "TableRows",
    "TableSchema",
    "Token",
    "build_zero_shot_split",
    "canonicalize",
    "evaluate",
    "execute",
    "execution_equal",
    "extract_span",
    "find_value_span",
    "load_examples",
    "load_schemas",
    "load_tables",
    "logical_form_equal",
    "serialize",
    "tokenize",
    "write_examples",
    "write_tables",
]
