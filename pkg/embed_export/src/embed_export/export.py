"""Export jobs: run the pretrained encoder and write/verify NLQE files.

Record ids are the zero-based position of each example in its examples
file (after unknown-table skips), rendered as decimal strings; the consumer
uses the same convention. Writing goes through a temp file and an atomic
rename so a crashed export never leaves a half-written artifact.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import align, data, nlqe
from .tokens import tokenize

POOLING_MODES = ("mean",)


@dataclass
class ExportJob:
    examples_path: str
    tables_path: str
    output_path: str
    model_id: str
    layer: int = -1
    pooling: str = "mean"
    limit: int | None = None

    def __post_init__(self) -> None:
        if self.pooling not in POOLING_MODES:
            raise ValueError(f"unsupported pooling {self.pooling!r}")


@dataclass
class ExportStats:
    n_written: int
    n_skipped_unknown_table: int
    n_fallbacks: int
    dim: int


class ModelError(RuntimeError):
    """The pretrained encoder could not be loaded or run."""


def load_encoder(model_id: str):
    """Tokenizer and frozen encoder for a local path or model identifier."""
    from transformers import AutoModel, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(model_id)
        model = AutoModel.from_pretrained(model_id)
    except Exception as e:
        raise ModelError(f"cannot run encoder {model_id!r}: {e}") from e
    model.eval()
    return tokenizer, model


def export(job: ExportJob) -> ExportStats:
    headers = data.load_headers(job.tables_path)
    pairs, skipped = data.load_questions(job.examples_path, headers)
    if job.limit is not None:
        pairs = pairs[: job.limit]
    tokenizer, model = load_encoder(job.model_id)

    records = []
    fallbacks = 0
    dim = None
    for index, (question, table_id) in enumerate(pairs):
        aligned = align.encode_example(
            question, headers[table_id], tokenizer, model, job.layer
        )
        fallbacks += aligned.fallbacks
        dim = aligned.q_vectors.shape[1]
        records.append((str(index), aligned.q_vectors, aligned.h_vectors))
    if dim is None:
        dim = int(model.config.hidden_size)

    tmp_path = Path(job.output_path).with_suffix(".tmp")
    count = nlqe.write(tmp_path, dim, records)
    os.replace(tmp_path, job.output_path)
    return ExportStats(count, skipped, fallbacks, dim)


def verify(
    output_path: str, examples_path: str, tables_path: str, limit: int | None = None
) -> list[str]:
    """Cross-check an embedding file against its source corpus.

    Returns human-readable problem strings, empty when the file is sound:
    record count matches, every question's row count equals its word-token
    count, every header count matches the schema, and all values are finite.
    """
    headers = data.load_headers(tables_path)
    pairs, _ = data.load_questions(examples_path, headers)
    if limit is not None:
        pairs = pairs[:limit]
    _, records = nlqe.read(output_path)
    problems: list[str] = []
    if len(records) != len(pairs):
        problems.append(f"record count {len(records)} != example count {len(pairs)}")
    for index, (question, table_id) in enumerate(pairs):
        ident = str(index)
        if ident not in records:
            problems.append(f"example {ident}: missing record")
            continue
        q, h = records[ident]
        n_tokens = len(tokenize(question))
        if q.shape[0] != n_tokens:
            problems.append(
                f"example {ident}: {q.shape[0]} question rows, {n_tokens} tokens"
            )
        if h.shape[0] != len(headers[table_id]):
            problems.append(
                f"example {ident}: {h.shape[0]} header rows, "
                f"{len(headers[table_id])} headers"
            )
        if not (np.isfinite(q).all() and np.isfinite(h).all()):
            problems.append(f"example {ident}: non-finite values")
    return problems
