"""Subword-to-word alignment by character-offset overlap.

The pretrained encoder sees subword pieces; the consumer wants one vector
per word token and one per header. Both gaps close the same way: every
piece carries a character span, every target (word token or header) covers
a character range, and a target's vector is the mean of the hidden states
of the pieces overlapping its range. A target that no piece overlaps falls
back to the nearest piece by span midpoint; fallbacks are counted so clean
corpora can assert zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from .tokens import tokenize

HEADER_JOINER = " ; "


@dataclass
class AlignedExample:
    q_vectors: np.ndarray  # (n_word_tokens, d) float32
    h_vectors: np.ndarray  # (n_headers, d) float32
    fallbacks: int


def header_ranges(headers: list[str]) -> tuple[str, list[tuple[int, int]]]:
    """Join headers into one schema string, tracking each header's span."""
    ranges = []
    pos = 0
    parts = []
    for h in headers:
        parts.append(h)
        ranges.append((pos, pos + len(h)))
        pos += len(h) + len(HEADER_JOINER)
    return HEADER_JOINER.join(parts), ranges


def _pool(
    hidden: np.ndarray,
    piece_spans: list[tuple[int, tuple[int, int]]],
    targets: list[tuple[int, int]],
) -> tuple[np.ndarray, int]:
    """Mean-pool pieces per target range; nearest-piece fallback when empty."""
    out = np.zeros((len(targets), hidden.shape[1]), dtype=np.float32)
    fallbacks = 0
    for i, (lo, hi) in enumerate(targets):
        rows = [idx for idx, (a, b) in piece_spans if a < hi and b > lo and a < b]
        if not rows:
            fallbacks += 1
            mid = (lo + hi) / 2
            rows = [
                min(
                    piece_spans,
                    key=lambda item: abs((item[1][0] + item[1][1]) / 2 - mid),
                )[0]
            ]
        out[i] = hidden[rows].mean(axis=0)
    return out, fallbacks


def encode_example(
    question: str,
    headers: list[str],
    tokenizer,
    model,
    layer: int = -1,
) -> AlignedExample:
    """One joint encoder pass over question and schema, then two alignments."""
    schema_text, ranges = header_ranges(headers)
    enc = tokenizer(
        question,
        schema_text,
        return_offsets_mapping=True,
        return_tensors="pt",
    )
    with torch.no_grad():
        out = model(
            input_ids=enc["input_ids"],
            attention_mask=enc["attention_mask"],
            token_type_ids=enc.get("token_type_ids"),
            output_hidden_states=True,
        )
    hidden = out.hidden_states[layer][0].to(torch.float32).numpy()
    offsets = enc["offset_mapping"][0].tolist()
    seq_ids = enc.sequence_ids(0)

    q_pieces = [
        (i, (a, b)) for i, ((a, b), s) in enumerate(zip(offsets, seq_ids)) if s == 0 and a < b
    ]
    h_pieces = [
        (i, (a, b)) for i, ((a, b), s) in enumerate(zip(offsets, seq_ids)) if s == 1 and a < b
    ]
    word_tokens = tokenize(question)
    if not word_tokens or not headers:
        raise ValueError("question and headers must be non-empty")
    if not q_pieces or not h_pieces:
        raise ValueError("encoder produced no pieces for question or schema")

    q_vectors, fb_q = _pool(
        hidden, q_pieces, [(t.start_char, t.end_char) for t in word_tokens]
    )
    h_vectors, fb_h = _pool(hidden, h_pieces, ranges)
    return AlignedExample(q_vectors, h_vectors, fb_q + fb_h)
