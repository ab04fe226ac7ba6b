"""Word tokenization matching the downstream toolkit, spans included.

The consumer of the exported embeddings expects one vector per question
token under its own deterministic tokenization: split on whitespace, peel
leading and trailing punctuation marks into one-character tokens, case-fold
the text, track character offsets. This module reproduces those rules so
the exporter can count and place tokens identically without importing the
consumer.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

_CHUNK = re.compile(r"\S+")


@dataclass(frozen=True)
class Token:
    text: str
    start_char: int
    end_char: int


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    for m in _CHUNK.finditer(text):
        lo, hi = m.start(), m.end()
        while lo < hi and _is_punct(text[lo]):
            tokens.append(Token(text[lo].casefold(), lo, lo + 1))
            lo += 1
        trailing: list[Token] = []
        while hi > lo and _is_punct(text[hi - 1]):
            trailing.append(Token(text[hi - 1].casefold(), hi - 1, hi))
            hi -= 1
        if lo < hi:
            tokens.append(Token(text[lo:hi].casefold(), lo, hi))
        tokens.extend(reversed(trailing))
    return tokens
