"""Deterministic tokenization with character-span tracking.

Questions and header strings are split on whitespace, then leading and
trailing punctuation marks are peeled off into single-character tokens.
Token text is case-folded, but every token remembers the character span it
came from, so the original surface form (casing included) can always be
recovered. That recovery is what makes span-based WHERE-value extraction
possible: the model predicts token indices, and the value filled into the
query is the original substring between those indices.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

_CHUNK = re.compile(r"\S+")


@dataclass(frozen=True)
class Token:
    """One token: case-folded text plus its [start_char, end_char) span."""

    text: str
    start_char: int
    end_char: int

    def __post_init__(self) -> None:
        if self.start_char >= self.end_char:
            raise ValueError(f"empty token span ({self.start_char}, {self.end_char})")


def _is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def is_punctuation(text: str) -> bool:
    """True when every character of the token text is a punctuation mark."""
    return bool(text) and all(_is_punct_char(c) for c in text)


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into case-folded tokens with character spans.

    Whitespace separates chunks; each chunk then sheds leading and trailing
    punctuation marks as one-character tokens. Interior punctuation (as in
    "o'brien" or "1,000.5") stays inside the token. The empty string yields
    an empty list.
    """
    tokens: list[Token] = []
    for m in _CHUNK.finditer(text):
        lo, hi = m.start(), m.end()
        # Peel leading marks.
        while lo < hi and _is_punct_char(text[lo]):
            tokens.append(Token(text[lo].casefold(), lo, lo + 1))
            lo += 1
        # Collect trailing marks (emitted after the core, in order).
        trailing: list[Token] = []
        while hi > lo and _is_punct_char(text[hi - 1]):
            trailing.append(Token(text[hi - 1].casefold(), hi - 1, hi))
            hi -= 1
        if lo < hi:
            tokens.append(Token(text[lo:hi].casefold(), lo, hi))
        tokens.extend(reversed(trailing))
    return tokens


def join_tokens(texts: list[str]) -> str:
    """Render token texts to a comparison string.

    Adjacent tokens are joined with a single space, except that punctuation
    tokens attach directly to their neighbours ("ross", "'" -> "ross'").
    """
    out: list[str] = []
    for i, t in enumerate(texts):
        if i > 0 and not is_punctuation(t) and not is_punctuation(texts[i - 1]):
            out.append(" ")
        out.append(t)
    return "".join(out)


def _normalize_target(value: str) -> str:
    return " ".join(value.casefold().split())


def find_value_span(question_tokens: list[Token], value: str) -> tuple[int, int] | None:
    """Locate ``value`` as a contiguous token window, inclusive indices.

    The window's joined text (see :func:`join_tokens`) must equal the
    case-folded, whitespace-normalized value. The leftmost match wins; for a
    fixed start the shortest window wins. Returns None when no window
    matches, which is a legal outcome (some annotated values are not literal
    subsequences of the question).
    """
    if not value:
        raise ValueError("value must be non-empty")
    target = _normalize_target(value)
    if not target:
        return None
    n = len(question_tokens)
    for i in range(n):
        joined = ""
        for j in range(i, n):
            joined = join_tokens([t.text for t in question_tokens[i : j + 1]])
            if joined == target:
                return (i, j)
            if len(joined) > len(target):
                break
    return None


def extract_span(question: str, tokens: list[Token], start_idx: int, end_idx: int) -> str:
    """Original-text substring covered by tokens[start_idx..end_idx] inclusive."""
    if not (0 <= start_idx <= end_idx < len(tokens)):
        raise IndexError(
            f"span ({start_idx}, {end_idx}) out of range for {len(tokens)} tokens"
        )
    return question[tokens[start_idx].start_char : tokens[end_idx].end_char]
