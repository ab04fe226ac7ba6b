"""Data-agnostic knowledge vectors over question tokens and headers.

Two boolean vectors mark lexical overlap between the question and the table
schema. The question mark vector (QMV) has one bit per question token, set
when that token matches a header or a word of a header. The header mark
vector (HMV) has one bit per header, set when the header (or any of its
whitespace-separated words) occurs among the question tokens. Matching is
full-token and case-insensitive: "played" never matches "play".

Only schema text is consulted. Nothing in this module can see table rows,
which is the point: the features survive on deployments where cell data is
private.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class KnowledgeVectors:
    """QMV over question tokens and HMV over headers, plus their concatenation."""

    qmv: tuple[int, ...]
    hmv: tuple[int, ...]

    @property
    def concatenated(self) -> tuple[int, ...]:
        return self.qmv + self.hmv


def contains_full_match(words: Sequence[str], phrase: str) -> bool:
    """True iff ``phrase`` equals one of ``words`` after case-folding.

    Partial matches do not count: the phrase must coincide with a whole
    element of the word list.
    """
    folded = phrase.casefold()
    return any(w.casefold() == folded for w in words)


def _header_word_pool(headers: Sequence[str]) -> set[str]:
    # Whole header names plus each of their whitespace-separated words.
    pool: set[str] = set()
    for h in headers:
        pool.add(h.casefold())
        pool.update(w.casefold() for w in h.split())
    return pool


def question_mark_vector(
    question_tokens: Sequence[str], headers: Sequence[str]
) -> list[int]:
    """One bit per question token: does it occur in the schema vocabulary?

    The schema vocabulary holds every full header name and every word of
    every header, so a token matching one word of a multi-word header is
    still marked. Every occurrence of a matching word is marked, not just
    the first.
    """
    pool = _header_word_pool(headers)
    return [1 if t.casefold() in pool else 0 for t in question_tokens]


def header_mark_vector(
    question_tokens: Sequence[str], headers: Sequence[str]
) -> list[int]:
    """One bit per header: does the question mention it, even partially?

    A header is marked when the full header string or any single word of it
    appears as a question token. Partial word-level matches are deliberate:
    for the header "years in toronto", the question word "years" is enough.
    """
    token_set = {t.casefold() for t in question_tokens}
    marks: list[int] = []
    for h in headers:
        words = [h.casefold()] + [w.casefold() for w in h.split()]
        marks.append(1 if any(w in token_set for w in words) else 0)
    return marks


def build(question_tokens: Sequence[str], headers: Sequence[str]) -> KnowledgeVectors:
    """Compute both vectors for one (question, schema) pair."""
    return KnowledgeVectors(
        qmv=tuple(question_mark_vector(question_tokens, headers)),
        hmv=tuple(header_mark_vector(question_tokens, headers)),
    )
