"""Assemble full queries from slot distributions.

The aggregate, select column and where-count are fixed by argmax. The WHERE
clauses are then searched as combinations of (column, operator, value-span)
triples, each scored by the sum of its log-probabilities. A hypothesis
accumulates clauses over distinct columns; beam search keeps the best
``width`` hypotheses per added clause. Width 1 degenerates to greedy
decoding: the single best-scoring clause is taken at every step.

Hypotheses that contain the same clause set in different orders are
duplicates by construction (clause order never matters), so the beam
deduplicates on the sorted clause tuple. Ties anywhere break
lexicographically on (column, operator, start, end).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .sketch import Aggregate, Condition, Operator, SQLQuery
from .tokens import Token, extract_span

if TYPE_CHECKING:  # avoid a runtime cycle with sqlsketch.heads
    from .heads import SlotDistributions

Clause = tuple[int, int, int, int]  # (col, op, start, end)


@dataclass
class Hypothesis:
    """A partial WHERE assembly: clauses over distinct columns plus its score."""

    clauses: tuple[Clause, ...] = ()
    score: float = 0.0


@dataclass(frozen=True)
class PruneLimits:
    """Candidate-pool caps applied before combination search."""

    columns: int = 16
    spans: int = 16


DEFAULT_LIMITS = PruneLimits()


def _log(p: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(p)


def _top_indices(scores: np.ndarray, k: int | None) -> list[int]:
    # Descending by score, ascending by index on ties.
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    return order if k is None else order[:k]


def _span_candidates(
    start_logp: np.ndarray, end_logp: np.ndarray, k: int | None
) -> list[tuple[int, int, float]]:
    n = start_logp.shape[0]
    pairs = [
        (s, e, float(start_logp[s] + end_logp[e])) for s in range(n) for e in range(s, n)
    ]
    pairs.sort(key=lambda t: (-t[2], t[0], t[1]))
    return pairs if k is None else pairs[:k]


def clause_candidates(
    dists: SlotDistributions, limits: PruneLimits | None = DEFAULT_LIMITS
) -> list[tuple[Clause, float]]:
    """Scored (column, operator, span) triples, optionally pruned.

    Score is log p_wc[col] + log p_wo[col, op] + log p_start + log p_end.
    With ``limits=None`` every triple is enumerated (the exhaustive pool).
    """
    logp_wc = _log(dists.p_wc)
    logp_wo = _log(dists.p_wo)
    cols = _top_indices(logp_wc, limits.columns if limits else None)
    out: list[tuple[Clause, float]] = []
    for col in cols:
        for op in range(dists.p_wo.shape[1]):
            spans = _span_candidates(
                dists.wv_start_logp[col, op],
                dists.wv_end_logp[col, op],
                limits.spans if limits else None,
            )
            for s, e, span_score in spans:
                score = float(logp_wc[col] + logp_wo[col, op] + span_score)
                out.append(((col, op, s, e), score))
    return out


def _select_topline(dists: SlotDistributions) -> tuple[int, int, int]:
    agg = int(np.argmax(dists.p_sa))
    sel = int(np.argmax(dists.p_sc))
    wn = int(np.argmax(dists.p_wn))
    return agg, sel, wn


def _search(
    candidates: list[tuple[Clause, float]], wn: int, width: int
) -> Hypothesis:
    beam: list[Hypothesis] = [Hypothesis()]
    for _ in range(wn):
        pool: dict[tuple[Clause, ...], Hypothesis] = {}
        for hyp in beam:
            used = {c[0] for c in hyp.clauses}
            for clause, score in candidates:
                if clause[0] in used:
                    continue
                clauses = tuple(sorted(hyp.clauses + (clause,)))
                prev = pool.get(clauses)
                if prev is None:
                    pool[clauses] = Hypothesis(clauses, hyp.score + score)
        if not pool:
            break  # fewer distinct columns than requested clauses
        ranked = sorted(pool.values(), key=lambda h: (-h.score, h.clauses))
        beam = ranked[:width]
    return beam[0]


def _to_query(
    agg: int, sel: int, hyp: Hypothesis, question: str, tokens: list[Token]
) -> SQLQuery:
    conds = tuple(
        Condition(col, Operator(op), extract_span(question, tokens, s, e))
        for col, op, s, e in hyp.clauses
    )
    return SQLQuery(Aggregate(agg), sel, conds)


def beam(
    dists: SlotDistributions,
    question: str,
    tokens: list[Token],
    width: int = 8,
    limits: PruneLimits | None = DEFAULT_LIMITS,
) -> SQLQuery:
    """Beam-search the most probable WHERE combination into a full query."""
    if width < 1:
        raise ValueError(f"beam width must be >= 1, got {width}")
    agg, sel, wn = _select_topline(dists)
    if wn == 0:
        return SQLQuery(Aggregate(agg), sel, ())
    candidates = clause_candidates(dists, limits)
    hyp = _search(candidates, wn, width)
    return _to_query(agg, sel, hyp, question, tokens)


def greedy(dists: SlotDistributions, question: str, tokens: list[Token]) -> SQLQuery:
    """Width-1 decoding: take the single best-scoring clause at every step."""
    return beam(dists, question, tokens, width=1)


def best_hypothesis(
    dists: SlotDistributions,
    width: int,
    limits: PruneLimits | None = DEFAULT_LIMITS,
) -> Hypothesis:
    """The winning WHERE hypothesis only, for score-based property checks."""
    _, _, wn = _select_topline(dists)
    if wn == 0:
        return Hypothesis()
    return _search(clause_candidates(dists, limits), wn, width)
