import numpy as np

from sqlsketch import knowledge
from sqlsketch.tokens import tokenize

from .oracles import knowledge_oracle
from .util import WORDS, random_headers

QUESTION = "what is the nationality of the player marcus camby"
HEADERS = ["player", "no.", "nationality", "years in toronto"]


def toks(q):
    return [t.text for t in tokenize(q)]


def test_contains_full_match():
    assert knowledge.contains_full_match(["player", "no."], "player")
    assert knowledge.contains_full_match(["Player"], "player")
    assert not knowledge.contains_full_match([], "anything")
    assert not knowledge.contains_full_match(["played"], "play")  # no partial match


def test_question_mark_vector_reference_case():
    assert knowledge.question_mark_vector(toks(QUESTION), HEADERS) == [
        0, 0, 0, 1, 0, 0, 1, 0, 0,
    ]


def test_question_mark_vector_no_overlap_and_empty():
    assert knowledge.question_mark_vector(["x", "y"], ["a", "b"]) == [0, 0]
    assert knowledge.question_mark_vector([], HEADERS) == []


def test_header_mark_vector_reference_case():
    assert knowledge.header_mark_vector(toks(QUESTION), HEADERS) == [1, 0, 1, 0]


def test_header_mark_vector_partial_word_match():
    q = toks("how many years did he spend in toronto")
    assert knowledge.header_mark_vector(q, ["years in toronto"]) == [1]


def test_header_mark_vector_empty_headers():
    assert knowledge.header_mark_vector(["a"], []) == []


def test_build_composes_both_vectors():
    kv = knowledge.build(toks(QUESTION), HEADERS)
    assert kv.qmv == (0, 0, 0, 1, 0, 0, 1, 0, 0)
    assert kv.hmv == (1, 0, 1, 0)
    assert kv.concatenated == kv.qmv + kv.hmv
    assert len(kv.concatenated) == 13


def test_build_empty_and_symmetric():
    kv = knowledge.build([], [])
    assert kv.qmv == () and kv.hmv == () and kv.concatenated == ()
    kv = knowledge.build(["rank"], ["rank"])
    assert kv.qmv == (1,) and kv.hmv == (1,)


def test_oracle_equivalence_randomized():
    rng = np.random.default_rng(11)
    for _ in range(500):
        n = int(rng.integers(0, 12))
        tokens = [str(rng.choice(WORDS)) for _ in range(n)]
        headers = list(random_headers(rng)) if rng.random() > 0.05 else []
        kv = knowledge.build(tokens, headers)
        qmv, hmv = knowledge_oracle(tokens, headers)
        assert list(kv.qmv) == qmv
        assert list(kv.hmv) == hmv


def test_single_word_header_symmetry():
    # With one-word headers, qmv marks tokens equal to some header and hmv
    # marks headers present among the tokens.
    rng = np.random.default_rng(3)
    for _ in range(200):
        tokens = [str(rng.choice(WORDS)) for _ in range(int(rng.integers(0, 8)))]
        headers = [str(rng.choice(WORDS)) for _ in range(int(rng.integers(1, 5)))]
        kv = knowledge.build(tokens, headers)
        for i, tok in enumerate(tokens):
            assert kv.qmv[i] == int(any(tok == h for h in headers))
        for j, h in enumerate(headers):
            assert kv.hmv[j] == int(any(h == tok for tok in tokens))


def test_determinism_and_monotonicity():
    rng = np.random.default_rng(7)
    for _ in range(100):
        tokens = [str(rng.choice(WORDS)) for _ in range(6)]
        headers = [str(rng.choice(WORDS)) for _ in range(3)]
        kv1 = knowledge.build(tokens, headers)
        kv2 = knowledge.build(tokens, headers)
        assert kv1 == kv2
        # Adding a header can only flip bits 0 -> 1.
        grown = knowledge.build(tokens, headers + [str(rng.choice(WORDS))])
        assert all(a <= b for a, b in zip(kv1.qmv, grown.qmv))
        assert all(a <= b for a, b in zip(kv1.hmv, grown.hmv))
