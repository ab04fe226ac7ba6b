"""The six slot predictors, their losses, and the training loop.

Each head owns a bidirectional LSTM scorer with additive attention pooling
over the encoder's rows, followed by an affine readout. The heads are wired
in a dependency chain: select-aggregate, select-column and where-number
read only the encoded question and schema; where-column is additionally
conditioned on the where-number signal; where-operator on the candidate
column's vector; where-value on column and operator. Conditioning uses hard
selections, gold ones while training (teacher forcing) and decoded ones at
inference, over shared parameters.

Training is plain mini-batch gradient descent (optional momentum) with
seed-deterministic shuffling, and every gradient flows through the tape in
:mod:`sqlsketch.autodiff`.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import autodiff as ad
from . import decode as decode_mod
from . import knowledge
from .corpus import Example, TableSchema
from .encoder import (
    SOURCE_PRECOMPUTED,
    SOURCE_TRAINABLE,
    EncoderConfig,
    PrecomputedEmbeddings,
    Vocabulary,
    encode_precomputed_tape,
    encode_tape,
)
from .encoder import init as encoder_init
from .sketch import SQLQuery
from .tokens import Token, find_value_span, tokenize

HEAD_NAMES = ("sa", "sc", "wn", "wc", "wo", "wv")

N_AGGREGATES = 6
N_OPERATORS = 3
N_WHERE_NUMBERS = 5  # counts 0..4


class TrainingError(RuntimeError):
    pass


@dataclass
class SlotDistributions:
    """Predicted distributions for all six slots of one example.

    ``p_wc`` holds independent per-header probabilities (they do not sum to
    one); ``wv_start_logp``/``wv_end_logp`` are log-probabilities over
    question positions for every (header, operator) pair.
    """

    p_sa: np.ndarray  # (6,)
    p_sc: np.ndarray  # (n_headers,)
    p_wn: np.ndarray  # (5,)
    p_wc: np.ndarray  # (n_headers,)
    p_wo: np.ndarray  # (n_headers, 3)
    wv_start_logp: np.ndarray  # (n_headers, 3, n_tokens)
    wv_end_logp: np.ndarray  # (n_headers, 3, n_tokens)


@dataclass(frozen=True)
class GoldTargets:
    """Training targets for one example; spans may be absent."""

    sa: int
    sc: int
    wn: int
    wc_cols: tuple[int, ...]
    wo_ops: tuple[int, ...]
    wv_spans: tuple[tuple[int, int] | None, ...]


@dataclass
class ExampleFeatures:
    """Everything the model needs about one example, rows excluded."""

    example_id: str
    question: str
    tokens: list[Token]
    header_words: list[list[str]]
    kv: knowledge.KnowledgeVectors
    q_ids: list[int] | None = None
    header_ids: list[list[int]] | None = None
    gold: GoldTargets | None = None


def gold_targets(example: Example, tokens: list[Token]) -> GoldTargets:
    conds = example.gold.conds
    spans = tuple(find_value_span(tokens, c.value) for c in conds)
    return GoldTargets(
        sa=int(example.gold.agg),
        sc=example.gold.sel,
        wn=len(conds),
        wc_cols=tuple(c.col for c in conds),
        wo_ops=tuple(int(c.op) for c in conds),
        wv_spans=spans,
    )


def featurize_question(
    question: str,
    schema: TableSchema,
    vocab: Vocabulary | None,
    example_id: str = "q",
) -> ExampleFeatures:
    """Model features for a bare question: tokens, knowledge bits, vocab ids."""
    tokens = tokenize(question)
    if not tokens:
        raise ValueError(f"example {example_id}: question tokenizes to nothing")
    token_texts = [t.text for t in tokens]
    header_words = [h.split() for h in schema.headers]
    kv = knowledge.build(token_texts, schema.headers)
    feats = ExampleFeatures(
        example_id=example_id,
        question=question,
        tokens=tokens,
        header_words=header_words,
        kv=kv,
    )
    if vocab is not None:
        feats.q_ids = [vocab.id_of(t) for t in token_texts]
        feats.header_ids = [[vocab.id_of(w) for w in words] for words in header_words]
    return feats


def featurize(
    example: Example,
    schema: TableSchema,
    vocab: Vocabulary | None,
    example_id: str,
    with_gold: bool = True,
) -> ExampleFeatures:
    feats = featurize_question(example.question, schema, vocab, example_id)
    if with_gold:
        feats.gold = gold_targets(example, feats.tokens)
    return feats


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------


def init_head_params(config: EncoderConfig, seed: int | None = None) -> dict[str, ad.Tensor]:
    """Uniform [-0.1, 0.1] initialization of all six heads."""
    rng = np.random.default_rng((config.seed if seed is None else seed) + 1)
    d = config.output_dim
    h = config.hidden_dim

    def u(*shape):
        return ad.parameter(rng.uniform(-0.1, 0.1, shape))

    params: dict[str, ad.Tensor] = {}
    for name in HEAD_NAMES:
        params[f"{name}.f.Wx"] = u(d, 4 * h)
        params[f"{name}.f.Wh"] = u(h, 4 * h)
        params[f"{name}.f.b"] = u(4 * h)
        params[f"{name}.b.Wx"] = u(d, 4 * h)
        params[f"{name}.b.Wh"] = u(h, 4 * h)
        params[f"{name}.b.b"] = u(4 * h)
        params[f"{name}.attn.Wa"] = u(2 * h, h)
        params[f"{name}.attn.ba"] = u(h)
        params[f"{name}.attn.v"] = u(h)
    params["sa.out.W"] = u(2 * h, N_AGGREGATES)
    params["sa.out.b"] = u(N_AGGREGATES)
    params["wn.out.W"] = u(2 * h, N_WHERE_NUMBERS)
    params["wn.out.b"] = u(N_WHERE_NUMBERS)
    for name in ("sc", "wc"):
        params[f"{name}.comb.Wc"] = u(2 * h, h)
        params[f"{name}.comb.Wh"] = u(2 * h, h)
        params[f"{name}.comb.b"] = u(h)
        params[f"{name}.out.v"] = u(h)
    params["wc.comb.Wn"] = u(N_WHERE_NUMBERS, h)
    params["wc.out.b"] = u()
    params["wo.comb.Wc"] = u(2 * h, h)
    params["wo.comb.Wh"] = u(2 * h, h)
    params["wo.comb.b"] = u(h)
    params["wo.out.W"] = u(h, N_OPERATORS)
    params["wo.out.b"] = u(N_OPERATORS)
    params["wv.comb.W1"] = u(2 * h, h)
    params["wv.comb.W2"] = u(2 * h, h)
    params["wv.comb.W3"] = u(N_OPERATORS, h)
    params["wv.comb.b"] = u(h)
    params["wv.out.vs"] = u(h)
    params["wv.out.ve"] = u(h)
    return params


def init_params(config: EncoderConfig) -> dict[str, ad.Tensor]:
    """All trainable parameters: encoder (when trainable) plus six heads."""
    params = {}
    if config.source == SOURCE_TRAINABLE:
        params.update(encoder_init(config))
    params.update(init_head_params(config))
    return params


# ---------------------------------------------------------------------------
# forward
# ---------------------------------------------------------------------------


def _head_lstm(params, name: str, rows: ad.Tensor) -> ad.Tensor:
    return ad.lstm_bi(
        rows,
        params[f"{name}.f.Wx"], params[f"{name}.f.Wh"], params[f"{name}.f.b"],
        params[f"{name}.b.Wx"], params[f"{name}.b.Wh"], params[f"{name}.b.b"],
    )


def _head_pool(params, name: str, out: ad.Tensor) -> ad.Tensor:
    return ad.attention_pool(
        out, params[f"{name}.attn.Wa"], params[f"{name}.attn.ba"], params[f"{name}.attn.v"]
    )


def forward_tensors(
    params: dict[str, ad.Tensor],
    config: EncoderConfig,
    feats: ExampleFeatures,
    wn_condition: int | None = None,
    pre: PrecomputedEmbeddings | None = None,
) -> dict[str, ad.Tensor]:
    """Run all heads on the tape; returns the raw logit tensors per head.

    ``wn_condition`` is the hard where-number signal feeding the
    where-column head: pass the gold count while training, or None to use
    the head's own argmax (inference).
    """
    if config.source == SOURCE_PRECOMPUTED:
        if pre is None:
            raise ValueError("precomputed encoder source requires an embedding file")
        q_rows, h_rows = encode_precomputed_tape(pre, feats.example_id, feats.kv)
    else:
        if feats.q_ids is None or feats.header_ids is None:
            raise ValueError("trainable encoder requires vocabulary ids in features")
        q_rows, h_rows = encode_tape(params, feats.q_ids, feats.header_ids, feats.kv)
    n = q_rows.data.shape[0]
    m = h_rows.data.shape[0]
    rows = ad.concat([q_rows, h_rows], axis=0)

    logits: dict[str, ad.Tensor] = {}

    for name in ("sa", "wn"):
        out = _head_lstm(params, name, rows)
        c = _head_pool(params, name, out)
        logits[name] = ad.add(ad.matmul(c, params[f"{name}.out.W"]), params[f"{name}.out.b"])

    if wn_condition is None:
        wn_condition = int(np.argmax(logits["wn"].data))
    wn_onehot = np.zeros(N_WHERE_NUMBERS)
    wn_onehot[wn_condition] = 1.0

    # sc: per-header softmax scores.
    out = _head_lstm(params, "sc", rows)
    c = _head_pool(params, "sc", out)
    o_h = ad.slice_rows(out, n, n + m)
    z = ad.tanh(
        ad.add(
            ad.add(ad.matmul(o_h, params["sc.comb.Wh"]), ad.matmul(c, params["sc.comb.Wc"])),
            params["sc.comb.b"],
        )
    )
    logits["sc"] = ad.matmul(z, params["sc.out.v"])

    # wc: independent per-header scores, conditioned on the where-number.
    out = _head_lstm(params, "wc", rows)
    c = _head_pool(params, "wc", out)
    o_h = ad.slice_rows(out, n, n + m)
    cond = ad.matmul(ad.constant(wn_onehot), params["wc.comb.Wn"])
    z = ad.tanh(
        ad.add(
            ad.add(ad.matmul(o_h, params["wc.comb.Wh"]), ad.matmul(c, params["wc.comb.Wc"])),
            ad.add(cond, params["wc.comb.b"]),
        )
    )
    logits["wc"] = ad.add(ad.matmul(z, params["wc.out.v"]), params["wc.out.b"])

    # wo: one 3-way readout per header, conditioned on that header's vector.
    out = _head_lstm(params, "wo", rows)
    c = _head_pool(params, "wo", out)
    o_h = ad.slice_rows(out, n, n + m)
    z = ad.tanh(
        ad.add(
            ad.add(ad.matmul(o_h, params["wo.comb.Wh"]), ad.matmul(c, params["wo.comb.Wc"])),
            params["wo.comb.b"],
        )
    )
    logits["wo"] = ad.add(ad.matmul(z, params["wo.out.W"]), params["wo.out.b"])

    # wv: start/end position scores for every (header, operator) pair.
    out = _head_lstm(params, "wv", rows)
    o_q = ad.slice_rows(out, 0, n)
    o_h = ad.slice_rows(out, n, n + m)
    h_block = ad.span_combine(
        o_q, o_h,
        params["wv.comb.W1"], params["wv.comb.W2"], params["wv.comb.W3"], params["wv.comb.b"],
    )
    logits["wv_start"] = ad.tensordot_last(h_block, params["wv.out.vs"])
    logits["wv_end"] = ad.tensordot_last(h_block, params["wv.out.ve"])
    return logits


def distributions(logits: dict[str, ad.Tensor]) -> SlotDistributions:
    return SlotDistributions(
        p_sa=ad.softmax(logits["sa"].data),
        p_sc=ad.softmax(logits["sc"].data),
        p_wn=ad.softmax(logits["wn"].data),
        p_wc=ad._sigmoid(logits["wc"].data),
        p_wo=ad.softmax(logits["wo"].data, axis=-1),
        wv_start_logp=ad.log_softmax(logits["wv_start"].data, axis=-1),
        wv_end_logp=ad.log_softmax(logits["wv_end"].data, axis=-1),
    )


def forward(
    params: dict[str, ad.Tensor],
    config: EncoderConfig,
    feats: ExampleFeatures,
    wn_condition: int | None = None,
    pre: PrecomputedEmbeddings | None = None,
) -> SlotDistributions:
    """Slot distributions for one example (detached from the tape)."""
    return distributions(forward_tensors(params, config, feats, wn_condition, pre))


# ---------------------------------------------------------------------------
# losses
# ---------------------------------------------------------------------------


def loss_tensors(
    logits: dict[str, ad.Tensor], gold: GoldTargets
) -> tuple[ad.Tensor, dict[str, float], int]:
    """Tape losses: (total, per-head values, count of conditions lacking spans).

    Cross-entropy for sa/sc/wn, summed binary cross-entropy over headers for
    wc, and per-gold-condition cross-entropies for wo and the wv start/end
    indices. Conditions whose gold value has no token span contribute
    nothing to the wv term and are counted instead.
    """
    terms: dict[str, ad.Tensor] = {
        "sa": ad.softmax_cross_entropy(logits["sa"], gold.sa),
        "sc": ad.softmax_cross_entropy(logits["sc"], gold.sc),
        "wn": ad.softmax_cross_entropy(logits["wn"], gold.wn),
    }
    wc_targets = np.zeros(logits["wc"].data.shape[0])
    for col in gold.wc_cols:
        wc_targets[col] = 1.0
    terms["wc"] = ad.bce_with_logits(logits["wc"], wc_targets)

    missing = 0
    wo_parts: list[ad.Tensor] = []
    wv_parts: list[ad.Tensor] = []
    for col, op, span in zip(gold.wc_cols, gold.wo_ops, gold.wv_spans):
        wo_parts.append(ad.softmax_cross_entropy(ad.take(logits["wo"], col), op))
        if span is None:
            missing += 1
            continue
        s, e = span
        wv_parts.append(ad.softmax_cross_entropy(ad.take(logits["wv_start"], (col, op)), s))
        wv_parts.append(ad.softmax_cross_entropy(ad.take(logits["wv_end"], (col, op)), e))
    terms["wo"] = ad.add_n(wo_parts) if wo_parts else ad.constant(0.0)
    terms["wv"] = ad.add_n(wv_parts) if wv_parts else ad.constant(0.0)

    per_head = {name: float(terms[name].data) for name in HEAD_NAMES}
    total = ad.add_n([terms[name] for name in HEAD_NAMES])
    return total, per_head, missing


def loss(dists: SlotDistributions, gold: GoldTargets) -> tuple[float, dict[str, float]]:
    """Loss of already-computed distributions; mirrors :func:`loss_tensors`."""

    def nll(p: np.ndarray, idx: int) -> float:
        return float(-np.log(max(p[idx], 1e-300)))

    per_head = {
        "sa": nll(dists.p_sa, gold.sa),
        "sc": nll(dists.p_sc, gold.sc),
        "wn": nll(dists.p_wn, gold.wn),
    }
    y = np.zeros_like(dists.p_wc)
    for col in gold.wc_cols:
        y[col] = 1.0
    p = np.clip(dists.p_wc, 1e-300, 1.0 - 1e-16)
    per_head["wc"] = float(-np.sum(y * np.log(p) + (1.0 - y) * np.log1p(-p)))
    wo = wv = 0.0
    for col, op, span in zip(gold.wc_cols, gold.wo_ops, gold.wv_spans):
        wo += nll(dists.p_wo[col], op)
        if span is not None:
            s, e = span
            wv += float(-dists.wv_start_logp[col, op, s] - dists.wv_end_logp[col, op, e])
    per_head["wo"] = wo
    per_head["wv"] = wv
    return sum(per_head.values()), per_head


# ---------------------------------------------------------------------------
# training
# ---------------------------------------------------------------------------


@dataclass
class TrainConfig:
    embed_dim: int = 24
    hidden_dim: int = 24
    epochs: int = 100
    lr: float = 0.1
    batch_size: int = 8
    momentum: float = 0.0
    seed: int = 0
    source: str = SOURCE_TRAINABLE
    log_every: int = 0  # epochs between progress prints; 0 silences


@dataclass
class TrainResult:
    params: dict[str, ad.Tensor]
    vocab: Vocabulary | None
    config: EncoderConfig
    loss_curve: list[float] = field(default_factory=list)
    n_missing_spans: int = 0


def _build_vocab(featureset: list[ExampleFeatures]) -> Vocabulary:
    seqs: list[list[str]] = []
    for f in featureset:
        seqs.append([t.text for t in f.tokens])
        seqs.extend(f.header_words)
    return Vocabulary.build(seqs)


def prepare_features(
    examples: list[Example],
    schemas: dict[str, TableSchema],
    vocab: Vocabulary | None,
    with_gold: bool = True,
) -> list[ExampleFeatures]:
    feats = []
    for i, ex in enumerate(examples):
        feats.append(featurize(ex, schemas[ex.table_id], vocab, str(i), with_gold))
    return feats


def train(
    examples: list[Example],
    schemas: dict[str, TableSchema],
    cfg: TrainConfig,
    pre: PrecomputedEmbeddings | None = None,
) -> TrainResult:
    """Mini-batch gradient descent over the full model.

    Deterministic for a fixed config: initialization and epoch shuffling
    both derive from ``cfg.seed``. Aborts with a diagnostic naming the head
    if any loss term goes non-finite.
    """
    base_feats = prepare_features(examples, schemas, None, with_gold=True)
    if cfg.source == SOURCE_TRAINABLE:
        vocab = _build_vocab(base_feats)
        feats = prepare_features(examples, schemas, vocab, with_gold=True)
        config = EncoderConfig(
            vocab_size=len(vocab),
            embed_dim=cfg.embed_dim,
            hidden_dim=cfg.hidden_dim,
            seed=cfg.seed,
            source=SOURCE_TRAINABLE,
        )
    else:
        if pre is None:
            raise ValueError("precomputed training requires an embedding file")
        vocab = None
        feats = base_feats
        config = EncoderConfig(
            vocab_size=1,
            embed_dim=1,
            hidden_dim=cfg.hidden_dim,
            seed=cfg.seed,
            source=SOURCE_PRECOMPUTED,
            precomputed_dim=pre.dim,
        )
    params = init_params(config)
    n_missing = sum(sum(1 for s in f.gold.wv_spans if s is None) for f in feats)

    velocity = {k: np.zeros_like(v.data) for k, v in params.items()}
    rng = np.random.default_rng(cfg.seed + 7)
    order = np.arange(len(feats))
    curve: list[float] = []
    for epoch in range(cfg.epochs):
        rng.shuffle(order)
        epoch_loss = 0.0
        for lo in range(0, len(order), cfg.batch_size):
            batch = order[lo : lo + cfg.batch_size]
            for k in params:
                params[k].grad = None
            for idx in batch:
                f = feats[idx]
                logits = forward_tensors(params, config, f, wn_condition=f.gold.wn, pre=pre)
                total, per_head, _ = loss_tensors(logits, f.gold)
                for name, value in per_head.items():
                    if not np.isfinite(value):
                        raise TrainingError(
                            f"non-finite loss in head '{name}' at epoch {epoch}"
                        )
                epoch_loss += float(total.data)
                ad.backward(total)
            inv = 1.0 / len(batch)
            for k, p in params.items():
                g = p.grad * inv if p.grad is not None else 0.0
                velocity[k] = cfg.momentum * velocity[k] + g
                p.data -= cfg.lr * velocity[k]
        curve.append(epoch_loss / len(feats))
        if cfg.log_every and (epoch + 1) % cfg.log_every == 0:
            print(f"epoch {epoch + 1}: mean loss {curve[-1]:.4f}")
    return TrainResult(params, vocab, config, curve, n_missing)


# ---------------------------------------------------------------------------
# gradient check
# ---------------------------------------------------------------------------


@dataclass
class GradCheckReport:
    """Worst coordinate found by :func:`grad_check`."""

    max_relative_error: float = 0.0
    worst_parameter: str = ""
    worst_index: int = 0
    analytic: float = 0.0
    numeric: float = 0.0


def grad_check(
    params: dict[str, ad.Tensor],
    config: EncoderConfig,
    feats: ExampleFeatures,
    step: float = 1e-4,
    pre: PrecomputedEmbeddings | None = None,
    report: GradCheckReport | None = None,
) -> float:
    """Max relative error between analytic and central-difference gradients.

    Relative error per coordinate is |a - n| / max(|a|, |n|, 1e-6), so
    coordinates with genuinely zero gradient compare clean. Pass a
    :class:`GradCheckReport` to learn which coordinate was worst.
    """
    assert feats.gold is not None

    def eval_loss() -> float:
        logits = forward_tensors(params, config, feats, wn_condition=feats.gold.wn, pre=pre)
        total, _, _ = loss_tensors(logits, feats.gold)
        return float(total.data)

    for p in params.values():
        p.grad = None
    logits = forward_tensors(params, config, feats, wn_condition=feats.gold.wn, pre=pre)
    total, _, _ = loss_tensors(logits, feats.gold)
    ad.backward(total)
    analytic = {
        k: (p.grad.copy() if p.grad is not None else np.zeros_like(p.data))
        for k, p in params.items()
    }

    worst = 0.0
    for name in sorted(params):
        p = params[name]
        flat = p.data.reshape(-1)
        a_flat = analytic[name].reshape(-1)
        for i in range(flat.size):
            old = flat[i]
            flat[i] = old + step
            f_plus = eval_loss()
            flat[i] = old - step
            f_minus = eval_loss()
            flat[i] = old
            numeric = (f_plus - f_minus) / (2.0 * step)
            denom = max(abs(a_flat[i]), abs(numeric), 1e-6)
            err = abs(a_flat[i] - numeric) / denom
            if err > worst:
                worst = err
                if report is not None:
                    report.max_relative_error = err
                    report.worst_parameter = name
                    report.worst_index = i
                    report.analytic = float(a_flat[i])
                    report.numeric = float(numeric)
    return worst


# ---------------------------------------------------------------------------
# prediction and checkpointing
# ---------------------------------------------------------------------------


def predict(
    params: dict[str, ad.Tensor],
    config: EncoderConfig,
    feats: ExampleFeatures,
    beam_width: int = 8,
    pre: PrecomputedEmbeddings | None = None,
) -> tuple[SQLQuery, SlotDistributions]:
    """End-to-end inference for one example: distributions plus decoded query."""
    dists = forward(params, config, feats, wn_condition=None, pre=pre)
    query = decode_mod.beam(dists, feats.question, feats.tokens, beam_width)
    return query, dists


CHECKPOINT_MAGIC = b"SKCP"
CHECKPOINT_VERSION = 1


def save_checkpoint(
    path: str | Path,
    params: dict[str, ad.Tensor],
    vocab: Vocabulary | None,
    config: EncoderConfig,
) -> None:
    """Version-tagged container: JSON manifest + float32 little-endian payload."""
    names = sorted(params)
    manifest = [[k, list(params[k].data.shape)] for k in names]
    header = json.dumps(
        {
            "config": config.to_json(),
            "vocab": vocab.to_json() if vocab is not None else None,
            "manifest": manifest,
        }
    ).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(bytes([CHECKPOINT_VERSION]))
        fh.write(struct.pack("<I", len(header)))
        fh.write(header)
        for k in names:
            fh.write(np.ascontiguousarray(params[k].data, dtype="<f4").tobytes())


def load_checkpoint(
    path: str | Path,
) -> tuple[dict[str, ad.Tensor], Vocabulary | None, EncoderConfig]:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != CHECKPOINT_MAGIC or len(blob) < 9:
        raise ValueError(f"{path}: not a checkpoint file")
    if blob[4] != CHECKPOINT_VERSION:
        raise ValueError(f"{path}: unsupported checkpoint version {blob[4]}")
    (header_len,) = struct.unpack_from("<I", blob, 5)
    header = json.loads(blob[9 : 9 + header_len].decode("utf-8"))
    config = EncoderConfig.from_json(header["config"])
    vocab = Vocabulary.from_json(header["vocab"]) if header["vocab"] is not None else None
    offset = 9 + header_len
    params: dict[str, ad.Tensor] = {}
    for name, shape in header["manifest"]:
        n = int(np.prod(shape)) if shape else 1
        end = offset + 4 * n
        if end > len(blob):
            raise ValueError(f"{path}: payload truncated at parameter {name!r}")
        flat = np.frombuffer(blob, dtype="<f4", count=n, offset=offset)
        params[name] = ad.parameter(flat.astype(np.float64).reshape(shape))
        offset = end
    if offset != len(blob):
        raise ValueError(f"{path}: {len(blob) - offset} unexpected trailing bytes")
    return params, vocab, config
