"""Contextual vectors for question tokens and headers.

Two sources produce the same shape of output. The trainable path embeds the
question tokens and all header words, runs one shared bidirectional LSTM
over the sequence [question, SEP, header-1 words, SEP, header-2 words, ...]
and reads per-token vectors for the question plus a mean-pooled vector per
header. The precomputed path loads frozen per-example vectors from an NLQE
file written by an external exporter. Either way, each question vector gets
its QMV bit appended and each header vector its HMV bit, so the knowledge
features stay identifiable all the way into the heads.

Only question text, headers and knowledge bits enter here. Table rows are
structurally out of reach.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import autodiff as ad
from .knowledge import KnowledgeVectors

SOURCE_TRAINABLE = "trainable"
SOURCE_PRECOMPUTED = "precomputed"

EMBEDDING_MAGIC = b"NLQE"
EMBEDDING_VERSION = 1


class EmbeddingFormatError(ValueError):
    """Raised when an embedding file violates the NLQE v1 layout."""


@dataclass
class EncoderConfig:
    vocab_size: int
    embed_dim: int
    hidden_dim: int
    seed: int
    source: str = SOURCE_TRAINABLE
    precomputed_dim: int | None = None

    def __post_init__(self) -> None:
        if min(self.vocab_size, self.embed_dim, self.hidden_dim) < 1:
            raise ValueError("all encoder dimensions must be >= 1")
        if self.source not in (SOURCE_TRAINABLE, SOURCE_PRECOMPUTED):
            raise ValueError(f"unknown encoder source {self.source!r}")

    @property
    def output_dim(self) -> int:
        """Width of q/h vectors after the knowledge bit is appended."""
        if self.source == SOURCE_PRECOMPUTED:
            if self.precomputed_dim is None:
                raise ValueError("precomputed source needs precomputed_dim")
            return self.precomputed_dim + 1
        return 2 * self.hidden_dim + 1

    def to_json(self) -> dict:
        return {
            "vocab_size": self.vocab_size,
            "embed_dim": self.embed_dim,
            "hidden_dim": self.hidden_dim,
            "seed": self.seed,
            "source": self.source,
            "precomputed_dim": self.precomputed_dim,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EncoderConfig":
        return cls(**obj)


@dataclass
class EncoderOutput:
    """One contextual vector per question token (q) and per header (h)."""

    q_vectors: np.ndarray  # (n_tokens, d)
    h_vectors: np.ndarray  # (n_headers, d)

    def __post_init__(self) -> None:
        if not (np.isfinite(self.q_vectors).all() and np.isfinite(self.h_vectors).all()):
            raise ValueError("encoder output contains non-finite values")


class Vocabulary:
    """Corpus-built word ids with reserved unknown and separator slots."""

    UNK = 0
    SEP = 1

    def __init__(self, words: Sequence[str]):
        self._words = list(words)
        self._ids = {w: i + 2 for i, w in enumerate(self._words)}

    @classmethod
    def build(cls, token_lists: Iterable[Sequence[str]]) -> "Vocabulary":
        seen = set()
        for toks in token_lists:
            seen.update(t.casefold() for t in toks)
        return cls(sorted(seen))

    def id_of(self, word: str) -> int:
        return self._ids.get(word.casefold(), self.UNK)

    def __len__(self) -> int:
        return len(self._words) + 2

    def to_json(self) -> list[str]:
        return list(self._words)

    @classmethod
    def from_json(cls, words: list[str]) -> "Vocabulary":
        return cls(words)


def init(config: EncoderConfig, seed: int | None = None) -> dict[str, ad.Tensor]:
    """Uniform [-0.1, 0.1] initialization of embedding and BiLSTM parameters.

    Deterministic in the seed: identical seeds give bitwise-identical
    parameters.
    """
    if config.source != SOURCE_TRAINABLE:
        raise ValueError("init applies to the trainable encoder only")
    rng = np.random.default_rng(config.seed if seed is None else seed)
    d_e, h = config.embed_dim, config.hidden_dim

    def u(*shape):
        return ad.parameter(rng.uniform(-0.1, 0.1, shape))

    return {
        "enc.embed": u(config.vocab_size, d_e),
        "enc.f.Wx": u(d_e, 4 * h),
        "enc.f.Wh": u(h, 4 * h),
        "enc.f.b": u(4 * h),
        "enc.b.Wx": u(d_e, 4 * h),
        "enc.b.Wh": u(h, 4 * h),
        "enc.b.b": u(4 * h),
    }


def param_count(config: EncoderConfig) -> int:
    """Closed-form size of the trainable encoder (embedding + BiLSTM)."""
    d_e, h = config.embed_dim, config.hidden_dim
    per_direction = d_e * 4 * h + h * 4 * h + 4 * h
    return config.vocab_size * d_e + 2 * per_direction


def encode_tape(
    params: dict[str, ad.Tensor],
    q_ids: list[int],
    header_ids: list[list[int]],
    kv: KnowledgeVectors,
) -> tuple[ad.Tensor, ad.Tensor]:
    """Trainable-path encoding on the tape; returns (q_rows, h_rows) tensors."""
    if not q_ids or not header_ids:
        raise ValueError("encode requires a non-empty question and headers")
    seq: list[int] = list(q_ids)
    segments: list[tuple[int, int]] = []
    for ids in header_ids:
        if not ids:
            raise ValueError("encode requires non-empty header word lists")
        seq.append(Vocabulary.SEP)
        segments.append((len(seq), len(seq) + len(ids)))
        seq.extend(ids)
    x = ad.embedding_gather(params["enc.embed"], seq)
    out = ad.lstm_bi(
        x,
        params["enc.f.Wx"], params["enc.f.Wh"], params["enc.f.b"],
        params["enc.b.Wx"], params["enc.b.Wh"], params["enc.b.b"],
    )
    q_rows = ad.slice_rows(out, 0, len(q_ids))
    pooled = [ad.mean_rows(ad.slice_rows(out, lo, hi)) for lo, hi in segments]
    h_rows = ad.stack_rows(pooled)
    return _append_bits(q_rows, kv.qmv), _append_bits(h_rows, kv.hmv)


def _append_bits(rows: ad.Tensor, bits: Sequence[int]) -> ad.Tensor:
    col = ad.constant(np.asarray(bits, dtype=np.float64).reshape(-1, 1))
    return ad.concat([rows, col], axis=1)


def encode(
    params: dict[str, ad.Tensor],
    q_ids: list[int],
    header_ids: list[list[int]],
    kv: KnowledgeVectors,
) -> EncoderOutput:
    """Trainable-path encoding detached from the tape."""
    q_rows, h_rows = encode_tape(params, q_ids, header_ids, kv)
    return EncoderOutput(q_rows.data.copy(), h_rows.data.copy())


def encode_precomputed_tape(
    pre: "PrecomputedEmbeddings", example_id: str, kv: KnowledgeVectors
) -> tuple[ad.Tensor, ad.Tensor]:
    """Frozen-vector encoding on the tape (constants plus knowledge bits)."""
    q, h = pre.lookup(example_id)
    if q.shape[0] != len(kv.qmv) or h.shape[0] != len(kv.hmv):
        raise ValueError(
            f"embedding rows for example {example_id!r} do not match tokenization: "
            f"q {q.shape[0]} vs {len(kv.qmv)}, h {h.shape[0]} vs {len(kv.hmv)}"
        )
    return _append_bits(ad.constant(q), kv.qmv), _append_bits(ad.constant(h), kv.hmv)


class PrecomputedEmbeddings:
    """Per-example frozen q/h vectors loaded from an NLQE v1 file."""

    def __init__(self, dim: int, records: dict[str, tuple[np.ndarray, np.ndarray]]):
        self.dim = dim
        self._records = records

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, example_id: str) -> bool:
        return example_id in self._records

    def lookup(self, example_id: str) -> tuple[np.ndarray, np.ndarray]:
        if example_id not in self._records:
            raise KeyError(f"example id {example_id!r} not present in embedding file")
        return self._records[example_id]


def load_embedding_file(path) -> PrecomputedEmbeddings:
    """Read an NLQE v1 file, validating layout and dimensions.

    Format: magic "NLQE", version byte 0x01, little-endian u32 dimension and
    record count, then per record a u32-length id, u32 n_q, u32 n_h and the
    n_q*d + n_h*d float32 payload. Errors name the byte offset at fault.
    """
    with open(path, "rb") as fh:
        blob = fh.read()

    def need(offset: int, count: int) -> None:
        if offset + count > len(blob):
            raise EmbeddingFormatError(
                f"{path}: truncated at byte {len(blob)}, needed {offset + count}"
            )

    need(0, 5)
    if blob[:4] != EMBEDDING_MAGIC:
        raise EmbeddingFormatError(f"{path}: bad magic at byte 0: {blob[:4]!r}")
    if blob[4] != EMBEDDING_VERSION:
        raise EmbeddingFormatError(f"{path}: unsupported version {blob[4]} at byte 4")
    need(5, 8)
    dim, count = struct.unpack_from("<II", blob, 5)
    if dim < 1:
        raise EmbeddingFormatError(f"{path}: dimension {dim} at byte 5 must be >= 1")
    offset = 13
    records: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    for _ in range(count):
        need(offset, 4)
        (id_len,) = struct.unpack_from("<I", blob, offset)
        offset += 4
        need(offset, id_len + 8)
        example_id = blob[offset : offset + id_len].decode("utf-8")
        offset += id_len
        n_q, n_h = struct.unpack_from("<II", blob, offset)
        offset += 8
        payload = (n_q + n_h) * dim * 4
        need(offset, payload)
        flat = np.frombuffer(blob, dtype="<f4", count=(n_q + n_h) * dim, offset=offset)
        offset += payload
        q = flat[: n_q * dim].reshape(n_q, dim).astype(np.float64)
        h = flat[n_q * dim :].reshape(n_h, dim).astype(np.float64)
        if example_id in records:
            raise EmbeddingFormatError(
                f"{path}: duplicate example id {example_id!r} before byte {offset}"
            )
        records[example_id] = (q, h)
    if offset != len(blob):
        raise EmbeddingFormatError(
            f"{path}: {len(blob) - offset} trailing bytes at byte {offset}"
        )
    return PrecomputedEmbeddings(dim, records)


def write_embedding_file(
    path, dim: int, records: Iterable[tuple[str, np.ndarray, np.ndarray]]
) -> None:
    """Write NLQE v1; the counterpart of :func:`load_embedding_file`."""
    with open(path, "wb") as fh:
        fh.write(EMBEDDING_MAGIC)
        fh.write(bytes([EMBEDDING_VERSION]))
        body = bytearray()
        count = 0
        for example_id, q, h in records:
            q = np.ascontiguousarray(q, dtype="<f4")
            h = np.ascontiguousarray(h, dtype="<f4")
            if q.ndim != 2 or h.ndim != 2 or q.shape[1] != dim or h.shape[1] != dim:
                raise ValueError(f"record {example_id!r} does not have width {dim}")
            ident = example_id.encode("utf-8")
            body += struct.pack("<I", len(ident)) + ident
            body += struct.pack("<II", q.shape[0], h.shape[0])
            body += q.tobytes() + h.tobytes()
            count += 1
        fh.write(struct.pack("<II", dim, count))
        fh.write(bytes(body))
