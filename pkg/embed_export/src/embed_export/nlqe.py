"""NLQE v1 binary embedding files: writer and verifying reader.

Layout, byte for byte: magic "NLQE", version 0x01, little-endian u32
dimension, u32 record count; per record a u32 id length and utf-8 id bytes,
u32 question-row count, u32 header-row count, then the question and header
matrices as IEEE-754 float32 little-endian, row-major.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Iterable

import numpy as np

MAGIC = b"NLQE"
VERSION = 1


class FormatError(ValueError):
    pass


def write(path: str | Path, dim: int, records: Iterable[tuple[str, np.ndarray, np.ndarray]]) -> int:
    """Serialize records; returns the record count."""
    body = bytearray()
    count = 0
    for example_id, q, h in records:
        q = np.ascontiguousarray(q, dtype="<f4")
        h = np.ascontiguousarray(h, dtype="<f4")
        if q.ndim != 2 or h.ndim != 2 or q.shape[1] != dim or h.shape[1] != dim:
            raise ValueError(f"record {example_id!r}: expected width {dim}")
        ident = example_id.encode("utf-8")
        body += struct.pack("<I", len(ident)) + ident
        body += struct.pack("<II", q.shape[0], h.shape[0])
        body += q.tobytes() + h.tobytes()
        count += 1
    with open(path, "wb") as fh:
        fh.write(MAGIC + bytes([VERSION]) + struct.pack("<II", dim, count) + bytes(body))
    return count


def read(path: str | Path) -> tuple[int, dict[str, tuple[np.ndarray, np.ndarray]]]:
    """Parse a file back into (dim, id -> (q, h)); errors name byte offsets."""
    blob = Path(path).read_bytes()

    def need(offset: int, n: int) -> None:
        if offset + n > len(blob):
            raise FormatError(f"{path}: truncated at byte {len(blob)}, needed {offset + n}")

    need(0, 13)
    if blob[:4] != MAGIC:
        raise FormatError(f"{path}: bad magic at byte 0")
    if blob[4] != VERSION:
        raise FormatError(f"{path}: unsupported version {blob[4]} at byte 4")
    dim, count = struct.unpack_from("<II", blob, 5)
    offset = 13
    records: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    for _ in range(count):
        need(offset, 4)
        (id_len,) = struct.unpack_from("<I", blob, offset)
        offset += 4
        need(offset, id_len + 8)
        ident = blob[offset : offset + id_len].decode("utf-8")
        offset += id_len
        n_q, n_h = struct.unpack_from("<II", blob, offset)
        offset += 8
        payload = (n_q + n_h) * dim * 4
        need(offset, payload)
        flat = np.frombuffer(blob, dtype="<f4", count=(n_q + n_h) * dim, offset=offset)
        offset += payload
        records[ident] = (flat[: n_q * dim].reshape(n_q, dim), flat[n_q * dim :].reshape(n_h, dim))
    if offset != len(blob):
        raise FormatError(f"{path}: {len(blob) - offset} trailing bytes at byte {offset}")
    return dim, records
