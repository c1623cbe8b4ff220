"""Binary persistence and similarity primitives for embedding matrices.

File format "EMB1": 4-byte magic ``EMB1``, little-endian uint32 row count,
little-endian uint32 dimension count, then row-major little-endian float32
values. Row IDs live in a UTF-8 sidecar file at ``<path>.ids``, one per line.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MAGIC = b"EMB1"


class EmbeddingError(ValueError):
    """Raised for malformed EMB1 files or invalid matrices."""


@dataclass
class EmbeddingMatrix:
    data: np.ndarray  # (n_rows, n_dims) float32
    ids: list[str]

    def __post_init__(self):
        self.data = np.ascontiguousarray(self.data, dtype=np.float32)
        if self.data.ndim != 2 or self.data.shape[0] < 1 or self.data.shape[1] < 1:
            raise EmbeddingError("embedding matrix must be 2-D and non-empty")
        if not np.all(np.isfinite(self.data)):
            bad = int(np.argwhere(~np.isfinite(self.data).all(axis=1))[0][0])
            raise EmbeddingError(f"non-finite value in row {bad}")
        if len(self.ids) != self.data.shape[0]:
            raise EmbeddingError(
                f"id count {len(self.ids)} != row count {self.data.shape[0]}")
        if len(set(self.ids)) != len(self.ids):
            raise EmbeddingError("row ids must be unique")

    @property
    def n_rows(self) -> int:
        return self.data.shape[0]

    @property
    def n_dims(self) -> int:
        return self.data.shape[1]

    def row(self, row_id: str) -> np.ndarray:
        return self.data[self.ids.index(row_id)]


def write_embeddings(matrix: EmbeddingMatrix, path) -> None:
    path = Path(path)
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<II", matrix.n_rows, matrix.n_dims))
        f.write(matrix.data.astype("<f4").tobytes())
    with open(str(path) + ".ids", "w", encoding="utf-8") as f:
        for row_id in matrix.ids:
            f.write(row_id + "\n")


def read_embeddings(path) -> EmbeddingMatrix:
    path = Path(path)
    raw = path.read_bytes()
    if raw[:4] != MAGIC:
        raise EmbeddingError(f"{path}: bad magic {raw[:4]!r}, expected {MAGIC!r}")
    if len(raw) < 12:
        raise EmbeddingError(f"{path}: truncated header")
    n_rows, n_dims = struct.unpack("<II", raw[4:12])
    expected = 12 + 4 * n_rows * n_dims
    if len(raw) < expected:
        raise EmbeddingError(
            f"{path}: truncated payload ({len(raw)} bytes, expected {expected})")
    data = np.frombuffer(raw[12:expected], dtype="<f4").reshape(n_rows, n_dims)
    ids_path = Path(str(path) + ".ids")
    if not ids_path.exists():
        raise EmbeddingError(f"{path}: missing id sidecar {ids_path}")
    ids = ids_path.read_text(encoding="utf-8").splitlines()
    if len(ids) != n_rows:
        raise EmbeddingError(
            f"{path}: id sidecar has {len(ids)} lines, expected {n_rows}")
    return EmbeddingMatrix(data=np.array(data), ids=ids)


def cosine_similarity(u, v) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine similarity undefined for zero-norm vector")
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def centroid(matrix: EmbeddingMatrix, row_indices) -> np.ndarray:
    idx = list(row_indices)
    if not idx:
        raise ValueError("centroid of empty index set")
    return matrix.data[idx].astype(np.float64).mean(axis=0)
