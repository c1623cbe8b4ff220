"""Deterministic text encoders.

The offline backend is a signed feature-hashing encoder: each token is
mapped to a bucket and a sign from its SHA-1 digest, segment vectors are
the L2-normalized bucket sums. Deterministic across processes and
platforms, needs no model files, and keeps cosine similarity meaningful
for word-overlap clustering. A transformer backend can be requested with
a model id; it requires the model to be available locally or via hub.
"""

import hashlib
import re

import numpy as np

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

OFFLINE_MODEL_ID = "hash-v1"


class EncoderError(RuntimeError):
    pass


def tokenize(text: str) -> list[str]:
    return [t.lower() for t in _TOKEN_RE.findall(text)]


def _bucket(token: str, dims: int) -> tuple[int, float]:
    digest = hashlib.sha1(token.encode("utf-8")).digest()
    idx = int.from_bytes(digest[:4], "little") % dims
    sign = 1.0 if digest[4] & 1 else -1.0
    return idx, sign


def encode_tokens(tokens, dims: int = 256) -> np.ndarray:
    """One vector per token (unit one-hot with sign)."""
    out = np.zeros((len(tokens), dims), dtype=np.float32)
    for row, token in enumerate(tokens):
        idx, sign = _bucket(token, dims)
        out[row, idx] = sign
        # a small shared component keeps norms positive and gives related
        # tokens of one text a common direction
        out[row, _bucket("<bias>", dims)[0]] += 0.1
    return out


def encode_text(text: str, dims: int = 256,
                max_seq_length: int = 512) -> tuple[np.ndarray, bool]:
    """Segment vector: normalized signed bucket sum.

    Returns (vector, truncated); empty or all-symbol text maps to the bias
    direction so the norm is always positive.
    """
    tokens = tokenize(text)
    truncated = len(tokens) > max_seq_length
    tokens = tokens[:max_seq_length]
    vec = np.zeros(dims, dtype=np.float64)
    for token in tokens:
        idx, sign = _bucket(token, dims)
        vec[idx] += sign
    vec[_bucket("<bias>", dims)[0]] += 0.25
    norm = np.linalg.norm(vec)
    if norm == 0.0:
        vec[_bucket("<bias>", dims)[0]] = 1.0
        norm = 1.0
    return (vec / norm).astype(np.float32), truncated


def load_transformer(model_id: str):
    """Resolve a transformer encoder; offline id returns None (hash path)."""
    if model_id == OFFLINE_MODEL_ID:
        return None
    try:
        from sentence_transformers import SentenceTransformer
    except ImportError:
        raise EncoderError(
            f"model {model_id!r} needs the sentence-transformers package; "
            f"install it or use the offline id {OFFLINE_MODEL_ID!r}")
    try:
        return SentenceTransformer(model_id)
    except Exception as exc:
        raise EncoderError(f"cannot load model {model_id!r}: {exc}")
