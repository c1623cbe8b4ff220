"""EMB1 writer: the toolkit's binary embedding matrix format.

Layout: magic ``EMB1``, little-endian u32 row count, little-endian u32
dimension count, then row-major little-endian float32 values. Row IDs go
in a ``<path>.ids`` sidecar, one per line, in row order.
"""

import struct
from pathlib import Path

import numpy as np

MAGIC = b"EMB1"


class Emb1Error(ValueError):
    pass


def write_emb1(data, ids, path) -> None:
    data = np.ascontiguousarray(data, dtype="<f4")
    if data.ndim != 2:
        raise Emb1Error(f"need a 2-D matrix, got shape {data.shape}")
    ids = [str(i) for i in ids]
    if len(ids) != data.shape[0]:
        raise Emb1Error(f"{len(ids)} ids for {data.shape[0]} rows")
    if len(set(ids)) != len(ids):
        raise Emb1Error("row ids must be unique")
    if not np.all(np.isfinite(data)):
        raise Emb1Error("non-finite values in the matrix")
    path = Path(path)
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<II", data.shape[0], data.shape[1]))
        f.write(data.tobytes())
    with open(str(path) + ".ids", "w", encoding="utf-8") as f:
        for row_id in ids:
            f.write(row_id + "\n")
