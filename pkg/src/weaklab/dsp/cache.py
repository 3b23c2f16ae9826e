"""Per-clip feature cache blobs.

16-byte little-endian header followed by raw C-order values:

    frames  u32
    mels    u32
    dtype   u32   0 = float32
    version u32   currently 1
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

CACHE_VERSION = 1
_DTYPE_TAGS = {0: np.dtype("<f4")}


def write_feature(path: str | Path, values: np.ndarray) -> None:
    values = np.ascontiguousarray(values, dtype=np.float32)
    if values.ndim != 2:
        raise ValueError(f"feature cache stores 2-d matrices, got shape {values.shape}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(struct.pack("<IIII", values.shape[0], values.shape[1], 0, CACHE_VERSION))
        f.write(values.tobytes())


def read_feature(path: str | Path) -> np.ndarray:
    with open(path, "rb") as f:
        header = f.read(16)
        if len(header) != 16:
            raise ValueError(f"{path}: truncated feature cache header")
        frames, mels, dtype_tag, version = struct.unpack("<IIII", header)
        if version != CACHE_VERSION:
            raise ValueError(f"{path}: unsupported cache version {version}")
        if dtype_tag not in _DTYPE_TAGS:
            raise ValueError(f"{path}: unknown dtype tag {dtype_tag}")
        dtype = _DTYPE_TAGS[dtype_tag]
        data = np.frombuffer(f.read(frames * mels * dtype.itemsize), dtype=dtype)
        if data.size != frames * mels:
            raise ValueError(f"{path}: truncated feature cache body")
    return data.reshape(frames, mels).copy()
