"""Parameter checkpoint files.

Layout (little-endian):

    magic   4 bytes  b"WLCK"
    version u32      currently 1
    count   u32      number of records
    per record:
        name_len u16, name utf-8 bytes
        dtype    u8   0 = float32, 1 = float64
        ndim     u8
        dims     u32 * ndim
        data     raw values, C order
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"WLCK"
VERSION = 1
_DTYPES = {0: np.dtype("<f4"), 1: np.dtype("<f8")}
_DTYPE_TAGS = {np.dtype("float32"): 0, np.dtype("float64"): 1}


def save_checkpoint(path: str | Path, named_values: list[tuple[str, np.ndarray]]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<II", VERSION, len(named_values)))
        for name, arr in named_values:
            arr = np.asarray(arr)
            if arr.dtype not in _DTYPE_TAGS:
                raise ValueError(f"unsupported checkpoint dtype {arr.dtype} for {name!r}")
            nb = name.encode("utf-8")
            f.write(struct.pack("<H", len(nb)))
            f.write(nb)
            f.write(struct.pack("<BB", _DTYPE_TAGS[arr.dtype], arr.ndim))
            f.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
            f.write(np.ascontiguousarray(arr).astype(arr.dtype.newbyteorder("<")).tobytes())


def load_checkpoint(path: str | Path) -> dict[str, np.ndarray]:
    with open(path, "rb") as f:
        if f.read(4) != MAGIC:
            raise ValueError(f"{path}: not a checkpoint file")
        version, count = struct.unpack("<II", f.read(8))
        if version != VERSION:
            raise ValueError(f"{path}: unsupported checkpoint version {version}")
        out: dict[str, np.ndarray] = {}
        for _ in range(count):
            (name_len,) = struct.unpack("<H", f.read(2))
            name = f.read(name_len).decode("utf-8")
            tag, ndim = struct.unpack("<BB", f.read(2))
            dims = struct.unpack(f"<{ndim}I", f.read(4 * ndim)) if ndim else ()
            dtype = _DTYPES[tag]
            n = int(np.prod(dims)) if dims else 1
            data = np.frombuffer(f.read(n * dtype.itemsize), dtype=dtype).reshape(dims)
            out[name] = data.copy()
    return out
