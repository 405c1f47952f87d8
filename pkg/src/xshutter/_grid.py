"""Raw float32 grid files: 8-byte magic, H and W as little-endian uint32, then planes."""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

HEADER = struct.Struct("<8sII")


def write_grid(path, planes, magic: bytes) -> None:
    planes = np.asarray(planes, dtype="<f4")
    if planes.ndim == 2:
        planes = planes[None]
    _, h, w = planes.shape
    with open(path, "wb") as fh:
        fh.write(HEADER.pack(magic, h, w))
        fh.write(np.ascontiguousarray(planes).tobytes())


def read_grid(path, magic: bytes) -> np.ndarray:
    data = Path(path).read_bytes()
    if len(data) < HEADER.size:
        raise ValueError(f"{path}: truncated grid file")
    found, h, w = HEADER.unpack_from(data)
    if found != magic:
        raise ValueError(f"{path}: bad magic {found!r}, expected {magic!r}")
    body = np.frombuffer(data, dtype="<f4", offset=HEADER.size)
    if h * w == 0 or body.size % (h * w):
        raise ValueError(f"{path}: payload size does not match {h}x{w}")
    return body.reshape(-1, h, w).astype(np.float64)
