"""Temporal positional encodings tying RS rows to latent instants."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._grid import read_grid, write_grid
from .errors import ParameterError

KINDS = ("rs_absolute", "latent_absolute", "relative")
ENCODING_MAGIC = b"XSENC\x00\x00\x01"


@dataclass(frozen=True)
class EncodingMap:
    values: np.ndarray  # (H, W), raw row units
    kind: str

    def normalized(self) -> np.ndarray:
        """Values divided by (H - 1); row-index encodings land in [-1, 1]."""
        return self.values / (self.values.shape[0] - 1)


def _check_hw(height, width):
    if height < 2:
        raise ParameterError("height must be >= 2")
    if width < 1:
        raise ParameterError("width must be >= 1")


def _check_t(n_latent, t):
    if n_latent < 2:
        raise ParameterError("n_latent must be >= 2")
    if not 0 <= t <= n_latent - 1:
        raise ParameterError(f"t={t} outside 0..{n_latent - 1}")


def encode_rs(height: int, width: int) -> EncodingMap:
    """Row ``k`` of the RS view is encoded by the value ``k``."""
    _check_hw(height, width)
    rows = np.arange(height, dtype=np.float64)
    return EncodingMap(np.repeat(rows[:, None], width, axis=1), "rs_absolute")


def encode_latent(height: int, width: int, n_latent: int, t: int) -> EncodingMap:
    """Constant map at the row position of latent instant ``t``."""
    _check_hw(height, width)
    _check_t(n_latent, t)
    value = (height - 1) / (n_latent - 1) * t
    return EncodingMap(np.full((height, width), value), "latent_absolute")


def encode_relative(height: int, width: int, n_latent: int, t: int) -> EncodingMap:
    """RS encoding minus latent encoding; zero on the rows captured at instant ``t``."""
    rs = encode_rs(height, width)
    latent = encode_latent(height, width, n_latent, t)
    return EncodingMap(rs.values - latent.values, "relative")


def save_encoding(path, enc: EncodingMap) -> None:
    """Dump raw encoding values as a one-plane float32 grid."""
    write_grid(path, enc.values, ENCODING_MAGIC)


def load_encoding(path, kind: str = "relative") -> EncodingMap:
    return EncodingMap(read_grid(path, ENCODING_MAGIC)[0], kind)
