"""PNG images, latent-sequence / observation-pair directories, and config files.

Directory layouts::

    sequence/   frame_000.png ... frame_{N-1}.png, timing.json
    pair/       blur.png, rs.png, timing.json
"""
from __future__ import annotations

import json
import re
from pathlib import Path

import cv2
import numpy as np

from .decompose import DecomposeConfig
from .errors import ConfigError
from .formation import LatentSequence, ObservationPair
from .timing import TimingConfig

TIMING_FILE = "timing.json"
FRAME_PATTERN = re.compile(r"frame_(\d+)\.png$")


def read_png(path) -> np.ndarray:
    """Read an 8- or 16-bit PNG as float64 (H, W, C) in [0, 1]; row 0 is the top row."""
    raw = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise FileNotFoundError(f"cannot read image {path}")
    if raw.dtype == np.uint8:
        scale = 255.0
    elif raw.dtype == np.uint16:
        scale = 65535.0
    else:
        raise OSError(f"{path}: unsupported PNG sample type {raw.dtype}")
    if raw.ndim == 2:
        raw = raw[:, :, None]
    elif raw.shape[2] == 4:
        raw = raw[:, :, :3]
    if raw.shape[2] == 3:
        raw = raw[:, :, ::-1]
    return raw.astype(np.float64) / scale


def quantize(img, bit_depth: int = 8) -> np.ndarray:
    scale, dtype = {8: (255.0, np.uint8), 16: (65535.0, np.uint16)}[bit_depth]
    return np.round(np.clip(img, 0.0, 1.0) * scale).astype(dtype)


def write_png(path, img, bit_depth: int = 8) -> None:
    img = np.asarray(img, dtype=np.float64)
    if img.ndim == 3 and img.shape[2] == 1:
        img = img[:, :, 0]
    data = quantize(img, bit_depth)
    if data.ndim == 3:
        data = np.ascontiguousarray(data[:, :, ::-1])
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    if not cv2.imwrite(str(path), data, [cv2.IMWRITE_PNG_COMPRESSION, 6]):
        raise OSError(f"cannot write image {path}")


def frame_name(t: int, n: int) -> str:
    return f"frame_{t:0{max(3, len(str(n - 1)))}d}.png"


def write_sequence(directory, seq: LatentSequence, bit_depth: int = 16) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    n = len(seq)
    for t in range(n):
        write_png(directory / frame_name(t, n), seq.frames[t], bit_depth)
    seq.timing.save(directory / TIMING_FILE)


def read_sequence(directory) -> LatentSequence:
    directory = Path(directory)
    timing = TimingConfig.load(directory / TIMING_FILE)
    found = sorted((int(m.group(1)), p) for p in directory.iterdir()
                   if (m := FRAME_PATTERN.match(p.name)))
    if [i for i, _ in found] != list(range(len(found))):
        raise FileNotFoundError(f"{directory}: frame files are not numbered 0..N-1")
    return LatentSequence.from_frames([read_png(p) for _, p in found], timing)


def write_pair(directory, pair: ObservationPair, bit_depth: int = 16) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    write_png(directory / "blur.png", pair.blur, bit_depth)
    write_png(directory / "rs.png", pair.rs, bit_depth)
    pair.timing.save(directory / TIMING_FILE)


def read_pair(directory) -> ObservationPair:
    directory = Path(directory)
    timing = TimingConfig.load(directory / TIMING_FILE)
    return ObservationPair(read_png(directory / "blur.png"), read_png(directory / "rs.png"), timing)


CONFIG_SECTIONS = {"timing", "decompose", "eval_lengths", "seed", "degrade", "threads"}
DEGRADE_KEYS = {"shifts", "peaks", "gamma_range"}


def load_config(path) -> dict:
    """Parse an experiment config; every level rejects unknown keys.

    Returns a dict with ``timing`` (TimingConfig or None), ``decompose``
    (DecomposeConfig) and the remaining plain values.
    """
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    unknown = sorted(set(data) - CONFIG_SECTIONS)
    if unknown:
        raise ConfigError(f"{path}: unknown keys {', '.join(unknown)}")
    out = dict(data)
    out["timing"] = TimingConfig.from_dict(data["timing"]) if "timing" in data else None
    try:
        out["decompose"] = DecomposeConfig.from_dict(data.get("decompose", {}))
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    degrade = data.get("degrade", {})
    bad = sorted(set(degrade) - DEGRADE_KEYS)
    if bad:
        raise ConfigError(f"{path}: unknown degrade keys {', '.join(bad)}")
    return out
