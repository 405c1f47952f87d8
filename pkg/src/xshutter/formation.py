"""Forward image formation: blur (GS) and rolling-shutter (RS) views.

Images are float arrays of shape (H, W, C), linear light in [0, 1].
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ShapeError
from .timing import TimingConfig, row_latent_indices


def as_image(img) -> np.ndarray:
    """View ``img`` as float64 (H, W, C); 2-D input gets a singleton channel."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    if arr.ndim != 3:
        raise ShapeError(f"expected an (H, W) or (H, W, C) image, got shape {arr.shape}")
    return arr


@dataclass
class LatentSequence:
    frames: np.ndarray  # (N, H, W, C)
    timing: TimingConfig

    def __post_init__(self):
        frames = np.asarray(self.frames, dtype=np.float64)
        if frames.ndim == 3:
            frames = frames[..., None]
        if frames.ndim != 4:
            raise ShapeError(f"frames must be (N, H, W, C), got {frames.shape}")
        n, h, w, c = frames.shape
        if c not in (1, 3):
            raise ShapeError(f"channel count must be 1 or 3, got {c}")
        if n != self.timing.n_latent:
            raise ShapeError(f"{n} frames but timing.n_latent = {self.timing.n_latent}")
        if (h, w) != (self.timing.image_height, self.timing.image_width):
            raise ShapeError(f"frames are {h}x{w} but timing says "
                             f"{self.timing.image_height}x{self.timing.image_width}")
        self.frames = frames

    @classmethod
    def from_frames(cls, frames, timing: TimingConfig) -> "LatentSequence":
        shapes = {np.shape(f) for f in frames}
        if len(shapes) != 1:
            raise ShapeError(f"frames differ in shape: {sorted(shapes)}")
        return cls(np.stack([as_image(f) for f in frames]), timing)

    def __len__(self):
        return self.frames.shape[0]


@dataclass
class ObservationPair:
    blur: np.ndarray  # B, (H, W, C)
    rs: np.ndarray  # R, (H, W, C)
    timing: TimingConfig

    def __post_init__(self):
        self.blur = as_image(self.blur)
        self.rs = as_image(self.rs)
        if self.blur.shape != self.rs.shape:
            raise ShapeError(f"blur {self.blur.shape} and rs {self.rs.shape} differ")
        h, w = self.blur.shape[:2]
        if (h, w) != (self.timing.image_height, self.timing.image_width):
            raise ShapeError(f"images are {h}x{w} but timing says "
                             f"{self.timing.image_height}x{self.timing.image_width}")


def linearize(img, gamma: float) -> np.ndarray:
    """Undo a power-law response: ``out = in ** gamma``."""
    if not gamma > 0:
        raise ParameterError(f"gamma must be positive, got {gamma}")
    return np.power(np.asarray(img, dtype=np.float64), gamma)


def delinearize(img, gamma: float) -> np.ndarray:
    """Inverse of :func:`linearize`."""
    if not gamma > 0:
        raise ParameterError(f"gamma must be positive, got {gamma}")
    return np.power(np.asarray(img, dtype=np.float64), 1.0 / gamma)


def _frames(seq) -> np.ndarray:
    frames = seq.frames if isinstance(seq, LatentSequence) else np.asarray(seq)
    if frames.ndim not in (3, 4):
        raise ShapeError(f"expected (N, H, W[, C]) frames, got {frames.shape}")
    return frames


def mean_frames(frames: np.ndarray) -> np.ndarray:
    # Anchored on frame 0 so identical frames average to themselves bit-exactly.
    first = frames[0]
    return first + (frames - first).mean(axis=0)


def synthesize_blur(seq) -> np.ndarray:
    """Blurred global-shutter view: per-pixel mean of the latent frames."""
    return mean_frames(_frames(seq))


def synthesize_rs(seq, timing: TimingConfig | None = None) -> np.ndarray:
    """Rolling-shutter view: row ``k`` copied from the latent frame owning it."""
    frames = _frames(seq)
    if timing is None:
        if not isinstance(seq, LatentSequence):
            raise TypeError("timing is required when passing a bare frame array")
        timing = seq.timing
    if frames.shape[0] != timing.n_latent or frames.shape[1] != timing.image_height:
        raise ShapeError(f"frames {frames.shape} inconsistent with timing "
                         f"(N={timing.n_latent}, H={timing.image_height})")
    owner = row_latent_indices(timing)
    return frames[owner, np.arange(timing.image_height)]


def observe(seq: LatentSequence) -> ObservationPair:
    return ObservationPair(synthesize_blur(seq), synthesize_rs(seq), seq.timing)


def shift_image(img, dx: int, dy: int) -> np.ndarray:
    """Translate content by (+dx, +dy) pixels, replicating edge pixels into the gap."""
    img = np.asarray(img)
    h, w = img.shape[:2]
    rows = np.clip(np.arange(h) - dy, 0, h - 1)
    cols = np.clip(np.arange(w) - dx, 0, w - 1)
    return img[rows][:, cols]


def degrade_shift(r, max_offset_px: int, seed: int):
    """Random integer misalignment in [-max, max]^2; returns (image, (dx, dy))."""
    if max_offset_px < 0:
        raise ParameterError("max_offset_px must be >= 0")
    rng = np.random.default_rng(seed)
    dx, dy = (int(d) for d in rng.integers(-max_offset_px, max_offset_px + 1, size=2))
    return shift_image(r, dx, dy), (dx, dy)


def degrade_lowlight(r, peak: float, gamma_range=(0.8, 1.2), seed: int = 0) -> np.ndarray:
    """Low-light capture: random gamma, then Poisson shot noise at ``peak`` photons."""
    if not peak > 0:
        raise ParameterError(f"peak must be positive, got {peak}")
    lo, hi = gamma_range
    if not 0 < lo <= hi:
        raise ParameterError(f"invalid gamma range {gamma_range}")
    rng = np.random.default_rng(seed)
    gamma = rng.uniform(lo, hi)
    dark = np.power(np.asarray(r, dtype=np.float64), gamma)
    noisy = rng.poisson(dark * peak) / peak
    return np.clip(noisy, 0.0, 1.0)
