"""Procedural latent sequences with known linear motion."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import gaussian_filter

from .formation import LatentSequence, ObservationPair, observe
from .timing import scaled_timing

TEXTURES = ("smooth", "sines")
SUITE_SPEEDS = (1, 2, 3, 4)


def texture(name: str, height: int, width: int, seed: int = 0,
            symmetric: bool = False) -> np.ndarray:
    """Grayscale texture in [0.1, 0.9].

    ``smooth`` is low-passed white noise; ``sines`` a sum of random plane waves.
    With ``symmetric`` the texture is mirror-symmetric about its vertical centre line.
    """
    rng = np.random.default_rng(seed)
    if name == "smooth":
        img = gaussian_filter(rng.standard_normal((height, width)), sigma=3.0, mode="wrap")
    elif name == "sines":
        y, x = np.mgrid[0:height, 0:width].astype(np.float64)
        img = np.zeros((height, width))
        for _ in range(6):
            period = rng.uniform(10.0, 28.0)
            angle = rng.uniform(0.0, np.pi)
            phase = rng.uniform(0.0, 2 * np.pi)
            img += np.sin(2 * np.pi * (x * np.cos(angle) + y * np.sin(angle)) / period + phase)
    else:
        raise ValueError(f"unknown texture {name!r}; choose from {TEXTURES}")
    if symmetric:
        img = 0.5 * (img + img[:, ::-1])
    lo, hi = img.min(), img.max()
    return 0.1 + 0.8 * (img - lo) / (hi - lo)


def translating_sequence(tex: np.ndarray, width: int, n_latent: int, velocity: int) -> LatentSequence:
    """Window of ``width`` columns sliding over ``tex`` at ``velocity`` px/frame.

    Motion is centred on the middle frame; integer velocities keep every frame
    an exact crop of the texture.
    """
    height, canvas = tex.shape
    centre = (canvas - width) // 2
    reach = abs(velocity) * (n_latent - 1) / 2
    if centre < reach:
        raise ValueError("texture too narrow for the requested motion")
    frames = []
    for t in range(n_latent):
        start = int(round(centre - velocity * (t - (n_latent - 1) / 2)))
        frames.append(tex[:, start:start + width])
    timing = scaled_timing(height, width, n_latent)
    return LatentSequence(np.stack(frames)[..., None], timing)


@dataclass(frozen=True)
class SyntheticCase:
    texture: str
    velocity: int
    seed: int

    @property
    def name(self) -> str:
        sign = "p" if self.velocity >= 0 else "m"
        return f"{self.texture}_v{sign}{abs(self.velocity)}"


def make_case(case: SyntheticCase, size: int = 128, n_latent: int = 9,
              symmetric: bool = False) -> tuple[LatentSequence, ObservationPair]:
    margin = max(SUITE_SPEEDS) * (n_latent - 1) // 2 + 8
    tex = texture(case.texture, size, size + 2 * margin, seed=case.seed, symmetric=symmetric)
    seq = translating_sequence(tex, size, n_latent, case.velocity)
    return seq, observe(seq)


def suite(seed: int = 0) -> list[SyntheticCase]:
    """4 speeds x 2 directions x 2 textures of horizontal translation."""
    cases = []
    for i, name in enumerate(TEXTURES):
        for speed in SUITE_SPEEDS:
            for direction in (1, -1):
                cases.append(SyntheticCase(name, direction * speed, seed + i))
    return cases


def interior(img, margin_x: int = 32, margin_y: int = 8):
    """Crop the border band where clamped warps sample outside the views."""
    return img[..., margin_y:img.shape[-3] - margin_y, margin_x:img.shape[-2] - margin_x, :]
