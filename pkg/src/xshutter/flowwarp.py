"""Flow fields, backward warping, mask fusion and the linear-motion flow model.

Flow convention: ``backward_warp(img, F)(p) = img(p + F(p))``. The base flow
of the linear-motion model is the scene velocity in pixels per unit of
normalised exposure time (positive u = content moving right). A frame at
normalised time ``t`` is sampled from a view captured at time ``s`` with the
flow ``(s - t) * base``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from ._grid import read_grid, write_grid
from .errors import ShapeError
from .formation import as_image
from .timing import TimingConfig, row_capture_times

FLOW_MAGIC = b"XSFLOW01"


@dataclass
class FlowField:
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=np.float64)
        self.v = np.asarray(self.v, dtype=np.float64)
        if self.u.ndim != 2 or self.u.shape != self.v.shape:
            raise ShapeError(f"u {self.u.shape} and v {self.v.shape} must be equal 2-D shapes")

    @classmethod
    def zeros(cls, height: int, width: int) -> "FlowField":
        return cls(np.zeros((height, width)), np.zeros((height, width)))

    @classmethod
    def constant(cls, height: int, width: int, u: float, v: float = 0.0) -> "FlowField":
        return cls(np.full((height, width), float(u)), np.full((height, width), float(v)))

    @property
    def shape(self):
        return self.u.shape

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.u).all() and np.isfinite(self.v).all())

    def check(self, max_displacement: float | None = None) -> None:
        if not self.is_finite():
            raise ValueError("flow contains non-finite values")
        if max_displacement is not None:
            peak = max(np.abs(self.u).max(), np.abs(self.v).max())
            if peak > max_displacement:
                raise ValueError(f"flow magnitude {peak:.3g} exceeds {max_displacement}")

    def save(self, path) -> None:
        write_grid(path, np.stack([self.u, self.v]), FLOW_MAGIC)

    @classmethod
    def load(cls, path) -> "FlowField":
        planes = read_grid(path, FLOW_MAGIC)
        if planes.shape[0] != 2:
            raise ValueError(f"{path}: expected 2 planes, found {planes.shape[0]}")
        return cls(planes[0], planes[1])


def backward_warp(img, flow: FlowField) -> np.ndarray:
    """Bilinear sample of ``img`` at ``p + flow(p)``; out-of-frame samples clamp to the edge.

    Returns an array of the same rank as ``img``.
    """
    arr = np.asarray(img, dtype=np.float64)
    image = as_image(arr)
    if image.shape[:2] != flow.shape:
        raise ShapeError(f"image {image.shape[:2]} and flow {flow.shape} differ")
    if not flow.is_finite():
        raise ValueError("flow contains non-finite values")
    out = kernels.warp(image, flow.u, flow.v)
    return out.reshape(arr.shape)


def scale_flow(base: FlowField, s) -> FlowField:
    """Multiply a flow by a scalar, or by a per-row factor array of length H."""
    s = np.asarray(s, dtype=np.float64)
    if s.ndim == 1:
        s = s[:, None]
    return FlowField(base.u * s, base.v * s)


def fuse(a, b, m) -> np.ndarray:
    """Per-pixel convex blend ``m * a + (1 - m) * b``; ``m`` broadcasts over channels."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    m = np.asarray(m, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeError(f"a {a.shape} and b {b.shape} differ")
    if a.ndim == 3 and m.ndim == 2:
        m = m[:, :, None]
    if m.shape[:2] != a.shape[:2]:
        raise ShapeError(f"mask {m.shape} does not cover image {a.shape}")
    out = m * a + (1.0 - m) * b
    # rounding can overshoot the inputs by an ulp
    return np.clip(out, np.minimum(a, b), np.maximum(a, b))


def blur_sampling_scale(t: int, n_latent: int, t_anchor: float = 0.5) -> float:
    """Scale on the base flow that samples latent ``t`` from the blur view."""
    return t_anchor - t / (n_latent - 1)


def rs_sampling_scale(t: int, timing: TimingConfig) -> np.ndarray:
    """Per-row scale on the base flow that samples latent ``t`` from the RS view."""
    return row_capture_times(timing) - t / (timing.n_latent - 1)


def cross_view_displacement(base: FlowField, timing: TimingConfig, t_anchor: float = 0.5):
    """(F_B->R, F_R->B) under linear motion.

    Row ``k`` of F_B->R is ``(tau_k - t_anchor) * base`` where tau_k is the RS
    row's normalised capture time; F_R->B is its negation.
    """
    if not base.is_finite():
        raise ValueError("flow contains non-finite values")
    scale = row_capture_times(timing) - t_anchor
    b_to_r = scale_flow(base, scale)
    r_to_b = scale_flow(base, -scale)
    return b_to_r, r_to_b
