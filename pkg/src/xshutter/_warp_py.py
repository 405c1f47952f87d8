"""Pure-numpy bilinear warp kernels (fallback for the compiled extension).

Sampling position of pixel (y, x) is (y + v, x + u), clamped to the image
rectangle. ``x0 = floor(x)``, ``x1 = min(x0 + 1, W - 1)``; a clamped
coordinate contributes no derivative.
"""
import numpy as np


def _sample_coords(u, v):
    h, w = u.shape
    gy, gx = np.indices((h, w), dtype=np.float64)
    xs = gx + u
    ys = gy + v
    x = np.clip(xs, 0.0, w - 1.0)
    y = np.clip(ys, 0.0, h - 1.0)
    x0 = np.floor(x).astype(np.intp)
    y0 = np.floor(y).astype(np.intp)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = (x - x0)[..., None]
    fy = (y - y0)[..., None]
    inside_x = ((xs >= 0.0) & (xs <= w - 1.0))[..., None]
    inside_y = ((ys >= 0.0) & (ys <= h - 1.0))[..., None]
    return x0, x1, y0, y1, fx, fy, inside_x, inside_y


def warp(img, u, v, threads=1):
    x0, x1, y0, y1, fx, fy, _, _ = _sample_coords(u, v)
    i00 = img[y0, x0]
    i01 = img[y0, x1]
    i10 = img[y1, x0]
    i11 = img[y1, x1]
    gx = 1.0 - fx
    gy = 1.0 - fy
    return gx * gy * i00 + fx * gy * i01 + gx * fy * i10 + fx * fy * i11


def warp_vjp_flow(img, u, v, grad_out, threads=1):
    """Pull ``grad_out`` (H, W, C) back to the flow: returns (grad_u, grad_v)."""
    x0, x1, y0, y1, fx, fy, inside_x, inside_y = _sample_coords(u, v)
    i00 = img[y0, x0]
    i01 = img[y0, x1]
    i10 = img[y1, x0]
    i11 = img[y1, x1]
    d_dx = (1.0 - fy) * (i01 - i00) + fy * (i11 - i10)
    d_dy = (1.0 - fx) * (i10 - i00) + fx * (i11 - i01)
    gu = np.where(inside_x, d_dx * grad_out, 0.0).sum(axis=-1)
    gv = np.where(inside_y, d_dy * grad_out, 0.0).sum(axis=-1)
    return gu, gv
