# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bilinear warp kernels; same contract as ``_warp_py``."""
import numpy as np

cimport cython
from cython.parallel cimport prange
from libc.math cimport floor


cdef inline void _coord(double s, Py_ssize_t n, Py_ssize_t *i0, Py_ssize_t *i1,
                        double *f, bint *inside) noexcept nogil:
    cdef double c = s
    inside[0] = (s >= 0.0) and (s <= n - 1.0)
    if c < 0.0:
        c = 0.0
    elif c > n - 1.0:
        c = n - 1.0
    i0[0] = <Py_ssize_t>floor(c)
    i1[0] = i0[0] + 1 if i0[0] + 1 < n else n - 1
    f[0] = c - i0[0]


# Each row is handled by a helper so that every per-pixel temporary lives on
# that call's stack; prange would otherwise share variables written through
# pointers between threads.

cdef void _warp_row(const double[:, :, ::1] img, const double[:, ::1] u, const double[:, ::1] v,
                    double[:, :, ::1] out, Py_ssize_t y) noexcept nogil:
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1], nc = img.shape[2]
    cdef Py_ssize_t x, c, x0, x1, y0, y1
    cdef double fx, fy, gx, gy
    cdef bint ix, iy
    for x in range(w):
        _coord(x + u[y, x], w, &x0, &x1, &fx, &ix)
        _coord(y + v[y, x], h, &y0, &y1, &fy, &iy)
        gx = 1.0 - fx
        gy = 1.0 - fy
        for c in range(nc):
            out[y, x, c] = (gx * gy * img[y0, x0, c] + fx * gy * img[y0, x1, c]
                            + gx * fy * img[y1, x0, c] + fx * fy * img[y1, x1, c])


cdef void _vjp_row(const double[:, :, ::1] img, const double[:, ::1] u, const double[:, ::1] v,
                   const double[:, :, ::1] grad_out, double[:, ::1] gu, double[:, ::1] gv,
                   Py_ssize_t y) noexcept nogil:
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1], nc = img.shape[2]
    cdef Py_ssize_t x, c, x0, x1, y0, y1
    cdef double fx, fy, i00, i01, i10, i11, g, su, sv
    cdef bint ix, iy
    for x in range(w):
        _coord(x + u[y, x], w, &x0, &x1, &fx, &ix)
        _coord(y + v[y, x], h, &y0, &y1, &fy, &iy)
        su = 0.0
        sv = 0.0
        for c in range(nc):
            i00 = img[y0, x0, c]
            i01 = img[y0, x1, c]
            i10 = img[y1, x0, c]
            i11 = img[y1, x1, c]
            g = grad_out[y, x, c]
            su = su + ((1.0 - fy) * (i01 - i00) + fy * (i11 - i10)) * g
            sv = sv + ((1.0 - fx) * (i10 - i00) + fx * (i11 - i01)) * g
        if ix:
            gu[y, x] = su
        if iy:
            gv[y, x] = sv


def warp(const double[:, :, ::1] img, const double[:, ::1] u, const double[:, ::1] v,
         int threads=1):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1], nc = img.shape[2]
    out_arr = np.empty((h, w, nc), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t y
    for y in prange(h, nogil=True, num_threads=threads, schedule="static"):
        _warp_row(img, u, v, out, y)
    return out_arr


def warp_vjp_flow(const double[:, :, ::1] img, const double[:, ::1] u,
                  const double[:, ::1] v, const double[:, :, ::1] grad_out, int threads=1):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    gu_arr = np.zeros((h, w), dtype=np.float64)
    gv_arr = np.zeros((h, w), dtype=np.float64)
    cdef double[:, ::1] gu = gu_arr
    cdef double[:, ::1] gv = gv_arr
    cdef Py_ssize_t y
    for y in prange(h, nogil=True, num_threads=threads, schedule="static"):
        _vjp_row(img, u, v, grad_out, gu, gv, y)
    return gu_arr, gv_arr
