"""Backend selection for the warp kernels.

The compiled extension is used when importable; setting
``XSHUTTER_PURE_PYTHON=1`` forces the numpy fallback.
"""
import os

import numpy as np

from . import _warp_py

_BACKENDS = {"python": _warp_py}
try:
    if os.environ.get("XSHUTTER_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-python backend requested")
    from . import _warp_ext
except ImportError:
    _warp_ext = None
else:
    _BACKENDS["cython"] = _warp_ext

BACKEND = "cython" if "cython" in _BACKENDS else "python"
_threads = 1


def available_backends():
    return sorted(_BACKENDS)


def use_backend(name: str) -> None:
    global BACKEND
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available; have {available_backends()}")
    BACKEND = name


def set_threads(n: int) -> None:
    """Worker threads for the compiled kernels (results are identical for any n)."""
    global _threads
    if n < 1:
        raise ValueError("threads must be >= 1")
    _threads = int(n)


def _c(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def warp(img, u, v):
    return _BACKENDS[BACKEND].warp(_c(img), _c(u), _c(v), _threads)


def warp_vjp_flow(img, u, v, grad_out):
    return _BACKENDS[BACKEND].warp_vjp_flow(_c(img), _c(u), _c(v), _c(grad_out), _threads)
