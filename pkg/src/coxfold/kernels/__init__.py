"""Hot loops with a compiled core and a numpy fallback.

The Cython extension ``_ckernels`` is used when it was built; otherwise, or
when ``COXFOLD_PURE_PYTHON=1`` is set, the numpy versions in ``_pykernels``
are used. Both only ever see int64 data whose intermediates provably fit;
inputs that could overflow are routed to an exact Python-int path instead.
"""
from __future__ import annotations

import math
import os

import numpy as np

from . import _pykernels

try:
    if os.environ.get("COXFOLD_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure python requested")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"

_LIMIT = 2**62

__all__ = ["BACKEND", "det_batch", "ztau_apply", "ztau_matmul_right", "backends"]


def backends() -> dict:
    """Available implementations keyed by name, for benchmarks and cross-checks."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out


def _absmax(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return int(np.abs(arr).max()) if arr.dtype != object else max(abs(int(x)) for x in arr.flat)


def _hadamard_ok(mats: np.ndarray) -> bool:
    # every Bareiss intermediate is a minor, bounded by the Hadamard bound
    if mats.size == 0:
        return True
    norms = np.sqrt((mats.astype(np.float64) ** 2).sum(axis=2)).max(axis=0)
    bound = float(np.prod(np.maximum(norms, 1.0)))
    # the update multiplies two minors before dividing
    return bound * bound * 4 < _LIMIT


def det_batch(mats, impl=None) -> np.ndarray:
    """Exact integer determinants of a stack of square matrices.

    Returns an int64 array when values fit, otherwise an object array of ints.
    """
    arr = np.asarray(mats)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise ValueError("expected a stack of square matrices")
    if arr.dtype != object and _absmax(arr) < 2**31 and _hadamard_ok(arr):
        return (impl or _impl).det_batch(np.ascontiguousarray(arr, dtype=np.int64))
    return np.array([_pykernels._bareiss_one(m) for m in arr], dtype=object)


def ztau_apply(mats, vecs, impl=None) -> np.ndarray:
    """Apply each Z[tau] matrix (G, 2, n, n) to each Z[tau] vector (V, 2, n).

    Result has shape (G, V, 2, n). Large entries fall back to exact object
    arithmetic.
    """
    mats = np.asarray(mats)
    vecs = np.asarray(vecs)
    n = mats.shape[-1]
    bound = 3 * n * max(_absmax(mats), 1) * max(_absmax(vecs), 1)
    if mats.dtype != object and vecs.dtype != object and bound < _LIMIT:
        return (impl or _impl).ztau_apply(
            np.ascontiguousarray(mats, dtype=np.int64), np.ascontiguousarray(vecs, dtype=np.int64)
        )
    return _pykernels.ztau_apply(mats.astype(object), vecs.astype(object))


def ztau_matmul_right(left, right, impl=None) -> np.ndarray:
    """Products ``L_f @ R`` of Z[tau] matrices; ``left`` (F, 2, n, n), ``right`` (2, n, n)."""
    left = np.asarray(left)
    right = np.asarray(right)
    n = right.shape[-1]
    bound = 3 * n * max(_absmax(left), 1) * max(_absmax(right), 1)
    if left.dtype != object and right.dtype != object and bound < _LIMIT:
        return (impl or _impl).ztau_matmul_right(
            np.ascontiguousarray(left, dtype=np.int64), np.ascontiguousarray(right, dtype=np.int64)
        )
    return _pykernels.ztau_matmul_right(left.astype(object), right.astype(object))


def int_bits(arr: np.ndarray) -> int:
    return math.ceil(math.log2(_absmax(arr) + 1))
