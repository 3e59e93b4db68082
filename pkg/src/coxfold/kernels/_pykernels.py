"""Fallback implementations of the compiled kernels, numpy only.

Signatures and results match ``_ckernels`` exactly.
"""
import numpy as np


def _bareiss_one(a: np.ndarray) -> int:
    a = [[int(x) for x in row] for row in a]
    n = len(a)
    if n == 0:
        return 1
    prev, sign = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if p is None:
                return 0
            a[k], a[p] = a[p], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def det_batch(mats: np.ndarray) -> np.ndarray:
    """Bareiss elimination vectorised over the batch axis.

    Matrices that hit a zero pivot drop out of the vectorised sweep and are
    finished one at a time with row pivoting.
    """
    work = np.array(mats, dtype=np.int64, copy=True)
    count, n = work.shape[0], work.shape[1]
    out = np.zeros(count, dtype=np.int64)
    if n == 0:
        out[:] = 1
        return out
    active = np.arange(count)
    prev = np.ones(count, dtype=np.int64)
    for k in range(n - 1):
        pivots = work[active, k, k]
        stalled = active[pivots == 0]
        for idx in stalled:
            out[idx] = _bareiss_one(mats[idx])
        active = active[pivots != 0]
        if active.size == 0:
            return out
        sub = work[active]
        piv = sub[:, k, k][:, None, None]
        col = sub[:, k + 1 :, k][:, :, None]
        row = sub[:, k, k + 1 :][:, None, :]
        block = sub[:, k + 1 :, k + 1 :]
        sub[:, k + 1 :, k + 1 :] = (block * piv - col * row) // prev[active][:, None, None]
        work[active] = sub
        prev[active] = sub[:, k, k]
    out[active] = work[active, n - 1, n - 1]
    return out


def ztau_apply(mats: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    a, b = mats[:, 0], mats[:, 1]
    p, q = vecs[:, 0], vecs[:, 1]
    ap = np.einsum("gij,vj->gvi", a, p)
    bq = np.einsum("gij,vj->gvi", b, q)
    aq = np.einsum("gij,vj->gvi", a, q)
    bp = np.einsum("gij,vj->gvi", b, p)
    return np.stack([ap + bq, aq + bp + bq], axis=2)


def ztau_matmul_right(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    a, b = left[:, 0], left[:, 1]
    c, d = right[0], right[1]
    ac = a @ c
    bd = b @ d
    ad = a @ d
    bc = b @ c
    return np.stack([ac + bd, ad + bc + bd], axis=1)
