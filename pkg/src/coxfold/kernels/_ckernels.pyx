# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: batched Bareiss determinants and Z[tau] matrix products.

Callers (``coxfold.kernels``) guarantee that every intermediate fits in int64.
"""
import numpy as np
cimport numpy as cnp
from libc.string cimport memcpy

cnp.import_array()

ctypedef cnp.int64_t i64


cdef i64 _bareiss(i64* a, int n) noexcept nogil:
    cdef int i, j, k, p
    cdef i64 prev = 1, sign = 1, tmp, pivot
    for k in range(n - 1):
        if a[k * n + k] == 0:
            p = -1
            for i in range(k + 1, n):
                if a[i * n + k] != 0:
                    p = i
                    break
            if p < 0:
                return 0
            for j in range(n):
                tmp = a[k * n + j]
                a[k * n + j] = a[p * n + j]
                a[p * n + j] = tmp
            sign = -sign
        pivot = a[k * n + k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i * n + j] = (a[i * n + j] * pivot - a[i * n + k] * a[k * n + j]) // prev
        prev = pivot
    return sign * a[(n - 1) * n + (n - 1)]


def det_batch(cnp.ndarray[i64, ndim=3] mats):
    """Exact determinants of a stack of square int64 matrices."""
    cdef Py_ssize_t count = mats.shape[0], b
    cdef int n = <int>mats.shape[1]
    cdef cnp.ndarray[i64, ndim=3] work = np.ascontiguousarray(mats, dtype=np.int64).copy()
    cdef cnp.ndarray[i64, ndim=1] out = np.empty(count, dtype=np.int64)
    cdef i64* base = <i64*>work.data
    if n == 0:
        out[:] = 1
        return out
    with nogil:
        for b in range(count):
            out[b] = _bareiss(base + b * n * n, n)
    return out


def ztau_apply(cnp.ndarray[i64, ndim=4] mats, cnp.ndarray[i64, ndim=3] vecs):
    """Apply every Z[tau] matrix to every Z[tau] vector.

    ``mats`` has shape (G, 2, n, n) holding rational and tau parts,
    ``vecs`` has shape (V, 2, n). Returns shape (G, V, 2, n).
    """
    cdef Py_ssize_t G = mats.shape[0], V = vecs.shape[0], g, v
    cdef int n = <int>mats.shape[2], i, j
    cdef cnp.ndarray[i64, ndim=4] m = np.ascontiguousarray(mats)
    cdef cnp.ndarray[i64, ndim=3] x = np.ascontiguousarray(vecs)
    cdef cnp.ndarray[i64, ndim=4] out = np.empty((G, V, 2, n), dtype=np.int64)
    cdef i64* mp = <i64*>m.data
    cdef i64* xp = <i64*>x.data
    cdef i64* op = <i64*>out.data
    cdef i64 ra, rb, A, B, p, q
    cdef i64* ma
    cdef i64* mb
    cdef i64* xv
    cdef i64* ov
    with nogil:
        for g in range(G):
            ma = mp + g * 2 * n * n
            mb = ma + n * n
            for v in range(V):
                xv = xp + v * 2 * n
                ov = op + (g * V + v) * 2 * n
                for i in range(n):
                    ra = 0
                    rb = 0
                    for j in range(n):
                        A = ma[i * n + j]
                        B = mb[i * n + j]
                        p = xv[j]
                        q = xv[n + j]
                        # (A + B tau)(p + q tau) = Ap + Bq + (Aq + Bp + Bq) tau
                        ra += A * p + B * q
                        rb += A * q + B * p + B * q
                    ov[i] = ra
                    ov[n + i] = rb
    return out


def ztau_matmul_right(cnp.ndarray[i64, ndim=4] left, cnp.ndarray[i64, ndim=3] right):
    """Products ``L_f @ R`` for a stack of Z[tau] matrices ``L_f`` (F, 2, n, n)."""
    cdef Py_ssize_t F = left.shape[0], f
    cdef int n = <int>left.shape[2], i, j, k
    cdef cnp.ndarray[i64, ndim=4] l = np.ascontiguousarray(left)
    cdef cnp.ndarray[i64, ndim=3] r = np.ascontiguousarray(right)
    cdef cnp.ndarray[i64, ndim=4] out = np.empty((F, 2, n, n), dtype=np.int64)
    cdef i64* lp = <i64*>l.data
    cdef i64* rp = <i64*>r.data
    cdef i64* op = <i64*>out.data
    cdef i64* la
    cdef i64* lb
    cdef i64* oa
    cdef i64* ob
    cdef i64 A, B, C, D, sa, sb
    with nogil:
        for f in range(F):
            la = lp + f * 2 * n * n
            lb = la + n * n
            oa = op + f * 2 * n * n
            ob = oa + n * n
            for i in range(n):
                for j in range(n):
                    sa = 0
                    sb = 0
                    for k in range(n):
                        A = la[i * n + k]
                        B = lb[i * n + k]
                        C = rp[k * n + j]
                        D = rp[n * n + k * n + j]
                        sa += A * C + B * D
                        sb += A * D + B * C + B * D
                    oa[i * n + j] = sa
                    ob[i * n + j] = sb
    return out
