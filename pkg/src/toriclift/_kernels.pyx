# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot kernels; see ``_fallback.py`` for the reference semantics."""
from libc.stdint cimport int64_t, uint64_t
from cpython.mem cimport PyMem_Malloc, PyMem_Free


def classify_weights(rays, bounds, lo, hi):
    cdef Py_ssize_t n = len(rays), d = len(lo)
    cdef Py_ssize_t i, k, total = 1, idx
    cdef int64_t s
    cdef uint64_t m
    if n > 64 or d == 0:
        raise ValueError("kernel supports 1..64 rays and rank >= 1")
    for k in range(d):
        if hi[k] < lo[k]:
            return []
        total *= hi[k] - lo[k] + 1
    cdef int64_t *V = <int64_t *> PyMem_Malloc(n * d * sizeof(int64_t))
    cdef int64_t *B = <int64_t *> PyMem_Malloc(n * sizeof(int64_t))
    cdef int64_t *L = <int64_t *> PyMem_Malloc(d * sizeof(int64_t))
    cdef int64_t *H = <int64_t *> PyMem_Malloc(d * sizeof(int64_t))
    cdef int64_t *U = <int64_t *> PyMem_Malloc(d * sizeof(int64_t))
    out = [0] * total
    try:
        for i in range(n):
            B[i] = bounds[i]
            for k in range(d):
                V[i * d + k] = rays[i][k]
        for k in range(d):
            L[k] = lo[k]
            H[k] = hi[k]
            U[k] = lo[k]
        for idx in range(total):
            m = 0
            for i in range(n):
                s = 0
                for k in range(d):
                    s += U[k] * V[i * d + k]
                if s < B[i]:
                    m |= (<uint64_t> 1) << i
            out[idx] = m
            k = d - 1
            while k >= 0:
                U[k] += 1
                if U[k] <= H[k]:
                    break
                U[k] = L[k]
                k -= 1
    finally:
        PyMem_Free(V)
        PyMem_Free(B)
        PyMem_Free(L)
        PyMem_Free(H)
        PyMem_Free(U)
    return out
