# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementation of the batched shape-range kernel.

Same contract as ``_kernels_py``; selected at import time by ``kernels``.
The row loop runs without the GIL so callers may chunk rows across threads.
"""

import numpy as np

cimport cython
from libc.math cimport INFINITY, sqrt


def value_ranges_into(double[:, ::1] forms,
                      int[::1] kinds,
                      double[:, ::1] ball_center,
                      double[::1] ball_radius,
                      long long[::1] poly_offsets,
                      double[:, ::1] poly_vertices,
                      double[:, ::1] vmin,
                      double[:, ::1] vmax):
    """Signed-value range of each affine form over each shape (see _kernels_py)."""
    cdef Py_ssize_t M = forms.shape[0]
    cdef Py_ssize_t k = forms.shape[1]
    cdef Py_ssize_t S = kinds.shape[0]
    cdef Py_ssize_t m, s, j, v, lo_v, hi_v
    cdef double c0, den, inv, d, val, lo, hi, fill

    with nogil:
        for m in range(M):
            c0 = forms[m, 0]
            den = 0.0
            for j in range(1, k):
                den += forms[m, j] * forms[m, j]
            den = sqrt(den)
            if den < 1e-300:
                fill = INFINITY if c0 >= 0.0 else -INFINITY
                for s in range(S):
                    vmin[m, s] = fill
                    vmax[m, s] = fill
                continue
            inv = 1.0 / den
            for s in range(S):
                if kinds[s] == 0:
                    d = c0
                    for j in range(1, k):
                        d += forms[m, j] * ball_center[s, j - 1]
                    d *= inv
                    vmin[m, s] = d - ball_radius[s]
                    vmax[m, s] = d + ball_radius[s]
                else:
                    lo_v = <Py_ssize_t> poly_offsets[s]
                    hi_v = <Py_ssize_t> poly_offsets[s + 1]
                    lo = INFINITY
                    hi = -INFINITY
                    for v in range(lo_v, hi_v):
                        val = c0
                        for j in range(1, k):
                            val += forms[m, j] * poly_vertices[v, j - 1]
                        if val < lo:
                            lo = val
                        if val > hi:
                            hi = val
                    vmin[m, s] = lo * inv
                    vmax[m, s] = hi * inv
    return np.asarray(vmin), np.asarray(vmax)
