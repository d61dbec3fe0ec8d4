"""Pure numpy implementation of the batched shape-range kernel.

Same contract as the compiled module ``_kernels_cy``; one of the two is
selected at import time by ``kernels``.
"""

from __future__ import annotations

import numpy as np

# Rows processed per chunk in the polyline path, to bound the (rows x vertices)
# intermediate.
_CHUNK_ELEMS = 4_000_000


def value_ranges_into(forms, kinds, ball_center, ball_radius,
                      poly_offsets, poly_vertices, vmin, vmax):
    """Signed-value range of each affine form over each shape.

    forms: (M, d+1) rows (c0, a_1..a_d); the value of a row at a chart point x
    is (c0 + a.x) / |a|, i.e. the signed chart distance to the hyperplane
    {c0 + a.x = 0}.  Rows with |a| = 0 describe the chart's infinity
    hyperplane and get +/-inf by the sign of c0.

    kinds: (S,) int32, 0 = ball (center/radius rows), 1 = polyline (vertex
    slice poly_offsets[s]:poly_offsets[s+1]).  Results go to vmin/vmax (M, S).
    """
    c0 = forms[:, 0]
    A = forms[:, 1:]
    den = np.linalg.norm(A, axis=1)
    degenerate = den < 1e-300
    inv = np.divide(1.0, den, out=np.zeros_like(den), where=~degenerate)

    ball_idx = np.flatnonzero(kinds == 0)
    if ball_idx.size:
        centers = ball_center[ball_idx]
        radii = ball_radius[ball_idx]
        d = (c0[:, None] + A @ centers.T) * inv[:, None]
        vmin[:, ball_idx] = d - radii
        vmax[:, ball_idx] = d + radii

    for s in np.flatnonzero(kinds == 1):
        V = poly_vertices[poly_offsets[s]:poly_offsets[s + 1]]
        step = max(1, _CHUNK_ELEMS // max(1, V.shape[0]))
        for lo in range(0, forms.shape[0], step):
            hi = lo + step
            vals = c0[lo:hi, None] + A[lo:hi] @ V.T
            vmin[lo:hi, s] = vals.min(axis=1) * inv[lo:hi]
            vmax[lo:hi, s] = vals.max(axis=1) * inv[lo:hi]

    if degenerate.any():
        fill = np.where(c0[degenerate] >= 0.0, np.inf, -np.inf)
        vmin[degenerate] = fill[:, None]
        vmax[degenerate] = fill[:, None]
    return vmin, vmax
