"""Backend selection and array-level entry points for the hot kernels.

The compiled extension is preferred when importable; the numpy fallback is
bit-compatible.  ``MULTITANGENT_KERNEL=python|compiled`` forces a backend,
``MULTITANGENT_THREADS=k`` splits large batches across k threads (the
compiled kernel releases the GIL; results are written to disjoint row
slices, so the merge is deterministic).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels_py

_forced = os.environ.get("MULTITANGENT_KERNEL", "").strip().lower()
if _forced == "python":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _forced == "compiled":
            raise
        _impl = _kernels_py
        BACKEND = "python"

_THREAD_MIN_ROWS = 8192


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("MULTITANGENT_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class PackedShapes:
    """Scene shapes flattened to kernel arrays, all in one chart frame."""

    kinds: np.ndarray         # (S,) int32: 0 = ball, 1 = polyline
    ball_center: np.ndarray   # (S, d) float, zero rows for polylines
    ball_radius: np.ndarray   # (S,) float
    poly_offsets: np.ndarray  # (S+1,) int64 slices into poly_vertices
    poly_vertices: np.ndarray # (V, d) float
    frame: np.ndarray         # (d+1, d+1) chart frame

    @property
    def count(self) -> int:
        return self.kinds.size

    @property
    def dim(self) -> int:
        return self.frame.shape[0] - 1


def pack_arrays(kinds, ball_center, ball_radius, poly_offsets, poly_vertices, frame) -> PackedShapes:
    return PackedShapes(
        kinds=np.ascontiguousarray(kinds, dtype=np.int32),
        ball_center=np.ascontiguousarray(ball_center, dtype=float),
        ball_radius=np.ascontiguousarray(ball_radius, dtype=float),
        poly_offsets=np.ascontiguousarray(poly_offsets, dtype=np.int64),
        poly_vertices=np.ascontiguousarray(poly_vertices, dtype=float),
        frame=np.ascontiguousarray(frame, dtype=float),
    )


def value_ranges(packed: PackedShapes, covectors: np.ndarray):
    """Per-(covector, shape) range [vmin, vmax] of signed chart distances.

    covectors: (M, d+1) raw homogeneous covectors (any scale, any sign).
    Returns (vmin, vmax), each (M, S).  The range is exact for balls and for
    polyline kinds (linear values attain extremes at vertices).
    """
    covectors = np.atleast_2d(np.asarray(covectors, dtype=float))
    forms = np.ascontiguousarray(covectors @ packed.frame.T)
    M = forms.shape[0]
    vmin = np.empty((M, packed.count))
    vmax = np.empty((M, packed.count))
    workers = worker_count()
    if workers > 1 and M >= _THREAD_MIN_ROWS:
        bounds = np.linspace(0, M, workers + 1, dtype=int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(
                    _impl.value_ranges_into,
                    forms[lo:hi], packed.kinds, packed.ball_center,
                    packed.ball_radius, packed.poly_offsets,
                    packed.poly_vertices, vmin[lo:hi], vmax[lo:hi],
                )
                for lo, hi in zip(bounds[:-1], bounds[1:])
                if hi > lo
            ]
            for f in futures:
                f.result()
    else:
        _impl.value_ranges_into(
            forms, packed.kinds, packed.ball_center, packed.ball_radius,
            packed.poly_offsets, packed.poly_vertices, vmin, vmax,
        )
    return vmin, vmax


def clearances(packed: PackedShapes, covectors: np.ndarray) -> np.ndarray:
    """Per-(covector, shape) meeting clearance.

    Positive: the hyperplane misses the shape by that chart distance.
    Non-positive: it meets the shape.  Invariant under covector rescaling
    and sign flips.
    """
    vmin, vmax = value_ranges(packed, covectors)
    return np.maximum(vmin, -vmax)
