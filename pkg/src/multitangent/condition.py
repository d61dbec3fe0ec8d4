"""Search and verification of the pipeline's hypothesis point.

A point p qualifies when no hyperplane through p meets every shape of the
scene.  The hyperplanes through p form an RP^{n-1}; acceptance samples that
space with a deterministic low-discrepancy set and is therefore
sampling-based, while a rejection witness genuinely meets all shapes and is
exact.  For scenes of circles and balls the per-direction miss test is the
exact distance formula, so acceptance is rigorous up to the direction
sampling; the certificate records this.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import kernels
from .defaults import (
    CLEARANCE_FLOOR,
    CONJ_MARGIN_FACTOR,
    CONJ_SAMPLES,
    DIRECTIONS_2D,
    DIRECTIONS_3D,
)
from .errors import PointOnShapeError, UnsupportedDimensionError
from .projective import ProjHyperplane, ProjPoint, _complete_frame
from .shapes import (
    Ball,
    Circle,
    Scene,
    Shape,
    _fibonacci_sphere,
    convex_hull,
    distance_to_shape,
    point_in_loop,
    scene_diameter,
    scene_packed,
    shape_points,
    Loop,
)


@dataclass(frozen=True)
class ConditionCertificate:
    """Sampled evidence that no hyperplane through p meets all shapes.

    Each sampled hyperplane contains p and is recorded with the index of a
    shape it misses and the positive clearance of that miss.
    """

    p: ProjPoint
    hyperplanes: np.ndarray    # (M, n+1) unit covectors through p
    missed_shape: np.ndarray   # (M,) int
    clearance: np.ndarray      # (M,) positive chart distances
    min_clearance: float
    analytic_exact: bool       # per-direction miss tests were closed-form
    cert_id: str


@dataclass(frozen=True)
class Rejection:
    """A sampled hyperplane through p that meets every shape.

    ``max_clearance <= 0`` means the witness meets all shapes exactly;
    a small positive value means a near-miss below the acceptance floor.
    """

    p: ProjPoint
    witness: ProjHyperplane
    max_clearance: float


ConditionResult = Union[ConditionCertificate, Rejection]


def default_directions(n: int) -> int:
    if n >= 3:
        return DIRECTIONS_3D
    return DIRECTIONS_2D


def _pencil_covectors(p: ProjPoint, directions: int) -> np.ndarray:
    """Deterministic unit covectors spanning the hyperplanes through p."""
    n = p.dim
    W = _complete_frame(p.coords)[1:]  # orthonormal basis of the pencil
    if n == 1:
        U = np.array([[1.0]])
    elif n == 2:
        t = np.arange(directions) * (np.pi / directions)
        U = np.stack([np.cos(t), np.sin(t)], axis=1)
    elif n == 3:
        U = _fibonacci_sphere(directions)
    else:
        raise UnsupportedDimensionError(f"direction sampling not implemented for n={n}")
    return U @ W


def _guard_point(scene: Scene, p: ProjPoint, tol: float = 1e-9) -> None:
    chart = scene.chart
    pairing = float(chart.frame[0] @ p.coords)
    if abs(pairing) <= 1e-12:
        return  # p at chart infinity cannot lie on a bounded shape
    x = (chart.frame[1:] @ p.coords) / pairing
    for i, s in enumerate(scene.shapes):
        if distance_to_shape(s, x) <= tol:
            raise PointOnShapeError(f"candidate point lies on shape {i}")


def check_condition(
    scene: Scene,
    p: ProjPoint,
    directions: int | None = None,
    clearance_floor: float = CLEARANCE_FLOOR,
) -> ConditionResult:
    """Sample the pencil of hyperplanes through p against the scene.

    Accepts when every sampled hyperplane misses some shape by at least the
    clearance floor; rejects with the first sampled hyperplane that meets
    (or nearly meets) all shapes.
    """
    if directions is None:
        directions = default_directions(scene.n)
    if directions < 64 and scene.n > 1:
        raise ValueError("directions must be at least 64")
    _guard_point(scene, p)
    covectors = _pencil_covectors(p, directions)
    clear = kernels.clearances(scene_packed(scene), covectors)
    best = clear.max(axis=1)
    blocked = best < clearance_floor
    if blocked.any():
        meets_all = best <= 0.0
        idx = int(np.argmax(meets_all)) if meets_all.any() else int(np.argmax(blocked))
        return Rejection(p, ProjHyperplane(covectors[idx]), float(best[idx]))
    missed = clear.argmax(axis=1).astype(np.int64)
    analytic = all(isinstance(s, (Circle, Ball)) for s in scene.shapes)
    digest = hashlib.sha1(
        p.coords.tobytes() + np.int64(directions).tobytes() + scene.label.encode()
    ).hexdigest()[:16]
    return ConditionCertificate(
        p=p,
        hyperplanes=covectors,
        missed_shape=missed,
        clearance=best,
        min_clearance=float(best.min()),
        analytic_exact=analytic,
        cert_id=digest,
    )


def _shape_center(s: Shape) -> np.ndarray:
    if isinstance(s, (Circle, Ball)):
        return np.asarray(s.center, dtype=float)
    return shape_points(s).mean(axis=0)


def _candidate_points(scene: Scene, grid: int) -> list[np.ndarray]:
    """Heuristic seeds followed by a deterministic lattice over the chart."""
    n = scene.n
    centers = np.array([_shape_center(s) for s in scene.shapes])
    centroid = centers.mean(axis=0)
    diam = max(scene_diameter(scene), 1.0)
    seeds: list[np.ndarray] = []

    # directions normal to the affine hull of the centers: promising offsets
    centered = centers - centroid
    _, svals, Vt = np.linalg.svd(centered, full_matrices=True)
    rank = int(np.sum(svals > 1e-9 * diam)) if svals.size else 0
    for normal in Vt[rank:]:
        for k in (1.0, 2.0, 4.0):
            seeds.append(centroid + k * diam * normal)
            seeds.append(centroid - k * diam * normal)

    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            mid = 0.5 * (centers[i] + centers[j])
            seeds.append(mid)
            axis = centers[j] - centers[i]
            norm = np.linalg.norm(axis)
            if norm > 1e-12 and n == 2:
                perp = np.array([-axis[1], axis[0]]) / norm
                for k in (1.0, 2.0):
                    seeds.append(mid + k * diam * perp)
                    seeds.append(mid - k * diam * perp)

    axes = [np.linspace(c - 2.0 * diam, c + 2.0 * diam, grid) for c in centroid]
    mesh = np.meshgrid(*axes, indexing="ij")
    lattice = np.stack([m.ravel() for m in mesh], axis=1)
    out: list[np.ndarray] = []
    for cand in seeds + list(lattice):
        if not any(np.linalg.norm(cand - prev) < 1e-9 for prev in out[:64]):
            out.append(np.asarray(cand, dtype=float))
    return out


def search_condition_point(
    scene: Scene,
    grid: int = 8,
    directions: int | None = None,
    clearance_floor: float = CLEARANCE_FLOOR,
) -> Optional[tuple[ProjPoint, ConditionCertificate]]:
    """First accepted point over seeds plus a grid scan, or None.

    None is exhaustion of the scan, not a proof that no point exists.
    """
    if grid < 8:
        raise ValueError("grid must be at least 8")
    chart = scene.chart
    for x in _candidate_points(scene, grid):
        p = chart.lift(x)
        try:
            result = check_condition(scene, p, directions, clearance_floor)
        except PointOnShapeError:
            continue
        if isinstance(result, ConditionCertificate):
            return p, result
    return None


# ---------------------------------------------------------------------------
# weaker sufficient condition (experimental; never gates the main pipeline)


def _in_hull_interior_2d(shape: Shape, x: np.ndarray, margin: float) -> bool:
    if isinstance(shape, (Circle, Ball)):
        return float(np.linalg.norm(x - shape.center)) < shape.radius - margin
    hull = convex_hull(shape)
    if hull.vertices.shape[0] < 3:
        return False
    loop = Loop(hull.vertices)
    if not point_in_loop(loop, x):
        return False
    return distance_to_shape(loop, x) > margin


def _line_meets_hull(shape: Shape, x: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """Per-direction flags: does the line through x with that direction meet
    the shape's convex hull?  Exact for balls; hull projection otherwise."""
    if isinstance(shape, Ball):
        w = shape.center - x
        proj = dirs @ w
        perp2 = float(w @ w) - proj**2
        return perp2 <= shape.radius**2
    verts = convex_hull(shape).vertices
    out = np.zeros(dirs.shape[0], dtype=bool)
    for k, d in enumerate(dirs):
        rel = verts - x
        rel = rel - np.outer(rel @ d, d)
        basis = _complete_frame(d)[1:]
        flat = rel @ basis.T
        from .shapes import graham_hull

        hull2 = graham_hull(flat)
        if hull2.shape[0] >= 3:
            out[k] = point_in_loop(Loop(hull2), np.zeros(2))
        else:
            out[k] = float(np.abs(flat).max()) < 1e-12
    return out


def conjecture_check(
    scene: Scene,
    samples: int = CONJ_SAMPLES,
    margin: float | None = None,
) -> list[bool]:
    """Per-shape flags for the weaker sufficient condition.

    Flag i is true when some probe point of shape i escapes the interior of
    the union of (n-2)-flats meeting every other shape's convex hull (for
    n=2 that union is just the other shape's hull).  Interiority is tested
    with a margin at axis perturbations of each probe point; the whole check
    is experimental and sampling-based.
    """
    n = scene.n
    if n not in (2, 3):
        raise UnsupportedDimensionError("the weaker-condition tester needs n in {2, 3}")
    if samples < 1000:
        raise ValueError("samples must be at least 1000")
    if margin is None:
        margin = CONJ_MARGIN_FACTOR * scene_diameter(scene)
    dirs = _fibonacci_sphere(samples) if n == 3 else None
    flags: list[bool] = []
    for i, shape in enumerate(scene.shapes):
        others = [s for j, s in enumerate(scene.shapes) if j != i]
        probes = shape_points(shape, 64)
        escaped = False
        for x in probes:
            offsets = [np.zeros(n)]
            for k in range(n):
                e = np.zeros(n)
                e[k] = margin
                offsets.extend([e, -e])
            for off in offsets:
                y = x + off
                if n == 2:
                    inside = _in_hull_interior_2d(others[0], y, 0.0)
                else:
                    hit = _line_meets_hull(others[0], y, dirs)
                    hit &= _line_meets_hull(others[1], y, dirs)
                    inside = bool(hit.any())
                if not inside:
                    escaped = True
                    break
            if escaped:
                break
        flags.append(escaped)
    return flags
