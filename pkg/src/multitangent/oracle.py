"""Brute-force ground truth: exhaustive sweeps over hyperplane normals.

Independent of the dual-region pipeline: for every sampled normal direction
each shape contributes its support interval (exact for circles, balls, and
polyline vertices), and a common tangent exists where one endpoint per shape
coincides across all shapes.  Root candidates are sharpened by bisection and
handed to the shared refiner for certification.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from . import kernels
from .defaults import (
    BISECTION_DEPTH,
    CONTACT_TOL_EXACT,
    SWEEP_GRID_2D,
    SWEEP_GRID_3D,
    THETA_DEDUP,
)
from .errors import (
    NoContactError,
    NotSupportingError,
    RefinementDivergedError,
    UnsupportedDimensionError,
)
from .projective import ProjHyperplane
from .shapes import Loop, Scene, Shape, scene_extent, scene_packed
from .support import dedup_certificates, refine_support, verify_support


@dataclass(frozen=True)
class SweepResult:
    candidates: tuple   # (ProjHyperplane, residual) pairs surviving refinement
    clusters: tuple     # deduplicated certificates
    sweep_spec: dict


def default_angular_grid(n: int) -> int:
    return SWEEP_GRID_3D if n >= 3 else SWEEP_GRID_2D


def _support_curves(scene: Scene, normals: np.ndarray):
    """Per-direction support intervals h^-(u), h^+(u) of every shape."""
    covectors = np.concatenate([np.zeros((normals.shape[0], 1)), normals], axis=1)
    return kernels.value_ranges(scene_packed(scene), covectors)


def _interval_at(scene_pack, u: np.ndarray):
    cov = np.concatenate([[0.0], u])
    return kernels.value_ranges(scene_pack, cov[None, :])


def _plane(u: np.ndarray, offset: float) -> ProjHyperplane:
    return ProjHyperplane(np.concatenate([[-offset], u]))


def _certify(scene: Scene, H0: ProjHyperplane, tol_exact: float):
    """Exact verification when the candidate is already tangent, refinement
    otherwise; None when neither yields a certificate."""
    try:
        return verify_support(scene, H0, tol_exact, "Oracle")
    except (NoContactError, NotSupportingError):
        pass
    try:
        return refine_support(scene, H0, backend="Oracle")
    except RefinementDivergedError:
        return None


def _sweep_2d(scene: Scene, angular_grid: int, depth: int) -> list:
    thetas = np.arange(angular_grid) * (np.pi / angular_grid)
    normals = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)
    vmin, vmax = _support_curves(scene, normals)
    pack = scene_packed(scene)
    extent = max(scene_extent(scene), 1.0)
    tol = 4.0 * extent * (np.pi / angular_grid)
    certs = []
    S = len(scene.shapes)
    for signs in product((0, 1), repeat=S):
        ends = np.stack(
            [vmax[:, i] if s else vmin[:, i] for i, s in enumerate(signs)], axis=1
        )
        g = ends.max(axis=1) - ends.min(axis=1)  # zero iff all endpoints coincide
        diff = ends[:, 0] - ends[:, 1]  # signed for the pair case, used to bisect
        flips = (
            set(int(i) for i in np.flatnonzero(np.sign(diff[:-1]) * np.sign(diff[1:]) < 0))
            if S == 2
            else set()
        )
        # tangential or higher-arity hits: local minima of the gap, away from flips
        grazing = set()
        for i in np.flatnonzero(g <= tol):
            i = int(i)
            if g[i] <= g[(i - 1) % angular_grid] and g[i] <= g[(i + 1) % angular_grid]:
                if not any(abs(i - f) <= 2 for f in flips):
                    grazing.add(i)
        for i in sorted(flips | grazing):
            theta = thetas[i]
            if i in flips and i + 1 < angular_grid:
                a, b = thetas[i], thetas[i + 1]
                fa = diff[i]
                for _ in range(depth):
                    midt = 0.5 * (a + b)
                    u = np.array([np.cos(midt), np.sin(midt)])
                    vm, vx = _interval_at(pack, u)
                    em = [vx[0, k] if s else vm[0, k] for k, s in enumerate(signs)]
                    fm = em[0] - em[1]
                    if fa * fm <= 0.0:
                        b = midt
                    else:
                        a, fa = midt, fm
                theta = 0.5 * (a + b)
            u = np.array([np.cos(theta), np.sin(theta)])
            vm, vx = _interval_at(pack, u)
            em = [vx[0, k] if s else vm[0, k] for k, s in enumerate(signs)]
            cert = _certify(scene, _plane(u, float(np.mean(em))), CONTACT_TOL_EXACT)
            if cert is not None:
                certs.append(cert)
    return certs


def _hemisphere_grid(per_axis: int) -> np.ndarray:
    az = np.arange(2 * per_axis) * (np.pi / per_axis)
    pol = (np.arange(per_axis) + 0.5) * (0.5 * np.pi / per_axis)
    A, P = np.meshgrid(az, pol, indexing="ij")
    return np.stack(
        [np.sin(P) * np.cos(A), np.sin(P) * np.sin(A), np.cos(P)], axis=-1
    ).reshape(-1, 3)


def _sweep_3d(scene: Scene, per_axis: int) -> list:
    normals = _hemisphere_grid(per_axis)
    vmin, vmax = _support_curves(scene, normals)
    extent = max(scene_extent(scene), 1.0)
    spacing = np.pi / per_axis
    tol = 4.0 * extent * spacing
    certs = []
    S = len(scene.shapes)
    for signs in product((0, 1), repeat=S):
        ends = np.stack(
            [vmax[:, i] if s else vmin[:, i] for i, s in enumerate(signs)], axis=1
        )
        g = ends.max(axis=1) - ends.min(axis=1)
        hits = np.flatnonzero(g <= tol)
        if hits.size == 0:
            continue
        order = hits[np.argsort(g[hits], kind="stable")]
        chosen: list[int] = []
        for i in order:
            if all(float(normals[i] @ normals[j]) < np.cos(2.0 * spacing) for j in chosen):
                chosen.append(int(i))
        for i in sorted(chosen):
            u = normals[i]
            cert = _certify(scene, _plane(u, float(np.mean(ends[i]))), CONTACT_TOL_EXACT)
            if cert is not None:
                certs.append(cert)
    return certs


def _sweep_1d(scene: Scene) -> list:
    pack = scene_packed(scene)
    vmin, vmax = kernels.value_ranges(pack, np.array([[0.0, 1.0]]))
    certs = []
    for offset in (float(vmin[0].max()), float(vmax[0].min())):
        cert = _certify(scene, _plane(np.array([1.0]), offset), CONTACT_TOL_EXACT)
        if cert is not None:
            certs.append(cert)
    return certs


def brute_force_supports(
    scene: Scene,
    angular_grid: int | None = None,
    depth: int = BISECTION_DEPTH,
) -> SweepResult:
    """Exhaustive endpoint-coincidence sweep; the validation ground truth."""
    n = scene.n
    if n not in (1, 2, 3):
        raise UnsupportedDimensionError("sweeps cover n in {1, 2, 3}")
    if angular_grid is None:
        angular_grid = default_angular_grid(n)
    if n == 2 and angular_grid < 360:
        raise ValueError("angular_grid must be at least 360 for planar sweeps")
    if n == 1:
        certs = _sweep_1d(scene)
    elif n == 2:
        certs = _sweep_2d(scene, angular_grid, depth)
    else:
        certs = _sweep_3d(scene, angular_grid)
    clusters = dedup_certificates(certs)
    candidates = tuple(
        (c.hyperplane, c.residual)
        for c in sorted(certs, key=lambda c: tuple(c.hyperplane.covector))
    )
    return SweepResult(
        candidates=candidates,
        clusters=tuple(clusters),
        sweep_spec={
            "angular_grid": angular_grid,
            "bisection_depth": depth,
            "dedup_angle": THETA_DEDUP,
        },
    )


def parity_check(A: Shape, trials: int = 1000, seed: int = 0) -> bool:
    """Random lines missing all vertices cross a closed polyline an even
    number of times."""
    if not isinstance(A, Loop):
        raise TypeError("parity check applies to loops")
    rng = np.random.default_rng(seed)
    verts = A.vertices
    lo = verts.min(axis=0)
    hi = verts.max(axis=0)
    span = float(np.linalg.norm(hi - lo))
    center = 0.5 * (lo + hi)
    done = 0
    while done < trials:
        a = center + rng.uniform(-1.5, 1.5, 2) * span
        b = center + rng.uniform(-1.5, 1.5, 2) * span
        t = b - a
        if np.linalg.norm(t) < 1e-12 * span:
            continue
        nrm = np.array([-t[1], t[0]]) / np.linalg.norm(t)
        vals = (verts - a) @ nrm
        if np.abs(vals).min() < 1e-12 * span:
            continue
        signs = vals > 0.0
        crossings = int(np.sum(signs != np.roll(signs, -1)))
        if crossings % 2 != 0:
            return False
        done += 1
    return True
