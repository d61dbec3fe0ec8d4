"""Raster sampling of the dual region of hyperplanes meeting every shape.

The region lives in the dual projective space; removing the dual hyperplane
of an accepted condition point p gives an affine chart in which the region
is compact, so a box raster with a cell-scaled membership tolerance captures
it.  Members are dual-chart coordinate vectors; every member lifts back to
a hyperplane that meets all shapes (re-checkable via ``in_dual_region``).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .defaults import BOUNDS_CAP, BOUNDS_INIT
from .errors import EmptyRegionWarning, RegionNotCompactError
from .projective import AffineChart, ProjHyperplane, ProjPoint, dualize_point
from .shapes import Scene, scene_extent, scene_packed


@dataclass(frozen=True)
class GridSpec:
    bounds: float
    resolution: int

    @property
    def cell(self) -> float:
        return 2.0 * self.bounds / (self.resolution - 1)


@dataclass(frozen=True)
class DualRegionSample:
    """Finite raster of the dual region, in the chart that removes the dual
    hyperplane of p."""

    p: ProjPoint
    chart: AffineChart          # chart of the dual space, infinity covector = p
    grid: GridSpec
    members: np.ndarray         # (m, n) dual-chart coordinates in the region
    boundary_flags: np.ndarray  # (m,) True when the member sits on the outer grid layer
    tol: float                  # membership tolerance used during rasterization
    clearances: np.ndarray      # (m,) worst per-shape clearance of each member

    @property
    def n(self) -> int:
        return self.members.shape[1] if self.members.ndim == 2 else 0

    def core_mask(self) -> np.ndarray:
        """Members whose hyperplanes meet every shape exactly (no raster slack)."""
        return self.clearances <= 0.0

    def covectors(self, coords: np.ndarray | None = None) -> np.ndarray:
        """Raw covectors of members (rows), or of explicit dual-chart coords."""
        y = self.members if coords is None else np.atleast_2d(coords)
        return self.chart.frame[0] + y @ self.chart.frame[1:]

    def hyperplane(self, coords: np.ndarray) -> ProjHyperplane:
        return ProjHyperplane(self.covectors(coords)[0])


def in_dual_region(scene: Scene, H: ProjHyperplane, tol: float = 0.0) -> bool:
    """True iff the hyperplane meets every shape of the scene (within tol)."""
    clear = kernels.clearances(scene_packed(scene), H.covector[None, :])
    return bool(np.all(clear[0] <= tol))


def raster_tolerance(scene: Scene, grid: GridSpec) -> float:
    """Membership slack so tangent hyperplanes are not lost between cells.

    Half the grid cell diagonal, mapped through a first-order bound on how a
    dual-chart perturbation moves chart distances: a unit covector change
    shifts the signed value at a point x by at most sqrt(1 + |x|^2).
    """
    n_axes = scene.n
    extent = scene_extent(scene)
    return 0.5 * grid.cell * np.sqrt(n_axes) * float(np.sqrt(1.0 + extent * extent))


def sample_dual_region(
    scene: Scene,
    p: ProjPoint,
    resolution: int,
    bounds: float,
    tol: float | None = None,
    certificate=None,
) -> DualRegionSample:
    """Rasterize the box [-bounds, bounds]^n of the dual chart excluding p.

    The caller is responsible for p having been accepted by the condition
    check; passing the certificate asserts the match.  An empty member set at
    a reasonable resolution signals under-resolution, not an empty region,
    and raises an EmptyRegionWarning.
    """
    if certificate is not None and certificate.p != p:
        raise ValueError("certificate was issued for a different point")
    chart = AffineChart.from_infinity(dualize_point(p))
    grid = GridSpec(float(bounds), int(resolution))
    if tol is None:
        tol = raster_tolerance(scene, grid)
    axes = [np.linspace(-grid.bounds, grid.bounds, grid.resolution)] * scene.n
    mesh = np.meshgrid(*axes, indexing="ij")
    coords = np.stack([m.ravel() for m in mesh], axis=1)
    covectors = chart.frame[0] + coords @ chart.frame[1:]
    clear = kernels.clearances(scene_packed(scene), covectors)
    worst = clear.max(axis=1)
    mask = worst <= tol
    members = coords[mask]
    idx = np.nonzero(mask)[0]
    multi = np.stack(np.unravel_index(idx, mesh[0].shape), axis=1)
    boundary = np.any((multi == 0) | (multi == grid.resolution - 1), axis=1)
    if members.shape[0] == 0 and resolution >= 64:
        warnings.warn(
            "dual region sample is empty; the raster is likely under-resolved",
            EmptyRegionWarning,
        )
    return DualRegionSample(p, chart, grid, members, boundary, tol, worst[mask])


@dataclass(frozen=True)
class BoundednessReport:
    bounded: bool
    max_norm: float
    min_p_incidence: float  # min |pairing of p with member hyperplanes|


def boundedness_check(sample: DualRegionSample, margin: float | None = None) -> BoundednessReport:
    """Empirical compactness: no member on the outer layer, norms under bounds.

    The test runs on the exact-membership core; the raster slack deliberately
    inflates the member set, and an inflated region can spill over even when
    the true region is compact.  Also reports how far member hyperplanes stay
    from p, as the minimum absolute incidence of p against normalized member
    covectors.
    """
    if margin is None:
        margin = sample.grid.cell
    if sample.members.shape[0] == 0:
        return BoundednessReport(False, 0.0, np.inf)
    core = sample.core_mask()
    if not core.any():
        core = np.ones(sample.members.shape[0], dtype=bool)
    members = sample.members[core]
    norms = np.linalg.norm(members, axis=1)
    max_norm = float(norms.max())
    cov = sample.covectors(members)
    pairing = np.abs(cov @ sample.p.coords) / np.linalg.norm(cov, axis=1)
    ok = not sample.boundary_flags[core].any() and max_norm <= sample.grid.bounds - margin
    return BoundednessReport(bool(ok), max_norm, float(pairing.min()))


def sample_dual_region_auto(
    scene: Scene,
    p: ProjPoint,
    resolution: int,
    bounds: float = BOUNDS_INIT,
    certificate=None,
) -> tuple[DualRegionSample, BoundednessReport]:
    """Double the raster bounds until the sampled region is compactly inside."""
    while True:
        sample = sample_dual_region(scene, p, resolution, bounds, certificate=certificate)
        report = boundedness_check(sample)
        if report.bounded:
            return sample, report
        if bounds >= BOUNDS_CAP:
            raise RegionNotCompactError(
                f"dual region still touches the raster boundary at bounds {bounds}"
            )
        bounds *= 2.0
