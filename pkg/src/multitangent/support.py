"""From sampled dual regions to certified common supporting hyperplanes.

The dual-extremal pipeline mirrors the existence argument: pick a condition
point, rasterize the dual region, take extreme points of the sample, and
refine each into a hyperplane that touches every shape from a consistent
side.  A rotating-tangent backend covers the planar case exactly, and both
agree with the brute-force sweep oracle on analytic scenes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import kernels
from .condition import ConditionCertificate, search_condition_point
from .defaults import (
    CONTACT_TOL_EXACT,
    CONTACT_TOL_REFINED,
    EPS_RESIDUAL,
    HULL_POINTS,
    REFINE_MAX_ITER,
    RESOLUTION_2D,
    RESOLUTION_3D,
    THETA_DEDUP,
    THETA_FAMILY,
)
from .dualregion import DualRegionSample, sample_dual_region_auto
from .errors import (
    ConditionNotEstablishedError,
    NoContactError,
    NotSupportingError,
    RefinementDivergedError,
    UnsupportedDimensionError,
)
from .projective import (
    ProjHyperplane,
    ProjPoint,
    SideClassification,
    SideKind,
    _complete_frame,
    angular_distance,
    normalize,
)
from .shapes import (
    Ball,
    Circle,
    Loop,
    Scene,
    Shape,
    contact_points,
    convex_hull,
    point_in_loop,
    scene_packed,
    side,
    signed_values,
)


@dataclass(frozen=True)
class SupportCertificate:
    """A hyperplane together with per-shape contacts proving common support."""

    hyperplane: ProjHyperplane
    contacts: tuple           # one chart point per shape
    sides: tuple              # SideClassification per shape, all touch kinds
    residual: float           # max over shapes of the contact's |signed value|
    backend: str              # DualExtremal | Calipers | Oracle

    def to_dict(self) -> dict:
        return {
            "hyperplane": [float(x) for x in self.hyperplane.covector],
            "contacts": [[float(v) for v in c] for c in self.contacts],
            "sides": ["+" if s.kind is SideKind.TOUCH_PLUS else "-" for s in self.sides],
            "residual": float(self.residual),
            "backend": self.backend,
        }


def verify_support(
    scene: Scene,
    H: ProjHyperplane,
    tol: float,
    backend: str = "Oracle",
) -> SupportCertificate:
    """Certify that H supports every shape, or raise why it does not."""
    sides: list[SideClassification] = []
    contacts: list[np.ndarray] = []
    residual = 0.0
    for i, shape in enumerate(scene.shapes):
        cls = side(shape, H, tol)
        if cls.kind in (SideKind.STRICT_PLUS, SideKind.STRICT_MINUS):
            raise NoContactError(i)
        if cls.kind in (SideKind.CUT, SideKind.CONTAINED):
            raise NotSupportingError(i)
        sides.append(cls)
        reps = contact_points(shape, H, tol)
        contacts.append(reps[0])
        v = signed_values(shape, H)
        gap = abs(v.vmin) if cls.kind is SideKind.TOUCH_PLUS else abs(v.vmax)
        residual = max(residual, gap)
    return SupportCertificate(H, tuple(contacts), tuple(sides), residual, backend)


# ---------------------------------------------------------------------------
# extreme points of the sampled dual region


class ExtremePoints(NamedTuple):
    points: np.ndarray       # (k, n) dual-chart coordinates, lexicographic order
    low_dimensional: bool


def extreme_points(sample: DualRegionSample) -> ExtremePoints:
    """Convex-hull vertices of the member cloud (members by construction).

    Degenerate clouds (fewer than n+1 affinely independent members) come back
    whole, flagged low-dimensional.
    """
    members = sample.members
    m, n = members.shape
    if m == 0:
        return ExtremePoints(members, True)

    def _sorted(pts: np.ndarray) -> np.ndarray:
        order = np.lexsort(pts.T[::-1])
        return pts[order]

    centered = members - members.mean(axis=0)
    svals = np.linalg.svd(centered, compute_uv=False) if m > 1 else np.zeros(n)
    scale = max(float(svals.max()), 1e-30) if svals.size else 1e-30
    rank = int(np.sum(svals > 1e-9 * scale))
    if m <= n or rank < n:
        return ExtremePoints(_sorted(members), True)
    if n == 1:
        pts = np.array([[members.min()], [members.max()]])
        return ExtremePoints(pts, False)
    if n == 2:
        from .shapes import graham_hull

        return ExtremePoints(_sorted(graham_hull(members)), False)
    from scipy.spatial import ConvexHull as _Qhull

    try:
        hull = _Qhull(members)
    except Exception:
        return ExtremePoints(_sorted(members), True)
    return ExtremePoints(_sorted(members[np.unique(hull.vertices)]), False)


# ---------------------------------------------------------------------------
# tangency refinement


_INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


def _golden_min(f, lo: float, hi: float, iters: int = 40):
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    if fc <= fd:
        best_x, best_f = c, fc
    else:
        best_x, best_f = d, fd
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
            if fc < best_f:
                best_x, best_f = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
            if fd < best_f:
                best_x, best_f = d, fd
    return best_x, best_f


def refine_support(
    scene: Scene,
    H0: ProjHyperplane,
    max_iter: int = REFINE_MAX_ITER,
    eps_residual: float = EPS_RESIDUAL,
    verify_tol: float = CONTACT_TOL_REFINED,
    backend: str = "DualExtremal",
) -> SupportCertificate:
    """Derivative-free polish of a near-tangent hyperplane into a certificate.

    Minimizes the summed squared tangency penalty over local dual-chart
    coordinates by coordinate descent with golden-section line searches.  The
    per-shape penalty is the signed value nearest the hyperplane on the side
    chosen at the start, so it vanishes exactly at one-sided contact.  The
    penalty is only piecewise smooth (contact switches), hence no gradients.
    """
    packed = scene_packed(scene)
    frame = _complete_frame(H0.covector)
    n = scene.n

    vmin0, vmax0 = kernels.value_ranges(packed, frame[0][None, :])
    if not (np.all(np.isfinite(vmin0)) and np.all(np.isfinite(vmax0))):
        raise RefinementDivergedError(np.inf)
    side_sign = np.where(np.abs(vmin0[0]) <= np.abs(vmax0[0]), 1.0, -1.0)

    def penalties(y: np.ndarray) -> np.ndarray:
        lam = frame[0] + y @ frame[1:]
        vmin, vmax = kernels.value_ranges(packed, lam[None, :])
        return np.where(side_sign > 0, vmin[0], vmax[0])

    def objective(y: np.ndarray) -> float:
        r = penalties(y)
        if not np.all(np.isfinite(r)):
            return np.inf
        return float(r @ r)

    # Success is judged at eps_residual, but the descent polishes well past it
    # (budget permitting) so that independent refinements of the same support
    # land far inside the dedup angle instead of straddling it.
    eps_polish = min(eps_residual, 1e-13)
    y = np.zeros(n)
    value = objective(y)
    h = 0.25
    searches = 0
    while value > eps_polish and searches < max_iter and h > 1e-13:
        improved = False
        for k in range(n):
            if searches >= max_iter or value <= eps_polish:
                break

            def along(t: float, k=k) -> float:
                trial = y.copy()
                trial[k] = t
                return objective(trial)

            t_best, f_best = _golden_min(along, y[k] - h, y[k] + h)
            searches += 1
            if f_best < value - 1e-18:
                y[k] = t_best
                value = f_best
                improved = True
        if not improved:
            h *= 0.35
    best_residual = float(np.abs(penalties(y)).max())
    if value > eps_residual:
        raise RefinementDivergedError(best_residual)
    H = ProjHyperplane(frame[0] + y @ frame[1:])
    try:
        return verify_support(scene, H, verify_tol, backend)
    except (NoContactError, NotSupportingError) as e:
        raise RefinementDivergedError(best_residual) from e


# ---------------------------------------------------------------------------
# planar rotating-tangent backend


@dataclass(frozen=True)
class CalipersResult:
    certificates: tuple
    nested: bool = False
    touching: bool = False


def _is_disk(shape: Shape) -> bool:
    return isinstance(shape, Circle) or (isinstance(shape, Ball) and shape.dim == 2)


def _rot90(v: np.ndarray) -> np.ndarray:
    return np.array([-v[1], v[0]])


def _circle_pair_tangents(scene: Scene) -> CalipersResult:
    """Closed-form common tangent lines of two circles (exact)."""
    a, b = scene.shapes
    c1, r1 = a.center, a.radius
    c2, r2 = b.center, b.radius
    delta = c2 - c1
    d = float(np.linalg.norm(delta))
    if d < abs(r1 - r2) - 1e-15 or d < 1e-15:
        return CalipersResult((), nested=True)
    u = delta / d
    perp = _rot90(u)
    lines: list[np.ndarray] = []
    touching = False
    for s1, s2 in ((1.0, 1.0), (1.0, -1.0)):
        kappa = (s2 * r2 - s1 * r1) / d
        if abs(kappa) > 1.0 + 1e-15:
            continue
        t2 = max(0.0, 1.0 - kappa * kappa)
        t = np.sqrt(t2)
        if t < 1e-12:
            touching = True
        for sgn in (1.0, -1.0):
            m = kappa * u + sgn * t * perp
            e = float(m @ c1) - s1 * r1
            lines.append(np.array([-e, m[0], m[1]]))
            if t < 1e-12:
                break
    certs = []
    seen: list[np.ndarray] = []
    for lam in lines:
        lam = normalize(lam)
        if any(angular_distance(lam, s) < 1e-9 for s in seen):
            continue
        seen.append(lam)
        certs.append(
            verify_support(scene, ProjHyperplane(lam), CONTACT_TOL_EXACT, "Calipers")
        )
    certs.sort(key=lambda c: tuple(c.hyperplane.covector))
    return CalipersResult(tuple(certs), touching=touching)


def _hull_polygon(shape: Shape) -> np.ndarray:
    return convex_hull(shape).vertices


def _nested_hulls(va: np.ndarray, vb: np.ndarray) -> bool:
    if va.shape[0] >= 3:
        outer = Loop(va)
        if all(point_in_loop(outer, q) for q in vb):
            return True
    if vb.shape[0] >= 3:
        outer = Loop(vb)
        if all(point_in_loop(outer, q) for q in va):
            return True
    return False


def _polygon_pair_lines(va: np.ndarray, vb: np.ndarray, tol: float) -> list[np.ndarray]:
    """Rotating-tangent candidates: lines through a vertex of each hull with
    both hulls on a consistent closed side."""
    lines: list[np.ndarray] = []
    for a in va:
        t = vb - a
        lengths = np.linalg.norm(t, axis=1)
        ok = lengths > tol
        normals = np.stack([-t[:, 1], t[:, 0]], axis=1)
        sa = (va - a) @ normals.T  # (|A|, |B|)
        sb = (vb - a) @ normals.T
        one_sided_a = np.all(sa >= -tol, axis=0) | np.all(sa <= tol, axis=0)
        one_sided_b = np.all(sb >= -tol, axis=0) | np.all(sb <= tol, axis=0)
        for j in np.flatnonzero(ok & one_sided_a & one_sided_b):
            nrm = normals[j] / lengths[j]
            lines.append(np.array([-(nrm @ a), nrm[0], nrm[1]]))
    return lines


def calipers_tangents(A: Shape, B: Shape) -> CalipersResult:
    """Common tangent lines of two planar shapes via their convex hulls.

    Two disks use the exact closed form.  Otherwise candidates come from the
    rotating-tangent scan over hull vertex pairs; a pair involving a disk is
    polished by refinement so contacts land on the true circle rather than
    its polygonal stand-in.  Four lines for disjoint hulls, two for properly
    overlapping hulls, a flag when the hulls touch, and an empty, flagged
    result when one hull sits inside the other.
    """
    if A.dim != 2 or B.dim != 2:
        raise UnsupportedDimensionError("the rotating-tangent backend is planar only")
    scene = Scene(2, (A, B), "pair")
    if _is_disk(A) and _is_disk(B):
        return _circle_pair_tangents(scene)
    va = _hull_polygon(A)
    vb = _hull_polygon(B)
    if _nested_hulls(va, vb):
        return CalipersResult((), nested=True)
    extent = max(float(np.abs(va).max()), float(np.abs(vb).max()), 1.0)
    tol = 1e-9 * extent
    lines = _polygon_pair_lines(va, vb, tol)
    needs_polish = _is_disk(A) or _is_disk(B)
    certs: list[SupportCertificate] = []
    seen: list[np.ndarray] = []
    touching = False
    for lam in lines:
        lam = normalize(lam)
        if any(angular_distance(lam, s) < 1e-7 for s in seen):
            continue
        seen.append(lam)
        H = ProjHyperplane(lam)
        try:
            if needs_polish:
                certs.append(
                    refine_support(scene, H, backend="Calipers")
                )
            else:
                certs.append(verify_support(scene, H, CONTACT_TOL_EXACT, "Calipers"))
        except (NoContactError, NotSupportingError, RefinementDivergedError):
            touching = True  # grazing configuration: hulls touch or tangency is marginal
            continue
    certs = dedup_certificates(certs)
    certs.sort(key=lambda c: tuple(c.hyperplane.covector))
    return CalipersResult(tuple(certs), touching=touching)


@dataclass(frozen=True)
class SelfSupport:
    """A line supporting one loop at two separated contact clusters."""

    hyperplane: ProjHyperplane
    contacts: tuple
    residual: float

    def to_dict(self) -> dict:
        return {
            "hyperplane": [float(x) for x in self.hyperplane.covector],
            "contacts": [[float(v) for v in c] for c in self.contacts],
            "residual": float(self.residual),
        }


def self_bitangents(loop: Loop) -> list:
    """Two-point supporting lines of a single loop, via hull bridge edges.

    A hull edge whose endpoints are non-adjacent loop vertices spans a dent;
    the edge's line touches the loop at both endpoints and keeps it on one
    side, the discrete counterpart of a self-bitangent.
    """
    from .shapes import graham_hull

    hull = graham_hull(loop.vertices)
    index_of = {tuple(v): k for k, v in enumerate(loop.vertices)}
    hull_idx = [index_of[tuple(v)] for v in hull]
    m = loop.vertices.shape[0]
    extent = max(1.0, float(np.abs(loop.vertices).max()))
    out = []
    for a_i, b_i in zip(hull_idx, hull_idx[1:] + hull_idx[:1]):
        if (b_i - a_i) % m == 1 or (a_i - b_i) % m == 1:
            continue
        a, b = loop.vertices[a_i], loop.vertices[b_i]
        t = b - a
        nrm = np.array([-t[1], t[0]]) / np.linalg.norm(t)
        lam = normalize(np.array([-(nrm @ a), nrm[0], nrm[1]]))
        H = ProjHyperplane(lam)
        cls = side(loop, H, 1e-9 * extent)
        if not cls.kind.touching:
            continue
        reps = contact_points(loop, H, 1e-9 * extent)
        if len(reps) < 2:
            continue
        v = signed_values(loop, H)
        gap = abs(v.vmin) if cls.kind is SideKind.TOUCH_PLUS else abs(v.vmax)
        out.append(SelfSupport(H, tuple(reps), gap))
    out.sort(key=lambda s: tuple(s.hyperplane.covector))
    return out


# ---------------------------------------------------------------------------
# deduplication, orientation, families


def dedup_certificates(
    certs: Sequence[SupportCertificate], theta: float = THETA_DEDUP
) -> list[SupportCertificate]:
    """Lowest-residual representative per angular cluster, deterministic order."""
    ranked = sorted(certs, key=lambda c: (c.residual, tuple(c.hyperplane.covector)))
    kept: list[SupportCertificate] = []
    for cert in ranked:
        lam = cert.hyperplane.covector
        if all(angular_distance(lam, k.hyperplane.covector) > theta for k in kept):
            kept.append(cert)
    kept.sort(key=lambda c: tuple(c.hyperplane.covector))
    return kept


def reference_point(scene: Scene, certs: Sequence[SupportCertificate],
                    p: Optional[ProjPoint] = None) -> ProjPoint:
    """A point off every certificate hyperplane, used to orient side patterns."""
    from .shapes import scene_diameter, shape_points

    candidates: list[ProjPoint] = []
    if p is not None:
        candidates.append(p)
    pts = np.vstack([shape_points(s) for s in scene.shapes])
    centroid = pts.mean(axis=0)
    diam = max(scene_diameter(scene), 1.0)
    for k, direction in enumerate(np.eye(scene.n)[::-1]):
        candidates.append(scene.chart.lift(centroid + (3.0 + k) * diam * direction))
    candidates.append(scene.chart.lift(centroid + 2.7182 * diam * np.ones(scene.n)))
    for cand in candidates:
        pair = [float(cand.coords @ c.hyperplane.covector) for c in certs]
        if all(abs(v) > 1e-9 for v in pair):
            return cand
    return candidates[-1]


def side_pattern(scene: Scene, cert: SupportCertificate, ref: ProjPoint) -> str:
    """Per-shape +/- choices with the covector oriented positively at ref."""
    lam = cert.hyperplane.covector
    if float(ref.coords @ lam) < 0.0:
        lam = -lam
    out = []
    for shape in scene.shapes:
        # evaluate against the oriented raw covector, not the canonical one
        form = shape.chart.frame @ lam
        c0, a = form[0], form[1:]
        den = float(np.linalg.norm(a))
        if isinstance(shape, (Circle, Ball)):
            mid = (c0 + float(a @ shape.center)) / den
        else:
            from .shapes import _vertex_data

            vals = (c0 + _vertex_data(shape) @ a) / den
            mid = 0.5 * (float(vals.min()) + float(vals.max()))
        out.append("+" if mid >= 0.0 else "-")
    return "".join(out)


def detect_families(
    scene: Scene,
    certs: Sequence[SupportCertificate],
    spacing: float,
    theta_family: float = THETA_FAMILY,
) -> list[list[int]]:
    """Chains of certificates connected through verified in-between supports.

    Two certificates are linked when their angular midpoint refines to a
    verified support strictly between them; chained components wider than
    ``theta_family`` witness a continuum family of supporting hyperplanes
    rather than isolated ones.
    """
    m = len(certs)
    if m < 2:
        return []
    link = max(theta_family, 3.0 * spacing)
    parent = list(range(m))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        parent[find(i)] = find(j)

    covs = [c.hyperplane.covector for c in certs]
    for i in range(m):
        for j in range(i + 1, m):
            gap = angular_distance(covs[i], covs[j])
            if gap > link or gap <= THETA_DEDUP:
                continue
            lam_j = covs[j] if float(covs[i] @ covs[j]) >= 0.0 else -covs[j]
            mid = normalize(covs[i] + lam_j)
            try:
                witness = refine_support(
                    scene, ProjHyperplane(mid), max_iter=150, backend=certs[i].backend
                )
            except RefinementDivergedError:
                continue
            w = witness.hyperplane.covector
            if (
                angular_distance(w, covs[i]) > THETA_DEDUP
                and angular_distance(w, covs[j]) > THETA_DEDUP
            ):
                union(i, j)
    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    families = []
    for members in groups.values():
        if len(members) < 2:
            continue
        diameter = max(
            angular_distance(covs[i], covs[j])
            for i in members
            for j in members
            if i < j
        )
        if diameter > theta_family:
            families.append(sorted(members))
    families.sort()
    return families


# ---------------------------------------------------------------------------
# pipeline


@dataclass
class PipelineResult:
    certificates: list
    backend: str
    raw_candidates: int
    p: Optional[ProjPoint] = None
    condition: Optional[ConditionCertificate] = None
    sample: Optional[DualRegionSample] = None
    nested: bool = False
    touching: bool = False
    spacing: float = 0.0  # angular-scale hint: how densely candidates were generated


def default_resolution(n: int) -> int:
    return RESOLUTION_3D if n >= 3 else RESOLUTION_2D


def _augment_locally(sample: DualRegionSample, scene: Scene) -> DualRegionSample:
    """Re-rasterize small boxes around hull vertices at four-fold resolution."""
    extremes = extreme_points(sample).points
    if extremes.shape[0] == 0:
        return sample
    cell = sample.grid.cell
    offsets_1d = np.linspace(-cell, cell, 9)
    mesh = np.meshgrid(*([offsets_1d] * sample.n), indexing="ij")
    offsets = np.stack([m.ravel() for m in mesh], axis=1)
    pts = (extremes[:, None, :] + offsets[None, :, :]).reshape(-1, sample.n)
    pts = np.unique(np.round(pts / (cell / 4.0)), axis=0) * (cell / 4.0)
    covectors = sample.chart.frame[0] + pts @ sample.chart.frame[1:]
    clear = kernels.clearances(scene_packed(scene), covectors)
    worst = clear.max(axis=1)
    keep = worst <= sample.tol / 4.0
    members = np.vstack([sample.members, pts[keep]])
    flags = np.concatenate(
        [sample.boundary_flags, np.zeros(int(keep.sum()), dtype=bool)]
    )
    clearances = np.concatenate([sample.clearances, worst[keep]])
    return DualRegionSample(
        sample.p, sample.chart, sample.grid, members, flags, sample.tol, clearances
    )


def _run_dual(
    scene: Scene,
    resolution: int | None,
    directions: int | None = None,
    theta_dedup: float = THETA_DEDUP,
) -> PipelineResult:
    found = search_condition_point(scene, directions=directions)
    if found is None:
        raise ConditionNotEstablishedError(
            "no condition point accepted; try the oracle or calipers backend"
        )
    p, cert = found
    if resolution is None:
        resolution = default_resolution(scene.n)
    sample, report = sample_dual_region_auto(scene, p, resolution, certificate=cert)
    if scene.n >= 3:
        sample = _augment_locally(sample, scene)
    extremes = extreme_points(sample).points
    if extremes.shape[0] > 512:
        stride = int(np.ceil(extremes.shape[0] / 512))
        extremes = extremes[::stride]
    covectors = sample.covectors(extremes)
    certs = []
    for lam in covectors:
        try:
            certs.append(refine_support(scene, ProjHyperplane(lam)))
        except RefinementDivergedError:
            continue
    deduped = dedup_certificates(certs, theta_dedup)
    return PipelineResult(
        deduped,
        "DualExtremal",
        raw_candidates=len(certs),
        p=p,
        condition=cert,
        sample=sample,
        spacing=sample.grid.cell,
    )


def _run_calipers(scene: Scene) -> PipelineResult:
    if scene.n != 2:
        raise UnsupportedDimensionError("the calipers backend needs a planar scene")
    result = calipers_tangents(scene.shapes[0], scene.shapes[1])
    return PipelineResult(
        list(result.certificates),
        "Calipers",
        raw_candidates=len(result.certificates),
        nested=result.nested,
        touching=result.touching,
        spacing=2.0 * np.pi / HULL_POINTS,
    )


def _run_oracle(scene: Scene, angular_grid: int | None = None) -> PipelineResult:
    from .oracle import brute_force_supports, default_angular_grid

    grid = angular_grid if angular_grid is not None else default_angular_grid(scene.n)
    sweep = brute_force_supports(scene, grid)
    return PipelineResult(
        list(sweep.clusters),
        "Oracle",
        raw_candidates=len(sweep.candidates),
        spacing=np.pi / grid,
    )


def run_pipeline(
    scene: Scene,
    backend: str = "auto",
    resolution: int | None = None,
    angular_grid: int | None = None,
    directions: int | None = None,
    theta_dedup: float = THETA_DEDUP,
) -> PipelineResult:
    backend = backend.lower()
    if backend == "auto":
        backend = "calipers" if scene.n == 2 else "dual"
    if backend in ("dual", "dualextremal", "dual-extremal"):
        return _run_dual(scene, resolution, directions, theta_dedup)
    if backend == "calipers":
        return _run_calipers(scene)
    if backend == "oracle":
        return _run_oracle(scene, angular_grid)
    raise ValueError(f"unknown backend {backend!r}")


def find_supports(scene: Scene, backend: str = "auto", **kwargs) -> list:
    """Deduplicated, verified common-support certificates for the scene."""
    return run_pipeline(scene, backend, **kwargs).certificates


@dataclass
class CountResult:
    count: int
    raw: int
    certificates: list
    continuum_family: bool
    families: list
    histogram: dict
    backend: str
    fallback: bool  # oracle stepped in after the condition search failed


def count_supports(scene: Scene, backend: str = "auto") -> CountResult:
    """Distinct supports after dedup, plus continuum-family detection and the
    per-certificate side-pattern histogram (oriented at a common reference)."""
    fallback = False
    try:
        result = run_pipeline(scene, backend)
    except ConditionNotEstablishedError:
        result = _run_oracle(scene)
        fallback = True
    certs = result.certificates
    families = detect_families(scene, certs, result.spacing)
    ref = reference_point(scene, certs, result.p)
    histogram: dict[str, int] = {}
    for cert in certs:
        pattern = side_pattern(scene, cert, ref)
        histogram[pattern] = histogram.get(pattern, 0) + 1
    return CountResult(
        count=len(certs),
        raw=result.raw_candidates,
        certificates=certs,
        continuum_family=bool(families),
        families=families,
        histogram=dict(sorted(histogram.items())),
        backend=result.backend,
        fallback=fallback,
    )
