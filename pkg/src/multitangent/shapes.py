"""Closed connected subsets of an affine chart and their hyperplane tests.

Five concrete kinds: analytic circles and balls (exact tangency math),
convex polytopes, closed polyline loops, and filled regions bounded by a
loop.  Loops are the universal fallback; anything a marching-squares trace
produces becomes a Loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import kernels
from .defaults import CLUSTER_RADIUS_FACTOR, CURVE_TOL_FACTOR, HULL_POINTS
from .errors import (
    NoComponentsError,
    NotTouchingError,
    OpenComponentError,
    SceneError,
)
from .projective import (
    AffineChart,
    ProjHyperplane,
    SideClassification,
    SideKind,
    classify_range,
)

_GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Circle:
    """Circle curve (not the disk) in a planar chart."""

    center: np.ndarray
    radius: float
    chart: AffineChart = None

    def __post_init__(self):
        center = _readonly(self.center)
        if center.shape != (2,):
            raise SceneError("circle center must be a 2-vector", "center")
        if not self.radius > 0:
            raise SceneError("circle radius must be positive", "radius")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))
        if self.chart is None:
            object.__setattr__(self, "chart", AffineChart.standard(2))

    @property
    def dim(self) -> int:
        return 2


@dataclass(frozen=True, eq=False)
class Ball:
    """Closed round ball (full-dimensional) in an n-dimensional chart."""

    center: np.ndarray
    radius: float
    chart: AffineChart = None

    def __post_init__(self):
        center = _readonly(self.center)
        if center.ndim != 1 or center.size < 1:
            raise SceneError("ball center must be an n-vector", "center")
        if not self.radius > 0:
            raise SceneError("ball radius must be positive", "radius")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))
        if self.chart is None:
            object.__setattr__(self, "chart", AffineChart.standard(center.size))

    @property
    def dim(self) -> int:
        return self.center.size


@dataclass(frozen=True, eq=False)
class Polytope:
    """Convex hull of finitely many chart points."""

    vertices: np.ndarray
    chart: AffineChart = None
    approximate: bool = False  # set when the polytope stands in for a round shape

    def __post_init__(self):
        verts = _readonly(np.atleast_2d(self.vertices))
        if verts.shape[0] < 1:
            raise SceneError("polytope needs at least one vertex", "vertices")
        object.__setattr__(self, "vertices", verts)
        if self.chart is None:
            object.__setattr__(self, "chart", AffineChart.standard(verts.shape[1]))

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]


@dataclass(frozen=True, eq=False)
class Loop:
    """Closed polyline: ordered vertices, implicit edge from last back to first."""

    vertices: np.ndarray
    chart: AffineChart = None

    def __post_init__(self):
        verts = _readonly(np.atleast_2d(self.vertices))
        if verts.shape[0] < 3:
            raise SceneError("loop needs at least three vertices", "points")
        if np.allclose(verts[0], verts[-1]):
            raise SceneError("loop closure is implicit; first vertex must differ from last", "points")
        d = np.linalg.norm(np.diff(verts, axis=0), axis=1)
        if np.any(d == 0.0):
            raise SceneError("loop has coincident consecutive vertices", "points")
        object.__setattr__(self, "vertices", verts)
        if self.chart is None:
            object.__setattr__(self, "chart", AffineChart.standard(verts.shape[1]))

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]


@dataclass(frozen=True, eq=False)
class Region:
    """Area bounded by a loop; ``filled`` distinguishes it from the bare curve."""

    boundary: Loop
    filled: bool = True

    @property
    def chart(self) -> AffineChart:
        return self.boundary.chart

    @property
    def dim(self) -> int:
        return self.boundary.dim


Shape = Union[Circle, Ball, Polytope, Loop, Region]


@dataclass(frozen=True, eq=False)
class Scene:
    """Exactly n closed connected shapes in RP^n."""

    n: int
    shapes: tuple
    label: str = ""

    def __post_init__(self):
        shapes = tuple(self.shapes)
        if len(shapes) != self.n:
            raise SceneError(
                f"a scene in RP^{self.n} needs exactly {self.n} shapes, got {len(shapes)}",
                "shapes",
            )
        for i, s in enumerate(shapes):
            if s.dim != self.n:
                raise SceneError(
                    f"shape {i} lives in dimension {s.dim}, scene is RP^{self.n}",
                    f"shapes[{i}]",
                )
        object.__setattr__(self, "shapes", shapes)

    @property
    def chart(self) -> AffineChart:
        return self.shapes[0].chart


# ---------------------------------------------------------------------------
# kernel packing and signed values


def _vertex_data(shape: Shape) -> np.ndarray:
    if isinstance(shape, Polytope):
        return shape.vertices
    if isinstance(shape, Loop):
        return shape.vertices
    if isinstance(shape, Region):
        return shape.boundary.vertices
    raise TypeError(f"not a vertex-based shape: {type(shape).__name__}")


def pack_shapes(shapes: Sequence[Shape]) -> kernels.PackedShapes:
    """Flatten shapes into kernel arrays; all shapes must share one chart."""
    chart = shapes[0].chart
    for s in shapes[1:]:
        if s.chart != chart:
            raise SceneError("kernel batches require shapes in a single chart")
    d = shapes[0].dim
    kinds = np.empty(len(shapes), dtype=np.int32)
    centers = np.zeros((len(shapes), d))
    radii = np.zeros(len(shapes))
    offsets = np.zeros(len(shapes) + 1, dtype=np.int64)
    verts = []
    total = 0
    for i, s in enumerate(shapes):
        if isinstance(s, (Circle, Ball)):
            kinds[i] = 0
            centers[i] = s.center
            radii[i] = s.radius
        else:
            kinds[i] = 1
            v = _vertex_data(s)
            verts.append(v)
            total += v.shape[0]
        offsets[i + 1] = total
    poly = np.vstack(verts) if verts else np.zeros((0, d))
    return kernels.pack_arrays(kinds, centers, radii, offsets, poly, chart.frame)


def scene_packed(scene: Scene) -> kernels.PackedShapes:
    return pack_shapes(scene.shapes)


@dataclass(frozen=True)
class _Values:
    """Signed chart distances a single hyperplane attains on one shape."""

    vmin: float
    vmax: float
    # analytic path
    analytic: bool = False
    signed_center: float = 0.0
    unit_normal: np.ndarray = None
    # vertex path
    vertex_values: np.ndarray = None


def signed_values(shape: Shape, H: ProjHyperplane) -> _Values:
    """Signed chart distance of the shape's points to H.

    For the chart's own infinity hyperplane the distance degenerates; the
    whole shape then sits strictly on the side given by the sign of the full
    homogeneous pairing, encoded as an infinite range.
    """
    form = shape.chart.frame @ H.covector
    c0, a = form[0], form[1:]
    den = float(np.linalg.norm(a))
    if den < 1e-300:
        v = np.inf if c0 >= 0.0 else -np.inf
        return _Values(vmin=v, vmax=v)
    if isinstance(shape, (Circle, Ball)):
        d = (c0 + float(a @ shape.center)) / den
        return _Values(
            vmin=d - shape.radius,
            vmax=d + shape.radius,
            analytic=True,
            signed_center=d,
            unit_normal=a / den,
        )
    vals = (c0 + _vertex_data(shape) @ a) / den
    return _Values(vmin=float(vals.min()), vmax=float(vals.max()), vertex_values=vals)


def shape_points(shape: Shape, count: int = 128) -> np.ndarray:
    """Deterministic sample of points on the shape's representation."""
    if isinstance(shape, Circle) or (isinstance(shape, Ball) and shape.dim == 2):
        t = np.arange(count) * (2 * np.pi / count)
        return shape.center + shape.radius * np.stack([np.cos(t), np.sin(t)], axis=1)
    if isinstance(shape, Ball):
        if shape.dim == 1:
            return np.array([shape.center - shape.radius, shape.center + shape.radius])
        return shape.center + shape.radius * _fibonacci_sphere(count)
    return _vertex_data(shape)


def _fibonacci_sphere(count: int) -> np.ndarray:
    i = np.arange(count)
    z = 1.0 - (2.0 * i + 1.0) / count
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = i * _GOLDEN_ANGLE
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def shape_diameter(shape: Shape) -> float:
    if isinstance(shape, (Circle, Ball)):
        return 2.0 * shape.radius
    v = _vertex_data(shape)
    return float(np.linalg.norm(v.max(axis=0) - v.min(axis=0)))


def scene_extent(scene: Scene) -> float:
    """Radius scale of the scene: largest chart coordinate magnitude."""
    m = 0.0
    for s in scene.shapes:
        if isinstance(s, (Circle, Ball)):
            m = max(m, float(np.abs(s.center).max()) + s.radius)
        else:
            m = max(m, float(np.abs(_vertex_data(s)).max()))
    return m


def scene_diameter(scene: Scene) -> float:
    pts = np.vstack([shape_points(s) for s in scene.shapes])
    return float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))


# ---------------------------------------------------------------------------
# hyperplane predicates


def meets(shape: Shape, H: ProjHyperplane, tol: float = 0.0) -> bool:
    """True iff the hyperplane intersects the shape, within a chart-distance slack."""
    v = signed_values(shape, H)
    return max(v.vmin, -v.vmax) <= tol


def side(shape: Shape, H: ProjHyperplane, tol: float) -> SideClassification:
    """Classify the shape against the hyperplane with touch/cut witnesses."""
    v = signed_values(shape, H)
    kind = classify_range(v.vmin, v.vmax, tol)
    if kind in (SideKind.STRICT_PLUS, SideKind.STRICT_MINUS):
        return SideClassification(kind)
    if kind is SideKind.CUT:
        if v.analytic:
            lo = shape.center - shape.radius * v.unit_normal
            hi = shape.center + shape.radius * v.unit_normal
        else:
            vals = v.vertex_values
            verts = _vertex_data(shape)
            lo = verts[int(np.argmin(vals))]
            hi = verts[int(np.argmax(vals))]
        return SideClassification(kind, (lo, hi))
    witnesses = tuple(contact_candidates(shape, v, tol))
    return SideClassification(kind, witnesses)


def contact_candidates(shape: Shape, v: _Values, tol: float) -> list:
    if v.analytic:
        sign = 1.0 if v.signed_center >= 0.0 else -1.0
        return [shape.center - sign * shape.radius * v.unit_normal]
    verts = _vertex_data(shape)
    return [verts[i] for i in np.flatnonzero(np.abs(v.vertex_values) <= tol)]


def contact_points(
    shape: Shape,
    H: ProjHyperplane,
    tol: float,
    cluster_radius: float = None,
) -> list:
    """Contact points of a touching hyperplane, one representative per cluster.

    Analytic kinds return the exact foot point; vertex kinds return, per
    cluster of near-incident vertices, the vertex closest to the hyperplane.
    """
    v = signed_values(shape, H)
    kind = classify_range(v.vmin, v.vmax, tol)
    if not (kind.touching or kind is SideKind.CONTAINED):
        raise NotTouchingError(f"side is {kind.value}; no contact")
    if v.analytic:
        return contact_candidates(shape, v, tol)
    if cluster_radius is None:
        cluster_radius = CLUSTER_RADIUS_FACTOR * shape_diameter(shape)
    verts = _vertex_data(shape)
    vals = v.vertex_values
    idx = np.flatnonzero(np.abs(vals) <= tol)
    order = idx[np.argsort(np.abs(vals[idx]), kind="stable")]
    reps: list[np.ndarray] = []
    for i in order:
        p = verts[i]
        if all(np.linalg.norm(p - r) > cluster_radius for r in reps):
            reps.append(p)
    reps.sort(key=lambda p: tuple(p))
    return reps


def distance_to_shape(shape: Shape, x: np.ndarray) -> float:
    """Euclidean chart distance from a point to the shape's point set."""
    x = np.asarray(x, dtype=float)
    if isinstance(shape, Circle):
        return abs(float(np.linalg.norm(x - shape.center)) - shape.radius)
    if isinstance(shape, Ball):
        return max(0.0, float(np.linalg.norm(x - shape.center)) - shape.radius)
    if isinstance(shape, Region) and shape.filled:
        if point_in_loop(shape.boundary, x):
            return 0.0
        return _polyline_distance(shape.boundary.vertices, x, closed=True)
    if isinstance(shape, Loop):
        return _polyline_distance(shape.vertices, x, closed=True)
    if isinstance(shape, Region):
        return _polyline_distance(shape.boundary.vertices, x, closed=True)
    # polytope: treat as the solid hull
    verts = shape.vertices
    if verts.shape[0] == 1:
        return float(np.linalg.norm(x - verts[0]))
    if shape.dim == 1:
        lo, hi = float(verts.min()), float(verts.max())
        return max(0.0, lo - float(x[0]), float(x[0]) - hi)
    hull = convex_hull(shape)
    if shape.dim == 2 and hull.vertices.shape[0] >= 3:
        if point_in_loop(Loop(hull.vertices), x):
            return 0.0
    return _polyline_distance(hull.vertices, x, closed=shape.dim == 2)


def _polyline_distance(verts: np.ndarray, x: np.ndarray, closed: bool) -> float:
    a = verts
    b = np.roll(verts, -1, axis=0) if closed else verts[1:]
    if not closed:
        a = verts[:-1]
    if a.shape[0] == 0:
        return float(np.linalg.norm(x - verts[0]))
    e = b - a
    t = np.einsum("ij,ij->i", x - a, e) / np.maximum(np.einsum("ij,ij->i", e, e), 1e-300)
    t = np.clip(t, 0.0, 1.0)
    proj = a + t[:, None] * e
    return float(np.linalg.norm(proj - x, axis=1).min())


def point_in_loop(loop: Loop, x: np.ndarray) -> bool:
    """Ray-crossing parity test (planar loops)."""
    v = loop.vertices
    px, py = float(x[0]), float(x[1])
    inside = False
    j = v.shape[0] - 1
    for i in range(v.shape[0]):
        xi, yi = v[i]
        xj, yj = v[j]
        if (yi > py) != (yj > py):
            t = (py - yi) / (yj - yi)
            if px < xi + t * (xj - xi):
                inside = not inside
        j = i
    return inside


# ---------------------------------------------------------------------------
# convex hulls


def graham_hull(points: np.ndarray) -> np.ndarray:
    """2-d convex hull, CCW, strictly convex turns; subset of the input points."""
    pts = np.unique(np.asarray(points, dtype=float), axis=0)  # lexicographic sort
    if pts.shape[0] <= 2:
        return pts

    def half(seq):
        out: list[np.ndarray] = []
        for p in seq:
            while len(out) > 1:
                o, b = out[-2], out[-1]
                if (b[0] - o[0]) * (p[1] - o[1]) - (b[1] - o[1]) * (p[0] - o[0]) <= 0.0:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    hull = lower[:-1] + upper[:-1]
    return np.array(hull)


def convex_hull(shape: Shape, points: int = HULL_POINTS) -> Polytope:
    """Convex hull as a polytope.

    Analytic circles and balls yield an inscribed sample of ``points``
    vertices, flagged approximate; vertex kinds yield the exact hull, whose
    vertices are a subset of the input vertices.
    """
    if isinstance(shape, Circle) or (isinstance(shape, Ball) and shape.dim == 2):
        t = np.arange(points) * (2 * np.pi / points)
        verts = shape.center + shape.radius * np.stack([np.cos(t), np.sin(t)], axis=1)
        return Polytope(verts, shape.chart, approximate=True)
    if isinstance(shape, Ball):
        if shape.dim == 1:
            verts = np.array([shape.center - shape.radius, shape.center + shape.radius])
            return Polytope(verts, shape.chart, approximate=True)
        verts = shape.center + shape.radius * _fibonacci_sphere(points)
        return Polytope(verts, shape.chart, approximate=True)
    verts = _vertex_data(shape)
    d = verts.shape[1]
    if d == 1:
        hull = np.array([[verts.min()], [verts.max()]])
    elif d == 2:
        hull = graham_hull(verts)
    else:
        from scipy.spatial import ConvexHull as _Qhull

        try:
            q = _Qhull(verts)
            hull = verts[np.sort(np.unique(q.vertices))]
        except Exception:
            hull = np.unique(verts, axis=0)
    return Polytope(hull, shape.chart)


# ---------------------------------------------------------------------------
# implicit plane curves


def _coeff_matrix(coeffs) -> np.ndarray:
    if isinstance(coeffs, np.ndarray):
        C = np.asarray(coeffs, dtype=float)
    else:
        entries = {}
        for key, c in dict(coeffs).items():
            if isinstance(key, str):
                i, j = (int(t) for t in key.split(","))
            else:
                i, j = key
            entries[(i, j)] = float(c)
        if not entries:
            raise NoComponentsError("empty polynomial")
        deg_x = max(i for i, _ in entries)
        deg_y = max(j for _, j in entries)
        C = np.zeros((deg_x + 1, deg_y + 1))
        for (i, j), c in entries.items():
            C[i, j] = c
    if not np.any(C):
        raise NoComponentsError("zero polynomial")
    return C


def _poly_der(C: np.ndarray, axis: int) -> np.ndarray:
    n = C.shape[axis]
    if n == 1:
        return np.zeros_like(C)
    k = np.arange(1, n)
    if axis == 0:
        return C[1:, :] * k[:, None]
    return C[:, 1:] * k[None, :]


def ingest_implicit_curve(coeffs, bbox, resolution: int) -> list:
    """Trace the zero set of a bivariate polynomial into closed loops.

    Marching squares on a ``resolution`` x ``resolution`` sign grid over the
    box, saddle cells disambiguated by the cell-center sign, each contour
    vertex sharpened by Newton projection along the gradient.  One Loop per
    connected component; deterministic traversal order.
    """
    from numpy.polynomial.polynomial import polyval2d

    if resolution < 16:
        raise ValueError("resolution must be at least 16")
    C = _coeff_matrix(coeffs)
    Cx = _poly_der(C, 0)
    Cy = _poly_der(C, 1)
    bb = np.asarray(bbox, dtype=float).reshape(-1)
    if bb.size != 4:
        raise SceneError("bbox must be [xmin, xmax, ymin, ymax]", "bbox")
    xmin, xmax, ymin, ymax = bb
    xs = np.linspace(xmin, xmax, resolution)
    ys = np.linspace(ymin, ymax, resolution)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    V = polyval2d(X, Y, C)
    V = np.where(V == 0.0, 1e-300, V)  # zeros count as positive, keeps crossings simple
    pos = V > 0.0

    R = resolution
    # edge node ids: horizontal (along x) 2*(i*R+j), vertical (along y) +1
    def h_id(i, j):
        return 2 * (i * R + j)

    def v_id(i, j):
        return 2 * (i * R + j) + 1

    cross_h = pos[:-1, :] != pos[1:, :]
    cross_v = pos[:, :-1] != pos[:, 1:]
    if not (cross_h.any() or cross_v.any()):
        raise NoComponentsError("no sign change on the sample grid")

    adjacency: dict[int, list[int]] = {}

    def link(a, b):
        adjacency.setdefault(a, []).append(b)
        adjacency.setdefault(b, []).append(a)

    center = polyval2d(
        0.25 * (X[:-1, :-1] + X[1:, :-1] + X[1:, 1:] + X[:-1, 1:]),
        0.25 * (Y[:-1, :-1] + Y[1:, :-1] + Y[1:, 1:] + Y[:-1, 1:]),
        C,
    ) > 0.0

    for i in range(R - 1):
        for j in range(R - 1):
            bottom = bool(cross_h[i, j])
            top = bool(cross_h[i, j + 1])
            left = bool(cross_v[i, j])
            right = bool(cross_v[i + 1, j])
            count = bottom + top + left + right
            if count == 0:
                continue
            e_bottom, e_top = h_id(i, j), h_id(i, j + 1)
            e_left, e_right = v_id(i, j), v_id(i + 1, j)
            if count == 2:
                nodes = [
                    e for e, c in [
                        (e_bottom, bottom), (e_right, right),
                        (e_top, top), (e_left, left),
                    ] if c
                ]
                link(nodes[0], nodes[1])
            else:
                # saddle: the center sign says which diagonal the contour separates
                if center[i, j] == pos[i, j]:
                    link(e_bottom, e_right)
                    link(e_top, e_left)
                else:
                    link(e_bottom, e_left)
                    link(e_top, e_right)

    for node, nbrs in adjacency.items():
        if len(nbrs) != 2:
            raise OpenComponentError(
                "a zero-set component touches the bounding box boundary"
            )

    def node_point(e: int) -> np.ndarray:
        kind = e & 1
        cell = e >> 1
        i, j = divmod(cell, R)
        if kind == 0:  # horizontal edge (i,j)-(i+1,j)
            v0, v1 = V[i, j], V[i + 1, j]
            t = v0 / (v0 - v1)
            return np.array([xs[i] + t * (xs[i + 1] - xs[i]), ys[j]])
        v0, v1 = V[i, j], V[i, j + 1]
        t = v0 / (v0 - v1)
        return np.array([xs[i], ys[j] + t * (ys[j + 1] - ys[j])])

    # walk closed cycles in deterministic order
    visited: set[int] = set()
    cycles: list[list[int]] = []
    for start in sorted(adjacency):
        if start in visited:
            continue
        cycle = [start]
        visited.add(start)
        prev, cur = None, start
        while True:
            nxt = [n for n in adjacency[cur] if n != prev]
            step = nxt[0] if nxt else adjacency[cur][0]
            if step == start:
                break
            cycle.append(step)
            visited.add(step)
            prev, cur = cur, step
        cycles.append(cycle)

    eps_curve = CURVE_TOL_FACTOR * float(np.hypot(xmax - xmin, ymax - ymin))
    diam = float(np.hypot(xmax - xmin, ymax - ymin))

    loops = []
    for cycle in cycles:
        pts = np.array([node_point(e) for e in cycle])
        pts = _newton_project(pts, C, Cx, Cy, eps_curve)
        keep = np.ones(len(pts), dtype=bool)
        for i in range(1, len(pts)):
            if np.linalg.norm(pts[i] - pts[i - 1]) < 1e-12 * diam:
                keep[i] = False
        if np.linalg.norm(pts[0] - pts[-1]) < 1e-12 * diam:
            keep[-1] = False
        pts = pts[keep]
        if pts.shape[0] < 3:
            continue
        if _signed_area(pts) < 0.0:
            pts = pts[::-1]
        start = int(np.lexsort((pts[:, 1], pts[:, 0]))[0])
        pts = np.roll(pts, -start, axis=0)
        loops.append(Loop(pts))
    loops.sort(key=lambda lp: tuple(lp.vertices[0]))
    return loops


def _newton_project(pts: np.ndarray, C, Cx, Cy, eps_curve: float) -> np.ndarray:
    """One Newton step along the gradient for all vertices, plus up to two
    extra steps for stragglers above the curve tolerance."""
    from numpy.polynomial.polynomial import polyval2d

    pts = pts.copy()
    for attempt in range(3):
        f = polyval2d(pts[:, 0], pts[:, 1], C)
        if attempt > 0:
            active = np.abs(f) > eps_curve
            if not active.any():
                break
        else:
            active = np.ones(len(pts), dtype=bool)
        gx = polyval2d(pts[active, 0], pts[active, 1], Cx)
        gy = polyval2d(pts[active, 0], pts[active, 1], Cy)
        g2 = gx * gx + gy * gy
        scale = np.where(g2 > 1e-300, f[active] / np.maximum(g2, 1e-300), 0.0)
        pts[active, 0] -= scale * gx
        pts[active, 1] -= scale * gy
    return pts


def _signed_area(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def loop_signed_area(loop: Loop) -> float:
    return _signed_area(loop.vertices)
