import numpy as np
import pytest

from multitangent.errors import (
    NoComponentsError,
    NotTouchingError,
    OpenComponentError,
    SceneError,
)
from multitangent.projective import ProjHyperplane, SideKind
from multitangent.shapes import (
    Ball,
    Circle,
    Loop,
    Region,
    Scene,
    contact_points,
    convex_hull,
    graham_hull,
    ingest_implicit_curve,
    loop_signed_area,
    meets,
    pack_shapes,
    side,
)

UNIT = Circle([0.0, 0.0], 1.0)
LINE_Y0 = ProjHyperplane([0.0, 0.0, 1.0])
LINE_Y1 = ProjHyperplane([-1.0, 0.0, 1.0])
LINE_Y2 = ProjHyperplane([-2.0, 0.0, 1.0])

TROTT = {"4,0": 144.0, "0,4": 144.0, "2,0": -225.0, "0,2": -225.0, "2,2": 350.0, "0,0": 81.0}
CIRC = {"2,0": 1.0, "0,2": 1.0, "0,0": -1.0}


class TestMeetsAndSide:
    def test_line_above_misses(self):
        assert not meets(UNIT, LINE_Y2, 1e-9)

    def test_line_through_center_meets(self):
        assert meets(UNIT, LINE_Y0, 1e-9)

    def test_tangent_meets_within_tolerance(self):
        assert meets(UNIT, LINE_Y1, 1e-9)

    def test_side_strict(self):
        # covector (-2, 0, 1) normalizes with positive leading entry: circle below
        assert side(UNIT, LINE_Y2, 1e-9).kind in (SideKind.STRICT_PLUS, SideKind.STRICT_MINUS)
        assert not meets(UNIT, LINE_Y2, 1e-9)

    def test_side_touch_with_witness(self):
        cls = side(UNIT, LINE_Y1, 1e-9)
        assert cls.kind.touching
        assert any(np.allclose(w, [0.0, 1.0], atol=1e-12) for w in cls.witnesses)

    def test_side_cut_with_opposite_witnesses(self):
        cls = side(UNIT, LINE_Y0, 1e-9)
        assert cls.kind is SideKind.CUT
        ws = np.array(cls.witnesses)
        assert np.allclose(sorted(ws[:, 1]), [-1.0, 1.0], atol=1e-12)

    def test_meets_iff_side_not_strict(self, rng):
        shapes = [UNIT, Loop(rng.uniform(-2, 2, (12, 2)))]
        for _ in range(300):
            lam = rng.standard_normal(3)
            H = ProjHyperplane(lam)
            for s in shapes:
                kind = side(s, H, 1e-9).kind
                expected = kind not in (SideKind.STRICT_PLUS, SideKind.STRICT_MINUS)
                assert meets(s, H, 1e-9) == expected

    def test_infinity_hyperplane_handled_projectively(self):
        H = ProjHyperplane([1.0, 0.0, 0.0])  # the standard chart's infinity
        assert not meets(UNIT, H, 1e-9)
        assert not side(UNIT, H, 1e-9).kind.touching


class TestContacts:
    def test_circle_tangent_foot(self):
        pts = contact_points(UNIT, LINE_Y1, 1e-9)
        assert len(pts) == 1
        assert np.allclose(pts[0], [0.0, 1.0], atol=1e-12)

    def test_square_edge_two_clusters(self):
        square = Loop([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
        edge = ProjHyperplane([-1.0, 1.0, 0.0])  # x = 1
        pts = contact_points(square, edge, 1e-9)
        assert len(pts) == 2
        assert np.allclose(pts[0], [1.0, 0.0]) and np.allclose(pts[1], [1.0, 1.0])

    def test_not_touching_raises(self):
        with pytest.raises(NotTouchingError):
            contact_points(UNIT, LINE_Y0, 1e-9)


class TestHulls:
    def test_square_is_its_own_hull(self):
        square = Loop([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
        hull = convex_hull(square)
        assert hull.vertices.shape == (4, 2)
        assert {tuple(v) for v in hull.vertices} == {(0, 0), (1, 0), (1, 1), (0, 1)}

    def test_dent_removed(self):
        dented = Loop([[0, 0], [2, 0], [2, 2], [1, 0.5], [0, 2]])
        hull = convex_hull(dented)
        assert (1.0, 0.5) not in {tuple(v) for v in hull.vertices}
        assert hull.vertices.shape[0] == 4

    def test_circle_hull_hausdorff_bound(self):
        # inscribed regular 64-gon: worst-case gap is the sagitta 1 - cos(pi/64)
        hull = convex_hull(UNIT, points=64)
        assert hull.approximate
        assert hull.vertices.shape[0] == 64
        bound = 1.0 - np.cos(np.pi / 64)
        # every polygon vertex is on the circle; edge midpoints realize the bound
        mids = 0.5 * (hull.vertices + np.roll(hull.vertices, -1, axis=0))
        gaps = 1.0 - np.linalg.norm(mids, axis=1)
        assert gaps.max() <= bound + 1e-12
        assert gaps.max() >= bound - 1e-6

    def test_hull_vertices_subset_of_input(self, rng):
        pts = rng.uniform(-3, 3, (50, 2))
        hull = graham_hull(pts)
        pool = {tuple(p) for p in pts}
        assert all(tuple(v) in pool for v in hull)

    def test_hull_monotonicity(self, rng):
        for _ in range(100):
            pts = rng.uniform(-2, 2, (15, 2))
            if np.unique(pts, axis=0).shape[0] < 3:
                continue
            loop = Loop(pts)
            hull = convex_hull(loop)
            lam = rng.standard_normal(3)
            H = ProjHyperplane(lam)
            hull_kind = side(hull, H, 1e-9).kind
            if hull_kind is SideKind.STRICT_PLUS:
                assert side(loop, H, 1e-9).kind is SideKind.STRICT_PLUS
            if hull_kind is SideKind.STRICT_MINUS:
                assert side(loop, H, 1e-9).kind is SideKind.STRICT_MINUS


class TestIngest:
    def test_unit_circle_single_loop(self):
        loops = ingest_implicit_curve(CIRC, [-2, 2, -2, 2], 256)
        assert len(loops) == 1
        radius_err = np.abs(np.linalg.norm(loops[0].vertices, axis=1) - 1.0)
        assert radius_err.max() < 1e-3

    def test_trott_component_count_matches_sign_grid(self):
        # independent oracle: count connected components of the negative region
        from numpy.polynomial.polynomial import polyval2d

        res = 512
        xs = np.linspace(-1.5, 1.5, res)
        C = np.zeros((5, 5))
        for key, c in TROTT.items():
            i, j = (int(t) for t in key.split(","))
            C[i, j] = c
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        neg = polyval2d(X, Y, C) < 0
        labels = np.zeros_like(neg, dtype=int)
        current = 0
        for i0 in range(res):
            for j0 in range(res):
                if neg[i0, j0] and labels[i0, j0] == 0:
                    current += 1
                    stack = [(i0, j0)]
                    labels[i0, j0] = current
                    while stack:
                        a, b = stack.pop()
                        for da, db in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                            na, nb = a + da, b + db
                            if 0 <= na < res and 0 <= nb < res and neg[na, nb] and labels[na, nb] == 0:
                                labels[na, nb] = current
                                stack.append((na, nb))
        loops = ingest_implicit_curve(TROTT, [-1.5, 1.5, -1.5, 1.5], res)
        assert len(loops) == current == 4

    def test_empty_locus_raises(self):
        with pytest.raises(NoComponentsError):
            ingest_implicit_curve({"2,0": 1.0, "0,2": 1.0, "0,0": 1.0}, [-2, 2, -2, 2], 64)

    def test_open_component_raises(self):
        with pytest.raises(OpenComponentError):
            ingest_implicit_curve({"1,0": 1.0}, [-2, 2, -2, 2], 64)

    def test_vertices_on_curve_after_projection(self):
        from numpy.polynomial.polynomial import polyval2d

        C = np.zeros((5, 5))
        for key, c in TROTT.items():
            i, j = (int(t) for t in key.split(","))
            C[i, j] = c
        eps_curve = 1e-6 * np.hypot(3.0, 3.0)
        for loop in ingest_implicit_curve(TROTT, [-1.5, 1.5, -1.5, 1.5], 512):
            vals = polyval2d(loop.vertices[:, 0], loop.vertices[:, 1], C)
            assert np.abs(vals).max() <= eps_curve

    def test_deterministic(self):
        a = ingest_implicit_curve(TROTT, [-1.5, 1.5, -1.5, 1.5], 128)
        b = ingest_implicit_curve(TROTT, [-1.5, 1.5, -1.5, 1.5], 128)
        assert len(a) == len(b)
        for la, lb in zip(a, b):
            assert np.array_equal(la.vertices, lb.vertices)

    def test_winding_consistency(self):
        for loop in ingest_implicit_curve(TROTT, [-1.5, 1.5, -1.5, 1.5], 256):
            assert loop_signed_area(loop) > 0.0


class TestValidation:
    def test_loop_needs_three_vertices(self):
        with pytest.raises(SceneError):
            Loop([[0, 0], [1, 1]])

    def test_loop_rejects_explicit_closure(self):
        with pytest.raises(SceneError):
            Loop([[0, 0], [1, 0], [1, 1], [0, 0]])

    def test_scene_count_must_match_dimension(self):
        with pytest.raises(SceneError):
            Scene(2, (UNIT,), "just one")

    def test_positive_radius(self):
        with pytest.raises(SceneError):
            Circle([0, 0], -1.0)

    def test_mixed_charts_rejected_in_packing(self):
        from multitangent.projective import AffineChart, ProjHyperplane as PH

        other = AffineChart.from_infinity(PH([0.0, 0.0, 1.0]))
        with pytest.raises(SceneError):
            pack_shapes([UNIT, Circle([1.0, 1.0], 1.0, chart=other)])


def test_region_delegates_to_boundary(rng):
    square = Loop([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    region = Region(square, filled=True)
    for _ in range(100):
        H = ProjHyperplane(rng.standard_normal(3))
        assert meets(region, H, 1e-9) == meets(square, H, 1e-9)
        assert side(region, H, 1e-9).kind == side(square, H, 1e-9).kind


def test_ball_shapes_various_dimensions():
    seg = Ball([0.5], 0.5)
    assert meets(seg, ProjHyperplane([0.0, 1.0]), 1e-9)       # the point x = 0
    assert not meets(seg, ProjHyperplane([2.0, 1.0]), 1e-9)   # the point x = -2
    b3 = Ball([0.0, 0.0, 0.0], 1.0)
    assert meets(b3, ProjHyperplane([-1.0, 0.0, 0.0, 1.0]), 1e-9)   # z = 1 tangent
    assert not meets(b3, ProjHyperplane([-2.0, 0.0, 0.0, 1.0]), 1e-9)
