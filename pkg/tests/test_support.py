import numpy as np
import pytest

from conftest import disjoint_circle_scene, star_loop, two_circle_tangent_lines
from multitangent.condition import search_condition_point
from multitangent.dualregion import DualRegionSample, GridSpec
from multitangent.errors import (
    NoContactError,
    NotSupportingError,
    RefinementDivergedError,
)
from multitangent.projective import (
    AffineChart,
    ProjHyperplane,
    ProjPoint,
    angular_distance,
    dualize_point,
    normalize,
)
from multitangent.sceneio import load_bundled_scene
from multitangent.shapes import Loop, Scene, convex_hull, meets
from multitangent.support import (
    calipers_tangents,
    count_supports,
    dedup_certificates,
    extreme_points,
    find_supports,
    refine_support,
    self_bitangents,
    verify_support,
)

TWO_CIRCLE_EXPECTED = two_circle_tangent_lines([0, 0], 1.0, [4, 0], 1.0)


def _match_sets(certs, expected, tol=1e-4):
    assert len(certs) == len(expected)
    for cert in certs:
        best = min(angular_distance(cert.hyperplane.covector, e) for e in expected)
        assert best < tol, best


@pytest.fixture(scope="module")
def two_circles():
    return load_bundled_scene("two_circles")


def _dummy_sample(members: np.ndarray) -> DualRegionSample:
    n = members.shape[1]
    chart = AffineChart.from_infinity(dualize_point(ProjPoint([1.0] + [0.0] * n)))
    return DualRegionSample(
        ProjPoint([1.0] + [0.0] * n),
        chart,
        GridSpec(4.0, 64),
        members,
        np.zeros(members.shape[0], dtype=bool),
        0.1,
        np.zeros(members.shape[0]),
    )


class TestExtremePoints:
    def test_square_corners_not_center(self):
        members = np.array(
            [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [0.5, 0.5]]
        )
        result = extreme_points(_dummy_sample(members))
        assert not result.low_dimensional
        assert result.points.shape[0] == 4
        assert (0.5, 0.5) not in {tuple(p) for p in result.points}

    def test_collinear_flagged_low_dimensional(self):
        members = np.array([[float(k), float(k)] for k in range(5)])
        result = extreme_points(_dummy_sample(members))
        assert result.low_dimensional
        assert result.points.shape[0] == 5

    def test_lexicographic_order(self):
        members = np.array([[1.0, 1.0], [0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        result = extreme_points(_dummy_sample(members))
        assert np.array_equal(
            result.points, np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
        )


class TestVerifySupport:
    def test_outer_tangent_certificate(self, two_circles):
        cert = verify_support(two_circles, ProjHyperplane([-1.0, 0.0, 1.0]), 1e-9)
        assert all(s.kind.touching for s in cert.sides)
        assert cert.residual < 1e-12
        assert np.allclose(cert.contacts[0], [0.0, 1.0], atol=1e-12)
        assert np.allclose(cert.contacts[1], [4.0, 1.0], atol=1e-12)

    def test_crossing_line_not_supporting(self, two_circles):
        with pytest.raises(NotSupportingError):
            verify_support(two_circles, ProjHyperplane([0.0, 0.0, 1.0]), 1e-9)

    def test_near_miss_no_contact(self, two_circles):
        with pytest.raises(NoContactError):
            verify_support(two_circles, ProjHyperplane([-1.1, 0.0, 1.0]), 1e-9)


class TestRefinement:
    def test_perturbed_outer_tangent_recovers(self, two_circles):
        H0 = ProjHyperplane([-1.02, 0.013, 1.0])
        cert = refine_support(two_circles, H0)
        target = normalize(np.array([-1.0, 0.0, 1.0]))
        assert angular_distance(cert.hyperplane.covector, target) < 1e-4
        assert cert.residual < 2e-4

    def test_perturbed_inner_tangent_recovers(self, two_circles):
        target = normalize(np.array([-2.0, 1.0, -np.sqrt(3.0)]))
        H0 = ProjHyperplane(target + np.array([0.01, -0.02, 0.015]))
        cert = refine_support(two_circles, H0)
        assert angular_distance(cert.hyperplane.covector, target) < 1e-4

    def test_three_ball_plane_recovers(self):
        scene = load_bundled_scene("three_balls")
        H0 = ProjHyperplane([-0.98, 0.02, -0.01, 1.0])
        cert = refine_support(scene, H0)
        target = normalize(np.array([-1.0, 0.0, 0.0, 1.0]))
        assert angular_distance(cert.hyperplane.covector, target) < 1e-4
        for contact, shape in zip(cert.contacts, scene.shapes):
            expected = np.asarray(shape.center) + [0.0, 0.0, 1.0]
            assert np.allclose(contact, expected, atol=1e-3)  # touch points above each center

    def test_no_common_tangent_diverges(self):
        nested = load_bundled_scene("nested")  # no line supports both circles
        with pytest.raises(RefinementDivergedError) as info:
            refine_support(nested, ProjHyperplane([-2.0, 0.0, 1.0]), max_iter=120)
        assert info.value.best_residual > 0.0


class TestExtremalToSupport:
    def test_every_extreme_point_refines(self, two_circles):
        from multitangent.dualregion import sample_dual_region

        p = two_circles.chart.lift([2.0, 6.0])
        for res in (64, 128):
            sample = sample_dual_region(two_circles, p, res, 2.0)
            ext = extreme_points(sample)
            for lam in sample.covectors(ext.points):
                cert = refine_support(two_circles, ProjHyperplane(lam))
                assert cert.residual < 2e-4


class TestCalipers:
    def test_two_circles_exact(self, two_circles):
        result = calipers_tangents(*two_circles.shapes)
        assert not result.nested
        _match_sets(list(result.certificates), TWO_CIRCLE_EXPECTED, tol=1e-9)
        for cert in result.certificates:
            assert cert.residual < 1e-12
            assert cert.backend == "Calipers"

    def test_overlapping_circles_two_outer(self):
        scene = load_bundled_scene("intersecting")
        result = calipers_tangents(*scene.shapes)
        expected = two_circle_tangent_lines([0, 0], 1.0, [1, 0], 1.0)
        assert len(expected) == 2
        _match_sets(list(result.certificates), expected, tol=1e-9)

    def test_concentric_nested(self):
        scene = load_bundled_scene("nested")
        result = calipers_tangents(*scene.shapes)
        assert result.nested
        assert result.certificates == ()

    def test_polygon_pair_square_tangents(self):
        a = Loop([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
        b = Loop([[3.0, 0.0], [4.0, 0.0], [4.0, 1.0], [3.0, 1.0]])
        result = calipers_tangents(a, b)
        assert len(result.certificates) == 4
        covs = [c.hyperplane.covector for c in result.certificates]
        # the two horizontal common tangents y = 0 and y = 1 must be present
        for target in (np.array([0.0, 0.0, 1.0]), normalize(np.array([-1.0, 0.0, 1.0]))):
            assert min(angular_distance(c, target) for c in covs) < 1e-9


class TestFindSupports:
    def test_auto_two_circles(self, two_circles):
        certs = find_supports(two_circles, "auto")
        _match_sets(certs, TWO_CIRCLE_EXPECTED, tol=1e-9)

    def test_dual_two_circles_matches_closed_form(self, two_circles):
        certs = find_supports(two_circles, "dual")
        _match_sets(certs, TWO_CIRCLE_EXPECTED, tol=1e-4)

    def test_trott_pair(self):
        from multitangent.sceneio import bundled_scene_path, load_scene_dict, expanded_shapes

        data = load_scene_dict(bundled_scene_path("trott"))
        ovals = expanded_shapes(data)
        scene = Scene(2, (ovals[0], ovals[1]), "trott pair 0,1")
        certs = find_supports(scene, "auto")
        assert len(certs) == 4

    def test_backend_agreement_random_disjoint_circles(self, rng):
        for _ in range(5):
            scene = disjoint_circle_scene(rng)
            cal = find_supports(scene, "calipers")
            if search_condition_point(scene) is None:
                continue
            dual = find_supports(scene, "dual")
            assert len(cal) == len(dual) == 4
            for c in dual:
                best = min(
                    angular_distance(c.hyperplane.covector, k.hyperplane.covector)
                    for k in cal
                )
                assert best < 1e-4

    def test_segment_scene_endpoints(self):
        scene = load_bundled_scene("segment_1d")
        certs = find_supports(scene, "dual")
        assert len(certs) == 2
        ts = sorted(-c.hyperplane.covector[0] / c.hyperplane.covector[1] for c in certs)
        assert abs(ts[0] - 0.0) < 1e-4 and abs(ts[1] - 1.0) < 1e-4


class TestDegenerateTangency:
    def test_externally_touching_circles_three_lines(self):
        from multitangent.shapes import Circle

        result = calipers_tangents(Circle([0.0, 0.0], 1.0), Circle([2.0, 0.0], 1.0))
        assert len(result.certificates) == 3
        assert result.touching

    def test_internally_tangent_circles_one_line(self):
        from multitangent.shapes import Circle

        result = calipers_tangents(Circle([0.0, 0.0], 1.0), Circle([1.0, 0.0], 2.0))
        assert len(result.certificates) == 1
        assert result.touching and not result.nested

    def test_calipers_refuses_space_scenes(self):
        from multitangent.errors import UnsupportedDimensionError
        from multitangent.shapes import Ball

        with pytest.raises(UnsupportedDimensionError):
            calipers_tangents(Ball([0, 0, 0], 1.0), Ball([4, 0, 0], 1.0))


class TestRegionScenes:
    def test_circle_and_filled_region_full_pipeline(self):
        from multitangent.shapes import Circle, Region

        t = np.linspace(0, 2 * np.pi, 48, endpoint=False)
        blob = Region(Loop(np.stack([4 + 0.8 * np.cos(t), 0.8 * np.sin(t)], axis=1)))
        scene = Scene(2, (Circle([0.0, 0.0], 1.0), blob), "circle and region")
        result = count_supports(scene)
        assert result.count == 4
        assert sorted(result.histogram) == ["++", "+-", "-+", "--"]
        assert result.count >= scene.n + 1  # full-dimensional shapes


class TestDedupAndCount:
    def test_dedup_keeps_lowest_residual(self, two_circles):
        a = verify_support(two_circles, ProjHyperplane([-1.0, 0.0, 1.0]), 1e-9)
        b = refine_support(two_circles, ProjHyperplane([-1.00001, 0.000004, 1.0]))
        kept = dedup_certificates([b, a])
        assert len(kept) == 1
        assert kept[0].residual == a.residual

    def test_count_two_circles_histogram(self, two_circles):
        result = count_supports(two_circles)
        assert result.count == 4
        assert not result.continuum_family
        assert sorted(result.histogram) == ["++", "+-", "-+", "--"]
        assert all(v == 1 for v in result.histogram.values())

    def test_count_collinear_spheres_family(self):
        scene = load_bundled_scene("collinear_spheres")
        result = count_supports(scene)
        assert result.fallback  # the dual pipeline cannot run here
        assert result.continuum_family
        assert result.count >= 32


class TestSelfBitangents:
    def test_dented_loop_has_one_bridge(self):
        t = np.linspace(0, 2 * np.pi, 60, endpoint=False)
        r = 1.0 - 0.35 * np.exp(-8.0 * (np.cos(t) - 1.0) ** 2 * 0 - 8.0 * (t - np.pi) ** 2)
        loop = Loop(np.stack([r * np.cos(t), r * np.sin(t)], axis=1))
        lines = self_bitangents(loop)
        assert len(lines) == 1
        line = lines[0]
        assert len(line.contacts) >= 2
        assert line.residual < 1e-9

    def test_convex_loop_has_none(self):
        t = np.linspace(0, 2 * np.pi, 40, endpoint=False)
        loop = Loop(np.stack([np.cos(t), np.sin(t)], axis=1))
        assert self_bitangents(loop) == []


class TestHullSupportEquivalence:
    def test_random_loops(self, rng):
        for _ in range(100):
            loop_a = star_loop(rng, center=(0.0, 0.0))
            loop_b = star_loop(rng, center=(4.0, 0.0))
            scene = Scene(2, (loop_a, loop_b), "loops")
            hull_scene = Scene(
                2, (convex_hull(loop_a), convex_hull(loop_b)), "hulls"
            )
            lam = rng.standard_normal(3)
            H = ProjHyperplane(lam)
            ok_orig = ok_hull = True
            try:
                cert = verify_support(scene, H, 1e-6)
            except (NoContactError, NotSupportingError):
                ok_orig = False
            try:
                verify_support(hull_scene, H, 1e-6)
            except (NoContactError, NotSupportingError):
                ok_hull = False
            assert ok_orig == ok_hull
            if ok_orig:
                for contact, shape in zip(cert.contacts, scene.shapes):
                    assert any(
                        np.allclose(contact, v) for v in shape.vertices
                    )

    def test_tangent_lines_also_agree(self, rng):
        # exercise the touching branch explicitly via hull edges
        for _ in range(50):
            loop = star_loop(rng)
            hull = convex_hull(loop)
            k = int(rng.integers(0, hull.vertices.shape[0]))
            a = hull.vertices[k]
            b = hull.vertices[(k + 1) % hull.vertices.shape[0]]
            t = b - a
            nrm = np.array([-t[1], t[0]]) / np.linalg.norm(t)
            lam = np.array([-(nrm @ a), nrm[0], nrm[1]])
            H = ProjHyperplane(lam)
            from multitangent.shapes import side

            assert side(loop, H, 1e-9).kind.touching
            assert side(hull, H, 1e-9).kind.touching


class TestSegmentTransversal:
    def test_lines_meeting_inner_segment_meet_loop(self, rng):
        # if a hyperplane separates two points of a connected loop, every
        # hyperplane through the segment between them also meets the loop
        for _ in range(100):
            loop = star_loop(rng, vertices=48)
            verts = loop.vertices
            lam = rng.standard_normal(3)
            vals = lam[0] + verts @ lam[1:]
            if vals.min() > -1e-6 or vals.max() < 1e-6:
                continue
            x1 = verts[int(np.argmin(vals))]
            x2 = verts[int(np.argmax(vals))]
            for _ in range(100):
                t = rng.uniform(0.05, 0.95)
                y = x1 + t * (x2 - x1)
                angle = rng.uniform(0, np.pi)
                direction = np.array([np.cos(angle), np.sin(angle)])
                nrm = np.array([-direction[1], direction[0]])
                line = ProjHyperplane(np.array([-(nrm @ y), nrm[0], nrm[1]]))
                assert meets(loop, line, 1e-9)


class TestProjectiveEquivariance:
    def test_certificates_transform_contravariantly(self, rng):
        for _ in range(20):
            loop_a = star_loop(rng, center=(0.0, 0.0))
            loop_b = star_loop(rng, center=(4.0, 0.0))
            scene = Scene(2, (loop_a, loop_b), "loops")
            base = find_supports(scene, "calipers")
            if not base:
                continue
            T = np.eye(3) + 0.05 * rng.standard_normal((3, 3))
            if abs(np.linalg.det(T)) < 0.5:
                continue

            def transform(loop):
                lifted = np.concatenate(
                    [np.ones((loop.vertices.shape[0], 1)), loop.vertices], axis=1
                )
                image = lifted @ T.T
                return Loop(image[:, 1:] / image[:, :1])

            scene_t = Scene(2, (transform(loop_a), transform(loop_b)), "transformed")
            mapped = find_supports(scene_t, "calipers")
            assert len(mapped) == len(base)
            expected = [normalize(np.linalg.solve(T.T, c.hyperplane.covector)) for c in base]
            for cert in mapped:
                best = min(
                    angular_distance(cert.hyperplane.covector, e) for e in expected
                )
                assert best < 1e-4
