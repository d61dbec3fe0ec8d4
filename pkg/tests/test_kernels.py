import numpy as np
import pytest

from multitangent import kernels
from multitangent._kernels_py import value_ranges_into as py_ranges
from multitangent.projective import ProjHyperplane
from multitangent.shapes import Ball, Circle, Loop, meets, pack_shapes, signed_values

try:
    from multitangent._kernels_cy import value_ranges_into as cy_ranges

    HAVE_COMPILED = True
except ImportError:
    HAVE_COMPILED = False


def _random_packed(rng, dim=2, polys=2, balls=2):
    shapes = []
    for _ in range(balls):
        shapes.append(Ball(rng.uniform(-3, 3, dim), float(rng.uniform(0.2, 2.0))))
    for _ in range(polys):
        pts = rng.uniform(-4, 4, (int(rng.integers(3, 40)), dim))
        if dim == 2 and np.unique(pts, axis=0).shape[0] >= 3:
            shapes.append(Loop(np.unique(pts, axis=0)))
    return pack_shapes(shapes)


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernel unavailable")
def test_backends_agree_bitwise(rng):
    for dim in (1, 2, 3):
        packed = _random_packed(rng, dim=dim, polys=2 if dim == 2 else 0)
        covectors = rng.standard_normal((500, dim + 1))
        forms = np.ascontiguousarray(covectors @ packed.frame.T)
        S = packed.count
        out = [np.empty((500, S)) for _ in range(4)]
        py_ranges(forms, packed.kinds, packed.ball_center, packed.ball_radius,
                  packed.poly_offsets, packed.poly_vertices, out[0], out[1])
        cy_ranges(forms, packed.kinds, packed.ball_center, packed.ball_radius,
                  packed.poly_offsets, packed.poly_vertices, out[2], out[3])
        assert np.allclose(out[0], out[2], rtol=1e-14, atol=1e-14, equal_nan=True)
        assert np.allclose(out[1], out[3], rtol=1e-14, atol=1e-14, equal_nan=True)


def test_degenerate_row_gets_signed_infinity():
    packed = pack_shapes([Circle([0.0, 0.0], 1.0)])
    # the chart's infinity hyperplane: a = 0, c0 = 1
    vmin, vmax = kernels.value_ranges(packed, np.array([[1.0, 0.0, 0.0]]))
    assert vmin[0, 0] == np.inf and vmax[0, 0] == np.inf
    vmin, vmax = kernels.value_ranges(packed, np.array([[-1.0, 0.0, 0.0]]))
    assert vmin[0, 0] == -np.inf


def test_clearance_matches_meets(rng):
    shapes = [
        Circle([0.0, 0.0], 1.0),
        Loop(np.array([[2.0, -1.0], [3.0, -1.0], [3.0, 1.0], [2.0, 1.0]])),
    ]
    packed = pack_shapes(shapes)
    for _ in range(500):
        lam = rng.standard_normal(3)
        clear = kernels.clearances(packed, lam[None, :])[0]
        H = ProjHyperplane(lam)
        for s, c in zip(shapes, clear):
            assert meets(s, H, 0.0) == (c <= 0.0)


def test_clearance_sign_and_scale_invariant(rng):
    packed = _random_packed(rng)
    lam = rng.standard_normal((50, 3))
    base = kernels.clearances(packed, lam)
    assert np.allclose(kernels.clearances(packed, -lam), base, rtol=1e-12, atol=1e-12)
    assert np.allclose(kernels.clearances(packed, 7.3 * lam), base, rtol=1e-12, atol=1e-12)


def test_threaded_evaluation_matches(rng, monkeypatch):
    packed = _random_packed(rng)
    covectors = rng.standard_normal((20_000, 3))
    base = kernels.value_ranges(packed, covectors)
    monkeypatch.setenv("MULTITANGENT_THREADS", "4")
    threaded = kernels.value_ranges(packed, covectors)
    assert np.array_equal(base[0], threaded[0])
    assert np.array_equal(base[1], threaded[1])


def test_single_shape_path_matches_batch(rng):
    from multitangent.projective import normalize

    shapes = [Ball(rng.uniform(-2, 2, 3), 1.3), Ball(rng.uniform(-2, 2, 3), 0.4)]
    packed = pack_shapes(shapes)
    for _ in range(100):
        lam = normalize(rng.standard_normal(4))  # ranges flip with covector sign
        vmin, vmax = kernels.value_ranges(packed, lam[None, :])
        for i, s in enumerate(shapes):
            v = signed_values(s, ProjHyperplane(lam))
            assert abs(v.vmin - vmin[0, i]) < 1e-9
            assert abs(v.vmax - vmax[0, i]) < 1e-9
