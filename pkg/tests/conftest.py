"""Shared test helpers: independent closed-form constructions and scene makers.

The closed forms here are written against the raw geometry, independent of
the package's own tangent construction, so they can serve as ground truth.
"""

from __future__ import annotations

import numpy as np
import pytest

from multitangent.projective import normalize
from multitangent.shapes import Circle, Loop, Scene


def two_circle_tangent_lines(c1, r1, c2, r2):
    """All common tangent lines of two circles as normalized covectors.

    Solved from scratch: a line with unit normal m and offset e is tangent
    with side signs (s1, s2) when m.c_i - e = s_i r_i; eliminating e gives
    m.(c2 - c1) = s2 r2 - s1 r1, a circle-line intersection for m.
    """
    c1 = np.asarray(c1, float)
    c2 = np.asarray(c2, float)
    delta = c2 - c1
    d = float(np.linalg.norm(delta))
    if d == 0.0:
        return []
    u = delta / d
    perp = np.array([-u[1], u[0]])
    out = []
    for s1, s2 in ((1.0, 1.0), (1.0, -1.0)):
        kappa = (s2 * r2 - s1 * r1) / d
        if abs(kappa) > 1.0:
            continue
        t = np.sqrt(max(0.0, 1.0 - kappa * kappa))
        for sgn in (1.0, -1.0):
            m = kappa * u + sgn * t * perp
            e = float(m @ c1) - s1 * r1
            out.append(normalize(np.array([-e, m[0], m[1]])))
            if t == 0.0:
                break
    uniq = []
    for lam in out:
        if not any(np.allclose(lam, q) for q in uniq):
            uniq.append(lam)
    return uniq


def three_ball_tangent_planes(centers, radius):
    """The common tangent planes of three equal balls with non-collinear
    centers, as normalized covectors; solved from the linear system
    u.(c1 - cj) = s1 - sj plus |u| = 1."""
    centers = np.asarray(centers, float)
    planes = []
    for signs in [(1, 1, 1), (1, 1, -1), (1, -1, 1), (-1, 1, 1)]:
        s = np.array(signs, float) * radius
        A = np.array([centers[0] - centers[1], centers[0] - centers[2]])
        b = np.array([s[0] - s[1], s[0] - s[2]])
        particular, *_ = np.linalg.lstsq(A, b, rcond=None)
        nrm = np.cross(A[0], A[1])
        nrm = nrm / np.linalg.norm(nrm)
        t2 = 1.0 - float(particular @ particular)
        if t2 <= 0.0:
            continue
        for t in (np.sqrt(t2), -np.sqrt(t2)):
            u = particular + t * nrm
            d = float(u @ centers[0]) - s[0]
            planes.append(normalize(np.concatenate([[-d], u])))
    return planes


def star_loop(rng, vertices=40, center=(0.0, 0.0), scale=1.0):
    """Random star-shaped closed polyline: connected, simple by construction."""
    k = rng.integers(2, 6)
    phase = rng.uniform(0, 2 * np.pi, size=k)
    amp = rng.uniform(0.05, 0.25, size=k) / np.arange(1, k + 1)
    t = np.arange(vertices) * (2 * np.pi / vertices)
    r = 1.0 + sum(a * np.cos(m * t + p) for m, (a, p) in enumerate(zip(amp, phase), start=1))
    r = np.maximum(r, 0.2) * scale
    pts = np.stack([r * np.cos(t), r * np.sin(t)], axis=1) + np.asarray(center, float)
    return Loop(pts)


def disjoint_circle_scene(rng):
    """Two random circles with disjoint hulls and a wide gap."""
    r1 = float(rng.uniform(0.5, 1.5))
    r2 = float(rng.uniform(0.5, 1.5))
    gap = float(rng.uniform(1.0, 3.0))
    angle = float(rng.uniform(0, 2 * np.pi))
    d = r1 + r2 + gap
    c1 = rng.uniform(-1, 1, 2)
    c2 = c1 + d * np.array([np.cos(angle), np.sin(angle)])
    return Scene(2, (Circle(c1, r1), Circle(c2, r2)), "random disjoint circles")


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)
