"""Homogeneous-coordinate primitives for RP^n and its dual.

Points and hyperplanes are nonzero (n+1)-vectors up to scale.  Construction
canonicalizes to the unit-norm representative with positive first nonzero
coordinate; the canonical form is used for hashing and deduplication only,
while geometric predicates work on raw incidence values (the canonical form
is discontinuous across sign flips).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from .defaults import EPS_INCIDENCE, RANK_TOL
from .errors import AtInfinityError, ZeroVectorError


def _sign_fixed(u: np.ndarray) -> np.ndarray:
    """First nonzero coordinate positive; negative zeros cleared (hash safety)."""
    for x in u:
        if x != 0.0:
            if x < 0.0:
                u = -u
            break
    return u + 0.0


# A computed unit vector's recomputed norm sits within a few ulps of one;
# skipping the division inside this band makes normalization exactly
# idempotent (dividing again would otherwise drift by an ulp per call).
_UNIT_BAND = 64 * np.finfo(float).eps


def normalize(v) -> np.ndarray:
    """Canonical representative: unit norm, first nonzero coordinate positive."""
    u = np.array(v, dtype=float)
    if u.ndim != 1 or u.size < 2:
        raise ZeroVectorError("expected a 1-d homogeneous vector of length >= 2")
    if not np.all(np.isfinite(u)):
        raise ZeroVectorError("homogeneous coordinates must be finite")
    if not np.any(u):
        raise ZeroVectorError("the zero vector has no projective class")
    n = float(np.linalg.norm(u))
    if abs(n - 1.0) > _UNIT_BAND:
        u = u / n
    u = _sign_fixed(u)
    u.setflags(write=False)
    return u


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """Point of RP^n, stored as its canonical homogeneous representative."""

    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", normalize(self.coords))

    @property
    def dim(self) -> int:
        return self.coords.size - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, ProjPoint) and np.array_equal(self.coords, other.coords)

    def __hash__(self) -> int:
        return hash(self.coords.tobytes())

    def __repr__(self) -> str:
        inner = ":".join(f"{x:g}" for x in self.coords)
        return f"ProjPoint({inner})"


@dataclass(frozen=True, eq=False)
class ProjHyperplane:
    """Hyperplane of RP^n given by covector coefficients of sum(l_k x_k) = 0."""

    covector: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "covector", normalize(self.covector))

    @property
    def dim(self) -> int:
        return self.covector.size - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, ProjHyperplane) and np.array_equal(
            self.covector, other.covector
        )

    def __hash__(self) -> int:
        return hash(self.covector.tobytes())

    def __repr__(self) -> str:
        inner = ",".join(f"{x:g}" for x in self.covector)
        return f"ProjHyperplane({inner})"


def incidence(q: ProjPoint, H: ProjHyperplane) -> float:
    """Pairing sum(l_k x_k); zero (within tolerance) iff q lies on H."""
    return float(q.coords @ H.covector)


def dualize(H: ProjHyperplane) -> ProjPoint:
    """Coordinate identification of a hyperplane with a point of the dual space."""
    return ProjPoint(H.covector)


def dualize_point(q: ProjPoint) -> ProjHyperplane:
    """Coordinate identification of a point with a hyperplane of the dual space."""
    return ProjHyperplane(q.coords)


class SpanResult(NamedTuple):
    hyperplane: ProjHyperplane
    degenerate: bool


def hyperplane_through(points: Sequence[ProjPoint]) -> SpanResult:
    """Hyperplane through the given points (nullspace of their coordinate matrix).

    With fewer than n independent points the hyperplane is not unique; a
    representative of the nullspace family is returned with ``degenerate``
    set instead of raising, since the construction must survive coincident
    input tuples.
    """
    if not points:
        raise ValueError("need at least one point")
    M = np.stack([p.coords for p in points])
    dim = M.shape[1] - 1
    if M.shape[0] > dim:
        raise ValueError(f"at most {dim} points span a hyperplane in RP^{dim}")
    _, s, Vt = np.linalg.svd(M)
    rank = int(np.sum(s > RANK_TOL))
    return SpanResult(ProjHyperplane(Vt[-1]), rank < dim)


def _complete_frame(first: np.ndarray) -> np.ndarray:
    """Orthonormal basis of R^{k} whose first row is ``first`` (unit norm)."""
    _, _, Vt = np.linalg.svd(first[None, :])
    rows = [first]
    for row in Vt[1:]:
        # fix the sign for reproducibility across BLAS builds
        for x in row:
            if x != 0.0:
                if x < 0.0:
                    row = -row
                break
        rows.append(row)
    return np.vstack(rows)


@dataclass(frozen=True, eq=False)
class AffineChart:
    """Affine chart of RP^n: the complement of one hyperplane, with an
    orthonormal frame whose first vector is that hyperplane's covector."""

    infinity: ProjHyperplane
    frame: np.ndarray  # (n+1, n+1), orthonormal rows, frame[0] == infinity.covector

    def __post_init__(self):
        frame = np.asarray(self.frame, dtype=float)
        if not np.allclose(frame @ frame.T, np.eye(frame.shape[0]), atol=1e-12):
            raise ValueError("chart frame must be orthonormal")
        if not np.array_equal(frame[0], self.infinity.covector):
            raise ValueError("frame[0] must equal the infinity covector")
        frame.setflags(write=False)
        object.__setattr__(self, "frame", frame)

    @classmethod
    def standard(cls, dim: int) -> "AffineChart":
        """Chart x_0 != 0 with coordinates (x_1/x_0, ..., x_n/x_0)."""
        frame = np.eye(dim + 1)
        return cls(ProjHyperplane(frame[0]), frame)

    @classmethod
    def from_infinity(cls, H: ProjHyperplane) -> "AffineChart":
        return cls(H, _complete_frame(H.covector))

    @property
    def dim(self) -> int:
        return self.frame.shape[0] - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, AffineChart) and np.array_equal(self.frame, other.frame)

    def __hash__(self) -> int:
        return hash(self.frame.tobytes())

    def coords(self, q: ProjPoint) -> np.ndarray:
        den = float(self.frame[0] @ q.coords)
        if abs(den) <= EPS_INCIDENCE:
            raise AtInfinityError("point lies on the chart's infinity hyperplane")
        return (self.frame[1:] @ q.coords) / den

    def lift(self, x) -> ProjPoint:
        return ProjPoint(self.lift_raw(np.asarray(x, dtype=float)))

    def lift_raw(self, x: np.ndarray) -> np.ndarray:
        """Homogeneous representative with infinity pairing exactly one.

        Raw lifts keep a consistent orientation inside the chart, which makes
        signs of incidence values comparable across points; use this for
        geometric predicates and ``lift`` only at API boundaries.
        """
        return self.frame[0] + self.frame[1:].T @ x


def chart_coords(q: ProjPoint, chart: AffineChart) -> np.ndarray:
    """Affine coordinates of q in the chart; AtInfinityError on the removed locus."""
    return chart.coords(q)


def chart_lift(x, chart: AffineChart) -> ProjPoint:
    """Projective point with the given affine coordinates in the chart."""
    return chart.lift(x)


class SideKind(Enum):
    STRICT_PLUS = "strict+"
    STRICT_MINUS = "strict-"
    TOUCH_PLUS = "touch+"
    TOUCH_MINUS = "touch-"
    CUT = "cut"
    CONTAINED = "contained"

    @property
    def touching(self) -> bool:
        return self in (SideKind.TOUCH_PLUS, SideKind.TOUCH_MINUS)

    @property
    def one_sided(self) -> bool:
        return self not in (SideKind.CUT,)

    @property
    def sign(self) -> int:
        """+1 for plus-side kinds, -1 for minus-side kinds, 0 otherwise."""
        if self in (SideKind.STRICT_PLUS, SideKind.TOUCH_PLUS):
            return 1
        if self in (SideKind.STRICT_MINUS, SideKind.TOUCH_MINUS):
            return -1
        return 0


@dataclass(frozen=True)
class SideClassification:
    """How a shape sits relative to a hyperplane.

    Touch kinds carry at least one contact witness (|value| within tolerance);
    Cut carries a pair of witnesses with opposite strict signs.  Witnesses are
    chart coordinates.
    """

    kind: SideKind
    witnesses: tuple = ()

    def __repr__(self) -> str:
        return f"SideClassification({self.kind.value}, {len(self.witnesses)} witnesses)"


def classify_range(vmin: float, vmax: float, tol: float) -> SideKind:
    """Side kind from the range of signed values a shape attains."""
    if vmin > tol:
        return SideKind.STRICT_PLUS
    if vmax < -tol:
        return SideKind.STRICT_MINUS
    if vmin >= -tol and vmax <= tol:
        return SideKind.CONTAINED
    if vmin >= -tol:
        return SideKind.TOUCH_PLUS
    if vmax <= tol:
        return SideKind.TOUCH_MINUS
    return SideKind.CUT


def angular_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Projective angle between two covectors (sign-insensitive), in [0, pi/2]."""
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ZeroVectorError("angular distance of a zero vector")
    c = abs(float(a @ b)) / (na * nb)
    return float(np.arccos(min(1.0, c)))
