"""Common supporting hyperplanes of closed connected sets in RP^n.

Builds the dual-space region of hyperplanes meeting every set, certifies its
compactness in a chart chosen from a condition point, extracts extreme
points, and refines them into verified common tangents; exact planar and
brute-force sweep backends cross-check the pipeline.
"""

__version__ = "0.1.0"

from .condition import (
    ConditionCertificate,
    Rejection,
    check_condition,
    conjecture_check,
    search_condition_point,
)
from .dualregion import (
    BoundednessReport,
    DualRegionSample,
    boundedness_check,
    in_dual_region,
    sample_dual_region,
    sample_dual_region_auto,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .oracle import SweepResult, brute_force_supports, parity_check
from .projective import (
    AffineChart,
    ProjHyperplane,
    ProjPoint,
    SideClassification,
    SideKind,
    angular_distance,
    chart_coords,
    chart_lift,
    dualize,
    dualize_point,
    hyperplane_through,
    incidence,
    normalize,
)
from .sceneio import load_bundled_scene, load_scene, save_scene, scene_from_dict, scene_to_dict
from .shapes import (
    Ball,
    Circle,
    Loop,
    Polytope,
    Region,
    Scene,
    contact_points,
    convex_hull,
    ingest_implicit_curve,
    meets,
    side,
)
from .support import (
    CountResult,
    SupportCertificate,
    calipers_tangents,
    count_supports,
    extreme_points,
    find_supports,
    refine_support,
    self_bitangents,
    verify_support,
)

__all__ = [
    "__version__",
    "KERNEL_BACKEND",
    "AffineChart",
    "Ball",
    "BoundednessReport",
    "Circle",
    "ConditionCertificate",
    "CountResult",
    "DualRegionSample",
    "Loop",
    "Polytope",
    "ProjHyperplane",
    "ProjPoint",
    "Region",
    "Rejection",
    "Scene",
    "SideClassification",
    "SideKind",
    "SupportCertificate",
    "SweepResult",
    "angular_distance",
    "boundedness_check",
    "brute_force_supports",
    "calipers_tangents",
    "chart_coords",
    "chart_lift",
    "check_condition",
    "conjecture_check",
    "contact_points",
    "convex_hull",
    "count_supports",
    "dualize",
    "dualize_point",
    "extreme_points",
    "find_supports",
    "hyperplane_through",
    "in_dual_region",
    "incidence",
    "ingest_implicit_curve",
    "load_bundled_scene",
    "load_scene",
    "meets",
    "normalize",
    "parity_check",
    "refine_support",
    "sample_dual_region",
    "sample_dual_region_auto",
    "save_scene",
    "scene_from_dict",
    "scene_to_dict",
    "search_condition_point",
    "self_bitangents",
    "side",
    "verify_support",
]
