"""Command-line front end: scene loading, pipeline orchestration, reports.

Reports are self-contained JSON: the full parameter echo plus tool version
make a rerun reproduce the report byte for byte (timings excluded via
``--no-timings``).  Exit codes: 0 success, 2 condition not established,
3 malformed scene file.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from itertools import combinations
from pathlib import Path

import numpy as np

from . import __version__
from .condition import ConditionCertificate, check_condition, conjecture_check, search_condition_point
from .defaults import BOUNDS_INIT, THETA_DEDUP
from .dualregion import boundedness_check, sample_dual_region
from .errors import (
    ConditionNotEstablishedError,
    MultitangentError,
    RenderUnsupportedError,
    SceneError,
)
from .oracle import brute_force_supports
from .sceneio import expanded_shapes, load_scene, load_scene_dict
from .shapes import Ball, Circle, Loop, Polytope, Scene, shape_points
from .support import (
    count_supports,
    default_resolution,
    run_pipeline,
    self_bitangents,
)

EXIT_OK = 0
EXIT_CONDITION = 2
EXIT_SCENE = 3


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _base_report(args, scene: Scene, parameters: dict) -> dict:
    return {
        "tool": {"name": "multitangent", "version": __version__},
        "scene": {"label": scene.label, "n": scene.n, "file": str(args.scene)},
        "parameters": parameters,
    }


def _parse_point(scene: Scene, text: str):
    coords = [float(t) for t in text.split(",")]
    if len(coords) != scene.n:
        raise SceneError(f"--p needs {scene.n} coordinates, got {len(coords)}")
    return scene.chart.lift(np.array(coords))


def _condition_block(result) -> dict:
    if result is None:
        return {"status": "not_found"}
    if isinstance(result, ConditionCertificate):
        return {
            "status": "accepted",
            "p": [float(x) for x in result.p.coords],
            "directions": int(result.hyperplanes.shape[0]),
            "min_clearance": result.min_clearance,
            "analytic_exact": result.analytic_exact,
            "certificate_id": result.cert_id,
        }
    return {
        "status": "rejected",
        "p": [float(x) for x in result.p.coords],
        "witness": [float(x) for x in result.witness.covector],
        "max_clearance": result.max_clearance,
    }


def cmd_condition(args) -> int:
    scene = load_scene(args.scene)
    params = {"dirs": args.dirs, "p": args.p}
    report = _base_report(args, scene, params)
    t0 = time.perf_counter()
    if args.p:
        result = check_condition(scene, _parse_point(scene, args.p), args.dirs)
    else:
        found = search_condition_point(scene, directions=args.dirs)
        result = found[1] if found else None
    report["condition"] = _condition_block(result)
    if not args.no_timings:
        report["timings"] = {"seconds": round(time.perf_counter() - t0, 6)}
    _emit(report, args.out)
    return EXIT_OK if isinstance(result, ConditionCertificate) else EXIT_CONDITION


def cmd_supports(args) -> int:
    scene = load_scene(args.scene)
    params = {
        "backend": args.backend,
        "resolution": args.resolution,
        "dirs": args.dirs,
        "theta_dedup": args.theta_dedup,
        "grid": args.grid,
    }
    report = _base_report(args, scene, params)
    t0 = time.perf_counter()
    try:
        result = run_pipeline(
            scene,
            args.backend,
            resolution=args.resolution,
            angular_grid=args.grid,
            directions=args.dirs,
            theta_dedup=args.theta_dedup,
        )
    except ConditionNotEstablishedError as e:
        report["condition"] = {"status": "not_found", "detail": str(e)}
        report["certificates"] = []
        _emit(report, args.out)
        return EXIT_CONDITION
    if result.condition is not None:
        report["condition"] = _condition_block(result.condition)
    report["certificates"] = [c.to_dict() for c in result.certificates]
    report["counts"] = {
        "raw": result.raw_candidates,
        "deduped": len(result.certificates),
        "nested": result.nested,
        "touching": result.touching,
        "backend": result.backend,
    }
    if not args.no_timings:
        report["timings"] = {"seconds": round(time.perf_counter() - t0, 6)}
    _emit(report, args.out)
    if args.svg:
        render_svg(scene, result.certificates, args.svg)
    return EXIT_OK


def cmd_count(args) -> int:
    scene = load_scene(args.scene)
    report = _base_report(args, scene, {"backend": args.backend})
    t0 = time.perf_counter()
    result = count_supports(scene, args.backend)
    report["counts"] = {
        "raw": result.raw,
        "deduped": result.count,
        "continuum_family": result.continuum_family,
        "families": result.families,
        "side_histogram": result.histogram,
        "backend": result.backend,
        "oracle_fallback": result.fallback,
    }
    if not args.no_timings:
        report["timings"] = {"seconds": round(time.perf_counter() - t0, 6)}
    _emit(report, args.out)
    return EXIT_OK


def quartic_bitangents(data: dict, resolution: int | None = None, pairs: str = "all") -> dict:
    """Per-pair common tangents plus per-oval self-bitangents of a quartic scene."""
    if resolution is not None:
        data = json.loads(json.dumps(data))
        for entry in data.get("shapes", []):
            if entry.get("kind") == "implicit":
                entry["resolution"] = resolution
    ovals = [s for s in expanded_shapes(data) if isinstance(s, Loop)]
    if len(ovals) < 2:
        raise SceneError("the quartic scene needs at least two oval components")
    if pairs == "all":
        pair_list = list(combinations(range(len(ovals)), 2))
    else:
        i, j = (int(t) for t in pairs.split(","))
        pair_list = [(i, j)]
    per_pair = {}
    cross = 0
    for i, j in pair_list:
        scene = Scene(2, (ovals[i], ovals[j]), f"ovals {i},{j}")
        certs = run_pipeline(scene, "calipers").certificates
        per_pair[f"{i},{j}"] = [c.to_dict() for c in certs]
        cross += len(certs)
    self_lines = {}
    self_total = 0
    for k, oval in enumerate(ovals):
        lines = self_bitangents(oval)
        self_lines[str(k)] = [s.to_dict() for s in lines]
        self_total += len(lines)
    tally = {"cross_pairs": cross, "self": self_total, "total": cross + self_total}
    return {
        "ovals": len(ovals),
        "pairs": per_pair,
        "self_bitangents": self_lines,
        "tally": tally,
    }


def cmd_bitangents(args) -> int:
    data = load_scene_dict(args.quartic)
    t0 = time.perf_counter()
    result = quartic_bitangents(data, args.resolution, args.pairs)
    report = {
        "tool": {"name": "multitangent", "version": __version__},
        "scene": {"file": str(args.quartic), "label": str(data.get("label", ""))},
        "parameters": {"pairs": args.pairs, "resolution": args.resolution},
        **result,
    }
    if not args.no_timings:
        report["timings"] = {"seconds": round(time.perf_counter() - t0, 6)}
    _emit(report, args.out)
    return EXIT_OK


def cmd_dual_dump(args) -> int:
    scene = load_scene(args.scene)
    p = _parse_point(scene, args.p)
    resolution = args.resolution or default_resolution(scene.n)
    sample = sample_dual_region(scene, p, resolution, args.bounds)
    report = boundedness_check(sample)
    covs = sample.covectors()
    covs = covs / np.linalg.norm(covs, axis=1, keepdims=True)
    header = ",".join(
        [f"y{k}" for k in range(scene.n)] + [f"lambda{k}" for k in range(scene.n + 1)]
    )
    rows = [header]
    for y, lam in zip(sample.members, covs):
        rows.append(",".join(f"{v:.17g}" for v in list(y) + list(lam)))
    Path(args.csv).write_text("\n".join(rows) + "\n")
    print(
        json.dumps(
            {
                "members": int(sample.members.shape[0]),
                "bounded": report.bounded,
                "max_norm": report.max_norm,
                "csv": str(args.csv),
            },
            sort_keys=True,
        )
    )
    return EXIT_OK


def cmd_oracle(args) -> int:
    scene = load_scene(args.scene)
    report = _base_report(args, scene, {"grid": args.grid})
    t0 = time.perf_counter()
    sweep = brute_force_supports(scene, args.grid)
    report["certificates"] = [c.to_dict() for c in sweep.clusters]
    report["counts"] = {"candidates": len(sweep.candidates), "clusters": len(sweep.clusters)}
    report["sweep_spec"] = sweep.sweep_spec
    if not args.no_timings:
        report["timings"] = {"seconds": round(time.perf_counter() - t0, 6)}
    _emit(report, args.out)
    return EXIT_OK


def cmd_conjecture(args) -> int:
    scene = load_scene(args.scene)
    report = _base_report(args, scene, {"samples": args.samples})
    flags = conjecture_check(scene, args.samples)
    report["flags"] = flags
    report["note"] = (
        "experimental: sampling-based interiority; a false flag means the shape "
        "sits inside the reach of flats through the other hulls"
    )
    _emit(report, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# SVG rendering (planar scenes)


def _svg_line_clip(lam: np.ndarray, box) -> tuple | None:
    """Chop the line lambda0 + lambda1 x + lambda2 y = 0 to the viewport box."""
    xmin, xmax, ymin, ymax = box
    c0, a, b = lam
    pts = []
    for x in (xmin, xmax):
        if abs(b) > 1e-300:
            y = -(c0 + a * x) / b
            if ymin - 1e-9 <= y <= ymax + 1e-9:
                pts.append((x, y))
    for y in (ymin, ymax):
        if abs(a) > 1e-300:
            x = -(c0 + b * y) / a
            if xmin - 1e-9 <= x <= xmax + 1e-9:
                pts.append((x, y))
    uniq = []
    for p in pts:
        if all(abs(p[0] - q[0]) + abs(p[1] - q[1]) > 1e-9 for q in uniq):
            uniq.append(p)
    if len(uniq) < 2:
        return None
    uniq.sort()
    return uniq[0], uniq[-1]


def render_svg(scene: Scene, certificates, path) -> None:
    """Write the scene, tangent lines clipped to the viewport, and contact dots."""
    if scene.n != 2:
        raise RenderUnsupportedError("SVG rendering needs a planar scene")
    pts = np.vstack([shape_points(s) for s in scene.shapes])
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    pad = 0.2 * max(float(np.max(hi - lo)), 1.0)
    xmin, ymin = lo - pad
    xmax, ymax = hi + pad
    width = 640.0
    scale = width / (xmax - xmin)
    height = (ymax - ymin) * scale

    def X(x: float) -> str:
        return f"{(x - xmin) * scale:.3f}"

    def Y(y: float) -> str:
        return f"{(ymax - y) * scale:.3f}"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.3f}" viewBox="0 0 {width:.0f} {height:.3f}">',
        f'<rect width="{width:.0f}" height="{height:.3f}" fill="white"/>',
    ]
    for shape in scene.shapes:
        if isinstance(shape, (Circle, Ball)):
            cx, cy = shape.center
            parts.append(
                f'<circle cx="{X(cx)}" cy="{Y(cy)}" r="{shape.radius * scale:.3f}" '
                'fill="none" stroke="black" stroke-width="1.5"/>'
            )
        else:
            verts = (
                shape.vertices
                if isinstance(shape, (Loop, Polytope))
                else shape.boundary.vertices
            )
            d = "M " + " L ".join(f"{X(v[0])} {Y(v[1])}" for v in verts) + " Z"
            parts.append(f'<path d="{d}" fill="none" stroke="black" stroke-width="1.5"/>')
    box = (float(xmin), float(xmax), float(ymin), float(ymax))
    for cert in certificates:
        seg = _svg_line_clip(cert.hyperplane.covector, box)
        if seg is None:
            continue
        (x1, y1), (x2, y2) = seg
        parts.append(
            f'<line x1="{X(x1)}" y1="{Y(y1)}" x2="{X(x2)}" y2="{Y(y2)}" '
            'stroke="crimson" stroke-width="1"/>'
        )
        for c in cert.contacts:
            parts.append(
                f'<circle cx="{X(c[0])}" cy="{Y(c[1])}" r="3" fill="royalblue"/>'
            )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multitangent",
        description="Common supporting hyperplanes of closed sets in real projective space",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument(
            "--no-timings", action="store_true", help="omit timings for byte-stable output"
        )

    p = sub.add_parser("condition", help="check or search the hypothesis point")
    p.add_argument("--scene", required=True)
    p.add_argument("--p", help="candidate point as comma-separated chart coordinates")
    p.add_argument("--dirs", type=int, default=None, help="direction samples")
    common(p)
    p.set_defaults(func=cmd_condition)

    p = sub.add_parser("supports", help="find common supporting hyperplanes")
    p.add_argument("--scene", required=True)
    p.add_argument(
        "--backend", default="auto", choices=["auto", "dual", "calipers", "oracle"]
    )
    p.add_argument("--resolution", type=int, default=None, help="dual-region raster size")
    p.add_argument("--dirs", type=int, default=None, help="condition direction samples")
    p.add_argument("--grid", type=int, default=None, help="oracle angular grid")
    p.add_argument("--theta-dedup", type=float, default=THETA_DEDUP,
                   help="angular radius for merging certificates")
    p.add_argument("--svg", help="render the planar scene and tangents to this SVG file")
    common(p)
    p.set_defaults(func=cmd_supports)

    p = sub.add_parser("count", help="count distinct supports and detect families")
    p.add_argument("--scene", required=True)
    p.add_argument(
        "--backend", default="auto", choices=["auto", "dual", "calipers", "oracle"]
    )
    common(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("bitangents", help="bitangent tally of an implicit quartic scene")
    p.add_argument("--quartic", required=True)
    p.add_argument("--pairs", default="all", help="'all' or a pair like '0,2'")
    p.add_argument("--resolution", type=int, default=None, help="re-ingest at this grid")
    common(p)
    p.set_defaults(func=cmd_bitangents)

    p = sub.add_parser("dual-dump", help="rasterize the dual region and dump members")
    p.add_argument("--scene", required=True)
    p.add_argument("--p", required=True, help="condition point chart coordinates")
    p.add_argument("--csv", required=True)
    p.add_argument("--resolution", type=int, default=None)
    p.add_argument("--bounds", type=float, default=BOUNDS_INIT)
    p.set_defaults(func=cmd_dual_dump)

    p = sub.add_parser("oracle", help="brute-force sweep ground truth")
    p.add_argument("--scene", required=True)
    p.add_argument("--grid", type=int, default=None, help="angular grid size")
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("conjecture", help="experimental weaker-condition flags")
    p.add_argument("--scene", required=True)
    p.add_argument("--samples", type=int, default=2048)
    common(p)
    p.set_defaults(func=cmd_conjecture)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SceneError as e:
        print(f"scene error: {e}", file=sys.stderr)
        return EXIT_SCENE
    except ConditionNotEstablishedError as e:
        print(f"condition not established: {e}", file=sys.stderr)
        return EXIT_CONDITION
    except (MultitangentError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
