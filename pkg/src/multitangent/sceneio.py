"""Scene files: JSON serialization, implicit-curve expansion, bundled examples.

Format::

    {"n": 2,
     "shapes": [{"kind": "circle", "center": [x, y], "radius": r},
                {"kind": "ball", "center": [...], "radius": r},
                {"kind": "loop", "points": [[...], ...]},
                {"kind": "polytope", "vertices": [[...], ...]},
                {"kind": "implicit", "coeffs": {"i,j": c, ...},
                 "bbox": [xmin, xmax, ymin, ymax], "resolution": k}],
     "label": "..."}

Implicit entries are expanded at load time; a multi-component curve
contributes one loop shape per component, selectable by index.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Sequence

from .errors import SceneError
from .shapes import Ball, Circle, Loop, Polytope, Region, Scene, Shape, ingest_implicit_curve


def _expand_entry(entry: dict, index: int) -> list[Shape]:
    where = f"shapes[{index}]"
    if not isinstance(entry, dict) or "kind" not in entry:
        raise SceneError("shape entry must be an object with a 'kind'", where)
    kind = entry["kind"]
    try:
        if kind == "circle":
            return [Circle(entry["center"], float(entry["radius"]))]
        if kind == "ball":
            return [Ball(entry["center"], float(entry["radius"]))]
        if kind == "loop":
            return [Loop(entry["points"])]
        if kind == "region":
            return [Region(Loop(entry["points"]), bool(entry.get("filled", True)))]
        if kind == "polytope":
            return [Polytope(entry["vertices"])]
        if kind == "implicit":
            loops = ingest_implicit_curve(
                entry["coeffs"], entry["bbox"], int(entry["resolution"])
            )
            return list(loops)
    except KeyError as e:
        raise SceneError(f"missing key {e}", where) from e
    except (TypeError, ValueError) as e:
        raise SceneError(str(e), where) from e
    raise SceneError(f"unknown shape kind {kind!r}", where)


def scene_from_dict(data: dict, select: Sequence[int] | None = None) -> Scene:
    """Build a scene from parsed JSON; ``select`` picks expanded shapes by index."""
    if not isinstance(data, dict):
        raise SceneError("scene file must contain a JSON object")
    for key in ("n", "shapes"):
        if key not in data:
            raise SceneError(f"missing required key '{key}'", key)
    n = int(data["n"])
    expanded: list[Shape] = []
    for i, entry in enumerate(data["shapes"]):
        expanded.extend(_expand_entry(entry, i))
    if select is not None:
        try:
            expanded = [expanded[i] for i in select]
        except IndexError as e:
            raise SceneError(
                f"selection {list(select)} out of range for {len(expanded)} shapes",
                "shapes",
            ) from e
    label = str(data.get("label", ""))
    return Scene(n, tuple(expanded), label)


def expanded_shapes(data: dict) -> list[Shape]:
    """All shapes after implicit expansion, without the scene count check."""
    return [s for i, entry in enumerate(data.get("shapes", [])) for s in _expand_entry(entry, i)]


def load_scene(path, select: Sequence[int] | None = None) -> Scene:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise SceneError(f"cannot read scene file {path}: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SceneError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from e
    return scene_from_dict(data, select)


def load_scene_dict(path) -> dict:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as e:
        raise SceneError(f"cannot read scene file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise SceneError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from e
    if not isinstance(data, dict):
        raise SceneError("scene file must contain a JSON object")
    return data


def shape_to_dict(shape: Shape) -> dict:
    if isinstance(shape, Circle):
        return {"kind": "circle", "center": shape.center.tolist(), "radius": shape.radius}
    if isinstance(shape, Ball):
        return {"kind": "ball", "center": shape.center.tolist(), "radius": shape.radius}
    if isinstance(shape, Loop):
        return {"kind": "loop", "points": shape.vertices.tolist()}
    if isinstance(shape, Region):
        return {
            "kind": "region",
            "points": shape.boundary.vertices.tolist(),
            "filled": shape.filled,
        }
    if isinstance(shape, Polytope):
        return {"kind": "polytope", "vertices": shape.vertices.tolist()}
    raise TypeError(f"cannot serialize {type(shape).__name__}")


def scene_to_dict(scene: Scene) -> dict:
    return {
        "n": scene.n,
        "shapes": [shape_to_dict(s) for s in scene.shapes],
        "label": scene.label,
    }


def save_scene(scene: Scene, path) -> None:
    Path(path).write_text(json.dumps(scene_to_dict(scene), indent=2, sort_keys=True) + "\n")


def bundled_scene_path(name: str) -> Path:
    """Path of a bundled example scene (name without the .json suffix)."""
    ref = resources.files("multitangent").joinpath("scenes").joinpath(f"{name}.json")
    with resources.as_file(ref) as p:
        return Path(p)


def load_bundled_scene(name: str, select: Sequence[int] | None = None) -> Scene:
    return load_scene(bundled_scene_path(name), select)
