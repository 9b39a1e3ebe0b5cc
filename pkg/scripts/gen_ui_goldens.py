#!/usr/bin/env python3
"""Generate golden fixtures for the web UI test suite.

Produces three fixture files under frontend/tests/fixtures/:

  stroke_goldens.json    five scripted pointer sequences, the strokes
                         they must produce, and the raster the stroke
                         list must rasterize to (computed by the server
                         rasterizer, the source of truth)
  overlay_golden.json    a small mask plus its RGBA rendering at full
                         mask opacity (background/void transparent)
  session_payloads.json  real service responses captured through the
                         HTTP stack, used to pin payload shapes and to
                         prove no ground-truth marker leaks

Run from the repository root:  python3 scripts/gen_ui_goldens.py
"""

import base64
import json
import math
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "tests"))

import numpy as np

from scribbleseg.maskpng import Palette
from scribbleseg.strokes import Stroke, raster_from_strokes

FIXTURES = REPO / "frontend" / "tests" / "fixtures"

WIDTH, HEIGHT = 24, 18


def canvas_pt(x: int, y: int, zoom: float) -> list[float]:
    # pointer lands mid-pixel so flooring recovers the image pixel
    return [x * zoom + 0.5 * zoom, y * zoom + 0.5 * zoom]


def replay(steps: list[dict], zoom: float) -> list[dict]:
    """Mirror of the client pointer protocol, used to derive goldens."""
    strokes: list[dict] = []
    pending = None

    def to_image(cx: float, cy: float) -> tuple[int, int]:
        return (math.floor(cx / zoom), math.floor(cy / zoom))

    tool, category, thickness = "pencil", 1, 2
    for step in steps:
        if "set" in step:
            tool = step["set"].get("tool", tool)
            category = step["set"].get("category", category)
            thickness = step["set"].get("thickness", thickness)
        elif "down" in step:
            p = to_image(*step["down"])
            pending = {"tool": tool, "category": category, "thickness": thickness,
                       "points": [list(p)]}
        elif "move" in step and pending:
            p = to_image(*step["move"])
            pts = pending["points"]
            if pending["tool"] == "line":
                if len(pts) == 1:
                    pts.append(list(p))
                else:
                    pts[1] = list(p)
            elif list(p) != pts[-1]:
                pts.append(list(p))
        elif "up" in step and pending:
            p = to_image(*step["up"])
            pts = pending["points"]
            if pending["tool"] == "line":
                if len(pts) == 1:
                    pts.append(list(p))
                else:
                    pts[1] = list(p)
                if pts[0] == pts[1]:
                    pending = None
                    continue
                pending["points"] = [pts[0], pts[1]]
            else:
                if list(p) != pts[-1]:
                    pts.append(list(p))
            strokes.append(pending)
            pending = None
    return strokes


def path_steps(tool_setup: dict, pixels: list[tuple[int, int]], zoom: float) -> list[dict]:
    steps: list[dict] = [{"set": tool_setup}]
    steps.append({"down": canvas_pt(*pixels[0], zoom)})
    for p in pixels[1:-1]:
        steps.append({"move": canvas_pt(*p, zoom)})
    steps.append({"up": canvas_pt(*pixels[-1], zoom)})
    return steps


def build_sequences() -> list[dict]:
    sequences = []

    steps = path_steps(
        {"tool": "pencil", "category": 1, "thickness": 1},
        [(2, 2), (3, 2), (4, 2), (5, 2), (5, 3), (5, 4), (5, 5)],
        zoom=1.0,
    )
    sequences.append({"name": "pencil-path", "zoom": 1.0, "steps": steps})

    steps = path_steps(
        {"tool": "line", "category": 2, "thickness": 2},
        [(1, 1), (6, 3), (10, 4)],
        zoom=2.0,
    )
    sequences.append({"name": "line-zoom2", "zoom": 2.0, "steps": steps})

    steps = path_steps(
        {"tool": "pencil", "category": 3, "thickness": 4},
        [(4, 6), (6, 7), (8, 8), (10, 9)],
        zoom=1.0,
    ) + path_steps(
        {"tool": "eraser", "category": 0, "thickness": 8},
        [(6, 6), (7, 7)],
        zoom=1.0,
    )
    sequences.append({"name": "pencil-then-eraser", "zoom": 1.0, "steps": steps})

    # repeated positions inside one pixel (deduplicated) and a drag off
    # the canvas (clamped at rasterization)
    steps = [
        {"set": {"tool": "pencil", "category": 1, "thickness": 2}},
        {"down": [3.2, 3.7]},
        {"move": [3.6, 3.1]},
        {"move": [3.9, 3.9]},
        {"move": [1.5, 4.2]},
        {"move": [-4.0, 5.5]},
        {"up": [-6.0, 5.8]},
    ]
    sequences.append({"name": "dedupe-and-clamp", "zoom": 1.0, "steps": steps})

    steps = (
        path_steps({"tool": "pencil", "category": 1, "thickness": 2},
                   [(2, 12), (4, 14), (6, 16)], zoom=2.0)
        + path_steps({"tool": "line", "category": 2, "thickness": 1},
                     [(2, 16), (6, 12)], zoom=2.0)
        + path_steps({"tool": "eraser", "category": 0, "thickness": 4},
                     [(4, 14)], zoom=2.0)
        # a click-release on one pixel with the line tool is degenerate
        + path_steps({"tool": "line", "category": 2, "thickness": 1},
                     [(9, 9), (9, 9)], zoom=2.0)
    )
    sequences.append({"name": "multi-tool-zoom2", "zoom": 2.0, "steps": steps})

    for seq in sequences:
        strokes = replay(seq["steps"], seq["zoom"])
        seq["expected_strokes"] = strokes
        raster = raster_from_strokes(
            WIDTH,
            HEIGHT,
            [
                Stroke(
                    tool=s["tool"],
                    category=s["category"],
                    thickness=s["thickness"],
                    points=tuple((x, y) for x, y in s["points"]),
                )
                for s in strokes
            ],
        )
        seq["width"] = WIDTH
        seq["height"] = HEIGHT
        seq["raster"] = raster.reshape(-1).tolist()
    return sequences


def build_overlay_golden() -> dict:
    palette = Palette.default(21)
    mask = np.array(
        [
            [0, 0, 1, 1, 2, 2],
            [0, 1, 1, 2, 2, 2],
            [0, 1, 1, 2, 255, 255],
            [0, 0, 1, 1, 2, 0],
            [15, 15, 0, 0, 0, 0],
            [15, 15, 0, 255, 0, 0],
        ],
        np.uint8,
    )
    rgba = np.zeros((mask.size, 4), np.uint8)
    flat = mask.reshape(-1)
    for i, value in enumerate(flat):
        if value == 0 or value == 255:
            continue
        rgba[i, :3] = palette.table[value]
        rgba[i, 3] = 255
    return {
        "width": 6,
        "height": 6,
        "mask": flat.tolist(),
        "opacity": 1.0,
        "palette": {str(c): [int(v) for v in palette.table[c]] for c in (0, 1, 2, 15, 255)},
        "expected_rgba": rgba.reshape(-1).tolist(),
    }


def capture_session_payloads(tmp_root: Path) -> dict:
    from fastapi.testclient import TestClient

    from scribbleseg.service import ServiceConfig, create_app
    from service_fixtures import (
        build_fixture_dataset,
        stroke_doc_both_halves,
        stroke_doc_single_category,
    )

    size = 32
    build_fixture_dataset(tmp_root, size=size)
    client = TestClient(create_app(ServiceConfig(data_root=tmp_root, rng_seed=21)))

    payloads: dict = {}
    payloads["datasets"] = client.get("/datasets").json()
    session = client.post(
        "/sessions", json={"user_id": "golden", "dataset_id": "twotone"}
    ).json()
    payloads["session_initial"] = session
    sid = session["session_id"]
    ids = [item["image_id"] for item in session["images"]]

    for image_id in ids:
        client.put(
            f"/sessions/{sid}/images/{image_id}/trace",
            json=stroke_doc_single_category(size),
        )
        refine = client.post(f"/sessions/{sid}/images/{image_id}/refine").json()
    payloads["refine_response"] = refine
    payloads["submit_failed"] = client.post(f"/sessions/{sid}/submit").json()

    for image_id in ids:
        client.put(
            f"/sessions/{sid}/images/{image_id}/trace",
            json=stroke_doc_both_halves(size),
        )
        client.post(f"/sessions/{sid}/images/{image_id}/refine")
    payloads["submit_passed"] = client.post(f"/sessions/{sid}/submit").json()
    return payloads


def main() -> None:
    import tempfile

    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / "stroke_goldens.json").write_text(
        json.dumps(build_sequences(), indent=1)
    )
    (FIXTURES / "overlay_golden.json").write_text(
        json.dumps(build_overlay_golden(), indent=1)
    )
    with tempfile.TemporaryDirectory() as tmp:
        payloads = capture_session_payloads(Path(tmp))
    (FIXTURES / "session_payloads.json").write_text(json.dumps(payloads, indent=1))
    for name in ("stroke_goldens.json", "overlay_golden.json", "session_payloads.json"):
        print(FIXTURES / name)


if __name__ == "__main__":
    main()
