"""The web UI's golden fixtures must match this package's behavior.

The client rasterizes strokes locally with the same rule the service
applies server-side; these tests pin the shared fixtures to the server
rasterizer so the two implementations cannot drift apart silently.
"""

import json
from pathlib import Path

import numpy as np
import pytest

from scribbleseg.maskpng import Palette
from scribbleseg.strokes import Stroke, raster_from_strokes

FIXTURES = Path(__file__).parent.parent / "frontend" / "tests" / "fixtures"

pytestmark = pytest.mark.skipif(
    not FIXTURES.is_dir(), reason="frontend fixtures not generated"
)


def load(name):
    return json.loads((FIXTURES / name).read_text())


def test_golden_strokes_rasterize_to_the_stored_rasters():
    for seq in load("stroke_goldens.json"):
        strokes = [
            Stroke(
                tool=s["tool"],
                category=s["category"],
                thickness=s["thickness"],
                points=tuple((x, y) for x, y in s["points"]),
            )
            for s in seq["expected_strokes"]
        ]
        raster = raster_from_strokes(seq["width"], seq["height"], strokes)
        assert raster.reshape(-1).tolist() == seq["raster"], seq["name"]


def test_overlay_golden_matches_server_palette():
    golden = load("overlay_golden.json")
    palette = Palette.default(21)
    for category, color in golden["palette"].items():
        assert [int(v) for v in palette.table[int(category)]] == color
    mask = np.array(golden["mask"], np.uint8)
    expected = np.array(golden["expected_rgba"], np.uint8).reshape(-1, 4)
    for i, value in enumerate(mask):
        if value in (0, 255):
            assert expected[i].tolist() == [0, 0, 0, 0]
        else:
            assert expected[i, :3].tolist() == [int(v) for v in palette.table[value]]
            assert expected[i, 3] == 255


def test_captured_payloads_hide_the_checkpoint_assignment():
    blob = (FIXTURES / "session_payloads.json").read_text()
    for needle in ("ground_truth", "checkpoint_ids", "has_gt", "gt_path", '"gt"'):
        assert needle not in blob
