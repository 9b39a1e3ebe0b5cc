"""Strokes and their rasterization into trace rasters.

A stroke is a pencil path, a straight line, or an eraser path, drawn at
one of four thicknesses. Rasterization walks each segment with integer
(Bresenham) steps and stamps a thickness x thickness square anchored at
the top-left of every visited pixel. The eraser writes the unlabeled
sentinel (255) with the same geometry. Strokes apply in order; later
strokes overwrite earlier ones.

Stroke lists travel between client and server as a version-tagged JSON
document, so a drawing session can be replayed and audited.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .engine import UNLABELED
from .errors import DegenerateStrokeError, InvalidThicknessError

TOOLS = ("pencil", "line", "eraser")
THICKNESSES = (1, 2, 4, 8)
STROKE_FORMAT_VERSION = 1


@dataclass(frozen=True)
class Stroke:
    tool: str
    category: int
    thickness: int
    points: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.tool not in TOOLS:
            raise ValueError(f"unknown tool {self.tool!r}")
        if self.thickness not in THICKNESSES:
            raise InvalidThicknessError(
                f"thickness must be one of {THICKNESSES}, got {self.thickness}"
            )
        points = tuple((int(x), int(y)) for x, y in self.points)
        object.__setattr__(self, "points", points)
        if self.tool == "line":
            if len(points) != 2:
                raise DegenerateStrokeError("line stroke needs exactly 2 points")
        elif len(points) < 1:
            raise DegenerateStrokeError(f"{self.tool} stroke needs at least 1 point")
        if self.tool != "eraser" and not 0 <= self.category <= 254:
            raise ValueError(f"category must be in [0, 254], got {self.category}")


def _bresenham(x0: int, y0: int, x1: int, y1: int) -> list[tuple[int, int]]:
    points = []
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    while True:
        points.append((x0, y0))
        if x0 == x1 and y0 == y1:
            break
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x0 += sx
        if e2 <= dx:
            err += dx
            y0 += sy
    return points


def _clamp(value: int, high: int) -> int:
    return min(max(value, 0), high)


def _apply_stroke(raster: np.ndarray, stroke: Stroke) -> None:
    height, width = raster.shape
    value = UNLABELED if stroke.tool == "eraser" else stroke.category
    pts = [(_clamp(x, width - 1), _clamp(y, height - 1)) for x, y in stroke.points]
    if len(pts) == 1:
        pts = [pts[0], pts[0]]
    t = stroke.thickness
    for (x0, y0), (x1, y1) in zip(pts[:-1], pts[1:]):
        for x, y in _bresenham(x0, y0, x1, y1):
            raster[y : min(y + t, height), x : min(x + t, width)] = value


def rasterize_stroke(raster: np.ndarray, stroke: Stroke) -> np.ndarray:
    """Apply one stroke and return the updated raster (input untouched)."""
    raster = np.asarray(raster)
    if raster.ndim != 2:
        raise ValueError(f"expected a 2-D trace raster, got shape {raster.shape}")
    out = raster.astype(np.uint8, copy=True)
    _apply_stroke(out, stroke)
    return out


def raster_from_strokes(width: int, height: int, strokes: list[Stroke]) -> np.ndarray:
    """Replay a stroke list onto a fresh all-unlabeled raster."""
    if width < 1 or height < 1:
        raise ValueError("raster must be at least 1x1")
    raster = np.full((height, width), UNLABELED, np.uint8)
    for stroke in strokes:
        _apply_stroke(raster, stroke)
    return raster


@dataclass(frozen=True)
class StrokeDocument:
    """Interchange form of a drawing session: canvas size plus strokes."""

    width: int
    height: int
    strokes: tuple[Stroke, ...] = field(default_factory=tuple)
    version: int = STROKE_FORMAT_VERSION

    def rasterize(self) -> np.ndarray:
        return raster_from_strokes(self.width, self.height, list(self.strokes))

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "width": self.width,
            "height": self.height,
            "strokes": [
                {
                    "tool": s.tool,
                    "category": s.category,
                    "thickness": s.thickness,
                    "points": [[x, y] for x, y in s.points],
                }
                for s in self.strokes
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, doc: dict) -> "StrokeDocument":
        version = doc.get("version")
        if version != STROKE_FORMAT_VERSION:
            raise ValueError(f"unsupported stroke document version {version!r}")
        strokes = tuple(
            Stroke(
                tool=item["tool"],
                category=int(item.get("category", 0)),
                thickness=int(item["thickness"]),
                points=tuple((int(x), int(y)) for x, y in item["points"]),
            )
            for item in doc.get("strokes", [])
        )
        return cls(width=int(doc["width"]), height=int(doc["height"]), strokes=strokes)

    @classmethod
    def from_json(cls, text: str) -> "StrokeDocument":
        return cls.from_dict(json.loads(text))
