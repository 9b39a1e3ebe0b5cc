"""Synthetic annotation scenes and a scribble simulator.

The scene generator builds multi-object images with known ground truth:
colored blobs (ellipses and boxes) over a textured background, with
per-pixel category masks. The scribble simulator plays the role of an
annotator, sampling a small fraction of each category's pixels as short
pencil strokes that stay inside the region, the way careful freehand
traces do.
"""

from __future__ import annotations

import numpy as np

from .engine import UNLABELED
from .strokes import Stroke

# distinct, Lab-separated object colors (background gets its own gray)
_OBJECT_COLORS = [
    (200, 40, 40),
    (40, 170, 60),
    (50, 80, 210),
    (220, 200, 50),
    (160, 60, 190),
    (70, 200, 200),
    (240, 130, 30),
]
_BACKGROUND_COLOR = (110, 110, 110)


def synthetic_scene(
    seed: int, width: int = 160, height: int = 120, objects: int = 3, noise: float = 14.0
) -> tuple[np.ndarray, np.ndarray, int]:
    """One generated scene: (image, ground-truth mask, object count).

    Objects are category ids 1..objects drawn over background 0, each
    with a distinct color. Gaussian pixel noise plus a smooth
    illumination gradient keep regions from being trivially flat.
    """
    rng = np.random.default_rng(seed)
    gt = np.zeros((height, width), np.uint8)
    img = np.empty((height, width, 3), np.float64)
    img[:] = _BACKGROUND_COLOR

    ys, xs = np.mgrid[0:height, 0:width]
    for i in range(objects):
        category = i + 1
        color = _OBJECT_COLORS[i % len(_OBJECT_COLORS)]
        cx = rng.uniform(0.15, 0.85) * width
        cy = rng.uniform(0.15, 0.85) * height
        if rng.random() < 0.5:
            rx = rng.uniform(0.08, 0.22) * width
            ry = rng.uniform(0.08, 0.22) * height
            region = ((xs - cx) / rx) ** 2 + ((ys - cy) / ry) ** 2 <= 1.0
        else:
            rx = rng.uniform(0.06, 0.18) * width
            ry = rng.uniform(0.06, 0.18) * height
            region = (np.abs(xs - cx) <= rx) & (np.abs(ys - cy) <= ry)
        gt[region] = category
        img[region] = color

    gx, gy = rng.uniform(-1, 1, 2)
    shading = 1.0 + 0.25 * (gx * (xs - width / 2) / width + gy * (ys - height / 2) / height)
    img *= shading[..., None]
    img += rng.normal(0.0, noise, img.shape)
    img = np.clip(img, 0, 255).astype(np.uint8)
    return img, gt, objects


def simulate_scribbles(
    gt: np.ndarray,
    coverage: float = 0.005,
    rng: np.random.Generator | None = None,
    walk_length: int = 12,
    thickness: int = 1,
) -> list[Stroke]:
    """Pencil strokes covering about `coverage` of each category's pixels.

    Strokes are random walks constrained to stay inside their category
    region, so the simulated traces are sparse but never cross object
    boundaries.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    height, width = gt.shape
    strokes: list[Stroke] = []
    for category in np.unique(gt):
        if category == UNLABELED:
            continue
        member = gt == category
        coords = np.argwhere(member)
        target = max(1, round(coverage * coords.shape[0]))
        covered: set[tuple[int, int]] = set()
        guard = 0
        while len(covered) < target and guard < 10 * target:
            guard += 1
            y, x = coords[rng.integers(0, coords.shape[0])]
            path = [(int(x), int(y))]
            for _ in range(walk_length - 1):
                order = rng.permutation(4)
                moved = False
                for d in order:
                    nx = path[-1][0] + (1, -1, 0, 0)[d]
                    ny = path[-1][1] + (0, 0, 1, -1)[d]
                    if 0 <= nx < width and 0 <= ny < height and member[ny, nx]:
                        path.append((nx, ny))
                        moved = True
                        break
                if not moved:
                    break
                if len(covered | set(path)) >= target:
                    break
            covered |= set(path)
            strokes.append(
                Stroke("pencil", category=int(category), thickness=thickness, points=tuple(path))
            )
    return strokes
