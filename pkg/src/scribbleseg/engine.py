"""Monte Carlo seeded region growing.

A sparse trace raster (per-pixel category ids, 255 = unlabeled) is
propagated to every pixel of the image. Each iteration samples a random
subset of the labeled pixels as seeds, grows one cluster per seed with a
priority-queue flood over joint spatial/color distance, and labels each
cluster by majority vote over all labeled trace pixels it contains.
Aggregating the iterations yields a per-pixel, per-category likelihood
and an argmax label mask with full coverage.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from . import _flood
from .errors import (
    DimensionMismatchError,
    EmptyTraceError,
    NoSeedsError,
)

UNLABELED = 255

_SRGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
_D65_WHITE = np.array([0.95047, 1.0, 1.08883])


def _srgb_linear_lut() -> np.ndarray:
    c = np.arange(256, dtype=np.float64) / 255.0
    return np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)


_LINEAR_LUT = _srgb_linear_lut()


@dataclass(frozen=True)
class GrowConfig:
    """Parameters of the growing engine.

    seed_fraction and iterations control the Monte Carlo sampling
    (defaults: 75% of labeled pixels, 8 iterations). color_scale and
    spatial_scale weight the Lab-color and pixel-position terms of the
    growing distance; spatial_scale defaults to max(width, height) / 4
    when left unset. Both scale defaults are tool constants, not values
    carried by any dataset.
    """

    seed_fraction: float = 0.75
    iterations: int = 8
    color_scale: float = 20.0
    spatial_scale: float | None = None
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.seed_fraction <= 1.0:
            raise ValueError(f"seed_fraction must be in (0, 1], got {self.seed_fraction}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if self.color_scale <= 0.0:
            raise ValueError(f"color_scale must be > 0, got {self.color_scale}")
        if self.spatial_scale is not None and self.spatial_scale <= 0.0:
            raise ValueError(f"spatial_scale must be > 0, got {self.spatial_scale}")

    def resolve_spatial_scale(self, width: int, height: int) -> float:
        if self.spatial_scale is not None:
            return float(self.spatial_scale)
        return max(width, height) / 4.0

    def with_overrides(self, **kwargs) -> "GrowConfig":
        return replace(self, **kwargs)


class SeedSet(NamedTuple):
    """Sampled seed pixels: parallel x / y / label arrays."""

    x: np.ndarray
    y: np.ndarray
    label: np.ndarray

    def __len__(self) -> int:
        return int(self.x.shape[0])


@dataclass(frozen=True)
class RefineResult:
    """Output of refine: dense mask plus per-category likelihoods.

    counts[y, x, c] is the number of iterations that labeled the pixel
    as category c; likelihood = counts / iterations. label_mask is the
    per-pixel argmax with ties toward the smaller category id.
    """

    label_mask: np.ndarray
    likelihood: np.ndarray
    counts: np.ndarray
    iterations: int

    @property
    def num_categories(self) -> int:
        return int(self.counts.shape[2])


def _check_rgb(image: np.ndarray) -> np.ndarray:
    image = np.asarray(image)
    if image.ndim != 3 or image.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) RGB array, got shape {image.shape}")
    if image.dtype != np.uint8:
        raise ValueError(f"expected uint8 pixels, got {image.dtype}")
    if image.shape[0] < 1 or image.shape[1] < 1:
        raise ValueError("image must be at least 1x1")
    return image


def to_lab(image: np.ndarray) -> np.ndarray:
    """Convert an (H, W, 3) uint8 sRGB image to CIELab (D65), float64."""
    image = _check_rgb(image)
    linear = _LINEAR_LUT[image]
    xyz = linear @ _SRGB_TO_XYZ.T
    xyz /= _D65_WHITE
    delta = 6.0 / 29.0
    f = np.where(xyz > delta**3, np.cbrt(xyz), xyz / (3.0 * delta**2) + 4.0 / 29.0)
    lab = np.empty_like(f)
    lab[..., 0] = 116.0 * f[..., 1] - 16.0
    lab[..., 1] = 500.0 * (f[..., 0] - f[..., 1])
    lab[..., 2] = 200.0 * (f[..., 1] - f[..., 2])
    return lab


def seed_count(labeled_count: int, fraction: float) -> int:
    """Number of seeds per iteration: max(1, round(fraction * labeled))."""
    return max(1, round(fraction * labeled_count))


def sample_seeds(trace: np.ndarray, fraction: float, rng: np.random.Generator) -> SeedSet:
    """Sample a uniform subset of labeled trace pixels, without replacement."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    trace = np.asarray(trace)
    ys, xs = np.nonzero(trace != UNLABELED)
    labeled = xs.shape[0]
    if labeled == 0:
        raise EmptyTraceError("trace has no labeled pixels")
    k = seed_count(labeled, fraction)
    pick = rng.choice(labeled, size=k, replace=False)
    return SeedSet(
        x=xs[pick].astype(np.int64),
        y=ys[pick].astype(np.int64),
        label=trace[ys[pick], xs[pick]],
    )


def _grow(lab: np.ndarray, seeds: SeedSet, config: GrowConfig,
          update_centroids: bool) -> np.ndarray:
    lab = np.asarray(lab, dtype=np.float64)
    if lab.ndim != 3 or lab.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) Lab array, got shape {lab.shape}")
    height, width = lab.shape[:2]
    if len(seeds) == 0:
        raise NoSeedsError("at least one seed is required")
    if (seeds.x < 0).any() or (seeds.x >= width).any() or (seeds.y < 0).any() or (seeds.y >= height).any():
        raise ValueError("seed coordinates out of bounds")

    theta_s = config.resolve_spatial_scale(width, height)
    theta_m = config.color_scale
    inv_ss = 1.0 / (theta_s * theta_s)
    inv_ms = 1.0 / (theta_m * theta_m)

    flat = lab.reshape(-1, 3)
    seed_idx = (seeds.y * width + seeds.x).astype(np.int64)
    assign = _flood.flood(
        np.ascontiguousarray(flat[:, 0]),
        np.ascontiguousarray(flat[:, 1]),
        np.ascontiguousarray(flat[:, 2]),
        width,
        height,
        seed_idx,
        inv_ss,
        inv_ms,
        update_centroids,
    )
    return assign.reshape(height, width)


def grow_clusters(lab: np.ndarray, seeds: SeedSet, config: GrowConfig) -> np.ndarray:
    """Grow one cluster per seed until every pixel is assigned.

    Returns an (H, W) int32 map of cluster ids in [0, len(seeds)).
    """
    return _grow(lab, seeds, config, update_centroids=True)


def vote_clusters(clusters: np.ndarray, trace: np.ndarray) -> np.ndarray:
    """Label every cluster by majority vote over the trace pixels it contains.

    All labeled trace pixels vote, whether they were sampled as seeds or
    not. Ties break toward the smaller category id. Returns an (H, W)
    uint8 label map.
    """
    clusters = np.asarray(clusters)
    trace = np.asarray(trace)
    if clusters.shape != trace.shape:
        raise DimensionMismatchError(
            f"cluster map {clusters.shape} vs trace {trace.shape}"
        )
    labeled = trace != UNLABELED
    if not labeled.any():
        raise EmptyTraceError("trace has no labeled pixels")
    num_categories = int(trace[labeled].max()) + 1
    num_clusters = int(clusters.max()) + 1
    votes = np.bincount(
        clusters[labeled].astype(np.int64) * num_categories + trace[labeled],
        minlength=num_clusters * num_categories,
    ).reshape(num_clusters, num_categories)
    winner = votes.argmax(axis=1).astype(np.uint8)
    return winner[clusters]


def _check_refine_inputs(image: np.ndarray, trace: np.ndarray) -> None:
    if image.shape[:2] != trace.shape:
        raise DimensionMismatchError(
            f"image {image.shape[:2]} vs trace {trace.shape}"
        )
    if not (trace != UNLABELED).any():
        raise EmptyTraceError("trace has no labeled pixels")


def iteration_rng(rng_seed: int, iteration: int) -> np.random.Generator:
    """Independent, reproducible stream for one Monte Carlo iteration."""
    entropy = rng_seed & 0xFFFFFFFFFFFFFFFF
    seq = np.random.SeedSequence(entropy=entropy, spawn_key=(iteration,))
    return np.random.default_rng(seq)


def refine(
    image: np.ndarray,
    trace: np.ndarray,
    config: GrowConfig | None = None,
    workers: int = 1,
) -> RefineResult:
    """Propagate a sparse trace into a dense label mask.

    Runs config.iterations independent sample/grow/vote rounds and
    aggregates them into per-pixel category counts. Deterministic for a
    fixed config.rng_seed, independent of the worker count.
    """
    if config is None:
        config = GrowConfig()
    image = _check_rgb(image)
    trace = np.asarray(trace)
    _check_refine_inputs(image, trace)

    height, width = trace.shape
    lab = to_lab(image)
    num_categories = int(trace[trace != UNLABELED].max()) + 1

    def one_iteration(i: int) -> np.ndarray:
        rng = iteration_rng(config.rng_seed, i)
        seeds = sample_seeds(trace, config.seed_fraction, rng)
        clusters = grow_clusters(lab, seeds, config)
        return vote_clusters(clusters, trace)

    if workers <= 1:
        maps = [one_iteration(i) for i in range(config.iterations)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            maps = list(pool.map(one_iteration, range(config.iterations)))

    counts = np.zeros((height * width, num_categories), np.int32)
    rows = np.arange(height * width)
    for label_map in maps:
        counts[rows, label_map.ravel()] += 1
    counts = counts.reshape(height, width, num_categories)

    likelihood = counts / float(config.iterations)
    label_mask = counts.argmax(axis=2).astype(np.uint8)
    return RefineResult(
        label_mask=label_mask,
        likelihood=likelihood,
        counts=counts,
        iterations=config.iterations,
    )
