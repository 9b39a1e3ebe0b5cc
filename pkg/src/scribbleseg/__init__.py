"""Scribble-driven image annotation: growing engine, scoring, and service."""

from .engine import (
    GrowConfig,
    RefineResult,
    SeedSet,
    UNLABELED,
    grow_clusters,
    refine,
    sample_seeds,
    to_lab,
    vote_clusters,
)
from .evaluation import (
    ConsensusMap,
    IouReport,
    ScoreReport,
    bonus,
    base_score,
    checkpoint_gate,
    consensus_counts,
    consensus_majority,
    final_score,
    iou,
)
from .maskpng import Palette, decode_mask_png, encode_mask_png
from .strokes import Stroke, StrokeDocument, raster_from_strokes, rasterize_stroke

__all__ = [
    "GrowConfig",
    "RefineResult",
    "SeedSet",
    "UNLABELED",
    "grow_clusters",
    "refine",
    "sample_seeds",
    "to_lab",
    "vote_clusters",
    "ConsensusMap",
    "IouReport",
    "ScoreReport",
    "bonus",
    "base_score",
    "checkpoint_gate",
    "consensus_counts",
    "consensus_majority",
    "final_score",
    "iou",
    "Palette",
    "decode_mask_png",
    "encode_mask_png",
    "Stroke",
    "StrokeDocument",
    "raster_from_strokes",
    "rasterize_stroke",
]

__version__ = "0.1.0"
