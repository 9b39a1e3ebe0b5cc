"""Mask quality metrics, game scoring, and multi-annotator consensus.

IoU follows the PASCAL convention: ground-truth void pixels (255) are
excluded from both prediction and ground truth before counting, and a
category whose union is empty is reported as absent rather than zero.
The reported mean IoU is the arithmetic mean over evaluated categories.

The game score multiplies an accuracy-driven base score by a time
bonus: 2x when the image is annotated within the expected time
T = 60 + 30 * (objects - 1) seconds, decaying linearly to 1x at 2T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyCategorySetError,
    EmptyMaskListError,
    InvalidObjectCountError,
    ScoreOutOfRangeError,
)

VOID = 255

DEFAULT_CHECKPOINT_THRESHOLD = 0.70


@dataclass(frozen=True)
class IouReport:
    per_category: dict[int, float]
    mean_iou: float
    categories_evaluated: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "per_category": {str(c): v for c, v in self.per_category.items()},
            "mean_iou": self.mean_iou,
            "categories_evaluated": list(self.categories_evaluated),
        }


@dataclass(frozen=True)
class ScoreReport:
    base_score: int
    bonus: float
    final_score: int
    expected_time: float

    def to_dict(self) -> dict:
        return {
            "base_score": self.base_score,
            "bonus": self.bonus,
            "final_score": self.final_score,
            "expected_time": self.expected_time,
        }


@dataclass(frozen=True)
class ConsensusMap:
    """Per-pixel count of annotators assigning one category of interest."""

    counts: np.ndarray
    annotator_total: int
    category: int


def iou_counts(
    pred: np.ndarray, gt: np.ndarray, categories: set[int] | frozenset[int]
) -> tuple[dict[int, int], dict[int, int]]:
    """Per-category intersection and union pixel counts, void excluded."""
    pred = np.asarray(pred)
    gt = np.asarray(gt)
    if pred.shape != gt.shape:
        raise DimensionMismatchError(f"pred {pred.shape} vs gt {gt.shape}")
    if not categories:
        raise EmptyCategorySetError("no categories to evaluate")
    valid = gt != VOID
    pred = pred[valid]
    gt = gt[valid]
    inter: dict[int, int] = {}
    union: dict[int, int] = {}
    for c in sorted(categories):
        p = pred == c
        g = gt == c
        inter[c] = int(np.count_nonzero(p & g))
        union[c] = int(np.count_nonzero(p | g))
    return inter, union


def report_from_counts(inter: dict[int, int], union: dict[int, int]) -> IouReport:
    per_category = {
        c: inter[c] / union[c] for c in sorted(union) if union[c] > 0
    }
    evaluated = tuple(sorted(per_category))
    mean = float(np.mean(list(per_category.values()))) if per_category else 0.0
    return IouReport(
        per_category=per_category, mean_iou=mean, categories_evaluated=evaluated
    )


def iou(pred: np.ndarray, gt: np.ndarray, categories: set[int]) -> IouReport:
    """PASCAL-style per-category IoU and their mean."""
    inter, union = iou_counts(pred, gt, categories)
    return report_from_counts(inter, union)


def expected_time(object_count: int) -> float:
    """Expected annotation time in seconds: 60 plus 30 per extra object."""
    if object_count < 1:
        raise InvalidObjectCountError(f"object count must be >= 1, got {object_count}")
    return 60.0 + 30.0 * (object_count - 1)


def bonus(elapsed: float, object_count: int) -> float:
    """Time bonus in [1, 2]: 2x at the expected time, 1x at twice it."""
    if elapsed < 0:
        raise ValueError(f"elapsed time must be >= 0, got {elapsed}")
    t_expected = expected_time(object_count)
    raw = 2.0 + (t_expected - elapsed) / t_expected
    return min(2.0, max(raw, 1.0))


def base_score(mean_iou: float) -> int:
    """Accuracy-driven base score: round(100 * mean_iou^3).

    The cubic keeps the score growing progressively steeper as accuracy
    approaches 100%; the exact shape is a tool choice.
    """
    if not 0.0 <= mean_iou <= 1.0:
        raise ScoreOutOfRangeError(f"mean IoU must be in [0, 1], got {mean_iou}")
    return round(100.0 * mean_iou**3)


def final_score(mean_iou: float, elapsed: float, object_count: int) -> ScoreReport:
    """Base score times the time bonus, floored to whole points."""
    base = base_score(mean_iou)
    factor = bonus(elapsed, object_count)
    return ScoreReport(
        base_score=base,
        bonus=factor,
        final_score=int(base * factor),
        expected_time=expected_time(object_count),
    )


def checkpoint_gate(
    report: IouReport, threshold: float = DEFAULT_CHECKPOINT_THRESHOLD
) -> bool:
    """Pass/fail for a checkpoint image: mean IoU >= threshold passes."""
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    return report.mean_iou >= threshold


def _stack_masks(masks: list[np.ndarray]) -> np.ndarray:
    if not masks:
        raise EmptyMaskListError("need at least one mask")
    first = np.asarray(masks[0])
    stack = np.empty((len(masks),) + first.shape, np.uint8)
    for i, m in enumerate(masks):
        m = np.asarray(m)
        if m.shape != first.shape:
            raise DimensionMismatchError(f"mask {i} is {m.shape}, expected {first.shape}")
        stack[i] = m
    return stack


def consensus_counts(masks: list[np.ndarray], category: int) -> ConsensusMap:
    """How many annotators assigned the category of interest, per pixel."""
    stack = _stack_masks(masks)
    counts = np.count_nonzero(stack == category, axis=0).astype(np.int32)
    return ConsensusMap(counts=counts, annotator_total=len(masks), category=category)


def consensus_majority(masks: list[np.ndarray]) -> np.ndarray:
    """Per-pixel most frequent label, ties toward the smaller category id."""
    stack = _stack_masks(masks)
    values = np.unique(stack)
    votes = np.stack([np.count_nonzero(stack == v, axis=0) for v in values])
    winner = votes.argmax(axis=0)
    return values[winner].astype(np.uint8)
