import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scribbleseg.errors import (
    DimensionMismatchError,
    EmptyCategorySetError,
    EmptyMaskListError,
    InvalidObjectCountError,
    ScoreOutOfRangeError,
)
from scribbleseg.evaluation import (
    IouReport,
    base_score,
    bonus,
    checkpoint_gate,
    consensus_counts,
    consensus_majority,
    expected_time,
    final_score,
    iou,
)

from oracles import iou_by_counting, majority_by_tally


class TestIou:
    def test_identical_masks_score_one(self):
        rng = np.random.default_rng(0)
        mask = rng.integers(0, 3, (8, 8)).astype(np.uint8)
        report = iou(mask, mask, {0, 1, 2})
        assert all(v == 1.0 for v in report.per_category.values())
        assert report.mean_iou == 1.0

    def test_disjoint_masks_score_zero(self):
        pred = np.zeros((4, 4), np.uint8)
        gt = np.zeros((4, 4), np.uint8)
        pred[:2] = 1
        gt[2:] = 1
        report = iou(pred, gt, {1})
        assert report.per_category[1] == 0.0

    def test_void_pixels_excluded_from_both_sides(self):
        pred = np.ones((2, 4), np.uint8)
        gt = np.ones((2, 4), np.uint8)
        gt[0, :] = 255
        pred[0, :] = 0  # disagreement only under void
        report = iou(pred, gt, {0, 1})
        assert report.per_category[1] == 1.0
        assert 0 not in report.per_category  # empty union once void removed

    def test_absent_category_not_reported_as_zero(self):
        pred = np.zeros((3, 3), np.uint8)
        gt = np.zeros((3, 3), np.uint8)
        report = iou(pred, gt, {0, 5})
        assert 5 not in report.per_category
        assert report.categories_evaluated == (0,)
        assert report.mean_iou == 1.0

    def test_random_masks_match_counting_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            pred = rng.integers(0, 3, (8, 8)).astype(np.uint8)
            gt = rng.integers(0, 3, (8, 8)).astype(np.uint8)
            gt[rng.random((8, 8)) < 0.2] = 255
            report = iou(pred, gt, {0, 1, 2})
            expected, mean = iou_by_counting(pred, gt, {0, 1, 2})
            assert report.per_category == expected
            assert report.mean_iou == pytest.approx(mean, abs=0)

    def test_symmetry_without_void(self):
        rng = np.random.default_rng(9)
        pred = rng.integers(0, 4, (6, 6)).astype(np.uint8)
        gt = rng.integers(0, 4, (6, 6)).astype(np.uint8)
        a = iou(pred, gt, {0, 1, 2, 3})
        b = iou(gt, pred, {0, 1, 2, 3})
        assert a.per_category == b.per_category

    def test_errors(self):
        with pytest.raises(DimensionMismatchError):
            iou(np.zeros((2, 2), np.uint8), np.zeros((2, 3), np.uint8), {0})
        with pytest.raises(EmptyCategorySetError):
            iou(np.zeros((2, 2), np.uint8), np.zeros((2, 2), np.uint8), set())


class TestScore:
    def test_expected_time_schedule(self):
        assert expected_time(1) == 60.0
        assert expected_time(3) == 120.0

    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_bonus_anchors(self, n):
        t = expected_time(n)
        assert bonus(t, n) == 2.0
        assert bonus(2 * t, n) == 1.0
        assert bonus(1.5 * t, n) == 1.5

    def test_bonus_clamps(self):
        assert bonus(0.0, 1) == 2.0  # faster than expected never exceeds 2x
        assert bonus(10_000.0, 1) == 1.0

    @settings(max_examples=60, deadline=None)
    @given(t=st.floats(0, 5000), n=st.integers(1, 20))
    def test_bonus_range_and_monotonicity(self, t, n):
        b = bonus(t, n)
        assert 1.0 <= b <= 2.0
        assert bonus(t + 10.0, n) <= b

    def test_invalid_object_count(self):
        with pytest.raises(InvalidObjectCountError):
            bonus(10.0, 0)

    def test_base_score_endpoints_and_example(self):
        assert base_score(1.0) == 100
        assert base_score(0.0) == 0
        assert base_score(0.9) == 73

    def test_base_score_strictly_increasing(self):
        values = [base_score(v) for v in np.linspace(0, 1, 21)]
        assert values == sorted(values)
        assert base_score(0.5) < base_score(0.8) < base_score(1.0)

    def test_base_score_range_check(self):
        with pytest.raises(ScoreOutOfRangeError):
            base_score(1.2)

    def test_final_score_composition(self):
        assert final_score(1.0, 60.0, 1).final_score == 200
        assert final_score(1.0, 120.0, 1).final_score == 100
        report = final_score(0.9, 90.0, 1)
        assert report.base_score == 73
        assert report.bonus == 1.5
        assert report.final_score == 109  # 109.5 floored

    @settings(max_examples=40, deadline=None)
    @given(
        a=st.floats(0, 1),
        b=st.floats(0, 1),
        t=st.floats(0, 500),
        n=st.integers(1, 5),
    )
    def test_final_score_monotone_in_accuracy(self, a, b, t, n):
        lo, hi = sorted((a, b))
        assert final_score(lo, t, n).final_score <= final_score(hi, t, n).final_score


class TestCheckpoint:
    def _report(self, value):
        return IouReport(per_category={1: value}, mean_iou=value, categories_evaluated=(1,))

    def test_boundary_inclusive(self):
        assert checkpoint_gate(self._report(0.70)) is True
        assert checkpoint_gate(self._report(0.69)) is False

    def test_high_accuracy_passes(self):
        assert checkpoint_gate(self._report(0.955)) is True

    def test_threshold_validated(self):
        with pytest.raises(ValueError):
            checkpoint_gate(self._report(0.5), threshold=0.0)


class TestConsensus:
    def test_single_mask(self):
        mask = np.array([[1, 0], [2, 1]], np.uint8)
        cmap = consensus_counts([mask], category=1)
        assert set(np.unique(cmap.counts)) <= {0, 1}
        assert cmap.annotator_total == 1
        assert np.array_equal(consensus_majority([mask]), mask)

    def test_identical_masks(self):
        mask = np.array([[1, 0], [2, 1]], np.uint8)
        masks = [mask.copy() for _ in range(8)]
        cmap = consensus_counts(masks, category=1)
        assert set(np.unique(cmap.counts)) <= {0, 8}
        assert np.array_equal(consensus_majority(masks), mask)

    def test_random_masks_match_tally_oracle(self):
        rng = np.random.default_rng(12)
        masks = [rng.integers(0, 3, (4, 4)).astype(np.uint8) for _ in range(5)]
        assert np.array_equal(consensus_majority(masks), majority_by_tally(masks))
        counts = consensus_counts(masks, category=2).counts
        expected = sum((m == 2).astype(int) for m in masks)
        assert np.array_equal(counts, expected)

    def test_majority_repeat_wins(self):
        a = np.full((3, 3), 1, np.uint8)
        b = np.full((3, 3), 2, np.uint8)
        masks = [a, b, a, b, a]  # a repeats ceil(5/2) times
        assert np.array_equal(consensus_majority(masks), a)

    def test_tie_breaks_toward_smaller_label(self):
        a = np.full((2, 2), 4, np.uint8)
        b = np.full((2, 2), 2, np.uint8)
        assert np.all(consensus_majority([a, b]) == 2)

    def test_errors(self):
        with pytest.raises(EmptyMaskListError):
            consensus_majority([])
        with pytest.raises(DimensionMismatchError):
            consensus_counts(
                [np.zeros((2, 2), np.uint8), np.zeros((3, 2), np.uint8)], category=0
            )
