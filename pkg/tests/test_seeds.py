import numpy as np
import pytest

from scribbleseg.engine import UNLABELED, sample_seeds, seed_count
from scribbleseg.errors import EmptyTraceError


def trace_with_labeled(count, width=64, category=1):
    height = (count + width - 1) // width + 1
    trace = np.full((height, width), UNLABELED, np.uint8)
    flat = trace.reshape(-1)
    flat[:count] = category
    return trace


def test_hundred_labeled_gives_75_seeds():
    trace = trace_with_labeled(100)
    seeds = sample_seeds(trace, 0.75, np.random.default_rng(0))
    assert len(seeds) == 75


def test_single_labeled_pixel_still_yields_one_seed():
    trace = trace_with_labeled(1)
    seeds = sample_seeds(trace, 0.75, np.random.default_rng(0))
    assert len(seeds) == 1


def test_seeds_carry_their_trace_labels_and_are_unique():
    trace = np.full((8, 8), UNLABELED, np.uint8)
    trace[2, :] = 3
    trace[5, :] = 7
    seeds = sample_seeds(trace, 1.0, np.random.default_rng(1))
    assert len(seeds) == 16
    assert len({(x, y) for x, y in zip(seeds.x, seeds.y)}) == 16
    for x, y, lab in zip(seeds.x, seeds.y, seeds.label):
        assert trace[y, x] == lab


def test_empty_trace_raises():
    trace = np.full((4, 4), UNLABELED, np.uint8)
    with pytest.raises(EmptyTraceError):
        sample_seeds(trace, 0.75, np.random.default_rng(0))


@pytest.mark.parametrize("fraction", [0.0, -0.1, 1.5])
def test_fraction_out_of_range_rejected(fraction):
    trace = trace_with_labeled(10)
    with pytest.raises(ValueError):
        sample_seeds(trace, fraction, np.random.default_rng(0))


def test_eight_labeled_sampling_frequency_is_uniform():
    # 6 of 8 pixels chosen per draw; each pixel should appear in ~75%
    # of draws across fresh streams.
    trace = trace_with_labeled(8, width=8)
    trials = 10_000
    hits = np.zeros(8, np.int64)
    for t in range(trials):
        seeds = sample_seeds(trace, 0.75, np.random.default_rng(t))
        assert len(seeds) == 6
        for x, y in zip(seeds.x, seeds.y):
            hits[y * 8 + x] += 1
    freq = hits / trials
    assert np.all(np.abs(freq - 0.75) <= 0.02)


@pytest.mark.parametrize("labeled", [1, 4, 100, 1337])
def test_seed_count_rule(labeled):
    assert seed_count(labeled, 0.75) == max(1, round(0.75 * labeled))
    trace = trace_with_labeled(labeled)
    seeds = sample_seeds(trace, 0.75, np.random.default_rng(9))
    assert len(seeds) == max(1, round(0.75 * labeled))
