import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from PIL import Image

from scribbleseg.errors import MalformedPngError, UnknownCategoryError
from scribbleseg.maskpng import (
    Palette,
    colormap,
    decode_mask_png,
    encode_mask_png,
    load_mask_png,
    save_mask_png,
)


def test_1x1_round_trip():
    mask = np.zeros((1, 1), np.uint8)
    assert np.array_equal(decode_mask_png(encode_mask_png(mask)), mask)


def test_random_16x16_over_21_categories_round_trips_exactly():
    rng = np.random.default_rng(1)
    mask = rng.integers(0, 21, (16, 16)).astype(np.uint8)
    mask[0, :4] = 255
    assert np.array_equal(decode_mask_png(encode_mask_png(mask)), mask)


@settings(max_examples=30, deadline=None)
@given(
    w=st.integers(1, 24),
    h=st.integers(1, 24),
    seed=st.integers(0, 2**32 - 1),
    void_frac=st.floats(0, 0.5),
)
def test_round_trip_is_identity(w, h, seed, void_frac):
    rng = np.random.default_rng(seed)
    mask = rng.integers(0, 21, (h, w)).astype(np.uint8)
    mask[rng.random((h, w)) < void_frac] = 255
    assert np.array_equal(decode_mask_png(encode_mask_png(mask)), mask)


def test_pascal_style_annotation_preserves_void():
    # a ground-truth-style file: palette PNG with 255 as the void index
    gt = np.zeros((10, 10), np.uint8)
    gt[2:8, 2:8] = 15
    gt[0, :] = 255
    img = Image.fromarray(gt, mode="P")
    img.putpalette(Palette.default().flat())
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    decoded = decode_mask_png(buf.getvalue())
    assert np.array_equal(decoded, gt)
    assert np.all(decoded[0, :] == 255)


def test_unknown_category_value_rejected():
    mask = np.full((2, 2), 30, np.uint8)
    with pytest.raises(UnknownCategoryError):
        encode_mask_png(mask, Palette.default(21))


def test_void_value_allowed_by_any_palette():
    mask = np.full((2, 2), 255, np.uint8)
    decoded = decode_mask_png(encode_mask_png(mask, Palette.default(2)))
    assert np.array_equal(decoded, mask)


def test_malformed_bytes_rejected():
    with pytest.raises(MalformedPngError):
        decode_mask_png(b"this is not a png at all")


def test_rgb_png_rejected():
    img = Image.new("RGB", (4, 4), (10, 20, 30))
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    with pytest.raises(MalformedPngError):
        decode_mask_png(buf.getvalue())


def test_save_and_load_files(tmp_path):
    mask = np.arange(12, dtype=np.uint8).reshape(3, 4)
    path = tmp_path / "mask.png"
    save_mask_png(path, mask)
    assert np.array_equal(load_mask_png(path), mask)


def test_default_palette_layout():
    palette = Palette.default(21)
    assert palette.color_of(0) == (0, 0, 0)
    assert palette.color_of(255) == (224, 224, 192)
    used = {palette.color_of(c) for c in range(21)}
    assert len(used) == 21


def test_colormap_is_injective_over_256():
    table = colormap(256)
    assert len({tuple(c) for c in table.tolist()}) == 256


def test_custom_palette_colors():
    palette = Palette.from_colors([(0, 0, 0), (200, 10, 10)])
    assert palette.num_categories == 2
    assert palette.color_of(1) == (200, 10, 10)
    with pytest.raises(ValueError):
        Palette.from_colors([(1, 2, 3), (1, 2, 3)])
