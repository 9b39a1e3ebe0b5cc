"""Indexed-palette PNG codec for label masks and trace rasters.

Masks are stored as 8-bit palette PNGs whose pixel values ARE the
category ids, with 255 reserved for unlabeled/void, matching the layout
of PASCAL-style ground-truth annotation files. Encoding and decoding
round-trip the index data bit-exactly.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from .engine import UNLABELED
from .errors import MalformedPngError, UnknownCategoryError

VOID_COLOR = (224, 224, 192)


def colormap(n: int = 256) -> np.ndarray:
    """Bit-reversal colormap used by PASCAL-style palettes, (n, 3) uint8."""
    cmap = np.zeros((n, 3), np.uint8)
    for i in range(n):
        r = g = b = 0
        value = i
        for j in range(8):
            r |= ((value >> 0) & 1) << (7 - j)
            g |= ((value >> 1) & 1) << (7 - j)
            b |= ((value >> 2) & 1) << (7 - j)
            value >>= 3
        cmap[i] = (r, g, b)
    return cmap


@dataclass(frozen=True)
class Palette:
    """Category id -> display color table.

    Index 0 is the background (black); index 255 is the void/unlabeled
    color. Slots beyond num_categories keep the colormap continuation so
    any 8-bit index stays renderable.
    """

    table: np.ndarray
    num_categories: int

    def __post_init__(self) -> None:
        if not 1 <= self.num_categories <= 255:
            raise ValueError("palette supports 1..255 categories")
        if self.table.shape != (256, 3):
            raise ValueError("palette table must be (256, 3)")
        used = self.table[: self.num_categories]
        if len({tuple(c) for c in used.tolist()}) != self.num_categories:
            raise ValueError("palette colors must be unique")

    @classmethod
    def default(cls, num_categories: int = 21) -> "Palette":
        table = colormap(256)
        table[255] = VOID_COLOR
        return cls(table=table, num_categories=num_categories)

    @classmethod
    def from_colors(cls, colors: list[tuple[int, int, int]]) -> "Palette":
        table = colormap(256)
        table[255] = VOID_COLOR
        for i, color in enumerate(colors):
            table[i] = color
        return cls(table=table, num_categories=len(colors))

    def color_of(self, category: int) -> tuple[int, int, int]:
        return tuple(int(v) for v in self.table[category])

    def flat(self) -> list[int]:
        return [int(v) for v in self.table.reshape(-1)]


def encode_mask_png(mask: np.ndarray, palette: Palette | None = None) -> bytes:
    """Encode a label mask or trace raster as an 8-bit indexed PNG."""
    mask = np.asarray(mask)
    if mask.ndim != 2:
        raise ValueError(f"expected a 2-D mask, got shape {mask.shape}")
    if mask.dtype != np.uint8:
        if mask.min() < 0 or mask.max() > 255:
            raise UnknownCategoryError("mask values outside the 8-bit range")
        mask = mask.astype(np.uint8)
    if palette is None:
        palette = Palette.default()
    invalid = (mask >= palette.num_categories) & (mask != UNLABELED)
    if invalid.any():
        bad = int(mask[invalid][0])
        raise UnknownCategoryError(
            f"mask value {bad} not covered by a {palette.num_categories}-category palette"
        )
    img = Image.fromarray(mask, mode="P")
    img.putpalette(palette.flat())
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def decode_mask_png(data: bytes) -> np.ndarray:
    """Decode an indexed PNG back to its (H, W) uint8 index array."""
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise MalformedPngError(f"not a decodable PNG: {exc}") from exc
    if img.format != "PNG":
        raise MalformedPngError(f"expected PNG data, got {img.format}")
    if img.mode not in ("P", "L"):
        raise MalformedPngError(
            f"expected an indexed (palette) or 8-bit grayscale PNG, got mode {img.mode}"
        )
    return np.asarray(img, dtype=np.uint8)


def save_mask_png(path, mask: np.ndarray, palette: Palette | None = None) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_mask_png(mask, palette))


def load_mask_png(path) -> np.ndarray:
    with open(path, "rb") as fh:
        return decode_mask_png(fh.read())
