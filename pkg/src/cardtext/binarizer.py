"""Per-component binarization.

Pass 1 marks pixels darker than the midpoint of the component's extremes.
Pass 2 promotes a pixel whose 8 neighbours include at least five pass-1
foreground pixels. Pass 2 reads only the frozen pass-1 mask, so the result
does not depend on scan order. Pixels without a full 8-neighbourhood inside
the region are left as pass 1 decided.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from .classifier import EmptyRegion
from .components import ConnectedComponent
from .raster_io import BinaryImage, GrayImage

MIN_FG_NEIGHBOURS = 5


class PatchOutOfBounds(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class BinaryPatch:
    origin: Tuple[int, int]  # (x0, y0)
    mask: np.ndarray  # True = foreground

    @property
    def width(self) -> int:
        return self.mask.shape[1]

    @property
    def height(self) -> int:
        return self.mask.shape[0]

    def __eq__(self, other):
        if not isinstance(other, BinaryPatch):
            return NotImplemented
        return self.origin == other.origin and np.array_equal(self.mask, other.mask)


def _shift_sum(padded: np.ndarray, h: int, w: int, include_centre: bool) -> np.ndarray:
    total = np.zeros((h, w), dtype=np.uint8)
    for dy in (0, 1, 2):
        for dx in (0, 1, 2):
            if dy == 1 and dx == 1 and not include_centre:
                continue
            total += padded[dy : dy + h, dx : dx + w]
    return total


def binarize_region(values: np.ndarray, region: np.ndarray = None):
    """Binarize a 2-D block of gray levels.

    ``region`` marks which pixels take part (default: all). Returns
    ``(pass1, final)`` boolean masks of the same shape.
    """
    values = np.asarray(values)
    h, w = values.shape
    if region is None:
        region = np.ones((h, w), dtype=bool)
    if not region.any():
        raise EmptyRegion("region covers no pixels")
    inside = values[region]
    lo, hi = int(inside.min()), int(inside.max())
    pass1 = region & (values.astype(np.int16) * 2 < lo + hi)

    fg_neighbours = _shift_sum(np.pad(pass1, 1).view(np.uint8), h, w, include_centre=False)
    interior = _shift_sum(np.pad(region, 1).view(np.uint8), h, w, include_centre=True) == 9
    final = pass1 | (interior & (fg_neighbours >= MIN_FG_NEIGHBOURS))
    return pass1, final


def binarize_cc(cc: ConnectedComponent, img: GrayImage, region: str = "blocks") -> BinaryPatch:
    x0, y0, x1, y1 = cc.bbox
    if x1 < x0 or y1 < y0:
        raise EmptyRegion(f"component has empty bbox {cc.bbox}")
    sub = img.pixels[y0 : y1 + 1, x0 : x1 + 1]
    if region == "bbox" or cc.mask is None:
        covered = None
    elif region == "blocks":
        covered = cc.mask
    else:
        raise ValueError(f"unknown region mode {region!r}")
    _, final = binarize_region(sub, covered)
    return BinaryPatch(origin=(x0, y0), mask=final)


def compose_output(patches: Iterable[BinaryPatch], width: int, height: int) -> BinaryImage:
    """Paint patch foreground onto an all-background page."""
    page = np.zeros((height, width), dtype=bool)
    for p in patches:
        x0, y0 = p.origin
        if x0 < 0 or y0 < 0 or x0 + p.width > width or y0 + p.height > height:
            raise PatchOutOfBounds(f"{p.width}x{p.height} patch at {p.origin} exceeds {width}x{height} page")
        page[y0 : y0 + p.height, x0 : x0 + p.width] |= p.mask
    return BinaryImage(page)
