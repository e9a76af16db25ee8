"""Coarse background elimination over a grid of short, wide blocks.

Each block is W/64 pixels wide and 2 pixels tall. A block is background
when it is bright (its darkest pixel is above ``t_min``) and flat (its
gray-level spread is below a threshold that loosens as the block gets
brighter). Background pixels are overwritten with 255.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .raster_io import GrayImage


class ImageTooSmall(ValueError):
    pass


class BlockLabel(enum.Enum):
    BACKGROUND = "background"
    INFORMATION = "information"


@dataclass(frozen=True)
class BackgroundParams:
    t_fixed: int = 20
    t_min: int = 100
    width_divisor: int = 64
    block_height: int = 2
    spread_statistic: str = "range"

    def __post_init__(self):
        if self.t_fixed < 0:
            raise ValueError("t_fixed must be >= 0")
        if not 0 <= self.t_min <= 255:
            raise ValueError("t_min must lie in [0, 255]")
        if self.width_divisor < 1 or self.block_height < 1:
            raise ValueError("block geometry must be positive")
        if self.spread_statistic not in ("range", "stddev"):
            raise ValueError(f"unknown spread statistic {self.spread_statistic!r}")


@dataclass(frozen=True)
class BlockStats:
    g_min: int
    g_max: int
    spread: float

    def __post_init__(self):
        if not 0 <= self.g_min <= self.g_max <= 255:
            raise ValueError(f"invalid block extremes ({self.g_min}, {self.g_max})")


@dataclass(frozen=True, eq=False)
class BlockGrid:
    """Per-block statistics and labels.

    ``col_edges``/``row_edges`` hold the pixel boundaries of the blocks
    (length cols+1 / rows+1). The last column and row absorb whatever
    does not divide evenly, so every pixel lies in exactly one block.
    """

    block_width: int
    block_height: int
    col_edges: np.ndarray
    row_edges: np.ndarray
    information: np.ndarray  # (rows, cols) bool, True for Information blocks
    g_min: np.ndarray
    g_max: np.ndarray
    spread: np.ndarray

    @property
    def cols(self) -> int:
        return len(self.col_edges) - 1

    @property
    def rows(self) -> int:
        return len(self.row_edges) - 1

    @property
    def width(self) -> int:
        return int(self.col_edges[-1])

    @property
    def height(self) -> int:
        return int(self.row_edges[-1])

    @property
    def labels(self) -> np.ndarray:
        return np.where(self.information, BlockLabel.INFORMATION, BlockLabel.BACKGROUND)

    def label(self, row: int, col: int) -> BlockLabel:
        return BlockLabel.INFORMATION if self.information[row, col] else BlockLabel.BACKGROUND

    def stats(self, row: int, col: int) -> BlockStats:
        return BlockStats(int(self.g_min[row, col]), int(self.g_max[row, col]), float(self.spread[row, col]))

    def block_rect(self, row: int, col: int):
        """Inclusive pixel rectangle (x0, y0, x1, y1) of one block."""
        return (
            int(self.col_edges[col]),
            int(self.row_edges[row]),
            int(self.col_edges[col + 1]) - 1,
            int(self.row_edges[row + 1]) - 1,
        )

    def block_area(self, row: int, col: int) -> int:
        return int(
            (self.col_edges[col + 1] - self.col_edges[col]) * (self.row_edges[row + 1] - self.row_edges[row])
        )

    @classmethod
    def from_information(cls, information, block_width: int = 1, block_height: int = 1) -> "BlockGrid":
        """Grid with given labels and uniform geometry; statistics are dummies.

        Handy for exercising the labelling code without an image.
        """
        info = np.asarray(information, dtype=bool)
        rows, cols = info.shape
        zeros = np.zeros(info.shape, dtype=np.uint8)
        return cls(
            block_width=block_width,
            block_height=block_height,
            col_edges=np.arange(cols + 1) * block_width,
            row_edges=np.arange(rows + 1) * block_height,
            information=info,
            g_min=zeros,
            g_max=zeros,
            spread=zeros.astype(np.float64),
        )


def sigma_threshold(stats: BlockStats, params: BackgroundParams = BackgroundParams()) -> int:
    """Dynamic spread threshold T_fixed + T_var for one block.

    T_var is twice the amount by which G_min - T_min exceeds T_fixed, and 0
    when G_min <= T_min (such a block can never be background anyway).
    """
    diff = stats.g_min - params.t_min
    if diff <= 0:
        return params.t_fixed
    t_var = (diff - min(params.t_fixed, diff)) * 2
    return params.t_fixed + t_var


def classify_block(stats: BlockStats, params: BackgroundParams = BackgroundParams()) -> BlockLabel:
    if stats.g_min > params.t_min and stats.spread < sigma_threshold(stats, params):
        return BlockLabel.BACKGROUND
    return BlockLabel.INFORMATION


def _sigma_threshold_array(g_min: np.ndarray, params: BackgroundParams) -> np.ndarray:
    diff = g_min.astype(np.int32) - params.t_min
    t_var = np.where(diff > 0, (diff - np.minimum(params.t_fixed, diff)) * 2, 0)
    return params.t_fixed + t_var


def block_edges(length: int, size: int) -> np.ndarray:
    count = length // size
    edges = np.arange(count + 1, dtype=np.int64) * size
    edges[-1] = length
    return edges


def block_statistics(img: GrayImage, params: BackgroundParams = BackgroundParams()) -> BlockGrid:
    """Tile the image and classify every block."""
    w, h = img.width, img.height
    if w < params.width_divisor or h < params.block_height:
        raise ImageTooSmall(
            f"{w}x{h} image is smaller than one {params.width_divisor}-column by {params.block_height}-row tiling"
        )
    bw = max(1, w // params.width_divisor)
    bh = params.block_height
    col_edges = block_edges(w, bw)
    row_edges = block_edges(h, bh)
    px = img.pixels

    g_min = np.minimum.reduceat(np.minimum.reduceat(px, row_edges[:-1], axis=0), col_edges[:-1], axis=1)
    g_max = np.maximum.reduceat(np.maximum.reduceat(px, row_edges[:-1], axis=0), col_edges[:-1], axis=1)
    if params.spread_statistic == "range":
        spread = (g_max.astype(np.int16) - g_min).astype(np.float64)
    else:
        counts = np.outer(np.diff(row_edges), np.diff(col_edges)).astype(np.float64)
        wide = px.astype(np.uint32)
        s1 = np.add.reduceat(np.add.reduceat(wide, row_edges[:-1], axis=0), col_edges[:-1], axis=1)
        wide *= wide
        s2 = np.add.reduceat(np.add.reduceat(wide, row_edges[:-1], axis=0), col_edges[:-1], axis=1)
        del wide
        mean = s1 / counts
        spread = np.sqrt(np.maximum(s2 / counts - mean * mean, 0.0))

    background = (g_min > params.t_min) & (spread < _sigma_threshold_array(g_min, params))
    return BlockGrid(
        block_width=bw,
        block_height=bh,
        col_edges=col_edges,
        row_edges=row_edges,
        information=~background,
        g_min=g_min,
        g_max=g_max,
        spread=spread,
    )


def expand_to_pixels(block_mask: np.ndarray, grid: BlockGrid) -> np.ndarray:
    """Blow a (rows, cols) block mask up to an (H, W) pixel mask."""
    return np.repeat(np.repeat(block_mask, np.diff(grid.row_edges), axis=0), np.diff(grid.col_edges), axis=1)


def eliminate_background(img: GrayImage, params: BackgroundParams = BackgroundParams()):
    """Return ``(cleaned, grid)`` with every background block set to 255."""
    grid = block_statistics(img, params)
    out = img.pixels.copy()
    out[expand_to_pixels(~grid.information, grid)] = 255
    return GrayImage(out), grid
