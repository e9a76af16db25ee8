import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cardtext.background import (
    BackgroundParams,
    BlockLabel,
    BlockStats,
    ImageTooSmall,
    block_statistics,
    classify_block,
    eliminate_background,
    sigma_threshold,
)
from cardtext.raster_io import GrayImage

DEFAULT = BackgroundParams()


def sigma_oracle(g_min, t_min, t_fixed):
    # T_fixed plus twice whatever G_min - T_min exceeds T_fixed by
    return t_fixed + 2 * max(0, g_min - t_min - t_fixed)


@pytest.mark.parametrize(
    "g_min, expected",
    [(110, 20), (150, 80), (100, 20), (40, 20), (255, 20 + 2 * 135)],
)
def test_sigma_threshold_examples(g_min, expected):
    assert sigma_threshold(BlockStats(g_min, 255, 0), DEFAULT) == expected


@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 200))
def test_sigma_threshold_oracle(g_min, t_min, t_fixed):
    params = BackgroundParams(t_fixed=t_fixed, t_min=t_min)
    t = sigma_threshold(BlockStats(g_min, g_min, 0), params)
    assert t == sigma_oracle(g_min, t_min, t_fixed)
    if g_min - t_min <= t_fixed:
        assert t == t_fixed


def test_classify_block_examples():
    assert classify_block(BlockStats(255, 255, 0)) is BlockLabel.BACKGROUND
    assert classify_block(BlockStats(40, 40, 0)) is BlockLabel.INFORMATION
    assert classify_block(BlockStats(150, 250, 100)) is BlockLabel.INFORMATION
    assert classify_block(BlockStats(150, 229, 79)) is BlockLabel.BACKGROUND
    # the guard is strict: G_min equal to T_min is not bright enough
    assert classify_block(BlockStats(100, 100, 0)) is BlockLabel.INFORMATION


@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
def test_more_spread_never_makes_background(g_min, s1, s2):
    lo, hi = sorted((s1, s2))
    a = classify_block(BlockStats(g_min, 255, lo))
    b = classify_block(BlockStats(g_min, 255, hi))
    if a is BlockLabel.INFORMATION:
        assert b is BlockLabel.INFORMATION


def test_all_white_image():
    img = GrayImage(np.full((4, 128), 255, dtype=np.uint8))
    out, grid = eliminate_background(img)
    assert out == img
    assert (grid.block_width, grid.block_height) == (2, 2)
    assert (grid.cols, grid.rows) == (64, 2)
    assert not grid.information.any()


def test_four_block_tiling():
    img = GrayImage(np.full((4, 128), 255, dtype=np.uint8))
    _, grid = eliminate_background(img, BackgroundParams(width_divisor=2))
    assert (grid.cols, grid.rows) == (2, 2)
    assert all(grid.label(r, c) is BlockLabel.BACKGROUND for r in range(2) for c in range(2))


def test_one_dark_pixel_keeps_its_block():
    px = np.full((4, 128), 230, dtype=np.uint8)
    px[1, 5] = 0
    px[0, 4] = 210
    out, grid = eliminate_background(GrayImage(px))
    # pixel (x=5, y=1) sits in block row 0, col 2 (block width 2)
    assert grid.information.sum() == 1 and grid.information[0, 2]
    expected = np.full_like(px, 255)
    expected[0:2, 4:6] = px[0:2, 4:6]
    assert np.array_equal(out.pixels, expected)


def test_edge_blocks_absorb_remainder():
    img = GrayImage(np.full((7, 200), 200, dtype=np.uint8))
    grid = block_statistics(img)
    assert grid.block_width == 3
    assert grid.cols == 66 and grid.rows == 3
    assert grid.col_edges[-1] == 200 and grid.row_edges[-1] == 7
    assert grid.block_area(2, 65) == (200 - 65 * 3) * (7 - 4)
    total = sum(grid.block_area(r, c) for r in range(grid.rows) for c in range(grid.cols))
    assert total == 200 * 7


def test_stats_match_brute_force():
    rng = np.random.default_rng(3)
    px = rng.integers(0, 256, size=(9, 150), dtype=np.uint8)
    grid = block_statistics(GrayImage(px))
    for r in range(grid.rows):
        for c in range(grid.cols):
            x0, y0, x1, y1 = grid.block_rect(r, c)
            block = px[y0 : y1 + 1, x0 : x1 + 1]
            st_ = grid.stats(r, c)
            assert (st_.g_min, st_.g_max) == (block.min(), block.max())
            assert st_.spread == block.max() - block.min()
            assert grid.label(r, c) is classify_block(st_)


def test_stddev_statistic():
    rng = np.random.default_rng(4)
    px = rng.integers(90, 256, size=(6, 128), dtype=np.uint8)
    params = BackgroundParams(spread_statistic="stddev")
    grid = block_statistics(GrayImage(px), params)
    for r in range(grid.rows):
        for c in range(grid.cols):
            x0, y0, x1, y1 = grid.block_rect(r, c)
            block = px[y0 : y1 + 1, x0 : x1 + 1].astype(float)
            assert grid.spread[r, c] == pytest.approx(block.std(), abs=1e-9)
            assert grid.label(r, c) is classify_block(grid.stats(r, c), params)


def test_too_small():
    with pytest.raises(ImageTooSmall):
        eliminate_background(GrayImage(np.zeros((4, 63), dtype=np.uint8)))
    with pytest.raises(ImageTooSmall):
        eliminate_background(GrayImage(np.zeros((1, 64), dtype=np.uint8)))


@st.composite
def gray_images(draw):
    w = draw(st.integers(64, 160))
    h = draw(st.integers(2, 12))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    base = rng.integers(0, 256)
    noise = rng.integers(0, draw(st.integers(1, 120)), size=(h, w))
    return GrayImage(np.clip(base + noise - noise.max() // 2, 0, 255))


@settings(max_examples=60)
@given(gray_images(), st.integers(0, 255), st.integers(0, 60))
def test_background_invariants(img, t_min, t_fixed):
    params = BackgroundParams(t_fixed=t_fixed, t_min=t_min)
    out, grid = eliminate_background(img, params)
    changed = out.pixels != img.pixels
    assert (out.pixels[changed] == 255).all()
    for r in range(grid.rows):
        for c in range(grid.cols):
            x0, y0, x1, y1 = grid.block_rect(r, c)
            if (img.pixels[y0 : y1 + 1, x0 : x1 + 1] <= t_min).any():
                assert grid.information[r, c]
    again, grid2 = eliminate_background(out, params)
    assert again == out
    assert np.array_equal(grid2.information, grid.information)
