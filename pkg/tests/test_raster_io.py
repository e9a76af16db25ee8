import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from PIL import Image

from cardtext.raster_io import (
    BinaryImage,
    CorruptHeader,
    GrayImage,
    UnsupportedFormat,
    load_binary,
    load_image,
    rgb_to_gray,
    save_binary,
    save_image,
    to_grayscale,
)

levels = st.integers(0, 255)


def test_load_p5_bytes(tmp_path):
    p = tmp_path / "a.pgm"
    p.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 255, 128, 64]))
    img = load_image(p)
    assert (img.width, img.height) == (2, 2)
    assert img == GrayImage.from_list(2, 2, [0, 255, 128, 64])


def test_header_comments_are_skipped(tmp_path):
    p = tmp_path / "c.pgm"
    p.write_bytes(b"P5\n# made by hand\n2 1 # trailing\n255\n" + bytes([7, 9]))
    assert load_image(p).pixels.tolist() == [[7, 9]]


def test_truncated_body(tmp_path):
    p = tmp_path / "t.pgm"
    p.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 255, 128]))
    with pytest.raises(CorruptHeader, match="t.pgm"):
        load_image(p)


def test_bad_header_token(tmp_path):
    p = tmp_path / "h.pgm"
    p.write_bytes(b"P5\n2 x\n255\n")
    with pytest.raises(CorruptHeader, match="byte"):
        load_image(p)


def test_unsupported(tmp_path):
    p = tmp_path / "x.bin"
    p.write_bytes(b"GIF89a")
    with pytest.raises(UnsupportedFormat):
        load_image(p)
    p.write_bytes(b"P2\n1 1\n255\n0\n")
    with pytest.raises(UnsupportedFormat):
        load_image(p)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_image(tmp_path / "nope.pgm")


def test_png_matches_pgm(tmp_path):
    Image.fromarray(np.array([[0, 255], [128, 64]], dtype=np.uint8), mode="L").save(tmp_path / "a.png")
    (tmp_path / "a.pgm").write_bytes(b"P5\n2 2\n255\n" + bytes([0, 255, 128, 64]))
    assert load_image(tmp_path / "a.png") == load_image(tmp_path / "a.pgm")


def test_rgb_png_goes_through_luma(tmp_path):
    rgb = np.array([[[255, 0, 0], [0, 255, 0]], [[0, 0, 255], [10, 10, 10]]], dtype=np.uint8)
    Image.fromarray(rgb, mode="RGB").save(tmp_path / "c.png")
    got = load_image(tmp_path / "c.png").pixels
    assert got.tolist() == [[to_grayscale(255, 0, 0), to_grayscale(0, 255, 0)], [to_grayscale(0, 0, 255), 10]]


def test_p6_colour(tmp_path):
    p = tmp_path / "c.ppm"
    p.write_bytes(b"P6\n1 1\n255\n" + bytes([255, 0, 0]))
    assert load_image(p).pixels.tolist() == [[76]]


@pytest.mark.parametrize(
    "rgb, expected",
    [((0, 0, 0), 0), ((255, 255, 255), 255), ((255, 0, 0), 76), ((0, 255, 0), 150), ((0, 0, 255), 29)],
)
def test_to_grayscale(rgb, expected):
    assert to_grayscale(*rgb) == expected


@given(levels, levels, levels, st.integers(0, 2), st.integers(1, 255))
def test_to_grayscale_monotone(r, g, b, channel, bump):
    lo = [r, g, b]
    hi = list(lo)
    hi[channel] = min(255, hi[channel] + bump)
    assert to_grayscale(*lo) <= to_grayscale(*hi)


@given(levels)
def test_to_grayscale_equal_channels(v):
    assert to_grayscale(v, v, v) == v


@given(arrays(np.uint8, st.tuples(st.integers(1, 6), st.integers(1, 6), st.just(3))))
def test_vectorised_luma_matches_scalar(rgb):
    expected = [[to_grayscale(*map(int, px)) for px in row] for row in rgb]
    assert rgb_to_gray(rgb).tolist() == expected


@pytest.mark.parametrize("fg, byte", [(True, 0), (False, 255)])
def test_save_binary_single_pixel(tmp_path, fg, byte):
    p = tmp_path / "b.pgm"
    save_binary(BinaryImage(np.array([[fg]])), p)
    assert p.read_bytes().endswith(bytes([byte]))
    assert p.read_bytes().startswith(b"P5")


def test_save_binary_pbm_bits(tmp_path):
    p = tmp_path / "b.pbm"
    mask = np.array([[True, False, False, False, False, False, False, False, True]])
    save_binary(BinaryImage(mask), p)
    assert p.read_bytes() == b"P4\n9 1\n" + bytes([0b10000000, 0b10000000])


@settings(max_examples=40)
@given(arrays(bool, st.tuples(st.integers(1, 20), st.integers(1, 20))), st.sampled_from([".pgm", ".pbm"]))
def test_binary_round_trip(tmp_path_factory, mask, suffix):
    p = tmp_path_factory.mktemp("rt") / f"m{suffix}"
    img = BinaryImage(mask)
    save_binary(img, p)
    assert load_binary(p) == img


@settings(max_examples=40)
@given(arrays(np.uint8, st.tuples(st.integers(1, 20), st.integers(1, 20))), st.sampled_from([".pgm", ".png"]))
def test_gray_round_trip(tmp_path_factory, px, suffix):
    p = tmp_path_factory.mktemp("rt") / f"g{suffix}"
    img = GrayImage(px)
    save_image(img, p)
    assert load_image(p) == img


def test_gray_image_is_read_only():
    img = GrayImage(np.zeros((2, 3), dtype=np.uint8))
    with pytest.raises(ValueError):
        img.pixels[0, 0] = 1


def test_gray_image_rejects_out_of_range():
    with pytest.raises(ValueError):
        GrayImage(np.array([[300]]))
