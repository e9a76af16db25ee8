"""Image loading and saving.

Binary PGM (P5) and PBM (P4) are read and written natively. PNG is read
through Pillow. All algorithmic code works on :class:`GrayImage` and
:class:`BinaryImage` and never touches files.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

LUMA_WEIGHTS = (0.299, 0.587, 0.114)
_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


class RasterError(Exception):
    """Base class for image file problems."""


class UnsupportedFormat(RasterError):
    pass


class CorruptHeader(RasterError):
    pass


class IoFailure(RasterError, OSError):
    pass


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit gray raster stored as an (H, W) uint8 array, row-major."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {px.shape}")
        if px.dtype != np.uint8:
            if px.size and (px.min() < 0 or px.max() > 255):
                raise ValueError("gray levels must lie in [0, 255]")
            px = px.astype(np.uint8)
        px = np.ascontiguousarray(px)
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @classmethod
    def from_list(cls, width: int, height: int, values) -> "GrayImage":
        values = list(values)
        if len(values) != width * height:
            raise ValueError(f"{len(values)} values for a {width}x{height} image")
        return cls(np.array(values, dtype=np.int64).reshape(height, width))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    def __repr__(self):
        return f"GrayImage({self.width}x{self.height})"


@dataclass(frozen=True, eq=False)
class BinaryImage:
    """Two-level page; ``mask`` is True where a pixel is foreground (ink)."""

    mask: np.ndarray

    def __post_init__(self):
        m = np.ascontiguousarray(np.asarray(self.mask, dtype=bool))
        if m.ndim != 2:
            raise ValueError(f"expected a 2-D mask, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "mask", m)

    @property
    def width(self) -> int:
        return self.mask.shape[1]

    @property
    def height(self) -> int:
        return self.mask.shape[0]

    def __eq__(self, other):
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return np.array_equal(self.mask, other.mask)

    def __repr__(self):
        return f"BinaryImage({self.width}x{self.height}, fg={int(self.mask.sum())})"


def to_grayscale(r: int, g: int, b: int) -> int:
    """BT.601 luma of one RGB triple, rounded half up and clamped to [0, 255]."""
    wr, wg, wb = LUMA_WEIGHTS
    value = math.floor(wr * r + wg * g + wb * b + 0.5)
    return min(255, max(0, value))


def rgb_to_gray(rgb: np.ndarray) -> np.ndarray:
    """Vectorised :func:`to_grayscale` over an (..., 3) array."""
    rgb = np.asarray(rgb, dtype=np.float64)
    luma = rgb[..., 0] * LUMA_WEIGHTS[0] + rgb[..., 1] * LUMA_WEIGHTS[1] + rgb[..., 2] * LUMA_WEIGHTS[2]
    return np.clip(np.floor(luma + 0.5), 0, 255).astype(np.uint8)


def _read_header(data: bytes, path, n_fields: int):
    """Parse the whitespace/comment separated header fields of a PNM file.

    Returns the integer fields and the offset of the first raster byte.
    """
    fields = []
    pos = 2
    while len(fields) < n_fields:
        if pos >= len(data):
            raise CorruptHeader(f"{path}: header ends at byte {pos}")
        c = data[pos : pos + 1]
        if c.isspace():
            pos += 1
        elif c == b"#":
            end = data.find(b"\n", pos)
            if end < 0:
                raise CorruptHeader(f"{path}: unterminated comment at byte {pos}")
            pos = end + 1
        else:
            start = pos
            while pos < len(data) and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
                pos += 1
            token = data[start:pos]
            if not token.isdigit():
                raise CorruptHeader(f"{path}: bad header token {token!r} at byte {start}")
            fields.append(int(token))
    # exactly one whitespace byte separates the header from the raster
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise CorruptHeader(f"{path}: missing raster separator at byte {pos}")
    return fields, pos + 1


def _decode_pnm(data: bytes, path) -> np.ndarray:
    magic = data[:2]
    if magic == b"P4":
        (width, height), offset = _read_header(data, path, 2)
        row_bytes = (width + 7) // 8
        expected = row_bytes * height
        body = data[offset : offset + expected]
        if len(body) < expected:
            raise CorruptHeader(f"{path}: raster truncated at byte {offset + len(body)}, expected {expected} bytes")
        bits = np.unpackbits(np.frombuffer(body, dtype=np.uint8).reshape(height, row_bytes), axis=1)[:, :width]
        # PBM: 1 is black
        return np.where(bits == 1, 0, 255).astype(np.uint8)

    if magic not in (b"P5", b"P6"):
        raise UnsupportedFormat(f"{path}: unsupported magic {magic!r} at byte 0")
    (width, height, maxval), offset = _read_header(data, path, 3)
    if not 0 < maxval <= 255:
        raise UnsupportedFormat(f"{path}: maxval {maxval} not supported (8-bit only)")
    channels = 1 if magic == b"P5" else 3
    expected = width * height * channels
    body = data[offset : offset + expected]
    if len(body) < expected:
        raise CorruptHeader(f"{path}: raster truncated at byte {offset + len(body)}, expected {expected} bytes")
    arr = np.frombuffer(body, dtype=np.uint8)
    if maxval != 255:
        arr = np.floor(arr.astype(np.float64) * 255.0 / maxval + 0.5).astype(np.uint8)
    if channels == 1:
        return arr.reshape(height, width).copy()
    return rgb_to_gray(arr.reshape(height, width, 3))


def _decode_png(path) -> np.ndarray:
    from PIL import Image

    try:
        with Image.open(path) as im:
            im.load()
            if im.mode.startswith("I"):
                raise UnsupportedFormat(f"{path}: 16-bit PNG not supported")
            if im.mode in ("1", "L", "LA"):
                return np.array(im.convert("L"), dtype=np.uint8)
            return rgb_to_gray(np.array(im.convert("RGB")))
    except (OSError, SyntaxError) as exc:
        raise CorruptHeader(f"{path}: unreadable PNG ({exc})") from exc


def load_image(path) -> GrayImage:
    """Load a P4/P5/P6 or PNG file as a gray image.

    Colour inputs go through :func:`to_grayscale`.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such image: {path}")
    data = path.read_bytes()
    if data.startswith(_PNG_MAGIC):
        return GrayImage(_decode_png(path))
    if len(data) >= 2 and data[:1] == b"P":
        return GrayImage(_decode_pnm(data, path))
    raise UnsupportedFormat(f"{path}: unrecognised file signature at byte 0")


def _atomic_write(path: Path, payload: bytes):
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_bytes(payload)
        os.replace(tmp, path)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def encode_pgm(pixels: np.ndarray) -> bytes:
    h, w = pixels.shape
    return b"P5\n%d %d\n255\n" % (w, h) + np.ascontiguousarray(pixels, dtype=np.uint8).tobytes()


def encode_pbm(mask: np.ndarray) -> bytes:
    h, w = mask.shape
    packed = np.packbits(np.asarray(mask, dtype=bool), axis=1)
    return b"P4\n%d %d\n" % (w, h) + packed.tobytes()


def save_image(img: GrayImage, path) -> None:
    """Write a gray image as P5 (or PNG when the suffix is ``.png``)."""
    path = Path(path)
    if path.suffix.lower() == ".png":
        from PIL import Image

        try:
            Image.fromarray(img.pixels, mode="L").save(path)
        except OSError as exc:
            raise IoFailure(f"cannot write {path}: {exc}") from exc
        return
    _atomic_write(path, encode_pgm(img.pixels))


def save_binary(img: BinaryImage, path) -> None:
    """Write a binary page. ``.pbm`` gives bit-packed P4, anything else P5.

    Foreground is stored as black (0), background as white (255).
    """
    path = Path(path)
    if path.suffix.lower() == ".pbm":
        _atomic_write(path, encode_pbm(img.mask))
    else:
        _atomic_write(path, encode_pgm(np.where(img.mask, 0, 255).astype(np.uint8)))


def load_binary(path) -> BinaryImage:
    """Read a page written by :func:`save_binary`; dark pixels are foreground."""
    gray = load_image(path)
    return BinaryImage(gray.pixels < 128)


IMAGE_SUFFIXES = (".pgm", ".pbm", ".ppm", ".png")


def list_images(directory):
    """Input images in ``directory``, sorted by name; pipeline outputs are skipped."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"no such directory: {directory}")
    return sorted(
        p
        for p in directory.iterdir()
        if p.suffix.lower() in IMAGE_SUFFIXES and not p.name.endswith((".bin.pgm", ".bg.pgm", ".bin.pbm"))
    )
