"""Synthetic business cards with exact ground truth.

A card is a light, unevenly lit paper background carrying dark text
lines, thin horizontal rules, solid square logos and speckle noise. Text
lines are built from blocky stroke glyphs so that a line stays one
connected blob at block resolution. Only text lines are recorded as
truth; rules, logos and speckles are background.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Tuple

import numpy as np

from .evaluator import GroundTruth, save_ground_truth
from .raster_io import GrayImage, save_image

Box = Tuple[int, int, int, int]

# unit-square stroke templates (x0, y0, x1, y1) as fractions of the glyph cell
_BARS = ((0, 0, 1, 0), (0, 0.5, 1, 0.5), (0, 1, 1, 1))
_STEMS = ((0, 0, 0, 1), (1, 0, 1, 1), (0.5, 0, 0.5, 1), (0, 0, 0, 0.5), (1, 0.5, 1, 1))


@dataclass
class Card:
    image: GrayImage
    text_boxes: List[Box]
    rules: List[Box] = field(default_factory=list)
    logos: List[Box] = field(default_factory=list)
    specks: List[Box] = field(default_factory=list)


def _overlaps(box: Box, placed: List[Box], pad_x: int, pad_y: int) -> bool:
    x0, y0, x1, y1 = box
    for a0, b0, a1, b1 in placed:
        if x0 <= a1 + pad_x and a0 <= x1 + pad_x and y0 <= b1 + pad_y and b0 <= y1 + pad_y:
            return True
    return False


def _paper(rng: np.random.Generator, width: int, height: int) -> np.ndarray:
    base = rng.uniform(175, 225)
    gx, gy = rng.uniform(-15, 15, size=2)
    xs = np.linspace(-0.5, 0.5, width)
    ys = np.linspace(-0.5, 0.5, height)
    page = base + gx * xs[None, :] + gy * ys[:, None]
    if rng.random() < 0.5:
        # pale band, as on cards with a tinted header
        top = int(rng.integers(0, height // 3))
        page[top : top + int(rng.integers(height // 10, height // 4))] -= rng.uniform(10, 30)
    page += rng.normal(0, 2.5, size=page.shape)
    return page


def _draw_glyph(page: np.ndarray, x: int, y: int, w: int, h: int, stroke: int, ink: float, rng) -> None:
    # one stem and one full-width bar keep the glyph spanning its cell
    templates = [_STEMS[0], _BARS[int(rng.integers(0, 3))]]
    extra = rng.choice(len(_BARS) + len(_STEMS), size=int(rng.integers(0, 2)), replace=False)
    templates += [(_BARS + _STEMS)[i] for i in extra]
    for fx0, fy0, fx1, fy1 in templates:
        px0 = x + int(round(fx0 * (w - stroke)))
        py0 = y + int(round(fy0 * (h - stroke)))
        px1 = x + int(round(fx1 * (w - stroke))) + stroke
        py1 = y + int(round(fy1 * (h - stroke))) + stroke
        page[py0:py1, px0:px1] = ink


def _text_line(rng, page, x, y, n_chars, h, ink) -> Box:
    cw = max(6, int(round(0.6 * h)))
    stroke = max(2, h // 9)
    char_gap = max(2, h // 6)
    word_gap = min(14, max(char_gap + 2, h // 2))
    cx = x
    for i in range(n_chars):
        _draw_glyph(page, cx, y, cw, h, stroke, ink, rng)
        cx += cw + (word_gap if (i + 1) % int(rng.integers(3, 7)) == 0 else char_gap)
    return x, y, cx - char_gap - 1, y + h - 1


def _line_width(n_chars: int, h: int) -> int:
    return n_chars * (int(round(0.6 * h)) + max(2, h // 6)) + 30


def _box_blur(page: np.ndarray) -> np.ndarray:
    p = np.pad(page, 1, mode="edge")
    rows = (p[:-2] + p[1:-1] + p[2:]) / 3.0
    return (rows[:, :-2] + rows[:, 1:-1] + rows[:, 2:]) / 3.0


def make_card(rng: np.random.Generator, width: int = 1024, height: int = 768) -> Card:
    page = _paper(rng, width, height)
    placed: List[Box] = []
    card = Card(image=None, text_boxes=[])
    s = height / 768.0
    margin = int(20 * s)
    pad_x, pad_y = max(40, width // 25), max(10, int(10 * s))

    def try_place(w, h, tries=60):
        for _ in range(tries):
            if width - margin - w <= margin or height - margin - h <= margin:
                return None
            x = int(rng.integers(margin, width - margin - w))
            y = int(rng.integers(margin, height - margin - h))
            box = (x, y, x + w - 1, y + h - 1)
            if not _overlaps(box, placed, pad_x, pad_y):
                placed.append(box)
                return box
        return None

    for _ in range(int(rng.integers(1, 3))):
        side = int(rng.integers(60, 150) * s)
        box = try_place(side, side)
        if box:
            page[box[1] : box[3] + 1, box[0] : box[2] + 1] = rng.uniform(10, 90)
            card.logos.append(box)
            if rng.random() < 0.3:
                # company name set flush against the logo; it merges with it
                h = int(rng.integers(20, 36) * s)
                n = int(rng.integers(5, 12))
                lx, ly = box[2] + 1 + int(rng.integers(0, 4)), box[1] + (side - h) // 2
                if lx + _line_width(n, h) < width - margin:
                    tb = _text_line(rng, page, lx, ly, n, h, rng.uniform(10, 70))
                    card.text_boxes.append(tb)
                    placed.append(tb)

    for _ in range(int(rng.integers(1, 3))):
        length = int(rng.integers(200, 700) * s)
        thick = int(rng.integers(2, 6))
        box = try_place(length, thick)
        if box:
            page[box[1] : box[3] + 1, box[0] : box[2] + 1] = rng.uniform(10, 80)
            card.rules.append(box)

    for _ in range(int(rng.integers(6, 12))):
        h = int(rng.integers(14, 40) * s)
        n = int(rng.integers(6, 24))
        box = try_place(min(_line_width(n, h), width - 2 * margin - 1), h)
        if box:
            card.text_boxes.append(_text_line(rng, page, box[0], box[1], n, h, rng.uniform(10, 70)))

    for _ in range(int(rng.integers(3, 10))):
        d = int(rng.integers(2, 7))
        box = try_place(d, d, tries=20)
        if box:
            page[box[1] : box[3] + 1, box[0] : box[2] + 1] = rng.uniform(20, 90)
            card.specks.append(box)

    page = _box_blur(page)
    card.image = GrayImage(np.clip(np.rint(page), 0, 255).astype(np.uint8))
    return card


def make_corpus(n: int = 20, seed: int = 0, width: int = 1024, height: int = 768) -> List[Card]:
    rng = np.random.default_rng(seed)
    return [make_card(rng, width, height) for _ in range(n)]


def write_corpus(out_dir, n: int = 20, seed: int = 0, width: int = 1024, height: int = 768) -> Path:
    """Write ``card_XX.pgm`` files plus ``truth.json``; return the truth path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    truth = []
    for i, card in enumerate(make_corpus(n, seed, width, height)):
        name = f"card_{i:02d}.pgm"
        save_image(card.image, out / name)
        truth.append(GroundTruth(image=name, text_boxes=card.text_boxes))
    path = out / "truth.json"
    save_ground_truth(truth, path)
    return path
