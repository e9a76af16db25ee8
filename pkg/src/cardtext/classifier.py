"""Rule cascade deciding which connected components are text.

Rules run first-match in this order:

1. line: a thin horizontal or vertical stroke
2. noise: too short, too narrow, or too small in area
3. aspect: width/height ratio outside (r_min, r_max)
4. fill: ink-to-paper percentage outside (ra_min, ra_max)

A component that survives every rule is text. All comparisons are strict.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields, replace
from typing import Mapping, Optional, Sequence

import numpy as np

from .components import ConnectedComponent
from .raster_io import GrayImage

# line precedes noise: with the default formulas B_TH < H_TH and B_TH < W_TH,
# so every line also passes the noise test
ALL_RULES = ("line", "noise", "aspect", "fill")


class EmptyRegion(ValueError):
    pass


class RegionLabel(enum.Enum):
    TEXT = "text"
    NOISE = "noise"
    HLINE = "hline"
    VLINE = "vline"
    NONTEXT = "nontext"


@dataclass(frozen=True)
class RuleThresholds:
    h_th: float
    w_th: float
    a_th: float
    b_th: float
    l_th: float
    r_min: float = 1.2
    r_max: float = 32.0
    ra_min: float = 5.0
    ra_max: float = 90.0

    def __post_init__(self):
        if not self.r_min < self.r_max:
            raise ValueError(f"r_min ({self.r_min}) must be below r_max ({self.r_max})")
        if not self.ra_min < self.ra_max:
            raise ValueError(f"ra_min ({self.ra_min}) must be below ra_max ({self.ra_max})")
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"{f.name} must be positive")


@dataclass(frozen=True)
class RuleParams:
    """Image-relative threshold formulas: H_TH = H / h_th_div and so on."""

    h_th_div: float = 60
    w_th_div: float = 40
    a_th_div: float = 1500
    b_th_div: float = 100
    l_th_div: float = 40
    r_min: float = 1.2
    r_max: float = 32.0
    ra_min: float = 5.0
    ra_max: float = 90.0


def derive_thresholds(
    width: int,
    height: int,
    overrides: Optional[Mapping[str, float]] = None,
    params: RuleParams = RuleParams(),
) -> RuleThresholds:
    """Concrete thresholds for a ``width`` x ``height`` page.

    Values stay real-valued. ``overrides`` replaces individual fields of the
    result by name, e.g. ``{"r_min": 1.0}``.
    """
    if width < 1 or height < 1:
        raise ValueError("image dimensions must be positive")
    th = RuleThresholds(
        h_th=height / params.h_th_div,
        w_th=width / params.w_th_div,
        a_th=width * height / params.a_th_div,
        b_th=height / params.b_th_div,
        l_th=width / params.l_th_div,
        r_min=params.r_min,
        r_max=params.r_max,
        ra_min=params.ra_min,
        ra_max=params.ra_max,
    )
    if overrides:
        unknown = set(overrides) - {f.name for f in fields(RuleThresholds)}
        if unknown:
            raise ValueError(f"unknown threshold override(s): {sorted(unknown)}")
        th = replace(th, **{k: float(v) for k, v in overrides.items()})
    return th


def is_noise(cc: ConnectedComponent, th: RuleThresholds) -> bool:
    return cc.h_cc < th.h_th or cc.w_cc < th.w_th or cc.a_cc < th.a_th


def is_line(cc: ConnectedComponent, th: RuleThresholds) -> Optional[RegionLabel]:
    """HLINE, VLINE, or None when the component is not a line."""
    if cc.h_cc < th.b_th and cc.w_cc > th.l_th:
        return RegionLabel.HLINE
    if cc.w_cc < th.b_th and cc.h_cc > th.l_th:
        return RegionLabel.VLINE
    return None


def aspect_ok(cc: ConnectedComponent, th: RuleThresholds) -> bool:
    return th.r_min < cc.w_cc / cc.h_cc < th.r_max


def region_pixels(cc: ConnectedComponent, img: GrayImage, region: str = "blocks") -> np.ndarray:
    """Gray levels of the pixels a component covers, as a flat array.

    ``region="blocks"`` takes only pixels of member blocks; ``"bbox"`` takes
    the whole bounding box.
    """
    x0, y0, x1, y1 = cc.bbox
    if x1 < x0 or y1 < y0:
        raise EmptyRegion(f"component has empty bbox {cc.bbox}")
    sub = img.pixels[y0 : y1 + 1, x0 : x1 + 1]
    if region == "bbox" or cc.mask is None:
        return sub.ravel()
    if region != "blocks":
        raise ValueError(f"unknown region mode {region!r}")
    return sub[cc.mask]


def fill_ratio(cc: ConnectedComponent, img: GrayImage, region: str = "blocks") -> float:
    """Foreground pixels per 100 background pixels inside the component.

    Foreground means strictly darker than the midpoint of the region's
    extremes. Returns ``inf`` if nothing is background.
    """
    values = region_pixels(cc, img, region)
    if values.size == 0:
        raise EmptyRegion("component covers no pixels")
    lo, hi = int(values.min()), int(values.max())
    n_fg = int(np.count_nonzero(values.astype(np.int16) * 2 < lo + hi))
    n_bg = values.size - n_fg
    if n_bg == 0:
        return math.inf
    return 100.0 * n_fg / n_bg


@dataclass(frozen=True)
class Classification:
    label: RegionLabel
    r_w2h: float
    ra_cc: Optional[float]  # None when rejected before the fill rule ran


def evaluate_rules(
    cc: ConnectedComponent,
    img: GrayImage,
    th: RuleThresholds,
    region: str = "blocks",
    rules: Sequence[str] = ALL_RULES,
) -> Classification:
    """Run the cascade and keep the features it computed along the way."""
    unknown = set(rules) - set(ALL_RULES)
    if unknown:
        raise ValueError(f"unknown rule(s): {sorted(unknown)}")
    r_w2h = cc.w_cc / cc.h_cc
    if "line" in rules:
        line = is_line(cc, th)
        if line is not None:
            return Classification(line, r_w2h, None)
    if "noise" in rules and is_noise(cc, th):
        return Classification(RegionLabel.NOISE, r_w2h, None)
    if "aspect" in rules and not aspect_ok(cc, th):
        return Classification(RegionLabel.NONTEXT, r_w2h, None)
    if "fill" in rules:
        ra = fill_ratio(cc, img, region)
        label = RegionLabel.TEXT if th.ra_min < ra < th.ra_max else RegionLabel.NONTEXT
        return Classification(label, r_w2h, ra)
    return Classification(RegionLabel.TEXT, r_w2h, None)


def classify_cc(
    cc: ConnectedComponent, img: GrayImage, th: RuleThresholds, region: str = "blocks"
) -> RegionLabel:
    return evaluate_rules(cc, img, th, region).label
