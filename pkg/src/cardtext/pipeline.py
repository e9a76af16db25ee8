"""End-to-end text extraction: background, components, rules, binarization."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List

from .background import BlockGrid, eliminate_background
from .binarizer import binarize_cc, compose_output
from .classifier import Classification, RegionLabel, RuleThresholds, derive_thresholds, evaluate_rules
from .components import ConnectedComponent, label_components
from .config import PipelineConfig
from .raster_io import BinaryImage, GrayImage


@dataclass(frozen=True)
class Region:
    cc: ConnectedComponent
    result: Classification

    @property
    def bbox(self):
        return self.cc.bbox

    @property
    def label(self) -> RegionLabel:
        return self.result.label

    def to_json(self) -> dict:
        ra = self.result.ra_cc
        return {
            "bbox": list(self.cc.bbox),
            "h_cc": self.cc.h_cc,
            "w_cc": self.cc.w_cc,
            "a_cc": self.cc.a_cc,
            "r_w2h": self.result.r_w2h,
            # inf cannot appear in strict JSON
            "ra_cc": ra if ra is not None and ra != float("inf") else None,
            "label": self.label.value,
        }


@dataclass(frozen=True)
class PipelineResult:
    cleaned: GrayImage
    grid: BlockGrid
    thresholds: RuleThresholds
    regions: List[Region]
    binary: BinaryImage

    @property
    def text_regions(self) -> List[Region]:
        return [r for r in self.regions if r.label is RegionLabel.TEXT]


def run_pipeline(img: GrayImage, config: PipelineConfig = PipelineConfig()) -> PipelineResult:
    cleaned, grid = eliminate_background(img, config.background_params())
    th = derive_thresholds(img.width, img.height, config.overrides, config.rule_params())
    regions = [
        Region(cc, evaluate_rules(cc, cleaned, th, config.ra_region))
        for cc in label_components(grid, config.connectivity)
    ]
    patches = [binarize_cc(r.cc, cleaned, config.ra_region) for r in regions if r.label is RegionLabel.TEXT]
    binary = compose_output(patches, img.width, img.height)
    return PipelineResult(cleaned=cleaned, grid=grid, thresholds=th, regions=regions, binary=binary)


def regions_document(image_name: str, img: GrayImage, result: PipelineResult) -> dict:
    return {
        "image": image_name,
        "width": img.width,
        "height": img.height,
        "regions": [r.to_json() for r in result.regions],
    }
