"""Resolution sweep: time and allocation footprint of the pipeline.

Each source image is resampled (bilinear) to every target resolution.
Memory is measured in one traced pass; timing uses separate untraced
passes so tracing overhead does not leak into the numbers.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from PIL import Image

from .config import PipelineConfig
from .evaluator import Confusion, GroundTruth, accuracy, lookup, match_ground_truth
from .memtrack import measure
from .pipeline import PipelineResult, regions_document, run_pipeline
from .raster_io import GrayImage, list_images, load_image

DEFAULT_RESOLUTIONS: Tuple[Tuple[int, int], ...] = (
    (640, 480),
    (800, 600),
    (1024, 768),
    (1182, 886),
    (1672, 1254),
    (2048, 1536),
)
CSV_FIELDS = ("resolution", "mean_time_s", "peak_alloc_bytes", "accuracy")


class EmptyDataset(ValueError):
    pass


class NondeterministicOutput(RuntimeError):
    pass


@dataclass(frozen=True)
class BenchResult:
    resolution: Tuple[int, int]
    mean_time: float
    peak_alloc: int
    accuracy: Optional[float] = None
    digest: str = ""

    @property
    def pixels(self) -> int:
        return self.resolution[0] * self.resolution[1]

    def to_row(self) -> dict:
        return {
            "resolution": f"{self.resolution[0]}x{self.resolution[1]}",
            "mean_time_s": repr(self.mean_time),
            "peak_alloc_bytes": str(self.peak_alloc),
            "accuracy": "" if self.accuracy is None else repr(self.accuracy),
        }

    @classmethod
    def from_row(cls, row: dict) -> "BenchResult":
        w, h = (int(v) for v in row["resolution"].lower().split("x"))
        acc = row.get("accuracy") or None
        return cls(
            resolution=(w, h),
            mean_time=float(row["mean_time_s"]),
            peak_alloc=int(row["peak_alloc_bytes"]),
            accuracy=None if acc is None else float(acc),
        )

    def to_json(self) -> dict:
        return {
            "resolution": list(self.resolution),
            "mean_time": self.mean_time,
            "peak_alloc": self.peak_alloc,
            "accuracy": self.accuracy,
            "digest": self.digest,
        }


def parse_resolution(text: str) -> Tuple[int, int]:
    w, h = text.lower().split("x")
    return int(w), int(h)


def resize_bilinear(img: GrayImage, width: int, height: int) -> GrayImage:
    if (width, height) == (img.width, img.height):
        return img
    pil = Image.fromarray(img.pixels, mode="L").resize((width, height), Image.BILINEAR)
    return GrayImage(np.asarray(pil))


def scale_truth(gt: GroundTruth, sx: float, sy: float, width: int, height: int) -> GroundTruth:
    boxes = []
    for x0, y0, x1, y1 in gt.text_boxes:
        boxes.append(
            (
                max(0, int(math.floor(x0 * sx))),
                max(0, int(math.floor(y0 * sy))),
                min(width - 1, int(math.ceil((x1 + 1) * sx)) - 1),
                min(height - 1, int(math.ceil((y1 + 1) * sy)) - 1),
            )
        )
    return GroundTruth(gt.image, boxes)


def output_digest(result: PipelineResult, img: GrayImage) -> str:
    h = hashlib.sha256()
    h.update(np.packbits(result.binary.mask).tobytes())
    h.update(json.dumps(regions_document("", img, result), sort_keys=True).encode())
    return h.hexdigest()


def run_bench(
    dataset,
    resolutions: Sequence[Tuple[int, int]] = DEFAULT_RESOLUTIONS,
    repeats: int = 3,
    config: Optional[PipelineConfig] = None,
    truth: Optional[Dict[str, GroundTruth]] = None,
) -> List[BenchResult]:
    """Sweep ``resolutions`` over every image in ``dataset``.

    ``dataset`` is a directory or a list of ``(name, GrayImage)`` pairs.
    mean_time is per image, averaged over images and repeats; peak_alloc is
    the largest single-image high-water mark.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    config = config or PipelineConfig()
    if isinstance(dataset, (str, Path)):
        sources = [(p.name, load_image(p)) for p in list_images(dataset)]
    else:
        sources = list(dataset)
    if not sources:
        raise EmptyDataset(f"no images in {dataset}")

    results = []
    for w, h in resolutions:
        times, peak, conf = [], 0, Confusion()
        digest = hashlib.sha256()
        for name, src in sources:
            img = resize_bilinear(src, w, h)
            with measure(track_memory=True) as m:
                reference = run_pipeline(img, config)
            peak = max(peak, m.peak_alloc)
            ref_digest = output_digest(reference, img)
            digest.update(ref_digest.encode())
            for _ in range(repeats):
                with measure(track_memory=False) as m:
                    result = run_pipeline(img, config)
                times.append(m.wall_time)
                if output_digest(result, img) != ref_digest:
                    raise NondeterministicOutput(f"{name} at {w}x{h} changed between repeats")
            if truth is not None:
                gt = scale_truth(lookup(truth, name), w / src.width, h / src.height, w, h)
                conf = conf + match_ground_truth(reference.regions, gt)
        results.append(
            BenchResult(
                resolution=(w, h),
                mean_time=float(np.mean(times)),
                peak_alloc=peak,
                accuracy=accuracy(conf) if truth is not None and conf.total else None,
                digest=digest.hexdigest(),
            )
        )
    return results


def write_csv(results: Sequence[BenchResult], stream) -> None:
    writer = csv.DictWriter(stream, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in results:
        writer.writerow(r.to_row())


def read_csv(text: str) -> List[BenchResult]:
    return [BenchResult.from_row(row) for row in csv.DictReader(io.StringIO(text))]
