"""Scoring extracted regions against rectangle ground truth.

A component counts as truly text when its bbox overlaps some annotated
text box with IoU >= 0.5; it is predicted text when its label is TEXT.
Accuracy is (BB + TT) / (BB + BT + TB + TT).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

from .classifier import RegionLabel

Box = Tuple[int, int, int, int]
IOU_MATCH = 0.5


class MissingGroundTruth(LookupError):
    pass


class EmptyEvaluation(ValueError):
    pass


@dataclass(frozen=True)
class GroundTruth:
    image: str
    text_boxes: List[Box]

    @classmethod
    def from_json(cls, data: dict) -> "GroundTruth":
        boxes = [tuple(int(v) for v in b) for b in data.get("text_boxes", [])]
        for b in boxes:
            if len(b) != 4 or b[2] < b[0] or b[3] < b[1]:
                raise ValueError(f"malformed box {b} for {data.get('image')!r}")
        return cls(image=str(data["image"]), text_boxes=boxes)

    def to_json(self) -> dict:
        return {"image": self.image, "text_boxes": [list(b) for b in self.text_boxes]}

    def check_bounds(self, width: int, height: int):
        for x0, y0, x1, y1 in self.text_boxes:
            if x0 < 0 or y0 < 0 or x1 >= width or y1 >= height:
                raise ValueError(f"box {(x0, y0, x1, y1)} outside {width}x{height} image {self.image!r}")


@dataclass(frozen=True)
class Confusion:
    bb: int = 0
    bt: int = 0
    tb: int = 0
    tt: int = 0
    # truth text boxes with no component matching them; diagnostic only
    unmatched_text: int = 0

    @property
    def total(self) -> int:
        return self.bb + self.bt + self.tb + self.tt

    def __add__(self, other: "Confusion") -> "Confusion":
        return Confusion(
            self.bb + other.bb,
            self.bt + other.bt,
            self.tb + other.tb,
            self.tt + other.tt,
            self.unmatched_text + other.unmatched_text,
        )

    def to_json(self) -> dict:
        return {"bb": self.bb, "bt": self.bt, "tb": self.tb, "tt": self.tt, "unmatched_text": self.unmatched_text}


def accuracy(c: Confusion) -> float:
    if c.total == 0:
        raise EmptyEvaluation("no components were scored")
    return (c.bb + c.tt) / c.total


def iou(a: Box, b: Box) -> float:
    """Intersection over union of two inclusive pixel rectangles."""
    ix = min(a[2], b[2]) - max(a[0], b[0]) + 1
    iy = min(a[3], b[3]) - max(a[1], b[1]) + 1
    if ix <= 0 or iy <= 0:
        return 0.0
    inter = ix * iy
    area_a = (a[2] - a[0] + 1) * (a[3] - a[1] + 1)
    area_b = (b[2] - b[0] + 1) * (b[3] - b[1] + 1)
    return inter / (area_a + area_b - inter)


def match_ground_truth(regions: Iterable, gt: GroundTruth) -> Confusion:
    """Tally BB/BT/TB/TT for labelled regions (anything with .bbox and .label)."""
    if gt is None:
        raise MissingGroundTruth("no ground truth supplied")
    counts = {"bb": 0, "bt": 0, "tb": 0, "tt": 0}
    matched = [False] * len(gt.text_boxes)
    for r in regions:
        truly_text = False
        for i, box in enumerate(gt.text_boxes):
            if iou(r.bbox, box) >= IOU_MATCH:
                truly_text = True
                matched[i] = True
        predicted_text = r.label is RegionLabel.TEXT
        key = ("t" if truly_text else "b") + ("t" if predicted_text else "b")
        counts[key] += 1
    return Confusion(**counts, unmatched_text=matched.count(False))


@dataclass
class EvalReport:
    per_image: Dict[str, Confusion]
    wall_time: float = 0.0
    peak_alloc: int = 0
    aggregate: Confusion = field(init=False)

    def __post_init__(self):
        self.aggregate = sum(self.per_image.values(), Confusion())

    @property
    def accuracy(self) -> float:
        return accuracy(self.aggregate)

    def to_json(self) -> dict:
        images = []
        for name in sorted(self.per_image):
            c = self.per_image[name]
            images.append({"image": name, **c.to_json(), "accuracy": accuracy(c) if c.total else None})
        return {
            "images": images,
            "aggregate": self.aggregate.to_json(),
            "accuracy": self.accuracy,
            "wall_time": self.wall_time,
            "peak_alloc": self.peak_alloc,
        }


def load_ground_truth(path) -> Dict[str, GroundTruth]:
    """Read a truth file holding one record or a list of records.

    An empty file yields no records.
    """
    text = Path(path).read_text()
    if not text.strip():
        return {}
    data = json.loads(text)
    if isinstance(data, dict):
        data = [data]
    out = {}
    for rec in data:
        gt = GroundTruth.from_json(rec)
        out[gt.image] = gt
    return out


def save_ground_truth(records: Sequence[GroundTruth], path) -> None:
    Path(path).write_text(json.dumps([g.to_json() for g in records], indent=2, sort_keys=True) + "\n")


def lookup(truth: Dict[str, GroundTruth], image_path) -> GroundTruth:
    p = Path(image_path)
    for key in (p.name, p.stem, str(p)):
        if key in truth:
            return truth[key]
    raise MissingGroundTruth(f"no ground truth entry for {p.name}")


def evaluate_dataset(dataset, truth: Dict[str, GroundTruth], config=None) -> EvalReport:
    """Run the pipeline over every image in ``dataset`` and score it.

    Every image needs a truth record, checked before any work is done.
    """
    from .config import PipelineConfig
    from .memtrack import measure
    from .pipeline import run_pipeline
    from .raster_io import list_images, load_image

    config = config or PipelineConfig()
    paths = list_images(dataset)
    if not paths:
        raise EmptyEvaluation(f"no images in {dataset}")
    records = {p: lookup(truth, p) for p in paths}

    per_image = {}
    wall, peak = 0.0, 0
    for path, gt in records.items():
        img = load_image(path)
        gt.check_bounds(img.width, img.height)
        with measure() as m:
            result = run_pipeline(img, config)
        wall += m.wall_time
        peak = max(peak, m.peak_alloc)
        per_image[path.name] = match_ground_truth(result.regions, gt)
    return EvalReport(per_image=per_image, wall_time=wall, peak_alloc=peak)
