import io

import numpy as np
import pytest

from cardtext.bench import (
    DEFAULT_RESOLUTIONS,
    BenchResult,
    EmptyDataset,
    read_csv,
    resize_bilinear,
    run_bench,
    scale_truth,
    write_csv,
)
from cardtext.evaluator import GroundTruth
from cardtext.raster_io import GrayImage
from cardtext.synth import make_card, write_corpus
from cardtext.evaluator import load_ground_truth


def test_default_resolutions_are_the_published_sweep():
    assert DEFAULT_RESOLUTIONS == ((640, 480), (800, 600), (1024, 768), (1182, 886), (1672, 1254), (2048, 1536))


def test_repeats_share_one_output():
    card = make_card(np.random.default_rng(1))
    (r,) = run_bench([("c", card.image)], [(1024, 768)], repeats=3)
    assert r.mean_time > 0 and r.peak_alloc > 0
    (again,) = run_bench([("c", card.image)], [(1024, 768)], repeats=1)
    assert again.digest == r.digest


def test_empty_dataset(tmp_path):
    with pytest.raises(EmptyDataset):
        run_bench(tmp_path, [(640, 480)], 1)
    with pytest.raises(ValueError):
        run_bench([("c", None)], [(640, 480)], 0)


def test_resize():
    img = GrayImage(np.tile(np.arange(0, 256, 4, dtype=np.uint8), (48, 2)))
    out = resize_bilinear(img, 64, 24)
    assert (out.width, out.height) == (64, 24)
    assert resize_bilinear(img, img.width, img.height) is img


def test_scale_truth():
    gt = GroundTruth("a", [(10, 20, 29, 39)])
    assert scale_truth(gt, 0.5, 0.5, 100, 100).text_boxes == [(5, 10, 14, 19)]
    assert scale_truth(gt, 2, 2, 50, 70).text_boxes == [(20, 40, 49, 69)]


def test_csv_round_trip():
    rows = [
        BenchResult((640, 480), 0.0123, 1000, 0.975),
        BenchResult((2048, 1536), 0.5, 123456, None),
    ]
    buf = io.StringIO()
    write_csv(rows, buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == "resolution,mean_time_s,peak_alloc_bytes,accuracy"
    back = read_csv(text)
    assert [(b.resolution, b.mean_time, b.peak_alloc, b.accuracy) for b in back] == [
        (r.resolution, r.mean_time, r.peak_alloc, r.accuracy) for r in rows
    ]


def test_bench_with_truth(tmp_path):
    truth_path = write_corpus(tmp_path, n=2, seed=2)
    results = run_bench(tmp_path, [(640, 480), (1024, 768)], 1, truth=load_ground_truth(truth_path))
    assert all(r.accuracy is not None and 0 <= r.accuracy <= 1 for r in results)
    assert results[1].accuracy >= 0.9
