"""Accuracy, time and allocation across the six standard resolutions.

Generates a synthetic corpus at 2048x1536 (so every sweep size is a
downscale), then runs the bench harness with ground truth.

    python scripts/resolution_sweep.py --count 10 --repeats 3 --out sweep.csv
"""
import argparse
import sys
import tempfile
from pathlib import Path

from cardtext.bench import DEFAULT_RESOLUTIONS, run_bench, write_csv
from cardtext.evaluator import load_ground_truth
from cardtext.synth import write_corpus


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--out", default=None, help="CSV path (default stdout)")
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        truth = write_corpus(tmp, n=args.count, seed=args.seed, width=2048, height=1536)
        results = run_bench(tmp, DEFAULT_RESOLUTIONS, args.repeats, truth=load_ground_truth(truth))

    if args.out:
        with open(args.out, "w", newline="") as f:
            write_csv(results, f)
    else:
        write_csv(results, sys.stdout)
    for r in results:
        print(
            f"{r.resolution[0]:>5}x{r.resolution[1]:<5} acc {100 * r.accuracy:6.2f}%  "
            f"{1000 * r.mean_time:7.1f} ms  {r.peak_alloc / 2**20:6.2f} MiB",
            file=sys.stderr,
        )


if __name__ == "__main__":
    main()
