"""Command-line front end.

    cardtext extract card.pgm --out-dir out/ --dump-background
    cardtext evaluate cards/ --gt cards/truth.json
    cardtext bench cards/ --resolutions 640x480,1024x768 --repeats 3
    cardtext synth cards/ --count 20

Exit codes: 0 ok, 1 usage, 2 I/O, 3 image too small, 4 missing ground
truth, 5 empty dataset.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import fields, replace
from pathlib import Path

from .background import ImageTooSmall
from .bench import DEFAULT_RESOLUTIONS, EmptyDataset, parse_resolution, run_bench, write_csv
from .config import PipelineConfig
from .evaluator import EmptyEvaluation, MissingGroundTruth, evaluate_dataset, load_ground_truth
from .pipeline import regions_document, run_pipeline
from .raster_io import RasterError, load_image, save_binary, save_image

log = logging.getLogger("cardtext")

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_TOO_SMALL, EXIT_NO_TRUTH, EXIT_EMPTY = 0, 1, 2, 3, 4, 5

# flag name -> PipelineConfig field
_CONFIG_FLAGS = {
    "--t-fixed": ("t_fixed", int),
    "--t-min": ("t_min", int),
    "--width-divisor": ("width_divisor", int),
    "--block-height": ("block_height", int),
    "--h-th-div": ("h_th_div", float),
    "--w-th-div": ("w_th_div", float),
    "--a-th-div": ("a_th_div", float),
    "--b-th-div": ("b_th_div", float),
    "--l-th-div": ("l_th_div", float),
    "--r-min": ("r_min", float),
    "--r-max": ("r_max", float),
    "--ra-min": ("ra_min", float),
    "--ra-max": ("ra_max", float),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _config_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("pipeline configuration (defaults are the published constants)")
    defaults = PipelineConfig()
    for flag, (name, typ) in _CONFIG_FLAGS.items():
        g.add_argument(flag, dest=name, type=typ, default=None, help=f"default {getattr(defaults, name)}")
    g.add_argument("--spread-statistic", dest="spread_statistic", choices=("range", "stddev"), default=None)
    g.add_argument("--connectivity", dest="connectivity", type=int, choices=(4, 8), default=None)
    g.add_argument("--ra-region", dest="ra_region", choices=("blocks", "bbox"), default=None)
    g.add_argument("--config", dest="config_file", default=None, help="JSON file shaped like PipelineConfig")
    return p


def build_config(args) -> PipelineConfig:
    cfg = PipelineConfig.from_json(args.config_file) if args.config_file else PipelineConfig()
    given = {
        f.name: getattr(args, f.name)
        for f in fields(PipelineConfig)
        if getattr(args, f.name, None) is not None
    }
    return replace(cfg, **given)


def _write_json(path: Path, doc) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    os.replace(tmp, path)


def cmd_extract(args) -> int:
    config = build_config(args)
    for src in args.inputs:
        src = Path(src)
        out_dir = Path(args.out_dir) if args.out_dir else src.parent
        out_dir.mkdir(parents=True, exist_ok=True)
        img = load_image(src)
        result = run_pipeline(img, config)
        stem = src.stem
        save_binary(result.binary, out_dir / f"{stem}.bin.pgm")
        _write_json(out_dir / f"{stem}.regions.json", regions_document(src.name, img, result))
        if args.dump_background:
            save_image(result.cleaned, out_dir / f"{stem}.bg.pgm")
        n_text = len(result.text_regions)
        log.info("%s: %d regions, %d text", src.name, len(result.regions), n_text)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    config = build_config(args)
    truth = load_ground_truth(args.gt)
    if not truth:
        raise MissingGroundTruth(f"{args.gt} holds no ground truth records")
    report = evaluate_dataset(args.dataset, truth, config)
    report_path = Path(args.report) if args.report else Path(args.dataset) / "report.json"
    _write_json(report_path, report.to_json())
    print(f"{report.accuracy * 100:.2f}")
    return EXIT_OK


def cmd_bench(args) -> int:
    config = build_config(args)
    if args.resolutions:
        try:
            resolutions = [parse_resolution(r) for r in args.resolutions.split(",") if r.strip()]
        except ValueError:
            raise UsageError(f"bad --resolutions {args.resolutions!r}; expected e.g. 640x480,1024x768")
    else:
        resolutions = list(DEFAULT_RESOLUTIONS)
    truth = load_ground_truth(args.gt) if args.gt else None
    results = run_bench(args.dataset, resolutions, args.repeats, config, truth)
    write_csv(results, sys.stdout)
    if args.report:
        _write_json(Path(args.report), {"config": config.to_dict(), "results": [r.to_json() for r in results]})
    return EXIT_OK


def cmd_synth(args) -> int:
    from .synth import write_corpus

    w, h = parse_resolution(args.size)
    path = write_corpus(args.out_dir, n=args.count, seed=args.seed, width=w, height=h)
    print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parent = _config_parent()
    parser = _Parser(prog="cardtext", description="Text region extraction for camera-captured business cards.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("extract", parents=[parent], help="extract and binarize text regions")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--out-dir", default=None)
    p.add_argument("--dump-background", action="store_true", help="also write <stem>.bg.pgm")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("evaluate", parents=[parent], help="score a dataset against ground truth")
    p.add_argument("dataset")
    p.add_argument("--gt", required=True)
    p.add_argument("--report", default=None, help="report JSON path (default <dataset>/report.json)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bench", parents=[parent], help="resolution sweep, CSV on stdout")
    p.add_argument("dataset")
    p.add_argument("--resolutions", default=None, help="comma-separated WxH list")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--gt", default=None)
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("synth", help="write a synthetic card corpus with truth.json")
    p.add_argument("out_dir")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", default="1024x768")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if getattr(args, "repeats", 1) < 1:
            raise UsageError("--repeats must be >= 1")
        return args.func(args)
    except UsageError as exc:
        print(f"cardtext: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ImageTooSmall as exc:
        print(f"cardtext: {exc}", file=sys.stderr)
        return EXIT_TOO_SMALL
    except MissingGroundTruth as exc:
        print(f"cardtext: {exc}", file=sys.stderr)
        return EXIT_NO_TRUTH
    except (EmptyDataset, EmptyEvaluation) as exc:
        print(f"cardtext: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (OSError, RasterError, json.JSONDecodeError) as exc:
        print(f"cardtext: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"cardtext: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
