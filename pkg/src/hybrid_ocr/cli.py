"""Command line: ``train``, ``recognize``, ``gen-dataset``, ``evaluate``.

Exit codes: 0 success, 1 recognition incomplete or code invalid, 2 usage
error, 3 I/O or format error.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import degrade, evaluation
from .errors import IncompleteTrainingSetError, NoContentError, OCRError
from .imageio import load_image
from .pipeline import (
    PipelineConfig, TrainingSet, build_prototypes, load_codebook, recognize_code, validate_code,
)
from .preprocess import Region
from .store import load_store, save_store

EXIT_OK, EXIT_INCOMPLETE, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


def _config(args) -> PipelineConfig:
    cfg = PipelineConfig()
    if args.config:
        cfg = PipelineConfig.from_text(Path(args.config).read_text())
    overrides = {}
    for name in ("beta", "epsilon", "max_iters"):
        if getattr(args, name) is not None:
            overrides[name] = getattr(args, name)
    if args.digit_level_match:
        overrides["digit_level_match"] = True
    return dataclasses.replace(cfg, **overrides)


def _load_training(glyph_dir) -> TrainingSet:
    if not Path(glyph_dir).is_dir():
        raise FileNotFoundError(f"glyph directory not found: {glyph_dir}")
    return TrainingSet.from_directory(glyph_dir)


def cmd_train(args) -> int:
    cfg = _config(args)
    store = build_prototypes(_load_training(args.glyph_dir), cfg)
    save_store(store, args.out)
    print(f"{len(store)} prototypes ({len(store.typesets)} typesets) written to {args.out}")
    return EXIT_OK


def _describe(result) -> str:
    return f"{result.label}/{result.typeset} score={result.score:g}"


def cmd_recognize(args) -> int:
    cfg = _config(args)
    store = load_store(args.store)
    image = load_image(args.image)
    hint = Region.parse(args.region) if args.region else None
    result = recognize_code(image, store, hint, cfg)
    print(f"text: {result.text}")
    for i, d in enumerate(result.decisions):
        line = f"  [{i}] {d.status.value:8s} {d.stage.value:18s} hamming={_describe(d.hamming)} " \
               f"euclidean={_describe(d.euclidean)}"
        if d.fnn is not None:
            line += f" fnn={_describe(d.fnn)}"
        print(line)
    ok = result.all_accepted
    if args.codebook:
        if not ok:
            print("codebook: not checked (rejected characters)")
        else:
            valid = validate_code(result.text, load_codebook(args.codebook))
            print(f"codebook: {'valid' if valid else 'invalid'}")
            ok = valid
    return EXIT_OK if ok else EXIT_INCOMPLETE


def cmd_gen_dataset(args) -> int:
    spec = degrade.DegradationSpec(
        scale_percents=tuple(int(s) for s in args.scales.split(",")),
        skew_degrees=args.skew,
        salt_noise_fraction=args.noise,
        brightness_shift=args.brightness,
        seed=args.seed,
        codes_per_scale=args.codes_per_scale,
        code_length=args.code_length,
    )
    train = _load_training(args.glyph_dir)
    missing = train.missing()
    if missing or not train.images:
        raise IncompleteTrainingSetError(missing or ["<no glyph images found>"])
    rows = degrade.generate_dataset(train, args.out_dir, spec)
    print(f"{len(rows)} images across {len(spec.scale_percents)} resolutions written to {args.out_dir}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    cfg = _config(args)
    store = load_store(args.store)
    dataset = Path(args.dataset_dir)
    if not (dataset / degrade.MANIFEST).is_file():
        raise FileNotFoundError(f"manifest {degrade.MANIFEST} not found in {dataset}")
    report = evaluation.evaluate_dataset(store, dataset, cfg, workers=args.workers)
    out = Path(args.out) if args.out else dataset / "report.tsv"
    out.write_text(report.to_tsv(), encoding="utf-8")
    print(report.summary(), end="")
    print(f"\nreport written to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value configuration file")
    common.add_argument("--beta", type=float, help="fuzzy membership decay (default 0.3)")
    common.add_argument("--epsilon", type=float, help="maxnet lateral inhibition (default 0.01)")
    common.add_argument("--max-iters", dest="max_iters", type=int, help="maxnet iteration cap")
    common.add_argument("--digit-level-match", action="store_true",
                        help="classifiers agree on digit value regardless of script")

    p = argparse.ArgumentParser(prog="hybrid-ocr", description="Arabic/Indian numeral postal code OCR")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", parents=[common], help="build a prototype store from a glyph grid")
    t.add_argument("glyph_dir")
    t.add_argument("out")
    t.set_defaults(func=cmd_train)

    r = sub.add_parser("recognize", parents=[common], help="read the postal code in an image")
    r.add_argument("store")
    r.add_argument("image")
    r.add_argument("--region", help="x,y,w,h of the code box")
    r.add_argument("--codebook", help="file of valid codes, one per line")
    r.set_defaults(func=cmd_recognize)

    g = sub.add_parser("gen-dataset", help="render degraded postal code images")
    g.add_argument("glyph_dir")
    g.add_argument("out_dir")
    g.add_argument("--seed", type=int, default=42)
    g.add_argument("--scales", default="100,200,300,400", help="comma-separated scale percents")
    g.add_argument("--skew", type=float, default=2.0, help="max |rotation| in degrees")
    g.add_argument("--noise", type=float, default=0.002, help="per-pixel flip probability")
    g.add_argument("--brightness", type=int, default=20, help="max |intensity shift|")
    g.add_argument("--codes-per-scale", dest="codes_per_scale", type=int, default=50)
    g.add_argument("--code-length", dest="code_length", type=int, default=5)
    g.set_defaults(func=cmd_gen_dataset)

    e = sub.add_parser("evaluate", parents=[common], help="score a generated dataset")
    e.add_argument("store")
    e.add_argument("dataset_dir")
    e.add_argument("--out", help="report TSV path (default <dataset_dir>/report.tsv)")
    e.add_argument("--workers", type=int, default=1)
    e.set_defaults(func=cmd_evaluate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoContentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCOMPLETE
    except ValueError as exc:
        # bad region syntax, out-of-range flags
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, OCRError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
