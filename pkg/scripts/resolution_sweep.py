"""Train on the fixture grid, render degraded codes, and score every method.

The default tiers (100-400%) are easy for 300 dpi fixtures. Pass small
scales to see where each classifier starts to fail and how the hybrid
trades misclassifications for rejects:

    python scripts/resolution_sweep.py --scales 25,35,50,75,100 --out runs/sweep
"""
import argparse
import collections
import time
from pathlib import Path

from hybrid_ocr.degrade import DegradationSpec, generate_dataset
from hybrid_ocr.evaluation import evaluate_dataset
from hybrid_ocr.pipeline import PipelineConfig, TrainingSet, build_prototypes
from hybrid_ocr.store import save_store

ROOT = Path(__file__).resolve().parents[1]


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--glyphs", default=str(ROOT / "fixtures" / "glyphs"))
    p.add_argument("--out", default="runs/sweep")
    p.add_argument("--scales", default="100,200,300,400")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--codes-per-scale", type=int, default=50)
    p.add_argument("--skew", type=float, default=2.0)
    p.add_argument("--noise", type=float, default=0.002)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--digit-level-match", action="store_true")
    args = p.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = PipelineConfig(digit_level_match=args.digit_level_match)
    t0 = time.perf_counter()
    train = TrainingSet.from_directory(args.glyphs)
    store = build_prototypes(train, cfg)
    save_store(store, out / "protos.txt")

    spec = DegradationSpec(scale_percents=tuple(int(s) for s in args.scales.split(",")), seed=args.seed,
                           codes_per_scale=args.codes_per_scale, skew_degrees=args.skew,
                           salt_noise_fraction=args.noise)
    generate_dataset(train, out / "dataset", spec)
    decisions = []
    report = evaluate_dataset(store, out / "dataset", cfg, workers=args.workers, decisions=decisions)
    (out / "report.tsv").write_text(report.to_tsv())

    print(report.summary())
    stages = collections.Counter(f"{d.status.value}/{d.stage.value}" for d in decisions)
    for key, n in sorted(stages.items()):
        print(f"{key:32s}{n:6d}")
    print(f"\n{len(decisions)} decisions in {time.perf_counter() - t0:.1f}s, report in {out / 'report.tsv'}")


if __name__ == "__main__":
    main()
