"""Per-resolution recognition, misclassification and rejection counts."""
from __future__ import annotations

import collections
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .classifiers import ClassLabel, Script, classify_euclidean, classify_fnn, classify_hamming
from .degrade import MANIFEST, read_manifest
from .errors import NoContentError
from .features import binary_features, fuzzy_features, zoning_features
from .imageio import load_image
from .pipeline import Decision, PipelineConfig, PrototypeStore, decide, read_glyphs

METHODS = ("hamming", "euclidean", "fnn", "hybrid")
TSV_FIELDS = ("resolution", "method", "total", "recognized", "misclassified", "rejected",
              "unsegmented", "rate_excluding_rejects", "rate_counting_rejects")


@dataclass
class MethodRow:
    resolution: str
    method: str
    total: int = 0
    recognized: int = 0
    misclassified: int = 0
    rejected: int = 0
    unsegmented: int = 0  # characters lost to segmentation, already inside the counts

    @property
    def rate_excluding_rejects(self) -> float:
        scored = self.total - self.rejected
        return 100.0 * self.recognized / scored if scored else math.nan

    @property
    def rate_counting_rejects(self) -> float:
        return 100.0 * self.recognized / self.total if self.total else math.nan

    def as_tsv(self) -> str:
        return "\t".join([self.resolution, self.method, str(self.total), str(self.recognized),
                          str(self.misclassified), str(self.rejected), str(self.unsegmented),
                          f"{self.rate_excluding_rejects:.2f}", f"{self.rate_counting_rejects:.2f}"])


@dataclass
class EvalReport:
    rows: list[MethodRow] = field(default_factory=list)

    def row(self, resolution: str, method: str) -> MethodRow:
        for r in self.rows:
            if r.resolution == resolution and r.method == method:
                return r
        raise KeyError((resolution, method))

    @property
    def resolutions(self) -> list[str]:
        return list(dict.fromkeys(r.resolution for r in self.rows))

    def to_tsv(self) -> str:
        return "\t".join(TSV_FIELDS) + "\n" + "".join(r.as_tsv() + "\n" for r in self.rows)

    def summary(self) -> str:
        res = self.resolutions
        width = 12
        head = "Resolution".ljust(24) + "".join(r.rjust(width) for r in res)
        out = [head, "No. of characters".ljust(24) + "".join(
            str(self.row(r, "hybrid").total).rjust(width) for r in res)]

        def table(title, method_list, value):
            out.append("")
            out.append(title)
            for m in method_list:
                out.append(f"  {m}".ljust(24) + "".join(value(self.row(r, m)).rjust(width) for r in res))

        table("Recognition rate (rejects excluded)", METHODS, lambda r: f"{r.rate_excluding_rejects:.2f}%")
        table("Misclassified characters", METHODS, lambda r: str(r.misclassified))
        table("Rejected characters", ("hybrid",), lambda r: str(r.rejected))
        table("  of which unsegmented", ("hybrid",), lambda r: str(r.unsegmented))
        table("Recognition rate (rejects as errors)", ("hybrid",), lambda r: f"{r.rate_counting_rejects:.2f}%")
        return "\n".join(out) + "\n"


@dataclass
class ImageOutcome:
    resolution: str
    expected: list[ClassLabel]
    predictions: dict | None  # method -> list of labels (None = rejected), or None if unsegmented
    decisions: list[Decision]


def evaluate_image(path, script: str, digits: str, resolution: str, store: PrototypeStore,
                   cfg: PipelineConfig) -> ImageOutcome:
    expected = [ClassLabel(Script(script), int(d)) for d in digits]
    try:
        _, glyphs = read_glyphs(load_image(path), None, cfg)
    except NoContentError:
        glyphs = []
    if len(glyphs) != len(expected):
        return ImageOutcome(resolution, expected, None, [])
    protos = store.prototypes
    preds = {m: [] for m in METHODS}
    decisions = []
    for g in glyphs:
        preds["hamming"].append(classify_hamming(binary_features(g), protos, cfg.maxnet).label)
        preds["euclidean"].append(classify_euclidean(zoning_features(g), protos).label)
        preds["fnn"].append(classify_fnn(fuzzy_features(g, cfg.fuzzy), protos).label)
        d = decide(g, store, cfg)
        decisions.append(d)
        preds["hybrid"].append(d.label if d.accepted else None)
    return ImageOutcome(resolution, expected, preds, decisions)


def _evaluate_job(args):
    return evaluate_image(*args)


def evaluate_dataset(store: PrototypeStore, dataset_dir, cfg: PipelineConfig = PipelineConfig(),
                     workers: int = 1, decisions: list | None = None) -> EvalReport:
    """Score every manifest image with all four methods, in manifest order."""
    dataset_dir = Path(dataset_dir)
    manifest = read_manifest(dataset_dir / MANIFEST)
    jobs = [(dataset_dir / row["filename"], row["script"], row["digits"], row["resolution"], store, cfg)
            for row in manifest]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            outcomes = list(pool.map(_evaluate_job, jobs, chunksize=8))
    else:
        outcomes = [_evaluate_job(j) for j in jobs]

    rows = collections.OrderedDict()
    for row in manifest:
        for m in METHODS:
            rows.setdefault((row["resolution"], m), MethodRow(row["resolution"], m))
    for out in outcomes:
        if decisions is not None:
            decisions.extend(out.decisions)
        n = len(out.expected)
        for m in METHODS:
            r = rows[(out.resolution, m)]
            r.total += n
            if out.predictions is None:
                # unreadable line: the hybrid defers it, solo methods have no reject option
                r.unsegmented += n
                if m == "hybrid":
                    r.rejected += n
                else:
                    r.misclassified += n
                continue
            for want, got in zip(out.expected, out.predictions[m]):
                if got is None:
                    r.rejected += 1
                elif got == want:
                    r.recognized += 1
                else:
                    r.misclassified += 1
    return EvalReport(list(rows.values()))
