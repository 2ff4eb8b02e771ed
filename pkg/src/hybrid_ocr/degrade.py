"""Synthetic postal-code line images built from fixture glyphs.

Each image is a random five-digit code in one script and one typeset,
composed from fixture cells at a random point size, then scaled, skewed,
brightness-shifted and salted.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .classifiers import Script
from .imageio import GrayImage, save_pgm
from .pipeline import FONT_SIZES, TrainingSet

MANIFEST = "labels.tsv"
MANIFEST_FIELDS = ("filename", "script", "digits", "resolution")
MAX_SKEW = 2.0


@dataclass(frozen=True)
class DegradationSpec:
    scale_percents: tuple[int, ...] = (100, 200, 300, 400)
    skew_degrees: float = 2.0
    salt_noise_fraction: float = 0.002
    brightness_shift: int = 20
    seed: int = 42
    codes_per_scale: int = 50
    code_length: int = 5
    margin: int = 8

    def __post_init__(self):
        object.__setattr__(self, "scale_percents", tuple(int(s) for s in self.scale_percents))
        if not self.scale_percents or any(s <= 0 for s in self.scale_percents):
            raise ValueError("scale percents must be positive")
        if not 0 <= self.skew_degrees <= MAX_SKEW:
            raise ValueError(f"skew range must lie within +/-{MAX_SKEW} degrees")
        if not 0.0 <= self.salt_noise_fraction <= 1.0:
            raise ValueError("salt noise fraction must lie in [0, 1]")
        if not 0 <= self.brightness_shift <= 255:
            raise ValueError("brightness shift must lie in [0, 255]")
        if self.codes_per_scale < 1 or self.code_length < 1:
            raise ValueError("codes_per_scale and code_length must be positive")


def resolution_tag(percent: int) -> str:
    return f"{percent}%"


def compose_code(train: TrainingSet, typeset: str, size: int, script: Script, digits, margin: int = 8) -> np.ndarray:
    """Place fixture cells side by side on white paper."""
    cells = [train.images[(typeset, size, Script(script), int(d))].pixels for d in digits]
    height = max(c.shape[0] for c in cells)
    line = np.full((height + 2 * margin, sum(c.shape[1] for c in cells) + 2 * margin), 255, np.uint8)
    x = margin
    for c in cells:
        line[margin : margin + c.shape[0], x : x + c.shape[1]] = c
        x += c.shape[1]
    return line


def degrade(line: np.ndarray, percent: int, spec: DegradationSpec, rng: np.random.Generator) -> np.ndarray:
    img = Image.fromarray(line)
    if percent != 100:
        img = img.resize((max(1, line.shape[1] * percent // 100), max(1, line.shape[0] * percent // 100)),
                         Image.Resampling.NEAREST)
    angle = rng.uniform(-spec.skew_degrees, spec.skew_degrees) if spec.skew_degrees else 0.0
    if angle:
        img = img.rotate(angle, resample=Image.Resampling.NEAREST, expand=True, fillcolor=255)
    px = np.asarray(img, dtype=np.int16)
    shift = int(rng.integers(-spec.brightness_shift, spec.brightness_shift + 1))
    px = np.clip(px + shift, 0, 255)
    if spec.salt_noise_fraction:
        flips = rng.random(px.shape) < spec.salt_noise_fraction
        px = np.where(flips, 255 - px, px)
    return px.astype(np.uint8)


def generate_dataset(train: TrainingSet, out_dir, spec: DegradationSpec = DegradationSpec()) -> list[dict]:
    """Write ``res<percent>/code_<n>.pgm`` images and the ``labels.tsv`` manifest."""
    out_dir = Path(out_dir)
    rng = np.random.default_rng(spec.seed)
    typesets = train.typesets
    rows = []
    for percent in spec.scale_percents:
        sub = out_dir / f"res{percent}"
        sub.mkdir(parents=True, exist_ok=True)
        for n in range(spec.codes_per_scale):
            script = (Script.ARABIC, Script.INDIAN)[rng.integers(2)]
            typeset = typesets[rng.integers(len(typesets))]
            size = FONT_SIZES[rng.integers(len(FONT_SIZES))]
            digits = "".join(str(d) for d in rng.integers(0, 10, spec.code_length))
            line = compose_code(train, typeset, size, script, digits, spec.margin)
            name = f"res{percent}/code_{n:04d}.pgm"
            save_pgm(GrayImage(degrade(line, percent, spec, rng)), out_dir / name)
            rows.append({"filename": name, "script": script.value, "digits": digits,
                         "resolution": resolution_tag(percent)})
    write_manifest(out_dir / MANIFEST, rows)
    return rows


def write_manifest(path, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=MANIFEST_FIELDS, delimiter="\t", lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def read_manifest(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh, delimiter="\t"))
    for i, row in enumerate(rows, 2):
        if any(row.get(k) in (None, "") for k in MANIFEST_FIELDS):
            raise ValueError(f"{path}:{i}: manifest row lacks one of {MANIFEST_FIELDS}")
    return rows
