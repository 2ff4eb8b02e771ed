"""Prototype construction, the three-classifier decision rule, and code reading."""
from __future__ import annotations

import collections
import dataclasses
import enum
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .classifiers import (
    ALL_LABELS, ARABIC_CHARS, INDIAN_CHARS, ClassLabel, MaxnetConfig, Prototype, RankedResult, Script,
    classify_euclidean, classify_fnn, classify_hamming,
)
from .errors import ConfigurationError, IncompleteTrainingSetError, NoContentError, UnresolvedCodeError
from .features import FuzzyParams, binary_features, fuzzy_features, zoning_features
from .imageio import GrayImage, load_image
from .preprocess import PreprocessConfig, Region, binarize, locate_code_region, normalize, segment_characters

STORE_VERSION = 1
FONT_SIZES = (12, 14, 16, 18, 20)
PROTOTYPE_SIZE = 12


@dataclass(frozen=True)
class PipelineConfig:
    """Every tunable of the recognizer; serializes as ``key=value`` lines."""

    beta: float = 0.3
    epsilon: float = 0.01
    max_iters: int = 10000
    digit_level_match: bool = False
    min_area: int = 4
    overlap_merge: float = 0.5
    connectivity: int = 4
    min_band_height: int = 3

    def __post_init__(self):
        # fail at construction, not on the first glyph that needs the setting
        _ = (self.preprocess, self.maxnet, self.fuzzy)

    @property
    def preprocess(self) -> PreprocessConfig:
        return PreprocessConfig(self.min_area, self.overlap_merge, self.connectivity, self.min_band_height)

    @property
    def maxnet(self) -> MaxnetConfig:
        return MaxnetConfig(self.epsilon, self.max_iters)

    @property
    def fuzzy(self) -> FuzzyParams:
        return FuzzyParams(self.beta)

    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            lines.append(f"{f.name}={str(v).lower() if isinstance(v, bool) else v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PipelineConfig":
        types = {f.name: f.type for f in dataclasses.fields(cls)}
        values = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = (part.strip() for part in line.partition("="))
            if not sep or key not in types:
                raise ConfigurationError(f"config line {lineno}: unknown or malformed entry {raw!r}")
            kind = types[key]
            try:
                if kind == "bool":
                    if val.lower() not in ("true", "false", "1", "0", "yes", "no"):
                        raise ValueError(val)
                    values[key] = val.lower() in ("true", "1", "yes")
                elif kind == "int":
                    values[key] = int(val)
                else:
                    values[key] = float(val)
            except ValueError:
                raise ConfigurationError(f"config line {lineno}: bad value for {key}: {val!r}") from None
        return cls(**values)


# -- prototype store -------------------------------------------------------------

@dataclass(frozen=True)
class PrototypeStore:
    prototypes: tuple[Prototype, ...]
    version: int = STORE_VERSION

    def __post_init__(self):
        object.__setattr__(self, "prototypes", tuple(self.prototypes))
        seen = set()
        for p in self.prototypes:
            key = (p.typeset, p.label)
            if key in seen:
                raise ConfigurationError(f"duplicate prototype {p.typeset} {p.label}")
            seen.add(key)

    @property
    def typesets(self) -> list[str]:
        return list(dict.fromkeys(p.typeset for p in self.prototypes))

    def __len__(self):
        return len(self.prototypes)

    def __iter__(self):
        return iter(self.prototypes)

    def __getitem__(self, i):
        return self.prototypes[i]


# -- training --------------------------------------------------------------------

TrainingKey = tuple  # (typeset, size, Script, digit)
_GLYPH_NAME = re.compile(r"^(?P<typeset>[^_\s]+)_(?P<size>\d+)_(?P<script>arabic|indian)_(?P<digit>\d)\.pgm$")


def glyph_filename(typeset: str, size: int, script, digit: int) -> str:
    return f"{typeset}_{size}_{Script(script).value}_{digit}.pgm"


@dataclass
class TrainingSet:
    images: dict = field(default_factory=dict)  # TrainingKey -> GrayImage

    @classmethod
    def from_directory(cls, path) -> "TrainingSet":
        images = {}
        for f in sorted(Path(path).iterdir()):
            m = _GLYPH_NAME.match(f.name)
            if m:
                key = (m["typeset"], int(m["size"]), Script(m["script"]), int(m["digit"]))
                images[key] = load_image(f)
        return cls(images)

    @property
    def typesets(self) -> list[str]:
        return sorted({k[0] for k in self.images})

    def missing(self) -> list[str]:
        out = []
        for ts in self.typesets:
            for size in FONT_SIZES:
                for label in ALL_LABELS:
                    if (ts, size, label.script, label.digit) not in self.images:
                        out.append(glyph_filename(ts, size, label.script, label.digit))
        return out


def glyph_from_image(image: GrayImage, cfg: PipelineConfig = PipelineConfig()) -> np.ndarray:
    """Normalize a single-character image the same way recognition does."""
    bits = binarize(image)
    region = Region(0, 0, image.width, image.height)
    crops = segment_characters(bits, region, cfg.preprocess)
    if len(crops) != 1:
        raise NoContentError(f"expected one character, segmented {len(crops)}")
    return normalize(crops[0])


def quantize(values: np.ndarray, digits: int = 6) -> np.ndarray:
    """Round through decimal text so a saved store reloads bit-identically."""
    flat = [float(f"{v:.{digits}f}") for v in np.asarray(values, dtype=np.float64).ravel()]
    return np.array(flat).reshape(np.shape(values))


def build_prototypes(train: TrainingSet, cfg: PipelineConfig = PipelineConfig()) -> PrototypeStore:
    """Size-12 binary and zoning templates, fuzzy templates averaged over all sizes."""
    if not train.images:
        raise IncompleteTrainingSetError(["<no glyph images found>"])
    missing = train.missing()
    if missing:
        raise IncompleteTrainingSetError(missing)
    protos = []
    for ts in train.typesets:
        for label in ALL_LABELS:
            glyphs = {size: glyph_from_image(train.images[(ts, size, label.script, label.digit)], cfg)
                      for size in FONT_SIZES}
            base = glyphs[PROTOTYPE_SIZE]
            fuzzy = sum(fuzzy_features(glyphs[s], cfg.fuzzy) for s in FONT_SIZES) / len(FONT_SIZES)
            protos.append(Prototype(
                label=label,
                typeset=ts,
                binary=binary_features(base),
                zoning=zoning_features(base),
                fuzzy=quantize(fuzzy),
            ))
    protos.sort(key=lambda p: p.key)
    return PrototypeStore(tuple(protos))


# -- decision rule ---------------------------------------------------------------

class Status(str, enum.Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"


class Stage(str, enum.Enum):
    TWO_WAY_AGREEMENT = "two-way-agreement"
    FNN_ARBITRATION = "fnn-arbitration"


@dataclass(frozen=True)
class Decision:
    status: Status
    stage: Stage
    label: ClassLabel | None
    hamming: RankedResult
    euclidean: RankedResult
    fnn: RankedResult | None = None

    @property
    def accepted(self) -> bool:
        return self.status is Status.ACCEPTED


def labels_match(a: ClassLabel, b: ClassLabel, digit_level: bool = False) -> bool:
    return a.digit == b.digit if digit_level else a == b


def decide(g: np.ndarray, store: PrototypeStore, cfg: PipelineConfig = PipelineConfig(),
           counter: collections.Counter | None = None) -> Decision:
    """Hamming and Euclidean first; the fuzzy network only arbitrates disagreements."""
    protos = store.prototypes
    c1 = classify_hamming(binary_features(g), protos, cfg.maxnet)
    c2 = classify_euclidean(zoning_features(g), protos)
    if labels_match(c1.label, c2.label, cfg.digit_level_match):
        return Decision(Status.ACCEPTED, Stage.TWO_WAY_AGREEMENT, c1.label, c1, c2)

    if counter is not None:
        counter["fuzzy"] += 1
    c3 = classify_fnn(fuzzy_features(g, cfg.fuzzy), protos)
    if labels_match(c3.label, c1.label, cfg.digit_level_match) or \
            labels_match(c3.label, c2.label, cfg.digit_level_match):
        return Decision(Status.ACCEPTED, Stage.FNN_ARBITRATION, c3.label, c1, c2, c3)
    return Decision(Status.REJECTED, Stage.FNN_ARBITRATION, None, c1, c2, c3)


@dataclass(frozen=True)
class PostalCodeResult:
    decisions: tuple[Decision, ...]
    region: Region | None = None

    @property
    def text(self) -> str:
        return "".join(d.label.char if d.accepted else "?" for d in self.decisions)

    @property
    def all_accepted(self) -> bool:
        return all(d.accepted for d in self.decisions)


def read_glyphs(image: GrayImage, hint: Region | None = None,
                cfg: PipelineConfig = PipelineConfig()) -> tuple[Region, list[np.ndarray]]:
    """Binarize, locate, segment and normalize; returns the region and glyphs."""
    bits = binarize(image)
    region = locate_code_region(bits, hint, cfg.preprocess)
    crops = segment_characters(bits, region, cfg.preprocess)
    glyphs = []
    for i, crop in enumerate(crops):
        try:
            glyphs.append(normalize(crop))
        except ValueError as exc:
            raise NoContentError(f"character {i}: {exc}") from None
    return region, glyphs


def recognize_code(image: GrayImage, store: PrototypeStore, hint: Region | None = None,
                   cfg: PipelineConfig = PipelineConfig(),
                   counter: collections.Counter | None = None) -> PostalCodeResult:
    region, glyphs = read_glyphs(image, hint, cfg)
    decisions = tuple(decide(g, store, cfg, counter) for g in glyphs)
    return PostalCodeResult(decisions, region)


# -- post-processing -------------------------------------------------------------

_DIGIT_VALUES = {c: str(i) for i, c in enumerate(INDIAN_CHARS)} | {c: c for c in ARABIC_CHARS}


def digit_values(code: str) -> str:
    """Map Arabic and Indian digit characters to ASCII digit values."""
    if "?" in code:
        raise UnresolvedCodeError(f"code {code!r} contains rejected characters")
    try:
        return "".join(_DIGIT_VALUES[c] for c in code)
    except KeyError as exc:
        raise ValueError(f"not a digit character: {exc.args[0]!r}") from None


def load_codebook(path) -> set[str]:
    codes = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            codes.add(digit_values(line))
    return codes


def validate_code(digits: str, codebook: Mapping | set) -> bool:
    """True iff the code's digit values appear in the codebook."""
    value = digit_values(digits)
    return value in {digit_values(c) for c in codebook}
