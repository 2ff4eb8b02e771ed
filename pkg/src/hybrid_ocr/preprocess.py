"""Binarization, code-region location, segmentation and 25x20 normalization.

Binary images are plain ``uint8`` arrays of shape (height, width) holding
1 for ink and 0 for background.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import NoContentError
from .imageio import GrayImage

GLYPH_ROWS, GLYPH_COLS = 25, 20


@dataclass(frozen=True)
class PreprocessConfig:
    min_area: int = 4
    overlap_merge: float = 0.5
    connectivity: int = 4
    min_band_height: int = 3

    def __post_init__(self):
        if self.connectivity not in (4, 8):
            raise ValueError(f"connectivity must be 4 or 8, got {self.connectivity}")
        if self.min_area < 1:
            raise ValueError("min_area must be >= 1")
        if not 0.0 <= self.overlap_merge <= 1.0:
            raise ValueError("overlap_merge must lie in [0, 1]")
        if self.min_band_height < 1:
            raise ValueError("min_band_height must be >= 1")

    @property
    def structure(self) -> np.ndarray:
        if self.connectivity == 4:
            return ndimage.generate_binary_structure(2, 1)
        return ndimage.generate_binary_structure(2, 2)


DEFAULT_PREPROCESS = PreprocessConfig()


@dataclass(frozen=True)
class Region:
    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w <= 0 or self.h <= 0:
            raise ValueError(f"region must have positive size, got {self.w}x{self.h}")

    @classmethod
    def parse(cls, text: str) -> "Region":
        """Parse ``"x,y,w,h"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"region must be x,y,w,h, got {text!r}")
        return cls(*(int(p) for p in parts))

    def clip(self, width: int, height: int) -> "Region | None":
        x0, y0 = max(self.x, 0), max(self.y, 0)
        x1, y1 = min(self.x + self.w, width), min(self.y + self.h, height)
        if x1 <= x0 or y1 <= y0:
            return None
        return Region(x0, y0, x1 - x0, y1 - y0)

    def slices(self):
        return slice(self.y, self.y + self.h), slice(self.x, self.x + self.w)


def binarize(image: GrayImage) -> np.ndarray:
    """Global mean threshold: ink where p < floor(mean), background otherwise."""
    px = image.pixels
    threshold = int(px.sum(dtype=np.int64)) // px.size
    return (px < threshold).astype(np.uint8)


def remove_small_components(bits: np.ndarray, cfg: PreprocessConfig = DEFAULT_PREPROCESS) -> np.ndarray:
    labels, n = ndimage.label(bits, structure=cfg.structure)
    if n == 0:
        return np.zeros_like(bits)
    areas = np.bincount(labels.ravel())
    keep = areas >= cfg.min_area
    keep[0] = False
    return keep[labels].astype(np.uint8)


def locate_code_region(bits: np.ndarray, hint: Region | None = None,
                       cfg: PreprocessConfig = DEFAULT_PREPROCESS) -> Region:
    """Return the clipped hint, or the box of the bottom-most text band.

    Isolated specks below ``cfg.min_area`` are ignored when building the row
    profile so salt noise does not form spurious bands.
    """
    height, width = bits.shape
    if hint is not None:
        clipped = hint.clip(width, height)
        if clipped is None:
            raise NoContentError(f"region {hint} lies outside the {width}x{height} image")
        return clipped

    clean = remove_small_components(bits, cfg)
    rows = clean.sum(axis=1) > 0
    if not rows.any():
        raise NoContentError("image contains no ink")

    # maximal runs of inked rows, as [start, stop)
    edges = np.diff(np.concatenate(([0], rows.astype(np.int8), [0])))
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1)
    tall = [(a, b) for a, b in zip(starts, stops) if b - a >= cfg.min_band_height]
    if not tall:
        raise NoContentError(f"no text band at least {cfg.min_band_height} rows tall")
    top, bottom = tall[-1]
    cols = np.flatnonzero(clean[top:bottom].any(axis=0))
    return Region(int(cols[0]), int(top), int(cols[-1] - cols[0] + 1), int(bottom - top))


def segment_characters(bits: np.ndarray, region: Region,
                       cfg: PreprocessConfig = DEFAULT_PREPROCESS) -> list[np.ndarray]:
    """Split the region into per-character crops ordered left to right."""
    sub = bits[region.slices()]
    labels, n = ndimage.label(sub, structure=cfg.structure)
    if n == 0:
        raise NoContentError("region contains no ink")
    areas = np.bincount(labels.ravel(), minlength=n + 1)
    boxes = ndimage.find_objects(labels)

    # components as [label set, (r0, r1, c0, c1)]
    comps = []
    for lab, sl in enumerate(boxes, start=1):
        if sl is None or areas[lab] < cfg.min_area:
            continue
        comps.append([{lab}, (sl[0].start, sl[0].stop, sl[1].start, sl[1].stop)])
    if not comps:
        raise NoContentError("only isolated noise inside region")

    merged = True
    while merged:
        merged = False
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                if _overlaps(comps[i][1], comps[j][1], cfg.overlap_merge):
                    (la, a), (lb, b) = comps[i], comps[j]
                    comps[i] = [la | lb, (min(a[0], b[0]), max(a[1], b[1]), min(a[2], b[2]), max(a[3], b[3]))]
                    del comps[j]
                    merged = True
                    break
            if merged:
                break

    comps.sort(key=lambda c: (c[1][2], c[1][0]))
    crops = []
    for labs, (r0, r1, c0, c1) in comps:
        window = labels[r0:r1, c0:c1]
        crops.append(np.isin(window, list(labs)).astype(np.uint8))
    return crops


def _overlaps(a, b, fraction: float) -> bool:
    overlap = min(a[3], b[3]) - max(a[2], b[2])
    if overlap <= 0:
        return False
    narrower = min(a[3] - a[2], b[3] - b[2])
    return overlap >= fraction * narrower


def tight_crop(bits: np.ndarray) -> np.ndarray:
    rows = np.flatnonzero(bits.any(axis=1))
    cols = np.flatnonzero(bits.any(axis=0))
    if rows.size == 0:
        raise ValueError("crop has no ink")
    return bits[rows[0] : rows[-1] + 1, cols[0] : cols[-1] + 1]


def normalize(crop: np.ndarray) -> np.ndarray:
    """Tighten to the ink box and resample to 25x20 by nearest neighbour."""
    crop = np.asarray(crop)
    if not crop.any():
        raise ValueError("cannot normalize an all-background crop")
    tight = tight_crop(crop)
    h, w = tight.shape
    ri = (np.arange(GLYPH_ROWS) * h) // GLYPH_ROWS
    ci = (np.arange(GLYPH_COLS) * w) // GLYPH_COLS
    return (tight[np.ix_(ri, ci)] != 0).astype(np.uint8)


def check_glyph(g: np.ndarray) -> np.ndarray:
    g = np.asarray(g)
    if g.shape != (GLYPH_ROWS, GLYPH_COLS):
        raise ValueError(f"glyph must be {GLYPH_ROWS}x{GLYPH_COLS}, got {g.shape}")
    if not np.isin(g, (0, 1)).all():
        raise ValueError("glyph cells must be 0 or 1")
    if not g.any():
        raise ValueError("glyph has no ink")
    return g.astype(np.uint8, copy=False)
