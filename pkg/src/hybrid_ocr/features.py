"""Binary, zoning and fuzzy features of a normalized 25x20 glyph."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .preprocess import GLYPH_COLS, GLYPH_ROWS, check_glyph

GLYPH_SIZE = GLYPH_ROWS * GLYPH_COLS
ZONE_GRID = (5, 5)


@dataclass(frozen=True)
class FuzzyParams:
    beta: float = 0.3

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")


def binary_features(g: np.ndarray) -> np.ndarray:
    return check_glyph(g).ravel().copy()


def zoning_features(g: np.ndarray, grid: tuple[int, int] = ZONE_GRID) -> np.ndarray:
    """Ink fraction of each window in a ``grid`` partition, row-major."""
    g = check_glyph(g)
    gr, gc = grid
    if GLYPH_ROWS % gr or GLYPH_COLS % gc:
        raise ValueError(f"grid {grid} does not evenly partition {GLYPH_ROWS}x{GLYPH_COLS}")
    wh, ww = GLYPH_ROWS // gr, GLYPH_COLS // gc
    counts = g.reshape(gr, wh, gc, ww).sum(axis=(1, 3))
    return (counts / (wh * ww)).ravel()


def fuzzy_weight(m: int, n: int, params: FuzzyParams = FuzzyParams()) -> float:
    return math.exp(-params.beta ** 2 * (m * m + n * n))


def fuzzy_features(g: np.ndarray, params: FuzzyParams = FuzzyParams()) -> np.ndarray:
    """Max-membership map, 25x20.

    The max over all ink cells of exp(-beta^2 * d^2) is attained at the
    nearest ink cell, so one exact distance transform replaces the double
    loop.
    """
    g = check_glyph(g)
    ri, ci = ndimage.distance_transform_edt(g == 0, return_distances=False, return_indices=True)
    rows, cols = np.indices(g.shape)
    d2 = (rows - ri) ** 2 + (cols - ci) ** 2
    return np.exp(-params.beta ** 2 * d2.astype(np.float64))
