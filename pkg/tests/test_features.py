import math

import numpy as np
import pytest
from hypothesis import given, settings

from hybrid_ocr.features import FuzzyParams, binary_features, fuzzy_features, fuzzy_weight, zoning_features

from conftest import glyphs


def brute_force_fuzzy(g, beta=0.3):
    """Direct max over every (cell, ink cell) pair, no distance shortcut."""
    rows, cols = g.shape
    out = np.zeros((rows, cols))
    for i in range(rows):
        for j in range(cols):
            best = 0.0
            for x in range(rows):
                for y in range(cols):
                    m, n = i - x, j - y
                    v = math.exp(-beta ** 2 * (m * m + n * n)) * g[x, y]
                    if v > best:
                        best = v
            out[i, j] = best
    return out


def single(r, c):
    g = np.zeros((25, 20), np.uint8)
    g[r, c] = 1
    return g


def test_binary_all_ink():
    assert binary_features(np.ones((25, 20), np.uint8)).tolist() == [1] * 500


def test_binary_row_major_index():
    assert np.flatnonzero(binary_features(single(0, 0))).tolist() == [0]
    assert np.flatnonzero(binary_features(single(1, 2))).tolist() == [22]


@given(glyphs())
def test_binary_round_trip(g):
    assert np.array_equal(binary_features(g).reshape(25, 20), g)


def test_zoning_all_ink():
    assert zoning_features(np.ones((25, 20), np.uint8)).tolist() == [1.0] * 25


def test_zoning_single_pixel():
    z = zoning_features(single(0, 0))
    assert z[0] == 0.05 and not z[1:].any()


def test_zoning_first_window():
    g = np.zeros((25, 20), np.uint8)
    g[0:5, 0:4] = 1
    z = zoning_features(g)
    assert z[0] == 1.0 and not z[1:].any()


def test_zoning_window_order_is_row_major():
    # window (row 1, col 3) covers rows 5-9, cols 12-15
    z = zoning_features(single(7, 13))
    assert np.flatnonzero(z).tolist() == [1 * 5 + 3]


@given(glyphs())
def test_zoning_conservation(g):
    z = zoning_features(g)
    assert round(z.sum() * 20) == g.sum()
    assert np.all((z >= 0) & (z <= 1))
    assert np.allclose(z * 20, np.round(z * 20))


def test_zoning_bad_grid():
    with pytest.raises(ValueError):
        zoning_features(np.ones((25, 20), np.uint8), grid=(4, 4))


def test_fuzzy_weight_values():
    p = FuzzyParams(0.3)
    assert fuzzy_weight(0, 0, p) == 1.0
    assert fuzzy_weight(1, 0, p) == pytest.approx(0.9139311852712282, abs=1e-15)
    assert fuzzy_weight(1, 1, p) == pytest.approx(0.835270211411272, abs=1e-15)
    assert fuzzy_weight(-2, 3, p) == fuzzy_weight(2, -3, p)


def test_fuzzy_params_validate():
    with pytest.raises(ValueError):
        FuzzyParams(0.0)


def test_fuzzy_single_ink():
    s = fuzzy_features(single(0, 0))
    assert s[0, 0] == 1.0
    assert s[0, 1] == pytest.approx(0.9139311852712282, abs=1e-12)
    assert s[1, 1] == pytest.approx(0.835270211411272, abs=1e-12)


def test_fuzzy_strictly_decreasing_in_distance():
    s = fuzzy_features(single(12, 9))
    rows, cols = np.indices((25, 20))
    d2 = (rows - 12) ** 2 + (cols - 9) ** 2
    order = np.argsort(d2, axis=None, kind="stable")
    d_sorted, s_sorted = d2.ravel()[order], s.ravel()[order]
    for k in range(1, 500):
        if d_sorted[k] > d_sorted[k - 1]:
            assert s_sorted[k] < s_sorted[k - 1]
        else:
            assert s_sorted[k] == s_sorted[k - 1]


@settings(max_examples=40, deadline=None)
@given(glyphs())
def test_fuzzy_ink_fixed_point_and_range(g):
    s = fuzzy_features(g)
    assert np.array_equal(s == 1.0, g == 1)
    assert np.all((s > 0) & (s <= 1))


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_fuzzy_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    g = (rng.random((25, 20)) < rng.uniform(0.01, 0.2)).astype(np.uint8)
    g[rng.integers(25), rng.integers(20)] = 1
    assert np.max(np.abs(fuzzy_features(g) - brute_force_fuzzy(g))) <= 1e-12


def test_fuzzy_beta_is_used():
    s = fuzzy_features(single(0, 0), FuzzyParams(0.5))
    assert s[0, 1] == pytest.approx(math.exp(-0.25))


def test_features_reject_invalid_glyph():
    with pytest.raises(ValueError):
        binary_features(np.zeros((25, 20), np.uint8))
    with pytest.raises(ValueError):
        zoning_features(np.ones((20, 25), np.uint8))
