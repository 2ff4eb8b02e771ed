import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from PIL import Image

from hybrid_ocr.errors import NoContentError
from hybrid_ocr.imageio import GrayImage
from hybrid_ocr.preprocess import (
    PreprocessConfig, Region, binarize, locate_code_region, normalize, segment_characters,
)

from conftest import glyphs


def test_binarize_uniform_is_blank():
    assert not binarize(GrayImage(np.full((4, 4), 200))).any()


def test_binarize_two_pixels():
    assert binarize(GrayImage(np.array([[0, 255]]))).tolist() == [[1, 0]]


def test_binarize_checkerboard():
    board = np.indices((4, 4)).sum(axis=0) % 2 * 255
    bits = binarize(GrayImage(board))
    assert np.array_equal(bits, (board == 0).astype(np.uint8))


def test_binarize_tie_goes_to_background():
    # mean is exactly 100; the pixel equal to it stays paper
    bits = binarize(GrayImage(np.array([[50, 100, 150]])))
    assert bits.tolist() == [[1, 0, 0]]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 255), min_size=2, max_size=40), st.randoms())
def test_binarize_is_pointwise_in_a_permutation(values, rnd):
    px = np.array(values, dtype=np.uint8)[None, :]
    perm = list(range(len(values)))
    rnd.shuffle(perm)
    a = binarize(GrayImage(px))[0]
    b = binarize(GrayImage(px[:, perm]))[0]
    assert np.array_equal(a[perm], b)


def test_locate_single_line():
    bits = np.zeros((20, 30), np.uint8)
    bits[5:12, 3:25] = 1
    assert locate_code_region(bits) == Region(3, 5, 22, 7)


def test_locate_hint_passthrough_and_clip():
    bits = np.zeros((20, 30), np.uint8)
    assert locate_code_region(bits, Region(2, 3, 4, 5)) == Region(2, 3, 4, 5)
    assert locate_code_region(bits, Region(25, -5, 10, 10)) == Region(25, 0, 5, 5)
    with pytest.raises(NoContentError):
        locate_code_region(bits, Region(40, 0, 5, 5))


def test_locate_takes_bottom_band():
    bits = np.zeros((50, 40), np.uint8)
    bits[5:13, 2:10] = 1
    bits[30:41, 12:30] = 1
    assert locate_code_region(bits) == Region(12, 30, 18, 11)


def test_locate_skips_short_bands_and_specks():
    bits = np.zeros((50, 40), np.uint8)
    bits[10:20, 5:15] = 1
    bits[30:32, 5:15] = 1  # two rows: too short to be a text line
    bits[45, 20] = 1  # isolated speck
    assert locate_code_region(bits) == Region(5, 10, 10, 10)


def test_locate_blank():
    with pytest.raises(NoContentError):
        locate_code_region(np.zeros((5, 5), np.uint8))


def test_segment_two_squares():
    bits = np.zeros((7, 17), np.uint8)
    bits[1:6, 0:5] = 1
    bits[1:6, 10:15] = 1
    crops = segment_characters(bits, Region(0, 0, 17, 7))
    assert len(crops) == 2
    assert all(c.shape == (5, 5) and c.all() for c in crops)


def test_segment_orders_left_to_right():
    bits = np.zeros((20, 20), np.uint8)
    bits[12:15, 10:14] = 1  # right, lower, 3x4
    bits[0:3, 2:5] = 1  # left, upper, 3x3
    bits[5:7, 17:18] = 1  # area 2: noise
    crops = segment_characters(bits, Region(0, 0, 20, 20))
    assert [c.shape for c in crops] == [(3, 3), (3, 4)]


def test_segment_lone_pixel_is_noise():
    bits = np.zeros((5, 5), np.uint8)
    bits[2, 2] = 1
    with pytest.raises(NoContentError):
        segment_characters(bits, Region(0, 0, 5, 5))


def test_segment_merges_stacked_parts():
    bits = np.zeros((20, 10), np.uint8)
    bits[2:6, 3:7] = 1  # a dot above
    bits[9:18, 2:8] = 1  # a body below
    crops = segment_characters(bits, Region(0, 0, 10, 20))
    assert len(crops) == 1
    assert crops[0].shape == (16, 6)
    assert crops[0].sum() == 16 + 54


def test_segment_crop_excludes_neighbour_pixels():
    bits = np.zeros((10, 14), np.uint8)
    bits[0:9, 0:2] = 1
    bits[0:2, 0:9] = 1  # an L spanning columns 0-8
    bits[5:10, 8:13] = 1  # a block whose box pokes into the L's box
    crops = segment_characters(bits, Region(0, 0, 14, 10))
    assert len(crops) == 2  # 1 column of overlap is < 50% of the narrower width
    assert crops[0].shape == (9, 9)
    assert crops[0].sum() == 18 + 18 - 4
    assert crops[0][5:, 8].sum() == 0


def test_segment_connectivity_flag():
    bits = np.zeros((6, 6), np.uint8)
    bits[0:2, 0:2] = 1
    bits[2:4, 2:4] = 1  # touches only diagonally
    region = Region(0, 0, 6, 6)
    four = segment_characters(bits, region, PreprocessConfig(overlap_merge=1.0))
    eight = segment_characters(bits, region, PreprocessConfig(connectivity=8))
    assert len(four) == 2 and len(eight) == 1


def test_three_digits_and_a_speck(training_set):
    cells = [training_set.images[("sans", 12, "arabic", d)].pixels for d in (3, 1, 7)]
    line = np.concatenate(cells, axis=1).copy()
    line[2, 1:3] = 0  # 2-pixel speck in the top margin
    bits = binarize(GrayImage(line))
    region = Region(0, 0, line.shape[1], line.shape[0])
    assert len(segment_characters(bits, region)) == 3


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_segment_invariants(seed):
    rng = np.random.default_rng(seed)
    bits = (rng.random((30, 60)) < 0.15).astype(np.uint8)
    try:
        crops = segment_characters(bits, Region(0, 0, 60, 30))
    except NoContentError:
        return
    assert all(c.sum() >= 4 for c in crops)


def test_normalize_identity():
    rng = np.random.default_rng(1)
    g = (rng.random((25, 20)) < 0.5).astype(np.uint8)
    g[0, :] = g[-1, :] = 1
    g[:, 0] = g[:, -1] = 1
    assert np.array_equal(normalize(g), g)


def test_normalize_all_ink_downscale():
    assert normalize(np.ones((50, 40), np.uint8)).all()


def test_normalize_top_row_upscale():
    crop = np.zeros((5, 4), np.uint8)
    crop[0] = 1
    crop[4, 0] = 1  # keeps the tight box at 5 rows
    out = normalize(crop)
    assert out[:5].all()
    assert not out[5:20].any()
    assert out.shape == (25, 20)


def test_normalize_single_row_crop_tightens_to_full_ink():
    # a lone inked row is its own tight box, so it fills the whole glyph
    crop = np.zeros((5, 4), np.uint8)
    crop[0] = 1
    assert normalize(crop).all()


def test_normalize_tightens_margins():
    crop = np.zeros((40, 40), np.uint8)
    crop[10:15, 10:14] = 1
    assert normalize(crop).all()


def test_normalize_rejects_blank():
    with pytest.raises(ValueError):
        normalize(np.zeros((3, 3), np.uint8))


@settings(max_examples=50, deadline=None)
@given(glyphs())
def test_normalize_idempotent_on_tight_glyphs(g):
    g = g.copy()
    g[0, 0] = g[-1, -1] = 1  # tight 25x20 box
    once = normalize(g)
    assert np.array_equal(normalize(once), once)


@pytest.mark.parametrize("angle", [-2.0, -1.0, 1.0, 2.0])
def test_fixture_skew_keeps_component_count(training_set, angle):
    for key, img in training_set.images.items():
        rotated = Image.fromarray(img.pixels).rotate(angle, resample=Image.Resampling.NEAREST,
                                                     expand=True, fillcolor=255)
        px = np.asarray(rotated)
        bits = binarize(GrayImage(px))
        crops = segment_characters(bits, Region(0, 0, px.shape[1], px.shape[0]))
        assert len(crops) == 1, key
