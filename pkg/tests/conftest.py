import struct
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from hybrid_ocr.classifiers import ALL_LABELS, Prototype
from hybrid_ocr.pipeline import PrototypeStore, TrainingSet, build_prototypes

ROOT = Path(__file__).resolve().parents[1]
GLYPH_DIR = ROOT / "fixtures" / "glyphs"


@pytest.fixture(scope="session")
def glyph_dir():
    return GLYPH_DIR


@pytest.fixture(scope="session")
def training_set():
    return TrainingSet.from_directory(GLYPH_DIR)


@pytest.fixture(scope="session")
def store(training_set):
    return build_prototypes(training_set)


def bmp_bytes(rows, bpp=24, palette=None, top_down=False, compression=0):
    """Hand-assembled BITMAPINFOHEADER file; ``rows`` top to bottom.

    24-bit rows hold (R, G, B) tuples, 8-bit rows hold palette indices.
    """
    height, width = len(rows), len(rows[0])
    stride = ((width * bpp + 31) // 32) * 4
    body = b""
    order = rows if top_down else rows[::-1]
    for row in order:
        if bpp == 24:
            line = b"".join(bytes((b, g, r)) for r, g, b in row)
        else:
            line = bytes(row)
        body += line + b"\0" * (stride - len(line))
    pal = b""
    if bpp == 8:
        palette = palette or [(i, i, i) for i in range(256)]
        pal = b"".join(bytes((b, g, r, 0)) for r, g, b in palette)
    offset = 14 + 40 + len(pal)
    info = struct.pack("<IiiHHIIiiII", 40, width, -height if top_down else height, 1, bpp,
                       compression, len(body), 2835, 2835, len(palette) if bpp == 8 else 0, 0)
    header = struct.pack("<2sIHHI", b"BM", offset + len(body), 0, 0, offset)
    return header + info + pal + body


@st.composite
def glyphs(draw, density=None):
    """Random 25x20 binary glyph with at least one ink cell."""
    p = draw(st.floats(0.02, 0.9)) if density is None else density
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    g = (rng.random((25, 20)) < p).astype(np.uint8)
    if not g.any():
        g[rng.integers(25), rng.integers(20)] = 1
    return g


def random_glyph(rng, p=None):
    p = rng.uniform(0.02, 0.9) if p is None else p
    g = (rng.random((25, 20)) < p).astype(np.uint8)
    if not g.any():
        g[rng.integers(25), rng.integers(20)] = 1
    return g


def random_store(seed, n_typesets=2):
    """Store of random prototypes whose values survive the text format exactly."""
    rng = np.random.default_rng(seed)
    protos = []
    for t in range(n_typesets):
        for lab in ALL_LABELS:
            protos.append(Prototype(
                label=lab,
                typeset=f"face{t}",
                binary=(rng.random(500) < 0.4).astype(np.uint8),
                zoning=rng.integers(0, 21, 25) / 20,
                fuzzy=np.round(rng.random((25, 20)), 6).clip(1e-6, 1.0),
            ))
    return PrototypeStore(tuple(protos))


# -- acceptance verdicts -------------------------------------------------------

_VERDICTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    failed = report.failed or (report.when == "call" and report.skipped)
    if report.when == "call" or failed:
        prev = _VERDICTS.get(number, (title, True))
        _VERDICTS[number] = (title, prev[1] and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_VERDICTS):
        title, ok = _VERDICTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
