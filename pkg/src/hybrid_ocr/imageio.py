"""Minimal readers for PGM (P2/P5) and uncompressed BMP, and a P5 writer.

Images are 8-bit grayscale with 0 = black ink and 255 = white paper.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CorruptFileError, ImageFormatError

# integer luma weights, per mille
LUMA_R, LUMA_G, LUMA_B = 299, 587, 114


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Row-major 8-bit raster; ``pixels`` has shape (height, width)."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.shape[0] <= 0 or px.shape[1] <= 0:
            raise ValueError(f"pixels must be a non-empty 2D array, got shape {px.shape}")
        if px.dtype != np.uint8:
            if px.size and (px.min() < 0 or px.max() > 255):
                raise ValueError("pixel values must lie in [0, 255]")
            px = px.astype(np.uint8)
        px = np.ascontiguousarray(px)
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(np.array_equal(self.pixels, other.pixels))

    def __repr__(self):
        return f"GrayImage({self.width}x{self.height})"


def luma(r, g, b):
    """Integer luma; truncates like the per-mille rule does."""
    r = np.asarray(r, dtype=np.int64)
    g = np.asarray(g, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    return ((LUMA_R * r + LUMA_G * g + LUMA_B * b) // 1000).astype(np.uint8)


def load_image(path) -> GrayImage:
    data = Path(path).read_bytes()
    if data[:2] in (b"P5", b"P2"):
        return _decode_pgm(data)
    if data[:2] == b"BM":
        return _decode_bmp(data)
    raise ImageFormatError(f"{path}: unsupported magic {data[:2]!r} (expected P5, P2 or BM)")


def encode_pgm(image: GrayImage) -> bytes:
    return f"P5\n{image.width} {image.height}\n255\n".encode("ascii") + image.pixels.tobytes()


def save_pgm(image: GrayImage, path) -> None:
    Path(path).write_bytes(encode_pgm(image))


# -- PGM -----------------------------------------------------------------------

def _pgm_tokens(data: bytes, count: int, pos: int):
    """Read ``count`` whitespace-separated header tokens, skipping # comments."""
    tokens = []
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos] in b" \t\r\n":
            pos += 1
        if pos < n and data[pos] == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
            continue
        start = pos
        while pos < n and data[pos] not in b" \t\r\n#":
            pos += 1
        if start == pos:
            raise CorruptFileError("PGM header truncated")
        tokens.append(data[start:pos])
    return tokens, pos


def _decode_pgm(data: bytes) -> GrayImage:
    magic = data[:2]
    (w_tok, h_tok, max_tok), pos = _pgm_tokens(data, 3, 2)
    try:
        width, height, maxval = int(w_tok), int(h_tok), int(max_tok)
    except ValueError as exc:
        raise CorruptFileError(f"PGM header field is not an integer: {exc}") from None
    if width <= 0 or height <= 0:
        raise CorruptFileError(f"PGM width/height must be positive, got {width}x{height}")
    if maxval <= 0:
        raise CorruptFileError(f"PGM maxval must be positive, got {maxval}")
    if maxval > 255:
        raise ImageFormatError(f"PGM maxval {maxval} unsupported (16-bit samples)")
    npx = width * height
    if magic == b"P5":
        payload = data[pos + 1 : pos + 1 + npx]  # single whitespace after maxval
        if len(payload) < npx:
            raise CorruptFileError(f"PGM payload truncated: {len(payload)} of {npx} bytes")
        values = np.frombuffer(payload, dtype=np.uint8).astype(np.int64)
    else:
        parts = data[pos:].split()
        if len(parts) < npx:
            raise CorruptFileError(f"PGM payload truncated: {len(parts)} of {npx} samples")
        try:
            values = np.array([int(t) for t in parts[:npx]], dtype=np.int64)
        except ValueError:
            raise CorruptFileError("P2 payload contains a non-integer sample") from None
    if values.max(initial=0) > maxval:
        raise CorruptFileError(f"PGM sample exceeds maxval {maxval}")
    if maxval != 255:
        values = values * 255 // maxval
    return GrayImage(values.astype(np.uint8).reshape(height, width))


# -- BMP -----------------------------------------------------------------------

def _decode_bmp(data: bytes) -> GrayImage:
    if len(data) < 14 + 40:
        raise CorruptFileError("BMP headers truncated")
    (offset,) = struct.unpack_from("<I", data, 10)
    (hdr_size,) = struct.unpack_from("<I", data, 14)
    if hdr_size < 40:
        raise ImageFormatError(f"BMP header size {hdr_size} unsupported (need BITMAPINFOHEADER)")
    width, height, planes, bpp, compression = struct.unpack_from("<iiHHI", data, 18)
    (colors_used,) = struct.unpack_from("<I", data, 46)
    if compression != 0:
        raise ImageFormatError(f"BMP compression {compression} unsupported (only BI_RGB=0)")
    if bpp not in (8, 24):
        raise ImageFormatError(f"BMP bit count {bpp} unsupported (need 8 or 24)")
    top_down = height < 0
    height = abs(height)
    if width <= 0 or height == 0:
        raise CorruptFileError(f"BMP width/height must be positive, got {width}x{height}")

    stride = ((width * bpp + 31) // 32) * 4
    need = offset + stride * (height - 1) + (width * bpp + 7) // 8
    if len(data) < need:
        raise CorruptFileError(f"BMP pixel payload truncated: {len(data)} of {need} bytes")
    rows = []
    for r in range(height):
        start = offset + r * stride
        rows.append(np.frombuffer(data, dtype=np.uint8, count=width * bpp // 8, offset=start))
    raw = np.stack(rows)

    if bpp == 24:
        bgr = raw.reshape(height, width, 3)
        gray = luma(bgr[..., 2], bgr[..., 1], bgr[..., 0])
    else:
        ncolors = colors_used or 256
        pal_start = 14 + hdr_size
        if len(data) < pal_start + 4 * ncolors:
            raise CorruptFileError("BMP palette truncated")
        pal = np.frombuffer(data, dtype=np.uint8, count=4 * ncolors, offset=pal_start).reshape(ncolors, 4)
        if raw.max(initial=0) >= ncolors:
            raise CorruptFileError("BMP palette index out of range")
        table = luma(pal[:, 2], pal[:, 1], pal[:, 0])
        gray = table[raw]
    if not top_down:
        gray = gray[::-1]
    return GrayImage(gray)
