"""Line-oriented text format for prototype stores.

    HYBRID-OCR-PROTOS 1
    count <M>
    proto <typeset> <script> <digit>
    binary <500 values of 0/1>
    zoning <25 decimals>
    fuzzy
    <25 lines of 20 decimals, 6 fractional digits>
    ...
"""
from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .classifiers import ClassLabel, Prototype, Script
from .errors import ConfigurationError, CorruptStoreError, StoreRangeError, StoreVersionError
from .pipeline import STORE_VERSION, PrototypeStore

MAGIC = "HYBRID-OCR-PROTOS"


def dumps_store(store: PrototypeStore) -> str:
    out = [f"{MAGIC} {store.version}", f"count {len(store)}"]
    for p in store:
        out.append(f"proto {p.typeset} {p.label.script.value} {p.label.digit}")
        out.append("binary " + " ".join(str(int(v)) for v in p.binary))
        out.append("zoning " + " ".join(f"{v:.6f}" for v in p.zoning))
        out.append("fuzzy")
        for row in p.fuzzy:
            out.append(" ".join(f"{v:.6f}" for v in row))
    return "\n".join(out) + "\n"


def save_store(store: PrototypeStore, path) -> None:
    Path(path).write_text(dumps_store(store), encoding="ascii")


def load_store(path) -> PrototypeStore:
    return loads_store(Path(path).read_text(encoding="ascii"))


def _floats(tokens, expected, lineno, what, lo, hi):
    if len(tokens) != expected:
        raise CorruptStoreError(f"line {lineno}: {what} has {len(tokens)} values, expected {expected}")
    try:
        vals = [float(t) for t in tokens]
    except ValueError:
        raise CorruptStoreError(f"line {lineno}: {what} holds a non-numeric value") from None
    for v in vals:
        if not math.isfinite(v):
            raise StoreRangeError(f"line {lineno}: {what} value {v} is not finite")
        if not lo <= v <= hi:
            raise StoreRangeError(f"line {lineno}: {what} value {v} outside [{lo}, {hi}]")
    return vals


def loads_store(text: str) -> PrototypeStore:
    lines = text.splitlines()
    pos = 0

    def take(what):
        nonlocal pos
        if pos >= len(lines):
            raise CorruptStoreError(f"unexpected end of file, expected {what}")
        pos += 1
        return pos, lines[pos - 1].split()

    lineno, head = take("header")
    if len(head) != 2 or head[0] != MAGIC:
        raise CorruptStoreError(f"line {lineno}: missing {MAGIC} header")
    if head[1] != str(STORE_VERSION):
        raise StoreVersionError(f"store version {head[1]!r} unsupported (expected {STORE_VERSION})")
    lineno, cnt = take("count")
    if len(cnt) != 2 or cnt[0] != "count" or not cnt[1].isdigit():
        raise CorruptStoreError(f"line {lineno}: malformed count line")
    count = int(cnt[1])

    protos = []
    for k in range(count):
        lineno, hdr = take(f"prototype {k + 1} of {count}")
        if len(hdr) != 4 or hdr[0] != "proto":
            raise CorruptStoreError(f"line {lineno}: expected 'proto <typeset> <script> <digit>'")
        try:
            label = ClassLabel(Script(hdr[2]), int(hdr[3]))
        except ValueError as exc:
            raise CorruptStoreError(f"line {lineno}: bad label: {exc}") from None

        lineno, b = take("binary line")
        if not b or b[0] != "binary":
            raise CorruptStoreError(f"line {lineno}: expected binary line")
        if len(b) != 501 or any(t not in ("0", "1") for t in b[1:]):
            raise CorruptStoreError(f"line {lineno}: binary line must hold 500 values of 0/1")
        binary = np.array([int(t) for t in b[1:]], dtype=np.uint8)

        lineno, z = take("zoning line")
        if not z or z[0] != "zoning":
            raise CorruptStoreError(f"line {lineno}: expected zoning line")
        zoning = _floats(z[1:], 25, lineno, "zoning", 0.0, 1.0)

        lineno, f = take("fuzzy marker")
        if f != ["fuzzy"]:
            raise CorruptStoreError(f"line {lineno}: expected fuzzy marker")
        rows = []
        for _ in range(25):
            lineno, row = take("fuzzy row")
            rows.append(_floats(row, 20, lineno, "fuzzy", 0.0, 1.0))
        try:
            protos.append(Prototype(label, hdr[1], binary, np.array(zoning), np.array(rows)))
        except ValueError as exc:
            raise CorruptStoreError(f"line {lineno}: {exc}") from None

    if any(line.strip() for line in lines[pos:]):
        raise CorruptStoreError(f"trailing data after {count} prototypes at line {pos + 1}")
    try:
        return PrototypeStore(tuple(protos))
    except ConfigurationError as exc:
        raise CorruptStoreError(str(exc)) from None
