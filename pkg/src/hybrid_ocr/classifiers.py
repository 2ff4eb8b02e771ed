"""Euclidean nearest neighbour, Hamming net with Maxnet, and fuzzy similarity matching.

Every classifier scans prototypes in store order and resolves exact ties in
favour of the earlier prototype.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigurationError, ConvergenceError, DegenerateInputError, DimensionError

ARABIC_CHARS = "0123456789"
INDIAN_CHARS = "٠١٢٣٤٥٦٧٨٩"


class Script(str, enum.Enum):
    ARABIC = "arabic"
    INDIAN = "indian"

    def __str__(self):
        return self.value


@dataclass(frozen=True, order=True)
class ClassLabel:
    script: Script
    digit: int

    def __post_init__(self):
        object.__setattr__(self, "script", Script(self.script))
        if not (isinstance(self.digit, (int, np.integer)) and 0 <= self.digit <= 9):
            raise ValueError(f"digit must be an integer 0-9, got {self.digit!r}")
        object.__setattr__(self, "digit", int(self.digit))

    @property
    def char(self) -> str:
        chars = ARABIC_CHARS if self.script is Script.ARABIC else INDIAN_CHARS
        return chars[self.digit]

    def __str__(self):
        return f"{self.script.value}:{self.digit}"


ALL_LABELS = tuple(ClassLabel(s, d) for s in Script for d in range(10))


@dataclass(frozen=True, eq=False)
class Prototype:
    label: ClassLabel
    typeset: str
    binary: np.ndarray  # (500,) of 0/1
    zoning: np.ndarray  # (25,) in [0, 1]
    fuzzy: np.ndarray  # (25, 20) in (0, 1]

    def __post_init__(self):
        binary = np.asarray(self.binary, dtype=np.uint8).ravel()
        zoning = np.asarray(self.zoning, dtype=np.float64).ravel()
        fuzzy = np.asarray(self.fuzzy, dtype=np.float64).reshape(25, 20)
        if binary.size != 500 or not np.isin(binary, (0, 1)).all():
            raise ValueError("binary prototype must hold 500 values in {0, 1}")
        if zoning.size != 25 or not np.all((zoning >= 0) & (zoning <= 1)):
            raise ValueError("zoning prototype must hold 25 values in [0, 1]")
        if not np.all((fuzzy >= 0) & (fuzzy <= 1)):
            raise ValueError("fuzzy prototype values must lie in [0, 1]")
        if not self.typeset or any(c.isspace() for c in self.typeset):
            raise ValueError(f"typeset must be a non-empty token, got {self.typeset!r}")
        for name, arr in (("binary", binary), ("zoning", zoning), ("fuzzy", fuzzy)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def key(self):
        return (self.typeset, self.label.script.value, self.label.digit)

    def __eq__(self, other):
        if not isinstance(other, Prototype):
            return NotImplemented
        return (self.label == other.label and self.typeset == other.typeset
                and np.array_equal(self.binary, other.binary)
                and np.array_equal(self.zoning, other.zoning)
                and np.array_equal(self.fuzzy, other.fuzzy))


@dataclass(frozen=True)
class RankedResult:
    label: ClassLabel
    typeset: str
    score: float
    runner_up_score: float
    index: int = -1


@dataclass(frozen=True)
class MaxnetConfig:
    epsilon: float = 0.01
    max_iters: int = 10000

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ConfigurationError(f"maxnet epsilon must be positive, got {self.epsilon}")
        if self.max_iters < 1:
            raise ConfigurationError("max_iters must be a positive integer")


def _require(protos: Sequence[Prototype]):
    if len(protos) == 0:
        raise ConfigurationError("prototype store is empty")


def euclidean_distance(p, q) -> float:
    p = np.asarray(p, dtype=np.float64).ravel()
    q = np.asarray(q, dtype=np.float64).ravel()
    if p.size != q.size or p.size == 0:
        raise DimensionError(f"vector lengths differ or are zero: {p.size} vs {q.size}")
    return float(np.sqrt(np.sum((p - q) ** 2)))


def classify_euclidean(f, protos: Sequence[Prototype]) -> RankedResult:
    _require(protos)
    f = np.asarray(f, dtype=np.float64).ravel()
    d = np.array([euclidean_distance(f, p.zoning) for p in protos])
    best = int(np.argmin(d))  # first occurrence = store order
    rest = np.delete(d, best)
    runner = float(rest.min()) if rest.size else math.inf
    p = protos[best]
    return RankedResult(p.label, p.typeset, float(d[best]), runner, best)


def hamming_activations(x, protos: Sequence[Prototype]) -> np.ndarray:
    """net_j = n/2 + sum_i x_i c_ji / 2 over bipolar codes, i.e. n - HD(x, c_j)."""
    _require(protos)
    x = np.asarray(x).ravel()
    n = x.size
    xb = 2 * x.astype(np.int64) - 1
    weights = np.stack([(2 * p.binary.astype(np.int64) - 1) for p in protos]) / 2.0
    if weights.shape[1] != n:
        raise DimensionError(f"input has {n} bits, prototypes have {weights.shape[1]}")
    bias = n / 2.0
    return bias + weights @ xb


def maxnet_iterate(net, cfg: MaxnetConfig = MaxnetConfig()) -> tuple[int, int]:
    """Run the winner-take-all recurrence; return (winner index, iterations).

    Each step applies y_j <- max(0, y_j - eps * sum_{k != j} y_k) until one
    activation remains positive.
    """
    y = np.asarray(net, dtype=np.float64).ravel().copy()
    m = y.size
    if m == 0:
        raise DegenerateInputError("maxnet needs at least one activation")
    if np.any(y < 0) or not np.all(np.isfinite(y)):
        raise DegenerateInputError("maxnet activations must be finite and non-negative")
    if not np.any(y > 0):
        raise DegenerateInputError("maxnet input is all zero")
    if m > 1 and cfg.epsilon >= 1.0 / (m - 1):
        raise ConfigurationError(
            f"maxnet epsilon {cfg.epsilon} must be below 1/(M-1) = {1.0 / (m - 1):.6g} for M={m}")
    for it in range(cfg.max_iters + 1):
        alive = np.flatnonzero(y > 0)
        if alive.size == 1:
            return int(alive[0]), it
        if alive.size == 0:
            raise ConvergenceError("maxnet suppressed every activation; inputs tied at the maximum")
        if it == cfg.max_iters:
            break
        y = np.maximum(0.0, (1.0 + cfg.epsilon) * y - cfg.epsilon * y.sum())
    raise ConvergenceError(f"maxnet did not converge within {cfg.max_iters} iterations")


def maxnet(net, cfg: MaxnetConfig = MaxnetConfig()) -> int:
    return maxnet_iterate(net, cfg)[0]


def _tie_break(net: np.ndarray) -> np.ndarray:
    # net values are integers; a bonus below one unit, decreasing in store
    # order, makes the maximum unique without reordering distinct values
    m = net.size
    return net + (m - np.arange(m)) / (2.0 * m)


def classify_hamming(x, protos: Sequence[Prototype], cfg: MaxnetConfig = MaxnetConfig()) -> RankedResult:
    net = hamming_activations(x, protos)
    winner = maxnet(_tie_break(net), cfg)
    rest = np.delete(net, winner)
    runner = float(rest.max()) if rest.size else -math.inf
    p = protos[winner]
    return RankedResult(p.label, p.typeset, float(net[winner]), runner, winner)


def fnn_similarity(s, proto) -> float:
    """1 - mean absolute difference between two membership maps."""
    s = np.asarray(s, dtype=np.float64).ravel()
    proto = np.asarray(proto, dtype=np.float64).ravel()
    if s.size != proto.size:
        raise DimensionError(f"fuzzy maps differ in size: {s.size} vs {proto.size}")
    return 1.0 - float(np.abs(s - proto).sum()) / s.size


Similarity = Callable[[np.ndarray, np.ndarray], float]


def classify_fnn(s, protos: Sequence[Prototype], similarity: Similarity = fnn_similarity) -> RankedResult:
    """Fuzzified input against every learned pattern; defuzzify by argmax."""
    _require(protos)
    sims = np.array([similarity(s, p.fuzzy) for p in protos])
    best = int(np.argmax(sims))
    rest = np.delete(sims, best)
    runner = float(rest.max()) if rest.size else -math.inf
    p = protos[best]
    return RankedResult(p.label, p.typeset, float(sims[best]), runner, best)
