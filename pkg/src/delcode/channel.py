"""I.i.d. deletion channel and reproducible trace generation."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .core import BitLike, DeletionPattern, as_bits
from .errors import ParameterError

MASK64 = (1 << 64) - 1
GOLDEN64 = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 finalizer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def substream(seed: int, i: int) -> int:
    """64-bit seed for the ``i``-th independent substream of ``seed``."""
    return mix64(mix64(seed) + (i + 1) * GOLDEN64)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & MASK64))


@dataclass(frozen=True)
class ChannelParams:
    """Deletion probability ``p = k / n**alpha``."""

    k: float
    alpha: float
    n: int

    def __post_init__(self) -> None:
        if self.k <= 1:
            raise ParameterError(f"k must exceed 1, got {self.k}")
        if not 0.5 < self.alpha <= 1:
            raise ParameterError(f"alpha must lie in (0.5, 1], got {self.alpha}")
        if self.n < 1:
            raise ParameterError("n must be positive")
        if not 0 < self.p < 0.5:
            raise ParameterError(f"deletion probability {self.p:.4g} outside (0, 0.5)")

    @property
    def p(self) -> float:
        return self.k / self.n ** self.alpha


@dataclass(frozen=True)
class TraceSet:
    traces: tuple[np.ndarray, ...]
    seed: int
    deleted: tuple[DeletionPattern, ...] = field(default=(), repr=False)

    @property
    def t(self) -> int:
        return len(self.traces)


def _check_p(p: float) -> float:
    p = float(p)
    if not 0 <= p <= 1:
        raise ParameterError(f"deletion probability must lie in [0, 1], got {p}")
    return p


def deletion_mask(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Boolean mask, True where a symbol is deleted."""
    return rng.random(n) < _check_p(p)


def transmit(x: BitLike, p: float, rng: np.random.Generator) -> np.ndarray:
    """Delete each symbol of ``x`` independently with probability ``p``."""
    x = as_bits(x)
    return x[~deletion_mask(len(x), p, rng)]


def gen_traces(x: BitLike, ch: Union[ChannelParams, float], t: int, seed: int) -> TraceSet:
    """``t`` independent traces; trace ``i`` draws from ``substream(seed, i)``."""
    if t < 1:
        raise ParameterError("need at least one trace")
    x = as_bits(x)
    p = ch.p if isinstance(ch, ChannelParams) else _check_p(ch)
    traces, deleted = [], []
    for i in range(t):
        mask = deletion_mask(len(x), p, make_rng(substream(seed, i)))
        traces.append(x[~mask])
        deleted.append(DeletionPattern(tuple(int(v) + 1 for v in np.flatnonzero(mask))))
    return TraceSet(tuple(traces), seed, tuple(deleted))
