"""Bit-sequence primitives, block geometry and deletion-pattern mechanics.

A bit string is a one-dimensional ``numpy.uint8`` array holding only 0 and 1.
Every public function accepts anything :func:`as_bits` understands (an ASCII
``'0'/'1'`` string, a sequence of ints, or an array) and returns arrays.

Positions are 1-based in every public interface.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import ParameterError

BitLike = Union[str, bytes, Sequence[int], np.ndarray]

_ASCII_ZERO = ord("0")
_IGNORED = str.maketrans("", "", " _\t\n\r")


def as_bits(x: BitLike) -> np.ndarray:
    """Normalise ``x`` to a 1-D uint8 array of 0/1 symbols.

    Strings may contain spaces or underscores as visual separators, so
    ``"10101 00111"`` is accepted.
    """
    if isinstance(x, np.ndarray) and x.dtype == np.uint8 and x.ndim == 1:
        arr = x
    elif isinstance(x, (str, bytes)):
        s = x.decode("ascii") if isinstance(x, bytes) else x
        s = s.translate(_IGNORED)
        arr = np.frombuffer(s.encode("ascii"), dtype=np.uint8) - _ASCII_ZERO
    else:
        raw = np.asarray(x)
        if raw.size == 0:
            return np.zeros(0, dtype=np.uint8)
        if raw.ndim != 1 or not (np.issubdtype(raw.dtype, np.integer) or raw.dtype == bool):
            raise ParameterError("bit strings must be one-dimensional integer sequences")
        if raw.min() < 0:
            raise ParameterError("bit strings may only contain 0 and 1")
        arr = raw.astype(np.uint8)
    if arr.size and arr.max() > 1:
        raise ParameterError("bit strings may only contain 0 and 1")
    return arr


def to_str(x: BitLike) -> str:
    """Serialise a bit string as ASCII '0'/'1'."""
    return (as_bits(x) + _ASCII_ZERO).tobytes().decode("ascii")


def is_subsequence(y: BitLike, x: BitLike) -> bool:
    """True iff ``y`` can be obtained from ``x`` by deletions only."""
    it = iter(to_str(x))
    return all(c in it for c in to_str(y))


@dataclass(frozen=True)
class CodeParams:
    """Block geometry ``(delta, ell, n)`` for a deletion-detecting code.

    Any detecting code needs ``delta < ell <= n/2``; the marker construction
    additionally needs ``2*delta < ell`` and checks that itself.

    ``strict`` requires ``ell | n``. In relaxed mode the last block has length
    ``n mod ell`` and must still hold the ``delta + 1`` leading marker zeros.
    """

    delta: int
    ell: int
    n: int
    strict: bool = True

    def __post_init__(self) -> None:
        d, ell, n = self.delta, self.ell, self.n
        if min(d, ell, n) < 1:
            raise ParameterError(f"delta, ell and n must be positive, got {(d, ell, n)}")
        if not d < ell <= n / 2:
            raise ParameterError(f"need delta < ell <= n/2, got delta={d} ell={ell} n={n}")
        tail = n % ell
        if self.strict and tail:
            raise ParameterError(f"ell={ell} does not divide n={n} (strict mode)")
        if tail and tail < d + 1:
            raise ParameterError(
                f"last block of length {tail} cannot hold {d + 1} marker bits"
            )

    @property
    def num_blocks(self) -> int:
        return -(-self.n // self.ell)

    @property
    def last_len(self) -> int:
        return self.n - self.ell * (self.num_blocks - 1)

    def block_len(self, j: int) -> int:
        """Length of block ``j`` (1-based)."""
        return self.last_len if j == self.num_blocks else self.ell

    def block_range(self, j: int) -> tuple[int, int]:
        """Inclusive 1-based index range of block ``j``."""
        if not 1 <= j <= self.num_blocks:
            raise ParameterError(f"block index {j} out of range")
        start = 1 + (j - 1) * self.ell
        return start, start + self.block_len(j) - 1


@dataclass(frozen=True)
class DeletionPattern:
    """Sorted, duplicate-free 1-based positions to delete."""

    positions: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        pos = tuple(int(p) for p in self.positions)
        if any(p < 1 for p in pos):
            raise ParameterError("deletion positions are 1-based")
        if any(a >= b for a, b in zip(pos, pos[1:])):
            raise ParameterError("deletion positions must be strictly increasing")
        object.__setattr__(self, "positions", pos)

    @classmethod
    def of(cls, positions: Iterable[int]) -> "DeletionPattern":
        """Build a pattern from positions in any order."""
        return cls(tuple(sorted(set(int(p) for p in positions))))

    def __len__(self) -> int:
        return len(self.positions)

    def __iter__(self):
        return iter(self.positions)


@dataclass(frozen=True)
class CountVector:
    """Per-block deletion counts, as produced by a deletion-detecting decoder."""

    counts: tuple[int, ...]
    delta: int

    @property
    def exceeds_budget(self) -> bool:
        """True when some block saw more than ``delta`` deletions."""
        return any(c > self.delta for c in self.counts)

    def __len__(self) -> int:
        return len(self.counts)

    def __iter__(self):
        return iter(self.counts)

    def __getitem__(self, j: int) -> int:
        return self.counts[j]


def split_blocks(x: BitLike, ell: int, strict: bool = True) -> list[np.ndarray]:
    """Split ``x`` into consecutive blocks of length ``ell``.

    In relaxed mode (``strict=False``) the last block may be shorter.
    """
    x = as_bits(x)
    if ell < 1:
        raise ParameterError("block length must be positive")
    if strict and len(x) % ell:
        raise ParameterError(f"ell={ell} does not divide length {len(x)}")
    return [x[i:i + ell] for i in range(0, len(x), ell)]


def apply_deletions(x: BitLike, d: DeletionPattern | Iterable[int]) -> np.ndarray:
    x = as_bits(x)
    pos = d.positions if isinstance(d, DeletionPattern) else DeletionPattern.of(d).positions
    if pos and pos[-1] > len(x):
        raise ParameterError(f"deletion position {pos[-1]} exceeds length {len(x)}")
    keep = np.ones(len(x), dtype=bool)
    keep[np.asarray(pos, dtype=np.int64) - 1] = False
    return x[keep]


def count_per_block(d: DeletionPattern | Iterable[int], params: CodeParams) -> CountVector:
    """Number of deleted positions inside each block of ``params``.

    The result may exceed ``params.delta``; check ``exceeds_budget``.
    """
    pos = d.positions if isinstance(d, DeletionPattern) else DeletionPattern.of(d).positions
    if pos and pos[-1] > params.n:
        raise ParameterError(f"deletion position {pos[-1]} exceeds n={params.n}")
    counts = [0] * params.num_blocks
    for p in pos:
        counts[(p - 1) // params.ell] += 1
    return CountVector(tuple(counts), params.delta)


def max_run_length(x: BitLike) -> int:
    """Length of the longest run of equal symbols (0 for the empty string)."""
    x = as_bits(x)
    if len(x) == 0:
        return 0
    edges = np.flatnonzero(np.diff(x)) + 1
    bounds = np.concatenate(([0], edges, [len(x)]))
    return int(np.diff(bounds).max())
