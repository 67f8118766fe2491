"""Marker-based code that detects up to ``delta`` deletions per block.

Every block except the last ends in ``1^delta`` and every block except the
first starts with ``0^(delta+1)``. All other positions carry information bits.
The boundary decoder walks the received string one block at a time, reading
only the last ``delta`` symbols of the current block window.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import BitLike, CodeParams, CountVector, as_bits
from .errors import DesyncError, MalformedInputError, ParameterError


@dataclass(frozen=True)
class MarkerLayout:
    params: CodeParams
    fixed_positions: tuple[tuple[int, int], ...]
    free_positions: tuple[int, ...]

    @property
    def fixed_index(self) -> np.ndarray:
        return np.fromiter((i - 1 for i, _ in self.fixed_positions), dtype=np.int64)

    @property
    def fixed_values(self) -> np.ndarray:
        return np.fromiter((b for _, b in self.fixed_positions), dtype=np.uint8)

    @property
    def free_index(self) -> np.ndarray:
        return np.asarray(self.free_positions, dtype=np.int64) - 1

    @property
    def info_length(self) -> int:
        return len(self.free_positions)


def _require_markers(params: CodeParams) -> None:
    if 2 * params.delta >= params.ell:
        raise ParameterError(
            f"markers need 2*delta < ell, got delta={params.delta} ell={params.ell}"
        )


@lru_cache(maxsize=256)
def layout(params: CodeParams) -> MarkerLayout:
    """Fixed and free positions (1-based) of the code for ``params``."""
    _require_markers(params)
    d, nb = params.delta, params.num_blocks
    forced: dict[int, int] = {}
    for j in range(1, nb + 1):
        start, end = params.block_range(j)
        if j > 1:
            for i in range(start, start + d + 1):
                forced[i] = 0
        if j < nb:
            for i in range(end - d + 1, end + 1):
                forced[i] = 1
    fixed = tuple(sorted(forced.items()))
    free = tuple(i for i in range(1, params.n + 1) if i not in forced)
    return MarkerLayout(params, fixed, free)


def redundancy(params: CodeParams) -> int:
    _require_markers(params)
    return (2 * params.delta + 1) * (params.num_blocks - 1)


def info_length(params: CodeParams) -> int:
    return params.n - redundancy(params)


def encode(info: BitLike, params: CodeParams) -> np.ndarray:
    """Place ``info`` into the free positions in ascending order."""
    info = as_bits(info)
    lay = layout(params)
    if len(info) != lay.info_length:
        raise ParameterError(
            f"expected {lay.info_length} information bits, got {len(info)}"
        )
    x = np.zeros(params.n, dtype=np.uint8)
    x[lay.fixed_index] = lay.fixed_values
    x[lay.free_index] = info
    return x


def extract(x: BitLike, params: CodeParams) -> np.ndarray:
    """Information bits of a codeword (inverse of :func:`encode`)."""
    x = _checked_length(x, params)
    return x[layout(params).free_index]


def is_codeword(x: BitLike, params: CodeParams) -> bool:
    x = _checked_length(x, params)
    lay = layout(params)
    return bool(np.array_equal(x[lay.fixed_index], lay.fixed_values))


def mirror(x: BitLike, params: CodeParams) -> np.ndarray:
    """Flip the bits at the marker positions.

    Maps the code onto its polarity-swapped twin (blocks ending in zeros,
    starting with ones). The two codes must never be mixed: their union is
    not deletion-detecting, and :func:`decode_boundaries` only decodes the
    original polarity.
    """
    x = _checked_length(x, params).copy()
    idx = layout(params).fixed_index
    x[idx] ^= 1
    return x


def _checked_length(x: BitLike, params: CodeParams) -> np.ndarray:
    x = as_bits(x)
    if len(x) != params.n:
        raise ParameterError(f"expected length {params.n}, got {len(x)}")
    return x


@dataclass(frozen=True)
class BoundaryResult:
    """Decoder output: counts, 1-based block starts in ``y`` and the block slices.

    ``suspect[j]`` is set when block ``j`` could only be decoded by clamping,
    which happens only if the per-block deletion promise was broken.
    """

    counts: CountVector
    starts: tuple[int, ...]
    segments: tuple[np.ndarray, ...]
    suspect: tuple[bool, ...]

    @property
    def any_suspect(self) -> bool:
        return any(self.suspect)


def block_count(window: bytes, ell: int, delta: int) -> int:
    """Deletions in one block, read from the ``ell`` symbols starting at its boundary.

    ``window`` may be shorter than ``ell`` near the end of the received string;
    missing trailing symbols are read as zeros.
    """
    tail = window[ell - delta:]
    z = tail.find(0)
    if z >= 0:
        return delta - z
    if len(window) < ell:
        return delta - len(tail)
    return 0


def decode_boundaries(y: BitLike, params: CodeParams, strict: bool = True) -> BoundaryResult:
    """Recover per-block deletion counts and block boundaries of ``y``.

    With ``strict=True`` any evidence that some block lost more than
    ``delta`` bits raises. With ``strict=False`` the decoder never raises:
    it clamps and marks the affected blocks as suspect.
    """
    _require_markers(params)
    y = as_bits(y)
    d, ell, nb = params.delta, params.ell, params.num_blocks
    m = len(y)
    if strict and not params.n - d * nb <= m <= params.n:
        raise MalformedInputError(
            f"received length {m} outside [{params.n - d * nb}, {params.n}]"
        )
    ys = y.tobytes()
    counts, starts, suspect = [], [], []
    a = 0
    for _ in range(nb - 1):
        starts.append(a)
        window = ys[a:a + ell]
        c = block_count(window, ell, d)
        nxt = a + ell - c
        bad = len(window) < ell or nxt > m
        counts.append(c)
        suspect.append(bad)
        a = min(nxt, m)
    starts.append(a)
    last = params.last_len - (m - a)
    bad = not 0 <= last <= d
    counts.append(min(max(last, 0), params.last_len))
    suspect.append(bad)
    if strict and any(suspect):
        j = suspect.index(True) + 1
        raise DesyncError(f"block {j} lost more than delta={d} bits")
    bounds = starts + [m]
    segments = tuple(y[bounds[j]:bounds[j + 1]] for j in range(nb))
    return BoundaryResult(
        counts=CountVector(tuple(counts), d),
        starts=tuple(s + 1 for s in starts),
        segments=segments,
        suspect=tuple(suspect),
    )
