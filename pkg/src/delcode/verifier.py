"""Brute-force checks of deletion detectability and the redundancy converse.

The oracle reads detectability code-wide: one decoder must map every received
string to a single count vector, whichever codeword it came from.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Optional

import numpy as np

from . import marker_code
from .core import BitLike, CodeParams, as_bits, to_str
from .errors import CapacityError, ParameterError

DEFAULT_CAP = 10**7


@dataclass(frozen=True)
class Witness:
    y: str
    c1: tuple[int, ...]
    c2: tuple[int, ...]
    x1: str
    x2: str


@dataclass(frozen=True)
class DetectabilityVerdict:
    ok: bool
    witness: Optional[Witness] = None

    def __bool__(self) -> bool:
        return self.ok


def patterns_per_codeword(params: CodeParams) -> int:
    total = 1
    for j in range(1, params.num_blocks + 1):
        L = params.block_len(j)
        total *= sum(math.comb(L, c) for c in range(min(params.delta, L) + 1))
    return total


def enumerate_patterns(params: CodeParams):
    """Yield ``(kept_indices, counts)`` for every pattern with <= delta deletions per block.

    ``kept_indices`` are 0-based indices of surviving symbols.
    """
    per_block = []
    for j in range(1, params.num_blocks + 1):
        start, end = params.block_range(j)
        idx = range(start - 1, end)
        options = []
        for c in range(min(params.delta, len(idx)) + 1):
            for gone in combinations(idx, c):
                options.append((frozenset(gone), c))
        per_block.append(options)
    everything = range(params.n)
    for choice in product(*per_block):
        gone = frozenset().union(*(g for g, _ in choice))
        kept = np.fromiter((i for i in everything if i not in gone), dtype=np.int64)
        yield kept, tuple(c for _, c in choice)


def count_map(code: Iterable[BitLike], params: CodeParams, cap: int = DEFAULT_CAP):
    """Map each received string to ``{count vector: first codeword producing it}``."""
    words = [as_bits(x) for x in code]
    if any(len(x) != params.n for x in words):
        raise ParameterError(f"every codeword must have length {params.n}")
    work = len(words) * patterns_per_codeword(params)
    if work > cap:
        raise CapacityError(f"enumeration of {work} (codeword, pattern) pairs exceeds cap {cap}")
    patterns = list(enumerate_patterns(params)) if words else []
    seen: dict[bytes, dict[tuple[int, ...], bytes]] = {}
    for x in words:
        xb = x.tobytes()
        for kept, counts in patterns:
            y = x[kept].tobytes()
            seen.setdefault(y, {}).setdefault(counts, xb)
    return seen


def detects_exhaustive(code: Iterable[BitLike], params: CodeParams,
                       cap: int = DEFAULT_CAP) -> DetectabilityVerdict:
    """Decide by enumeration whether ``code`` detects up to ``delta`` deletions per block."""
    for y, outs in count_map(code, params, cap).items():
        if len(outs) > 1:
            (c1, x1), (c2, x2) = list(outs.items())[:2]
            return DetectabilityVerdict(False, Witness(
                y=to_str(np.frombuffer(y, dtype=np.uint8)),
                c1=c1, c2=c2,
                x1=to_str(np.frombuffer(x1, dtype=np.uint8)),
                x2=to_str(np.frombuffer(x2, dtype=np.uint8)),
            ))
    return DetectabilityVerdict(True)


def all_codewords(params: CodeParams):
    """Every codeword of the marker code, in lexicographic order of information bits."""
    k = marker_code.info_length(params)
    for bits in product((0, 1), repeat=k):
        yield marker_code.encode(np.array(bits, dtype=np.uint8), params)


def _boundary_pairs(x: np.ndarray, params: CodeParams):
    d = params.delta
    for j in range(1, params.num_blocks):
        _, end = params.block_range(j)
        yield x[end - d:end], x[end:end + d + 1]


def check_boundary_conditions(x: BitLike, params: CodeParams) -> bool:
    """Every one of the last ``delta`` bits of a block differs from each of the next block's first ``delta``."""
    x = _sized(x, params)
    d = params.delta
    for tail, head in _boundary_pairs(x, params):
        if np.isin(tail, head[:d]).any():
            return False
    return True


def check_bbd_condition(x: BitLike, params: CodeParams) -> bool:
    """Boundary conditions plus: bit ``delta + 1`` of each later block differs from the previous tail."""
    x = _sized(x, params)
    if not check_boundary_conditions(x, params):
        return False
    d = params.delta
    return all(not (tail == head[d]).any() for tail, head in _boundary_pairs(x, params))


def _sized(x: BitLike, params: CodeParams) -> np.ndarray:
    x = as_bits(x)
    if len(x) != params.n:
        raise ParameterError(f"expected length {params.n}, got {len(x)}")
    return x


def epsilon(delta: int, ell: int) -> float:
    """Extra per-block redundancy forced when ``2*delta`` divides ``ell``."""
    if ell <= 2 * delta:
        raise ParameterError(f"need ell > 2*delta, got delta={delta} ell={ell}")
    return -math.log1p(-(2.0 ** -(ell - 2 * delta))) / math.log(2)


def lb_theorem2(params: CodeParams) -> float:
    """Redundancy lower bound for any deletion-detecting code."""
    d, blocks = params.delta, _strict_blocks(params)
    if blocks == 2:
        return float(2 * d)
    if params.ell % (2 * d):
        return float(2 * d * (blocks - 1))
    eps = epsilon(d, params.ell)
    return (2 * d + eps) * (blocks - 1) - eps


def lb_theorem3(params: CodeParams) -> int:
    """Redundancy lower bound for block-by-block decodable codes."""
    return (2 * params.delta + 1) * (_strict_blocks(params) - 1)


def _strict_blocks(params: CodeParams) -> int:
    if params.n % params.ell:
        raise ParameterError("lower bounds are stated for ell | n")
    return params.n // params.ell
