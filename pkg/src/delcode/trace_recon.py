"""Trace-reconstruction code: marker code intersected with a run-length limit.

The block length is ``ell = floor(1/p)`` for ``p = k / n**alpha``. Every
codeword lies in the marker code detecting ``delta - 1`` deletions per block,
and no run exceeds ``floor(sqrt(ell))``. Reconstruction runs in three steps:
recover block boundaries in every trace, run BMA on each block, concatenate.

Because every block boundary reads ``...1|0...``, a run can never cross it.
The run-length limit therefore factorises over blocks, and sampling each
block independently by rejection gives an exactly uniform codeword.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import marker_code
from .bma import bma_rows
from .channel import ChannelParams, TraceSet
from .core import BitLike, CodeParams, as_bits, max_run_length, to_str
from .errors import CapacityError, ParameterError, SamplingError
from .marker_code import BoundaryResult, decode_boundaries

MAX_REJECTIONS = 10**4


def block_length(n: int, k: float, alpha: float) -> int:
    """``floor(n**alpha / k)``, robust to float noise at exact integers."""
    v = n**alpha / k
    r = round(v)
    return r if abs(v - r) < 1e-9 else math.floor(v)


@dataclass(frozen=True)
class TraceCodeParams:
    n: int
    k: float
    alpha: float
    delta: int

    def __post_init__(self) -> None:
        if self.delta <= 1:
            raise ParameterError(f"delta must exceed 1, got {self.delta}")
        # validates k, alpha and 0 < p < 0.5
        ChannelParams(self.k, self.alpha, self.n)
        if self.ell <= self.delta**2:
            raise ParameterError(
                f"block length {self.ell} must exceed delta^2 = {self.delta**2}"
            )
        self.detector  # geometry checks live in CodeParams

    @property
    def p(self) -> float:
        return self.k / self.n**self.alpha

    @property
    def channel(self) -> ChannelParams:
        return ChannelParams(self.k, self.alpha, self.n)

    @property
    def ell(self) -> int:
        return block_length(self.n, self.k, self.alpha)

    @property
    def run_limit(self) -> int:
        return math.isqrt(self.ell)

    @cached_property
    def detector(self) -> CodeParams:
        return CodeParams(self.delta - 1, self.ell, self.n, strict=False)

    @property
    def num_blocks(self) -> int:
        return self.detector.num_blocks


def is_member(x: BitLike, params: TraceCodeParams) -> bool:
    x = as_bits(x)
    if len(x) != params.n:
        raise ParameterError(f"expected length {params.n}, got {len(x)}")
    return marker_code.is_codeword(x, params.detector) and max_run_length(x) <= params.run_limit


def _run_violations(rows: np.ndarray, limit: int) -> np.ndarray:
    """Per row: does some window of ``limit + 1`` equal symbols exist?"""
    w = limit + 1
    if rows.shape[1] < w:
        return np.zeros(rows.shape[0], dtype=bool)
    c = np.zeros((rows.shape[0], rows.shape[1] + 1), dtype=np.int32)
    np.cumsum(rows, axis=1, out=c[:, 1:])
    s = c[:, w:] - c[:, :-w]
    return ((s == 0) | (s == w)).any(axis=1)


def _sample_rows(fixed_mask: np.ndarray, fixed_vals: np.ndarray, limit: int,
                 rng: np.random.Generator) -> np.ndarray:
    """Uniformly sample each row subject to its fixed bits and the run limit."""
    rows = np.where(fixed_mask, fixed_vals, rng.integers(0, 2, fixed_mask.shape, dtype=np.uint8))
    bad = _run_violations(rows, limit)
    tries = 0
    while bad.any():
        tries += 1
        if tries >= MAX_REJECTIONS:
            raise SamplingError(f"{MAX_REJECTIONS} consecutive rejections; run limit {limit} too tight")
        idx = np.flatnonzero(bad)
        fresh = rng.integers(0, 2, (len(idx), rows.shape[1]), dtype=np.uint8)
        rows[idx] = np.where(fixed_mask[idx], fixed_vals[idx], fresh)
        bad[idx] = _run_violations(rows[idx], limit)
    return rows


def sample_codeword(params: TraceCodeParams, seed_or_rng) -> np.ndarray:
    """Uniform sample from the code, by per-block rejection on the run limit."""
    rng = _as_rng(seed_or_rng)
    det = params.detector
    lay = marker_code.layout(det)
    mask = np.zeros(det.n, dtype=bool)
    vals = np.zeros(det.n, dtype=np.uint8)
    mask[lay.fixed_index] = True
    vals[lay.fixed_index] = lay.fixed_values
    full = (det.n // det.ell) * det.ell
    out = np.empty(det.n, dtype=np.uint8)
    shape = (-1, det.ell)
    out[:full] = _sample_rows(mask[:full].reshape(shape), vals[:full].reshape(shape),
                              params.run_limit, rng).ravel()
    if full < det.n:
        out[full:] = _sample_rows(mask[None, full:], vals[None, full:], params.run_limit, rng)[0]
    return out


def sample_rll(n: int, limit: int, seed_or_rng) -> np.ndarray:
    """Uniform sample of a length-``n`` string with no run longer than ``limit``."""
    rng = _as_rng(seed_or_rng)
    return _sample_rows(np.zeros((1, n), dtype=bool), np.zeros((1, n), dtype=np.uint8),
                        limit, rng)[0]


def _as_rng(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    from .channel import make_rng

    return make_rng(int(seed_or_rng))


# --- bit-stuffing encoder -------------------------------------------------

def _following_fixed_runs(params: TraceCodeParams):
    """For each 0-based position: (symbol, length) of the fixed run starting right after it."""
    n = params.n
    lay = marker_code.layout(params.detector)
    fixed = dict((i - 1, b) for i, b in lay.fixed_positions)
    nxt: list[tuple[int, int]] = [(-1, 0)] * n
    sym, run = -1, 0
    for i in range(n - 1, -1, -1):
        nxt[i] = (sym, run)
        if i in fixed:
            b = fixed[i]
            run = run + 1 if b == sym else 1
            sym = b
        else:
            sym, run = -1, 0
    return fixed, nxt


def _forced(prev: int, run: int, follow: tuple[int, int], limit: int) -> bool:
    """Would emitting ``prev`` again at a free slot overflow the run limit?"""
    if prev < 0:
        return False
    fsym, flen = follow
    return run + 1 + (flen if fsym == prev else 0) > limit


def stuff_capacity(params: TraceCodeParams) -> int:
    """Largest info length that :func:`stuff_encode` accepts for every input.

    Computed by dynamic programming over (last symbol, run length): the
    minimum number of information bits any input can place before the free
    positions run out.
    """
    fixed, nxt = _following_fixed_runs(params)
    limit = params.run_limit
    inf = float("inf")
    best = {(-1, 0): 0}
    for i in range(params.n):
        new: dict[tuple[int, int], float] = {}

        def push(state, cost):
            if cost < new.get(state, inf):
                new[state] = cost

        for (s, r), cost in best.items():
            if i in fixed:
                b = fixed[i]
                push((b, r + 1 if b == s else 1), cost)
            elif _forced(s, r, nxt[i], limit):
                push((1 - s, 1), cost)
            else:
                for b in (0, 1):
                    push((b, r + 1 if b == s else 1), cost + 1)
        best = new
    return int(min(best.values()))


def stuff_encode(info: BitLike, params: TraceCodeParams) -> np.ndarray:
    """Deterministic run-limited encoder.

    Fills free positions left to right with information bits. Whenever the
    next bit would push the current run past the limit, counting any fixed
    marker bits it would merge with, the complementary bit is inserted
    first. Once the information is used up, the remaining free positions
    alternate.
    """
    info = as_bits(info)
    fixed, nxt = _following_fixed_runs(params)
    limit = params.run_limit
    x = np.empty(params.n, dtype=np.uint8)
    used, prev, run = 0, -1, 0
    for i in range(params.n):
        if i in fixed:
            b = fixed[i]
        elif _forced(prev, run, nxt[i], limit):
            b = 1 - prev
        elif used < len(info):
            b = int(info[used])
            used += 1
        else:
            b = 1 - prev if prev >= 0 else 0
        run = run + 1 if b == prev else 1
        prev = b
        x[i] = b
    if used < len(info):
        raise CapacityError(
            f"{len(info)} information bits do not fit; {used} were placed"
            f" (guaranteed capacity {stuff_capacity(params)})"
        )
    return x


def stuff_decode(x: BitLike, params: TraceCodeParams, length: int) -> np.ndarray:
    """Inverse of :func:`stuff_encode` for an information string of ``length`` bits."""
    x = as_bits(x)
    if len(x) != params.n:
        raise ParameterError(f"expected length {params.n}, got {len(x)}")
    fixed, nxt = _following_fixed_runs(params)
    limit = params.run_limit
    out: list[int] = []
    prev, run = -1, 0
    for i in range(params.n):
        b = int(x[i])
        if i not in fixed and not _forced(prev, run, nxt[i], limit):
            out.append(b)
        run = run + 1 if b == prev else 1
        prev = b
    if len(out) < length:
        raise ParameterError(f"codeword carries only {len(out)} information bits")
    return np.array(out[:length], dtype=np.uint8)


# --- reconstruction ---------------------------------------------------------

@dataclass(frozen=True)
class ReconstructionReport:
    x_hat: np.ndarray
    boundaries: tuple[BoundaryResult, ...]

    @property
    def counts(self) -> list[list[int]]:
        """Decoded deletion counts, one row per trace."""
        return [list(b.counts.counts) for b in self.boundaries]

    @property
    def suspect(self) -> list[list[bool]]:
        return [list(b.suspect) for b in self.boundaries]

    @property
    def suspect_blocks(self) -> list[int]:
        """1-based blocks flagged suspect in at least one trace."""
        flags = np.array(self.suspect, dtype=bool).any(axis=0)
        return [int(j) + 1 for j in np.flatnonzero(flags)]

    def to_json(self) -> dict:
        return {
            "x_hat": to_str(self.x_hat),
            "counts": self.counts,
            "suspect": self.suspect,
        }


def reconstruct(traces: TraceSet | Sequence[BitLike], params: TraceCodeParams,
                zero_del_shortcut: bool = False) -> ReconstructionReport:
    """Boundary recovery per trace, then BMA per block, then concatenation.

    With ``zero_del_shortcut`` a block whose segment decoded with zero
    deletions in some trace is copied from that trace instead of voted.
    """
    ys = traces.traces if isinstance(traces, TraceSet) else [as_bits(y) for y in traces]
    if not ys:
        raise ParameterError("need at least one trace")
    det = params.detector
    results = tuple(decode_boundaries(y, det, strict=False) for y in ys)
    pieces = []
    for j in range(det.num_blocks):
        L = det.block_len(j + 1)
        block = None
        if zero_del_shortcut:
            for r in results:
                seg = r.segments[j]
                if r.counts[j] == 0 and not r.suspect[j] and len(seg) == L:
                    block = seg
                    break
        if block is None:
            rows = [r.segments[j][:L].tobytes() for r in results]
            block = bma_rows(rows, [len(s) for s in rows], L)
        pieces.append(block)
    return ReconstructionReport(np.concatenate(pieces), results)


def redundancy(params: TraceCodeParams) -> int:
    """Marker redundancy ``(2*delta - 1) * (ceil(n/ell) - 1)``."""
    return marker_code.redundancy(params.detector)
