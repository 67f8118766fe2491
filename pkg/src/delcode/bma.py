"""Bitwise Majority Alignment over a ``t x ell`` matrix of padded traces.

Each trace has a pointer. At every output position the symbols under the
pointers vote, the majority symbol is emitted, and only the pointers that
voted with the majority advance.

The vote reads the symbol under each pointer, ``T[j, q[j]] == b``, not the
pointer value itself. Padding and exhausted pointers do not vote. An empty
vote emits 0, and a tie goes to the lowest-indexed row that voted.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import BitLike, as_bits
from .errors import ParameterError

PAD = 2


@dataclass(frozen=True)
class TraceMatrix:
    rows: np.ndarray  # (t, ell) uint8 over {0, 1, PAD}

    def __post_init__(self) -> None:
        r = self.rows
        if r.ndim != 2 or r.shape[0] < 1 or r.shape[1] < 1:
            raise ParameterError("trace matrix must be t x ell with t, ell >= 1")
        if r.max(initial=0) > PAD:
            raise ParameterError("trace matrix symbols must be 0, 1 or PAD")
        padded = r == PAD
        # once a row hits PAD it must stay PAD
        if (padded[:, :-1] & ~padded[:, 1:]).any():
            raise ParameterError("PAD may only appear at the right end of a row")

    @property
    def t(self) -> int:
        return self.rows.shape[0]

    @property
    def ell(self) -> int:
        return self.rows.shape[1]

    @classmethod
    def from_traces(cls, traces: Sequence[BitLike], ell: int) -> "TraceMatrix":
        """Right-pad short traces with PAD and truncate long ones to ``ell``."""
        rows = np.full((len(traces), ell), PAD, dtype=np.uint8)
        for j, tr in enumerate(traces):
            tr = as_bits(tr)[:ell]
            rows[j, :len(tr)] = tr
        return cls(rows)

    def row_lengths(self) -> list[int]:
        return [int(v) for v in (self.rows != PAD).sum(axis=1)]


def bma(m: TraceMatrix) -> np.ndarray:
    """Reconstruct a length-``ell`` bit string from the trace matrix."""
    rows = [bytes(r) for r in m.rows]
    return bma_rows(rows, m.row_lengths(), m.ell)


def bma_rows(rows: Sequence[bytes], lengths: Sequence[int], ell: int) -> np.ndarray:
    """Core loop on unpadded rows; ``lengths[j]`` is the number of real symbols in row ``j``."""
    t = len(rows)
    q = [0] * t
    lim = [min(L, ell) for L in lengths]
    out = bytearray(ell)
    live = range(t)
    for i in range(ell):
        ones = zeros = 0
        first = -1
        for j in live:
            if q[j] < lim[j]:
                s = rows[j][q[j]]
                if s:
                    ones += 1
                else:
                    zeros += 1
                if first < 0:
                    first = s
        if ones > zeros:
            b = 1
        elif zeros > ones:
            b = 0
        else:
            b = first if first >= 0 else 0
        out[i] = b
        for j in live:
            if q[j] < lim[j] and rows[j][q[j]] == b:
                q[j] += 1
    return np.frombuffer(bytes(out), dtype=np.uint8)


def bma_traces(traces: Sequence[BitLike], ell: int) -> np.ndarray:
    """Convenience wrapper: BMA on raw traces, truncated to ``ell``."""
    rows = [as_bits(tr)[:ell].tobytes() for tr in traces]
    return bma_rows(rows, [len(r) for r in rows], ell)
