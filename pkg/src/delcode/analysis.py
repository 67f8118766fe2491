"""Closed-form bounds for the trace-reconstruction code and edit-distance metrics."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from rapidfuzz.distance import Levenshtein

from .core import BitLike, to_str
from .errors import DomainError, ParameterError

INV_E = math.exp(-1.0)


def lambert_w(x: float) -> np.longdouble:
    """Principal branch of the Lambert W function, ``w * exp(w) = x``.

    Halley iteration in extended precision (``numpy.longdouble``) so that the
    absolute residual stays below 1e-10 even for ``x`` around 1e6, where the
    spacing of doubles near ``W(x)`` is already too coarse. Seeded with
    ``ln x - ln ln x`` for ``x >= e``.
    """
    x = float(x)
    if math.isnan(x) or x < -INV_E:
        raise DomainError(f"Lambert W is real only for x >= -1/e, got {x}")
    if x == 0.0:
        return np.longdouble(0)
    if x == -INV_E:
        return np.longdouble(-1)
    if x >= math.e:
        lx = math.log(x)
        w0 = lx - math.log(lx)
    elif x > -0.25:
        w0 = math.log1p(x)
    else:
        # series about the branch point
        p = math.sqrt(max(2.0 * (math.e * x + 1.0), 0.0))
        w0 = -1.0 + p - p * p / 3.0
    X = np.longdouble(x)
    w = np.longdouble(w0)
    for _ in range(100):
        ew = np.exp(w)
        f = w * ew - X
        denom = ew * (w + 1) - (w + 2) * f / (2 * w + 2)
        if denom == 0:
            break
        step = f / denom
        w -= step
        if abs(step) <= 4 * np.finfo(np.longdouble).eps * (1 + abs(w)):
            break
    return w


def delta_star(n: int, alpha: float, p_n: float) -> float:
    """Optimised detection parameter from the displayed closed form.

    ``2 ln(sqrt(e) n^(1-alpha) p_n) / W(2e ln(sqrt(e) n^(1-alpha) p_n))``.
    Callers round up for the integer code parameter.
    """
    z = math.sqrt(math.e) * n ** (1 - alpha) * p_n
    if z <= 1:
        raise ParameterError(f"sqrt(e) n^(1-alpha) p(n) = {z:.4g} must exceed 1")
    a = 2 * math.log(z)
    return float(a / lambert_w(math.e * a))


def delta_tail_root(n: int, alpha: float, p_n: float) -> float:
    """The ``delta`` at which the block-tail bound equals ``1 / (n^(1-alpha) p_n)``.

    Solves ``(1/2)(d ln d - d + 1) = ln(n^(1-alpha) p_n)`` for ``d >= 1``:
    ``d = exp(1 + W((2c - 1) / e))`` with ``c`` the right-hand side.
    """
    c = math.log(n ** (1 - alpha) * p_n)
    if c <= 0:
        return 1.0
    return math.exp(1 + float(lambert_w((2 * c - 1) / math.e)))


def chernoff_block_tail(delta: int) -> float:
    """Chernoff bound on P(block deletions >= delta) when the mean is in [1/2, 1]."""
    if delta < 1:
        raise ParameterError("delta must be at least 1")
    return math.exp(-0.5 * (delta * math.log(delta) - delta + 1))


def pe_bound_boundary(n: int, k: float, alpha: float, delta: int, t: int) -> float:
    """Union bound on P(some trace has a block whose boundary is lost)."""
    return t * (2 * k + 1) * n ** (1 - alpha) * chernoff_block_tail(delta)


def long_run_bound(n: int, ell: int, delta: int) -> float:
    """Union bound ``n * 2^-(sqrt(ell) + 1 - delta)`` on a uniform string having an over-long run.

    Only meaningful asymptotically; no finite-n guarantee attaches to it.
    """
    return n * 2.0 ** (-(math.sqrt(ell) + 1 - delta))


@dataclass(frozen=True)
class Claim1:
    ell: int
    blocks: int
    lower: float
    upper: float
    holds: bool


def claim1_bounds(n: int, k: float, alpha: float) -> Claim1:
    """Number of blocks ``ceil(n/ell)`` and its sandwich ``k n^(1-a) <= . < (2k+1) n^(1-a)``."""
    from .trace_recon import block_length

    p = k / n**alpha
    if n <= 1 or not 0 < p < 0.5:
        raise ParameterError(f"need n > 1 and 0 < p < 1/2, got n={n} p={p:.4g}")
    ell = block_length(n, k, alpha)
    blocks = -(-n // ell)
    base = n ** (1 - alpha)
    lo, hi = k * base, (2 * k + 1) * base
    holds = (lo <= blocks < hi) and (lo - 1 <= blocks - 1 < 2 * k * base)
    return Claim1(ell, blocks, lo, hi, holds)


@dataclass(frozen=True)
class BoundReport:
    lower: float
    upper: float
    r_markers: int
    formula: str

    def to_dict(self) -> dict:
        return asdict(self)


def redundancy_bounds(params) -> BoundReport:
    """Redundancy sandwich for the trace-reconstruction code, plus the exact marker redundancy."""
    n, k, alpha, delta = params.n, params.k, params.alpha, params.delta
    base = n ** (1 - alpha)
    r_d = (2 * delta - 1) * (params.num_blocks - 1)
    return BoundReport(
        lower=(k * base - 1) * (2 * delta - 1),
        upper=2 * k * base * (2 * delta - 1),
        r_markers=r_d,
        formula="(k n^(1-a) - 1)(2d - 1) <= r < 2k n^(1-a)(2d - 1)",
    )


def levenshtein(a: BitLike, b: BitLike) -> int:
    """Unit-cost edit distance (insertions, deletions, substitutions)."""
    return Levenshtein.distance(to_str(a), to_str(b))


def levenshtein_dp(a: BitLike, b: BitLike) -> int:
    """Two-row dynamic program; reference implementation for :func:`levenshtein`."""
    a, b = to_str(a), to_str(b)
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]
