"""Monte-Carlo harness comparing the marker-coded pipeline with plain coded BMA.

Every run ``r`` of a configuration draws from ``substream(seed, r)``, so a
configuration and its seed fix every codeword, trace and reconstruction. The
``jobs`` setting only changes scheduling, never the numbers.
"""
from __future__ import annotations

import csv
import itertools
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .analysis import levenshtein
from .bma import bma_traces
from .channel import ChannelParams, gen_traces, substream
from .core import count_per_block
from .errors import ParameterError
from .trace_recon import TraceCodeParams, reconstruct, sample_codeword, sample_rll

SCHEMES = ("marker", "rll-bma")
CSV_HEADER = [
    "scheme", "n", "k", "alpha", "delta", "t", "runs", "seed",
    "mean_norm_edit", "stderr", "p_e", "boundary_fail_rate", "wall_ms",
]
SWEEPABLE = ("scheme", "n", "k", "alpha", "delta", "t")


@dataclass(frozen=True)
class ExperimentConfig:
    scheme: str
    n: int
    k: float
    alpha: float
    delta: int
    t: int
    runs: int
    seed: int
    # replaces the channel's deletion probability; code geometry still uses k
    p_override: Optional[float] = None

    def validate(self) -> None:
        if self.scheme not in SCHEMES:
            raise ParameterError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if self.runs < 1 or self.t < 1:
            raise ParameterError("runs and t must be at least 1")
        if self.p_override is not None and not 0 <= self.p_override <= 1:
            raise ParameterError("p_override must lie in [0, 1]")
        if self.scheme == "marker":
            self.code_params
        else:
            ChannelParams(self.k, self.alpha, self.n)

    @property
    def code_params(self) -> TraceCodeParams:
        return TraceCodeParams(self.n, self.k, self.alpha, self.delta)

    @property
    def p(self) -> float:
        if self.p_override is not None:
            return self.p_override
        return self.k / self.n**self.alpha


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    mean_norm_edit: float
    stderr: float
    p_e: float
    boundary_fail_rate: float
    wall_ms: float

    def row(self) -> list[str]:
        c = self.config
        return [
            c.scheme, str(c.n), _fmt(c.k), _fmt(c.alpha), str(c.delta), str(c.t),
            str(c.runs), str(c.seed), _fmt(self.mean_norm_edit), _fmt(self.stderr),
            _fmt(self.p_e), _fmt(self.boundary_fail_rate), _fmt(self.wall_ms),
        ]


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def one_run(cfg: ExperimentConfig, r: int) -> tuple[int, bool, bool]:
    """Edit distance, exact-recovery flag and boundary-failure flag of run ``r``."""
    run_seed = substream(cfg.seed, r)
    if cfg.scheme == "marker":
        params = cfg.code_params
        x = sample_codeword(params, substream(run_seed, 0))
        ts = gen_traces(x, cfg.p, cfg.t, substream(run_seed, 1))
        report = reconstruct(ts, params)
        x_hat = report.x_hat
        det = params.detector
        boundary_fail = any(
            b.counts.counts != count_per_block(d, det).counts
            for b, d in zip(report.boundaries, ts.deleted)
        )
    else:
        x = sample_rll(cfg.n, math.isqrt(cfg.n), substream(run_seed, 0))
        ts = gen_traces(x, cfg.p, cfg.t, substream(run_seed, 1))
        x_hat = bma_traces(ts.traces, cfg.n)
        boundary_fail = False
    exact = bool(np.array_equal(x, x_hat))
    dist = 0 if exact else levenshtein(x, x_hat)
    return dist, exact, boundary_fail


def _run_chunk(args: tuple[ExperimentConfig, int, int]) -> list[tuple[int, bool, bool]]:
    cfg, lo, hi = args
    return [one_run(cfg, r) for r in range(lo, hi)]


def run_experiment(cfg: ExperimentConfig, jobs: int = 1) -> ExperimentResult:
    cfg.validate()
    start = time.perf_counter()
    if jobs <= 1:
        outcomes = _run_chunk((cfg, 0, cfg.runs))
    else:
        size = max(1, math.ceil(cfg.runs / (4 * jobs)))
        chunks = [(cfg, lo, min(lo + size, cfg.runs)) for lo in range(0, cfg.runs, size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = [o for part in pool.map(_run_chunk, chunks) for o in part]
    wall_ms = (time.perf_counter() - start) * 1e3
    dist = np.array([o[0] for o in outcomes], dtype=np.float64) / cfg.n
    stderr = float(dist.std(ddof=1) / math.sqrt(cfg.runs)) if cfg.runs > 1 else 0.0
    return ExperimentResult(
        config=cfg,
        mean_norm_edit=float(dist.mean()),
        stderr=stderr,
        p_e=float(np.mean([not o[1] for o in outcomes])),
        boundary_fail_rate=(
            float(np.mean([o[2] for o in outcomes])) if cfg.scheme == "marker" else float("nan")
        ),
        wall_ms=wall_ms,
    )


def emit_csv(results: Iterable[ExperimentResult], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for res in results:
            w.writerow(res.row())


def expand(spec: dict) -> list[ExperimentConfig]:
    """Turn a JSON config (scalars, lists to sweep, optional ``points``) into configs.

    Each entry of ``points`` overrides the base fields; list-valued fields
    are then swept as a Cartesian product in the order scheme, n, k, alpha,
    delta, t.
    """
    known = {f.name for f in fields(ExperimentConfig)}
    base = {k: v for k, v in spec.items() if k != "points"}
    unknown = set(base) - known
    if unknown:
        raise ParameterError(f"unknown config keys: {sorted(unknown)}")
    out = []
    for point in spec.get("points") or [{}]:
        merged = {**base, **point}
        missing = known - set(merged) - {"p_override"}
        if missing:
            raise ParameterError(f"config is missing {sorted(missing)}")
        axes = [_as_list(merged[name]) for name in SWEEPABLE]
        for combo in itertools.product(*axes):
            values = dict(merged, **dict(zip(SWEEPABLE, combo)))
            out.append(ExperimentConfig(
                scheme=str(values["scheme"]), n=int(values["n"]), k=float(values["k"]),
                alpha=float(values["alpha"]), delta=int(values["delta"]), t=int(values["t"]),
                runs=int(values["runs"]), seed=int(values["seed"]),
                p_override=values.get("p_override"),
            ))
    return out


def _as_list(v) -> list:
    return list(v) if isinstance(v, (list, tuple)) else [v]


def load_config(path) -> list[ExperimentConfig]:
    return expand(json.loads(Path(path).read_text()))


def preset_names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files("delcode.presets").iterdir()
                  if p.name.endswith(".json"))


def load_preset(name: str) -> list[ExperimentConfig]:
    try:
        text = resources.files("delcode.presets").joinpath(f"{name}.json").read_text()
    except FileNotFoundError:
        raise ParameterError(f"unknown preset {name!r}; available: {preset_names()}") from None
    return expand(json.loads(text))


def run_all(configs: Sequence[ExperimentConfig], jobs: int = 1,
            runs: Optional[int] = None, progress=None) -> list[ExperimentResult]:
    """Validate every config up front, then run them in order."""
    if runs is not None:
        configs = [replace(c, runs=runs) for c in configs]
    for c in configs:
        c.validate()
    results = []
    for c in configs:
        res = run_experiment(c, jobs=jobs)
        if progress:
            progress(res)
        results.append(res)
    return results


def config_dict(cfg: ExperimentConfig) -> dict:
    d = asdict(cfg)
    if d["p_override"] is None:
        del d["p_override"]
    return d
