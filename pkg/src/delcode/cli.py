"""Command-line entry point: ``delcode <subcommand> ...``.

Exit codes: 0 on success, 1 when a verification or strict decode fails,
2 on invalid parameters, 3 when an enumeration or sampler hits its capacity.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import analysis, experiment, marker_code, verifier
from .channel import ChannelParams
from .core import CodeParams, to_str
from .errors import CapacityError, DesyncError, ParameterError
from .trace_recon import TraceCodeParams, reconstruct

EXIT_FAIL, EXIT_PARAM, EXIT_CAPACITY = 1, 2, 3


def _code_params(ns: argparse.Namespace) -> CodeParams:
    return CodeParams(ns.delta, ns.ell, ns.n, strict=not ns.relaxed)


def _add_code_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--delta", type=int, required=True, help="deletions detected per block")
    p.add_argument("--ell", type=int, required=True, help="block length")
    p.add_argument("--n", type=int, required=True, help="codeword length")
    p.add_argument("--relaxed", action="store_true",
                   help="allow a shorter last block when ell does not divide n")


def _list_of(kind):
    def parse(text: str):
        try:
            return [kind(v) for v in text.split(",") if v.strip()]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return parse


def _read_lines(path: str) -> list[str]:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=False))


# --- subcommands ------------------------------------------------------------

def cmd_encode(ns) -> int:
    params = _code_params(ns)
    print(to_str(marker_code.encode(ns.info, params)))
    return 0


def cmd_decode(ns) -> int:
    params = _code_params(ns)
    res = marker_code.decode_boundaries(ns.y, params, strict=not ns.best_effort)
    print(",".join(str(c) for c in res.counts))
    print(",".join(str(s) for s in res.starts))
    if ns.best_effort and res.any_suspect:
        blocks = [str(j + 1) for j, s in enumerate(res.suspect) if s]
        print(f"suspect blocks: {','.join(blocks)}", file=sys.stderr)
    return 0


def cmd_verify(ns) -> int:
    params = _code_params(ns)
    if ns.code_file:
        code = _read_lines(ns.code_file)
    else:
        code = list(verifier.all_codewords(params))
    verdict = verifier.detects_exhaustive(code, params, cap=ns.cap)
    out = {"ok": verdict.ok, "codewords": len(code), "witness": None}
    if verdict.witness is not None:
        w = verdict.witness
        out["witness"] = {"y": w.y, "counts_1": list(w.c1), "x_1": w.x1,
                          "counts_2": list(w.c2), "x_2": w.x2}
    _emit(out)
    return 0 if verdict.ok else EXIT_FAIL


def cmd_analyze(ns) -> int:
    what = ns.what
    if what == "delta-star":
        _need(ns, "n", "alpha", "p_n")
        ds = analysis.delta_star(ns.n, ns.alpha, ns.p_n)
        out = {"delta_star": ds, "delta": math.ceil(ds),
               "delta_tail_root": analysis.delta_tail_root(ns.n, ns.alpha, ns.p_n)}
    elif what == "bounds":
        _need(ns, "n", "k", "alpha", "delta")
        params = TraceCodeParams(ns.n, ns.k, ns.alpha, ns.delta)
        out = analysis.redundancy_bounds(params).to_dict()
        out.update(ell=params.ell, blocks=params.num_blocks, run_limit=params.run_limit,
                   chernoff_block_tail=analysis.chernoff_block_tail(ns.delta))
        if ns.t is not None:
            out["pe_bound_boundary"] = analysis.pe_bound_boundary(
                ns.n, ns.k, ns.alpha, ns.delta, ns.t)
    elif what == "epsilon":
        _need(ns, "delta", "ell")
        out = {"delta": ns.delta, "ell": ns.ell, "epsilon": verifier.epsilon(ns.delta, ns.ell)}
    else:
        _need(ns, "n", "k", "alpha")
        c = analysis.claim1_bounds(ns.n, ns.k, ns.alpha)
        out = {"ell": c.ell, "blocks": c.blocks, "lower": c.lower, "upper": c.upper,
               "holds": c.holds}
    _emit(out)
    return 0


def _need(ns, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(ns, n) is None]
    if missing:
        raise ParameterError(f"analyze --what {ns.what} needs {', '.join(missing)}")


def cmd_simulate(ns) -> int:
    if ns.config:
        configs = experiment.load_config(ns.config)
    elif ns.preset:
        configs = experiment.load_preset(ns.preset)
    else:
        spec = {"scheme": ns.scheme, "n": ns.n, "k": ns.k, "alpha": ns.alpha,
                "delta": ns.delta, "t": ns.t, "runs": ns.runs or 1000, "seed": ns.seed}
        missing = [k for k, v in spec.items() if v is None]
        if missing:
            raise ParameterError(f"simulate needs --config, --preset or all of {missing}")
        configs = experiment.expand(spec)

    def progress(res):
        c = res.config
        print(f"{c.scheme} n={c.n} alpha={c.alpha:g} t={c.t}: "
              f"{res.mean_norm_edit:.3e} ({res.wall_ms / 1e3:.1f} s)", file=sys.stderr)

    results = experiment.run_all(configs, jobs=ns.jobs, runs=ns.runs,
                                 progress=None if ns.quiet else progress)
    if ns.out == "-":
        print(",".join(experiment.CSV_HEADER))
        for r in results:
            print(",".join(r.row()))
    else:
        experiment.emit_csv(results, ns.out)
    return 0


def cmd_reconstruct(ns) -> int:
    params = TraceCodeParams(ns.n, ns.k, ns.alpha, ns.delta)
    traces = list(ns.trace or [])
    if ns.traces_file:
        traces += _read_lines(ns.traces_file)
    if not traces:
        raise ParameterError("give traces with --trace or --traces-file")
    report = reconstruct(traces, params, zero_del_shortcut=ns.shortcut)
    _emit(report.to_json())
    return 0


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="delcode", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="place information bits into a marker codeword")
    _add_code_args(p)
    p.add_argument("--info", required=True, help="information bits as a 0/1 string")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="recover per-block deletion counts and block starts")
    _add_code_args(p)
    p.add_argument("--y", required=True, help="received string")
    p.add_argument("--best-effort", action="store_true",
                   help="never fail; clamp and report suspect blocks on stderr")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("verify", help="check deletion detectability by enumeration")
    _add_code_args(p)
    p.add_argument("--code-file", help="one codeword per line (default: the whole marker code)")
    p.add_argument("--cap", type=int, default=verifier.DEFAULT_CAP,
                   help="maximum number of (codeword, pattern) pairs to enumerate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="evaluate closed-form bounds")
    p.add_argument("--what", required=True,
                   choices=["delta-star", "bounds", "epsilon", "claim1"])
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--delta", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--p-n", dest="p_n", type=float, help="the p(n) factor of delta-star")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="Monte-Carlo comparison, written as CSV")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--config", help="JSON config file")
    src.add_argument("--preset", choices=experiment.preset_names())
    p.add_argument("--scheme", type=_list_of(str))
    p.add_argument("--n", type=_list_of(int))
    p.add_argument("--k", type=_list_of(float))
    p.add_argument("--alpha", type=_list_of(float))
    p.add_argument("--delta", type=_list_of(int))
    p.add_argument("--t", type=_list_of(int))
    p.add_argument("--seed", type=int)
    p.add_argument("--runs", type=int, help="override the number of runs per configuration")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (results do not change)")
    p.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reconstruct", help="reconstruct a codeword from traces")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--trace", action="append", help="one trace; repeat for more")
    p.add_argument("--traces-file", help="one trace per line, '-' for stdin")
    p.add_argument("--shortcut", action="store_true",
                   help="copy blocks that some trace received without deletions")
    p.set_defaults(func=cmd_reconstruct)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.func(ns)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except DesyncError as exc:
        print(f"decode failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
