"""Command-line entry point: ``linforest <command> ...``.

Exit codes: 0 success, 1 negative verdict (not an expander, no Hamilton
path, infeasible sequence, bound exceeded), 2 usage error, 3 search budget
exhausted or instance over a search cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from ._util import SearchBudgetExceeded, as_fraction
from .decompose import PipelineParams, decompose, la_exact
from .decompose.oracle import OracleBudgetExceeded
from .decompose.pipeline import FAILURE, STRATEGIES, SUCCESS, UNKNOWN
from .expansion import ExpanderParams, is_robust_expander_exact, is_robust_expander_sampled
from .experiment import RecordError, RunConfig, read_records, rows_to_csv, rows_to_table, run_experiment, summarize
from .generators import FAMILIES, GeneratorSpec, derive_seed, generate
from .graph import SimpleGraph, conjecture_bound, la_lower_bound
from .graphio import format_edgelist, parse_graph_text, to_graph6
from .hamilton import (
    hamilton_cycle,
    hamilton_decomposition,
    hamilton_path,
    k_linkage,
    read_layout,
    spanning_configuration,
)
from .matching import deficiency, deficiency_certificate
from .realize import InfeasibleSequence, hakimi_multigraph, havel_hakimi

OK, NEGATIVE, USAGE, EXHAUSTED = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- input and output -----------------------------------------------------------


def _read_graph(source: str) -> SimpleGraph:
    text = sys.stdin.read() if source == "-" else _read_file(source)
    try:
        return parse_graph_text(text)
    except ValueError as exc:
        raise UsageError(f"cannot parse graph from {source}: {exc}") from None


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(args, payload, text: str | None = None) -> None:
    """Write JSON (default) or the given text rendering to --out or stdout."""
    fmt = getattr(args, "format", "json")
    if fmt == "json" or text is None:
        body = json.dumps(payload, default=_jsonable)
    else:
        body = text.rstrip("\n")
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(body + "\n")
    else:
        print(body)


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    raise TypeError(f"cannot serialise {type(x).__name__}")


def _edges_csv(edges) -> str:
    return "u,v\n" + "".join(f"{a},{b}\n" for a, b in edges)


def _graph_text(args, g: SimpleGraph) -> str | None:
    if args.format == "edgelist":
        return format_edgelist(g)
    if args.format == "csv":
        return _edges_csv(sorted(g.edges))
    if args.format == "graph6":
        return to_graph6(g)
    return None


def _forests_csv(forests) -> str:
    lines = ["forest,u,v"]
    for i, f in enumerate(forests):
        lines += [f"{i},{a},{b}" for a, b in f]
    return "\n".join(lines) + "\n"


def _params(args) -> PipelineParams:
    try:
        return PipelineParams(
            nu=as_fraction(args.nu),
            tau=as_fraction(args.tau),
            eta=as_fraction(args.eta),
            alpha=as_fraction(args.alpha),
            k_max=args.k_max,
        )
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None


def _key_values(items) -> dict:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"family parameter {item!r} must look like key=value")
        k, v = item.split("=", 1)
        out[k] = int(v) if v.lstrip("-").isdigit() else v
    return out


# -- commands -------------------------------------------------------------------


def cmd_gen(args) -> int:
    spec = GeneratorSpec(args.family, args.n, _key_values(args.param), args.seed)
    try:
        g = generate(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = {"spec": spec.to_json(), "n": g.n, "edges": [list(e) for e in sorted(g.edges)]}
    _emit(args, payload, _graph_text(args, g))
    return OK


def cmd_check_expander(args) -> int:
    g = _read_graph(args.graph)
    try:
        p = ExpanderParams(as_fraction(args.nu), as_fraction(args.tau))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.mode == "exact":
        try:
            verdict = is_robust_expander_exact(g, p, cap=args.cap)
        except ValueError as exc:
            print(f"linforest: {exc}; use --mode sampled", file=sys.stderr)
            return EXHAUSTED
    else:
        try:
            verdict = is_robust_expander_sampled(g, p, args.trials, args.seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    payload = verdict.to_json()
    _emit(args, payload, f"holds,{str(verdict.holds).lower()}\nmode,{verdict.mode}\n")
    return OK if verdict.holds else NEGATIVE


def cmd_deficiency(args) -> int:
    g = _read_graph(args.graph)
    if g.n > args.cap:
        payload = {"df": deficiency(g), "X": None, "components": None, "note": f"certificate capped at n = {args.cap}"}
        _emit(args, payload)
        return EXHAUSTED
    cert = deficiency_certificate(g, cap=args.cap)
    _emit(args, cert.to_json(), f"df,{cert.df}\nX,{' '.join(map(str, sorted(cert.x_set)))}\n")
    return OK


def cmd_realize(args) -> int:
    raw = " ".join(args.degrees).replace(",", " ").split()
    try:
        seq = [int(x) for x in raw]
    except ValueError:
        raise UsageError("degrees must be integers") from None
    if any(x < 0 for x in seq):
        raise UsageError("degrees must be non-negative")
    try:
        if args.multigraph:
            h = hakimi_multigraph(seq)
            edges = sorted(h.edges)
        else:
            edges = sorted(havel_hakimi(seq).edges)
    except InfeasibleSequence as exc:
        print(f"linforest: infeasible sequence: {exc}", file=sys.stderr)
        return NEGATIVE
    payload = {"n": len(seq), "edges": [list(e) for e in edges], "multigraph": args.multigraph}
    if args.format == "csv":
        text = _edges_csv(edges)
    else:
        text = f"{len(seq)} {len(edges)}\n" + "".join(f"{a} {b}\n" for a, b in edges)
    _emit(args, payload, text)
    return OK


def cmd_hamilton(args) -> int:
    g = _read_graph(args.graph)
    try:
        if args.mode == "path":
            if args.x is None or args.y is None:
                raise UsageError("--x and --y are required for a Hamilton path")
            result = hamilton_path(g, args.x, args.y, args.budget_ms)
            payload = {"path": result}
        elif args.mode == "cycle":
            result = hamilton_cycle(g, args.budget_ms)
            payload = {"cycle": result}
        elif args.mode == "decompose":
            try:
                result = hamilton_decomposition(g, cap=args.cap, budget=args.budget_ms)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            payload = {"cycles": result}
        elif args.mode == "linkage":
            if not args.pairs:
                raise UsageError("--pairs is required for linkage, e.g. --pairs 0-1,2-3")
            pairs = [tuple(int(v) for v in p.split("-")) for p in args.pairs.split(",")]
            try:
                result = k_linkage(g, pairs, args.budget_ms)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            payload = {"paths": result}
        else:
            if not args.layout:
                raise UsageError("--layout FILE is required for layout mode")
            try:
                layout = read_layout(args.layout)
                conf = spanning_configuration(g, layout, args.budget_ms)
            except (ValueError, KeyError) as exc:
                raise UsageError(f"bad layout: {exc}") from None
            result = conf
            payload = {"layout": layout.to_json(), "paths": None if conf is None else [list(p) for p in conf.paths]}
    except SearchBudgetExceeded as exc:
        _emit(args, {"status": "unknown", "reason": str(exc)})
        return EXHAUSTED
    payload["found"] = result is not None
    _emit(args, payload)
    return OK if result is not None else NEGATIVE


def cmd_la(args) -> int:
    g = _read_graph(args.graph)
    try:
        k, dec = la_exact(g, args.budget_ms, cap=args.cap if args.budget_ms is None else max(args.cap, g.n))
    except OracleBudgetExceeded as exc:
        payload = {"status": "unknown", "upper": exc.upper, "lower": la_lower_bound(g), "reason": str(exc)}
        _emit(args, payload)
        return EXHAUSTED
    except ValueError as exc:
        print(f"linforest: {exc}; pass --budget-ms to search anyway", file=sys.stderr)
        return EXHAUSTED
    forests = dec.as_edge_lists()
    payload = {
        "la": k,
        "lower": la_lower_bound(g),
        "bound": conjecture_bound(g) if g.n else 0,
        "forests": forests,
    }
    _emit(args, payload, _forests_csv(forests))
    return OK


def cmd_decompose(args) -> int:
    g = _read_graph(args.graph)
    dec, trace = decompose(g, _params(args), args.strategy, args.budget_ms)
    forests = dec.as_edge_lists()
    payload = {
        "count": dec.count,
        "bound": conjecture_bound(g) if g.n else 0,
        "route": trace.route,
        "forests": forests,
        "status": trace.status,
        "fallbacks": trace.fallbacks,
    }
    if args.trace:
        payload["trace"] = trace.to_json()
    _emit(args, payload, _forests_csv(forests))
    if trace.status == UNKNOWN:
        return EXHAUSTED
    if trace.status == FAILURE:
        return NEGATIVE
    return OK


def cmd_bench(args) -> int:
    params = _key_values(args.param)
    specs = [GeneratorSpec(args.family, args.n, params, derive_seed(args.seed, i)) for i in range(args.count)]
    out = args.records or "records.jsonl"
    config = RunConfig(_params(args), args.budget_ms, args.oracle_cap)
    records = run_experiment(specs, out, config, workers=args.workers)
    rows = summarize(records)
    text = rows_to_csv(rows) if args.format == "csv" else rows_to_table(rows)
    _emit(args, rows, text if args.format != "json" else None)
    bad = [r for r in records if r.status == SUCCESS and r.count > r.bound]
    return NEGATIVE if bad else OK


def cmd_summarize(args) -> int:
    try:
        _, records = read_records(args.records)
    except RecordError as exc:
        raise UsageError(f"{args.records}: {exc}") from None
    except OSError as exc:
        raise UsageError(f"cannot read {args.records}: {exc.strerror}") from None
    rows = summarize(records)
    text = rows_to_csv(rows) if args.format == "csv" else rows_to_table(rows)
    _emit(args, rows, text if args.format != "json" else None)
    return OK


# -- parser ---------------------------------------------------------------------


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nu", default="1/10", help="expansion parameter nu (default 1/10)")
    p.add_argument("--tau", default="1/5", help="expansion parameter tau (default 1/5)")
    p.add_argument("--eta", default="1/4", help="far-vertex threshold eta (default 1/4)")
    p.add_argument("--alpha", default="1/2", help="minimum-degree ratio alpha (default 1/2)")
    p.add_argument("--k-max", type=int, default=2, help="largest matching per peeled forest (default 2)")
    p.add_argument("--budget-ms", type=float, default=None, help="search budget in milliseconds")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")
    common.add_argument(
        "--format",
        choices=("json", "csv", "edgelist", "graph6", "table"),
        default=argparse.SUPPRESS,
        help="output format (default json)",
    )
    common.add_argument("--out", default=argparse.SUPPRESS, help="write output to this file")

    parser = argparse.ArgumentParser(
        prog="linforest",
        description="Linear-forest decompositions, robust expansion checks and their building blocks.",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("gen", parents=[common], help="generate a graph from a family")
    p.add_argument("family", choices=sorted(FAMILIES))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--param", action="append", metavar="KEY=VALUE", help="family parameter, repeatable")
    p.set_defaults(func=cmd_gen, default_format="edgelist")

    p = sub.add_parser("check-expander", parents=[common], help="test robust (nu, tau)-expansion")
    p.add_argument("graph", help="edge-list or graph6 file, - for stdin")
    p.add_argument("--nu", required=True)
    p.add_argument("--tau", required=True)
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--trials", type=int, default=None, help="sampled mode only (default 64n)")
    p.add_argument("--cap", type=int, default=20, help="largest n for exact mode")
    p.set_defaults(func=cmd_check_expander)

    p = sub.add_parser("deficiency", parents=[common], help="matching deficiency with a certificate")
    p.add_argument("graph")
    p.add_argument("--cap", type=int, default=16, help="largest n for certificate search")
    p.set_defaults(func=cmd_deficiency)

    p = sub.add_parser("realize", parents=[common], help="realise a degree sequence")
    p.add_argument("degrees", nargs="+", help="degrees, space or comma separated")
    p.add_argument("--multigraph", action="store_true", help="loopless multigraph instead of simple graph")
    p.set_defaults(func=cmd_realize, default_format="edgelist")

    p = sub.add_parser("hamilton", parents=[common], help="Hamilton paths, cycles, decompositions, linkages")
    p.add_argument("graph")
    p.add_argument("--mode", choices=("path", "cycle", "decompose", "linkage", "layout"), default="cycle")
    p.add_argument("--x", type=int)
    p.add_argument("--y", type=int)
    p.add_argument("--pairs", help="terminal pairs for linkage, e.g. 0-1,2-3")
    p.add_argument("--layout", help="layout JSON file for layout mode")
    p.add_argument("--cap", type=int, default=16)
    p.add_argument("--budget-ms", type=float, default=None)
    p.set_defaults(func=cmd_hamilton)

    p = sub.add_parser("la", parents=[common], help="exact linear arboricity")
    p.add_argument("graph")
    p.add_argument("--cap", type=int, default=12)
    p.add_argument("--budget-ms", type=float, default=None)
    p.set_defaults(func=cmd_la)

    p = sub.add_parser("decompose", parents=[common], help="decompose into at most ceil((D+1)/2) linear forests")
    p.add_argument("graph")
    _add_pipeline_flags(p)
    p.add_argument("--strategy", choices=STRATEGIES, default="auto")
    p.add_argument("--trace", action="store_true", help="include the full pipeline trace")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("bench", parents=[common], help="run decompose over generated instances")
    p.add_argument("--family", choices=sorted(FAMILIES), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--records", help="JSON-lines records file (default records.jsonl)")
    p.add_argument("--oracle-cap", type=int, default=10)
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_bench, default_format="table")

    p = sub.add_parser("summarize", parents=[common], help="aggregate a records file")
    p.add_argument("records")
    p.set_defaults(func=cmd_summarize, default_format="table")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "format"):
        args.format = getattr(args, "default_format", "json")
    if not hasattr(args, "seed"):
        args.seed = 0
    if not hasattr(args, "out"):
        args.out = None
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"linforest: {exc}", file=sys.stderr)
        return USAGE
    except SearchBudgetExceeded as exc:
        print(f"linforest: {exc}", file=sys.stderr)
        return EXHAUSTED


if __name__ == "__main__":
    sys.exit(main())
