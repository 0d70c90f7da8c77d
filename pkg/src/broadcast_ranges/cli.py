"""Command line front end.

Thin wrapper over the service layer: parse arguments, load files, render
results.  Exit codes: 0 on success, 2 for input or validation problems
(argparse uses the same code for usage errors), 1 for internal failures.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import fileio, service
from .model import ValidationError


def _write_text(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _cmd_solve(args) -> int:
    instance = fileio.load_instance(args.instance)
    result = service.solve(instance, args.alpha)
    _write_text(json.dumps(result, sort_keys=True, indent=2) + "\n", args.out)
    return 0


def _cmd_simulate(args) -> int:
    instance = fileio.load_instance(args.instance)
    trace = fileio.load_trace(args.trace)
    reports, summary = service.simulate(
        instance, trace, args.alg, args.alpha, seed=args.seed, timing=args.timing)
    if args.format == "csv":
        text = fileio.render_report_csv(reports, summary)
    else:
        text = fileio.render_report_json(reports, summary)
    _write_text(text, args.out)
    return 0


def _cmd_gen(args) -> int:
    instance, trace = service.generate(args.kind, args.n, args.alpha, args.seed)
    instance_path = f"{args.out}.instance.json"
    trace_path = f"{args.out}.trace.jsonl"
    fileio.save_instance(instance, instance_path)
    fileio.save_trace(trace, trace_path)
    sys.stdout.write(f"{instance_path}\n{trace_path}\n")
    return 0


def _cmd_report(args) -> int:
    with open(args.input, "r", encoding="utf-8") as fh:
        first = fh.readline()
    if first.rstrip("\n") == fileio.CSV_HEADER:
        reports, summary = fileio.read_report_csv(args.input)
    else:
        reports, summary = fileio.load_report_json(args.input)
    if args.format == "csv":
        text = fileio.render_report_csv(reports, summary)
    else:
        text = fileio.render_report_json(reports, summary)
    _write_text(text, args.out)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("broadcast_ranges.server:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="broadcast-ranges",
        description="dynamic broadcast range assignment: exact solvers, "
                    "stability-bounded maintainers, and trace replay")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="exact optimum for one instance")
    solve.add_argument("--instance", required=True, help="instance JSON file")
    solve.add_argument("--alpha", type=float, default=2.0)
    solve.add_argument("--out", help="write JSON here instead of stdout")
    solve.set_defaults(func=_cmd_solve)

    sim = sub.add_parser("simulate", help="replay a trace under one algorithm")
    sim.add_argument("--instance", required=True, help="starting instance JSON file")
    sim.add_argument("--trace", required=True, help="JSONL of update events")
    sim.add_argument("--alg", required=True,
                     help="opt-dynamic | sas:<k>|sas:eps=<e> | one-stable | "
                          "two-stable | three-stable[:<delta>] | mst")
    sim.add_argument("--alpha", type=float, default=2.0)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--timing", action="store_true",
                     help="record wall-clock ms per step (off by default so "
                          "identical runs stay byte-identical)")
    sim.add_argument("--out", help="write the report here instead of stdout")
    sim.add_argument("--format", choices=("csv", "json"), default="csv")
    sim.set_defaults(func=_cmd_simulate)

    gen = sub.add_parser("gen", help="write a named workload as instance + trace")
    gen.add_argument("--kind", required=True, choices=service.GENERATOR_KINDS)
    gen.add_argument("--n", required=True, type=int,
                     help="stability budget k for sas-lb, gap pairs for the "
                          "no-improvement families, event count otherwise")
    gen.add_argument("--alpha", type=float, default=2.0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True,
                     help="prefix; writes <out>.instance.json and <out>.trace.jsonl")
    gen.set_defaults(func=_cmd_gen)

    rep = sub.add_parser("report", help="convert a report between csv and json")
    rep.add_argument("input", help="existing report (.csv or .json)")
    rep.add_argument("--format", choices=("csv", "json"), default="csv")
    rep.add_argument("--out", help="write here instead of stdout")
    rep.set_defaults(func=_cmd_report)

    srv = sub.add_parser("serve", help="run the HTTP service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    srv.set_defaults(func=_cmd_serve)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - last resort, map to exit 1
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
