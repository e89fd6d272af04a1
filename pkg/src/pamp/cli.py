"""Command-line interface.

Subcommands: generate, run, threshold, schedule, structure, sweep.
Exit codes: 0 success, 2 invalid configuration/arguments, 3 I/O or file
format errors.  Numeric output uses 9 significant digits.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import dynamics, harness, pa_graph, structure, threshold
from .rng import stable_seed


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _cmd_generate(args) -> int:
    g = pa_graph.generate_pa(args.t, args.m, args.delta, args.seed)
    pa_graph.save(g, args.out)
    return 0


def _cmd_run(args) -> int:
    if args.graph is not None:
        g = pa_graph.load(args.graph)
    else:
        for name in ("t", "m", "delta"):
            if getattr(args, name) is None:
                raise harness.ConfigError(f"--{name} is required without --graph")
        g = pa_graph.generate_pa(args.t, args.m, args.delta,
                                 stable_seed("graph", args.seed))
    config = dynamics.ProtocolConfig(
        k=args.k,
        alpha=args.alpha,
        seed=stable_seed("dyn", args.seed),
        max_steps=args.max_steps,
    )
    trace = dynamics.run(g, config, protocol=args.protocol)
    d = threshold.effective_d(g.m, args.k)
    ts = threshold.tau_star(d, 0.1, g.t) if d >= 5 and g.t >= d else None
    out = {
        "t": g.t,
        "m": g.m,
        "delta": g.delta,
        "k": args.k,
        "alpha": args.alpha,
        "seed": args.seed,
        "protocol": args.protocol,
        "winner": trace.winner,
        "consensus_step": trace.consensus_step,
        "steps_run": trace.steps_run,
        "red_initial": trace.red_counts[0],
        "red_final": trace.red_counts[-1],
        "tau_star": ts,
    }
    print(json.dumps(out))
    if args.trace_csv:
        with open(args.trace_csv, "w", encoding="ascii") as fh:
            fh.write("step,red_count\n")
            for step, red in enumerate(trace.red_counts):
                fh.write(f"{step},{red}\n")
    return 0


def _cmd_threshold(args) -> int:
    if args.table is not None:
        if args.table < 5:
            raise harness.ConfigError("--table must be >= 5")
        for d in range(5, args.table + 1, 2):
            print(f"{d} {_fmt(threshold.alpha_star(d))}")
    else:
        if args.d is None:
            raise harness.ConfigError("--d is required without --table")
        print(_fmt(threshold.alpha_star(args.d)))
    return 0


def _cmd_schedule(args) -> int:
    sched = threshold.ConvergenceSchedule.compute(args.d, args.eps, args.t)
    print(f"{_fmt(sched.B)} {_fmt(sched.tau_star)}")
    return 0


def _cmd_structure(args) -> int:
    g = pa_graph.load(args.graph)
    params = structure.StructureParams.desk_scale(g, omega=args.omega)
    if args.kappa is not None or args.kappa_o is not None:
        params = structure.StructureParams(
            kappa=args.kappa if args.kappa is not None else params.kappa,
            kappa_o=args.kappa_o if args.kappa_o is not None else params.kappa_o,
            omega=args.omega,
            gamma=g.params.gamma,
        )
    scan = structure.scan_structure(
        g, params, radius=args.radius, samples=args.samples, seed=args.seed
    )
    summary = json.dumps(scan.summary())
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            for line in scan.csv_lines():
                fh.write(line + "\n")
        print(summary)
    else:
        for line in scan.csv_lines():
            print(line)
        print(summary, file=sys.stderr)
    return 0


def _cmd_sweep(args) -> int:
    spec = harness.ExperimentSpec.from_json_file(args.config)
    result = harness.run_sweep(spec, workers=args.workers)
    csv_path = args.out if args.out else spec.out_csv
    json_path = args.json_out if args.json_out else spec.out_json
    if csv_path:
        harness.emit(result, "csv", csv_path)
    else:
        sys.stdout.write(result.to_csv())
    if json_path:
        harness.emit(result, "json", json_path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pamp",
        description="Preferential attachment graphs under k-sample local majority dynamics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a graph and write it to a file")
    p.add_argument("--t", type=int, required=True, help="vertex count")
    p.add_argument("--m", type=int, required=True, help="edges per vertex")
    p.add_argument("--delta", type=float, required=True, help="attachment offset")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output path")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("run", help="run one dynamics trial, print a JSON summary")
    p.add_argument("--t", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--graph", help="run on a saved graph instead of generating")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-steps", type=int, default=None, dest="max_steps")
    p.add_argument("--protocol", choices=("mpk", "voter"), default="mpk")
    p.add_argument("--trace-csv", dest="trace_csv", help="write per-step red counts")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("threshold", help="print the critical bias alpha*")
    p.add_argument("--d", type=int, help="odd effective degree >= 5")
    p.add_argument("--table", type=int, help="print 'd alpha*' rows for d=5,7,..,DMAX")
    p.set_defaults(func=_cmd_threshold)

    p = sub.add_parser("schedule", help="print the constant B and tau*")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.set_defaults(func=_cmd_schedule)

    p = sub.add_parser("structure", help="scan sampled truncated balls of a saved graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--kappa", type=int, default=None, help="inner core cutoff")
    p.add_argument("--kappa-o", type=int, default=None, dest="kappa_o",
                   help="outer core cutoff")
    p.add_argument("--omega", type=int, default=3, help="short radius")
    p.add_argument("--radius", type=int, default=None,
                   help="ball radius for the scan (default: omega)")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV path (default: CSV to stdout, summary to stderr)")
    p.set_defaults(func=_cmd_structure)

    p = sub.add_parser("sweep", help="run a sweep described by a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--workers", type=int, default=None,
                   help=f"process pool size (default: ${harness.WORKERS_ENV} or 1)")
    p.add_argument("--out", help="CSV output path (overrides config out_csv)")
    p.add_argument("--json", dest="json_out",
                   help="JSON output path (overrides config out_json)")
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (pa_graph.GraphFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (harness.ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
