"""Command-line front end.

`solve` speaks the evaluation wire protocol: an `o <cost>` line is flushed
on every strict improvement, then exactly one `s` line and, when a model
exists, a `v` line with signed literals for the original variables only.
`s OPTIMUM FOUND` is claimed only for apx-weight with zero clusters (the
exact configuration); approximated runs never claim optimality. Exit codes:
30 optimum, 10 satisfiable, 20 unsatisfiable, 0 unknown, 1 usage/IO errors.

`bench` runs configurations over a directory and prints the score table,
`encode` dumps a bounding constraint's CNF as DIMACS, and `oracle` reports
the brute-force optimum of a small instance.
"""

from __future__ import annotations

import argparse
import signal
import sys
import threading
from pathlib import Path

from . import harness, search, wcnf
from .encodings import CnfBuffer, GeneralizedTotalizer, Totalizer

EXIT_OPTIMUM = 30
EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_UNKNOWN = 0
EXIT_ERROR = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _clusters_value(text: str):
    if text == search.CLUSTERS_WEIGHTS:
        return text
    try:
        m = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected an integer or 'weights', got {text!r}") from None
    if m < 0:
        raise argparse.ArgumentTypeError("cluster count must be >= 0")
    return m


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="apxmaxsat",
                     description="Anytime weighted partial MaxSAT solver")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one WDIMACS instance")
    p_solve.add_argument("instance")
    p_solve.add_argument("--algorithm",
                         choices=[search.APX_WEIGHT, search.APX_SUBPROB],
                         default=search.APX_SUBPROB)
    p_solve.add_argument("--clusters", type=_clusters_value,
                         default=search.CLUSTERS_WEIGHTS,
                         help="cluster count m, or 'weights' for m=#distinct weights")
    p_solve.add_argument("--timeout", type=float, default=300.0,
                         help="wall-clock budget in seconds (default 300)")
    p_solve.add_argument("--conflicts", type=int, default=None,
                         help="deterministic conflict budget")
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--verbosity", type=int, choices=[0, 1, 2], default=0)

    p_bench = sub.add_parser("bench", help="score configurations over a directory")
    p_bench.add_argument("directory")
    p_bench.add_argument("--config", action="append", default=[],
                         metavar="ALGORITHM:CLUSTERS",
                         help="repeatable, e.g. apx-subprob:weights or apx-weight:2")
    p_bench.add_argument("--timeout", type=float, default=None)
    p_bench.add_argument("--conflicts", type=int, default=None)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--workers", type=int, default=1)
    p_bench.add_argument("--sidecar", default=None,
                         help="file of externally known best costs")
    p_bench.add_argument("--report", default=None,
                         help="write the machine-readable report here")

    p_enc = sub.add_parser("encode", help="dump a bounding constraint as DIMACS")
    p_enc.add_argument("kind", choices=["card", "pb"])
    p_enc.add_argument("--inputs", type=int, default=None,
                       help="number of input variables (cardinality)")
    p_enc.add_argument("--weights", default=None,
                       help="comma-separated weights (pseudo-Boolean)")
    p_enc.add_argument("--bound", type=int, required=True)
    p_enc.add_argument("--max-bound", type=int, default=None,
                       help="encoding cap for pb (default: sum of weights)")

    p_oracle = sub.add_parser("oracle", help="brute-force optimum (small instances)")
    p_oracle.add_argument("instance")
    return parser


def _load_instance(path: str):
    try:
        text = Path(path).read_text()
    except OSError as e:
        print(f"apxmaxsat: cannot read {path}: {e}", file=sys.stderr)
        return None
    try:
        return wcnf.parse_wcnf(text)
    except wcnf.WcnfParseError as e:
        print(f"apxmaxsat: {path}: {e}", file=sys.stderr)
        return None


def _print_v_line(model: wcnf.Model, num_vars: int) -> None:
    lits = (str(v) if model.assignment[v] else str(-v)
            for v in range(1, num_vars + 1))
    print("v " + " ".join(lits), flush=True)


def _cmd_solve(args) -> int:
    f = _load_instance(args.instance)
    if f is None:
        return EXIT_ERROR
    stop_flag = threading.Event()

    def _handler(signum, frame):
        stop_flag.set()

    try:
        signal.signal(signal.SIGTERM, _handler)
        signal.signal(signal.SIGINT, _handler)
    except ValueError:
        pass  # not on the main thread; cooperative stop stays unused
    cfg = search.SearchConfig(
        algorithm=args.algorithm, clusters=args.clusters,
        timeout_s=args.timeout, max_conflicts=args.conflicts,
        seed=args.seed, stop=stop_flag.is_set)
    if args.verbosity >= 1:
        print(f"c algorithm={args.algorithm} clusters={args.clusters} "
              f"timeout={args.timeout} seed={args.seed}", flush=True)

    def on_improve(model: wcnf.Model) -> None:
        print(f"o {model.true_cost}", flush=True)
        if args.verbosity >= 2:
            print(f"c approx cost {model.approx_cost}", flush=True)

    report = search.solve(f, cfg, on_improve)
    if report.status == search.UNSATISFIABLE:
        print("s UNSATISFIABLE", flush=True)
        return EXIT_UNSAT
    if report.best is None:
        print("s UNKNOWN", flush=True)
        return EXIT_UNKNOWN
    exact = (args.algorithm == search.APX_WEIGHT and args.clusters == 0
             and report.status == search.OPTIMUM_FOR_APPROXIMATION)
    print("s OPTIMUM FOUND" if exact else "s SATISFIABLE", flush=True)
    _print_v_line(report.best, f.num_vars)
    return EXIT_OPTIMUM if exact else EXIT_SAT


def _parse_config_token(token: str, seed: int) -> search.SearchConfig:
    algorithm, _, clusters = token.partition(":")
    if algorithm not in (search.APX_WEIGHT, search.APX_SUBPROB) or not clusters:
        raise ValueError(f"bad config {token!r}; expected ALGORITHM:CLUSTERS")
    return search.SearchConfig(algorithm=algorithm,
                               clusters=_clusters_value(clusters), seed=seed)


def _cmd_bench(args) -> int:
    tokens = args.config or ["apx-subprob:weights", "apx-weight:2"]
    try:
        configs = [_parse_config_token(t, args.seed) for t in tokens]
    except (ValueError, argparse.ArgumentTypeError) as e:
        print(f"apxmaxsat: {e}", file=sys.stderr)
        return EXIT_ERROR
    if not Path(args.directory).is_dir():
        print(f"apxmaxsat: not a directory: {args.directory}", file=sys.stderr)
        return EXIT_ERROR
    table = harness.run_benchmarks(
        args.directory, configs, timeout_s=args.timeout,
        max_conflicts=args.conflicts, workers=args.workers,
        sidecar=args.sidecar)
    print(table.table_text(), end="")
    if args.report:
        harness.write_report(table, args.report)
    return 0


def _cmd_encode(args) -> int:
    if args.kind == "card":
        if args.inputs is None or args.inputs < 1:
            print("apxmaxsat: card needs --inputs N (N >= 1)", file=sys.stderr)
            return EXIT_ERROR
        buf = CnfBuffer(args.inputs)
        tot = Totalizer(range(1, args.inputs + 1), buf)
        tot.set_bound(args.bound, buf)
    else:
        if not args.weights:
            print("apxmaxsat: pb needs --weights w1,w2,...", file=sys.stderr)
            return EXIT_ERROR
        try:
            weights = [int(t) for t in args.weights.split(",")]
        except ValueError:
            print("apxmaxsat: bad --weights", file=sys.stderr)
            return EXIT_ERROR
        buf = CnfBuffer(len(weights))
        cap = args.max_bound if args.max_bound is not None else sum(weights)
        try:
            gte = GeneralizedTotalizer(
                list(zip(range(1, len(weights) + 1), weights)), cap, buf)
            gte.set_bound(args.bound, buf)
        except ValueError as e:
            print(f"apxmaxsat: {e}", file=sys.stderr)
            return EXIT_ERROR
    print(buf.to_dimacs(), end="")
    return 0


def _cmd_oracle(args) -> int:
    f = _load_instance(args.instance)
    if f is None:
        return EXIT_ERROR
    try:
        result = harness.brute_force_optimum(f)
    except ValueError as e:
        print(f"apxmaxsat: {e}", file=sys.stderr)
        return EXIT_ERROR
    if result is None:
        print("s UNSATISFIABLE", flush=True)
        return EXIT_UNSAT
    cost, assignment = result
    print(f"o {cost}", flush=True)
    print("s OPTIMUM FOUND", flush=True)
    _print_v_line(wcnf.Model(assignment, cost, cost), f.num_vars)
    return EXIT_OPTIMUM


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "solve":
        return _cmd_solve(args)
    if args.command == "bench":
        return _cmd_bench(args)
    if args.command == "encode":
        return _cmd_encode(args)
    if args.command == "oracle":
        return _cmd_oracle(args)
    return EXIT_ERROR
