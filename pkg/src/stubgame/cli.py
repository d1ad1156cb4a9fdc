"""Command line interface.

Exit codes:
    0  solved (the answer, WINNING or NOT WINNING, is printed on stdout)
    2  usage or input error
    3  state limit exceeded
    4  internal invariant violated (e.g. NORMAL and POR disagree)
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .bench import bench, to_csv, to_table
from .formats import ModelError, format_model, parse_query, read_model
from .generators import GENERATORS
from .glts import CONDITIONS, check_stable
from .net import BoundednessError, NetError
from .query import QueryError, nnf
from .reduction import reach_overapprox, stubborn_set
from .solver import (InvariantViolation, SolveConfig, StrategyError, lifted_reduction,
                     solve)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BOUND = 3
EXIT_INVARIANT = 4


class UsageError(Exception):
    pass


def _load(path, query_text=None):
    try:
        model = read_model(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    if query_text is not None:
        model.query = parse_query(query_text, model.net)
    if model.query is None:
        raise UsageError(f"{path}: no query in the model and none given with --query")
    return model


def cmd_solve(args) -> int:
    model = _load(args.model, args.query)
    cfg = SolveConfig(use_por=args.por, max_states=args.max_states,
                      search_order=args.order, early_termination=not args.no_early_term,
                      ablate_condition_v=args.ablate_v)
    rep = solve(model.net, model.initial, model.query, cfg)
    print("WINNING" if rep.winning else "NOT WINNING")
    if args.stats:
        print(rep.to_text(include_time=args.time))
    if args.strategy_out:
        net = model.net
        lines = [f"{net.format_marking(m)} {t if t is not None else '-'}"
                 for m, t in sorted(rep.strategy.items())]
        with open(args.strategy_out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + ("\n" if lines else ""))
    return EXIT_OK


def cmd_check(args) -> int:
    model = _load(args.model, args.query)
    glts, stub = lifted_reduction(model.net, model.initial, model.query, args.max_states,
                                  ablate_condition_v=args.ablate_v)
    report = check_stable(glts, stub)
    print(f"markings={len(glts.states)}")
    for c in CONDITIONS:
        v = report.violations[c]
        if v is None:
            print(f"{c:<2} pass")
        else:
            path = " ".join(v.path) or "<empty>"
            print(f"{c:<2} FAIL  at {model.net.format_marking(v.state)} via {path}: {v.detail}")
    if not report.ok:
        print("NOT STABLE")
        return EXIT_INVARIANT
    print("STABLE")
    return EXIT_OK


def cmd_gen(args) -> int:
    fn, names = GENERATORS[args.family]
    if len(args.params) != len(names):
        raise UsageError(f"gen {args.family} takes parameters {' '.join(names)}")
    try:
        values = [int(v) for v in args.params]
        model = fn(*values)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    header = f"{args.family} " + " ".join(f"{n}={v}" for n, v in zip(names, values))
    text = format_model(model, header=header)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_bench(args) -> int:
    models = [(Path(path).stem, _load(path)) for path in args.models]
    rows = bench(models, max_states=args.max_states, search_order=args.order, jobs=args.jobs)
    with_time = not args.no_time
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(to_csv(rows, with_time))
    sys.stdout.write(to_table(rows, with_time))
    if any(r.error and r.error.startswith("invariant") for r in rows):
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_debug(args) -> int:
    model = _load(args.model, args.query)
    net, m = model.net, model.initial
    goal = nnf(model.query)
    reach, env = reach_overapprox(net, m, goal)
    res = stubborn_set(net, m, goal)
    print(f"marking {net.format_marking(m)}")
    print(f"enabled {' '.join(sorted(net.enabled(m))) or '-'}")
    print(env.describe(net))
    print(f"reach={'true' if reach else 'false'}")
    print(f"stubborn {' '.join(sorted(res.stub)) or '-'}")
    print(f"reason={res.reason}")
    print(f"early_terminate={'true' if res.early_terminate else 'false'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stubgame",
                                 description="Reachability games on Petri nets with "
                                             "stubborn-set reduction")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def limits(p, default=1_000_000):
        p.add_argument("--max-states", type=int, default=default, metavar="N")

    def ablate(p):
        p.add_argument("--ablate-v", action="store_true",
                       help="skip the player-2 visibility check (unsound, for demonstration)")

    p = sub.add_parser("solve", help="decide whether player 1 can force the goal")
    p.add_argument("model")
    p.add_argument("--query", metavar="Q")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--por", dest="por", action="store_true", default=True)
    g.add_argument("--no-por", dest="por", action="store_false")
    limits(p)
    p.add_argument("--order", choices=("dfs", "bfs"), default="dfs")
    p.add_argument("--no-early-term", action="store_true")
    p.add_argument("--strategy-out", metavar="FILE")
    p.add_argument("--stats", action="store_true", help="print exploration statistics")
    p.add_argument("--time", action="store_true", help="include wall time in --stats")
    ablate(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="check the stable-reduction conditions exhaustively")
    p.add_argument("model")
    p.add_argument("--query", metavar="Q")
    limits(p, 100_000)
    ablate(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="write a generated model")
    p.add_argument("family", choices=sorted(GENERATORS))
    p.add_argument("params", nargs="+")
    p.add_argument("-o", "--output", metavar="FILE")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="compare NORMAL and POR exploration")
    p.add_argument("models", nargs="+")
    p.add_argument("--csv", metavar="FILE")
    limits(p)
    p.add_argument("--order", choices=("dfs", "bfs"), default="dfs")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-time", action="store_true",
                   help="omit timings so the output is reproducible")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("debug-stubborn", help="show bounds and stubborn set at M0")
    p.add_argument("model")
    p.add_argument("--query", metavar="Q")
    p.set_defaults(func=cmd_debug)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if getattr(args, "max_states", 1) < 1:
            raise UsageError("--max-states must be at least 1")
        return args.func(args)
    except (UsageError, ModelError, QueryError, NetError, StrategyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BoundednessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except InvariantViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
