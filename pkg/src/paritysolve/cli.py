"""Command-line interface: solve, generate, verify and bench.

Exit codes: 0 success, 1 usage error, 2 unreadable or invalid input,
3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from typing import Optional, Sequence

from .analysis import check_bounds, export_call_tree
from .game import (EVEN, ODD, GameError, GeneratorSpec, InvalidGame, ParityGame, Region,
                   generate_random, parse_pgsolver, validate, write_pgsolver)
from .solver import SOLVERS, GameTooLarge, SolveResult, is_dominion, solve_oracle

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_MISMATCH = 0, 1, 2, 3

BENCH_COLUMNS = ["algo", "n", "c", "seed", "wall_ns", "total_calls", "productive_calls",
                 "dp_bound", "envelope", "pass"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _name_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _read_game(path: str) -> ParityGame:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    game = parse_pgsolver(text)
    problems = validate(game)
    if problems:
        raise InvalidGame(problems)
    return game


def _run_algo(name: str, game: ParityGame, trace: bool = False) -> SolveResult:
    if name in ("improved", "parys"):
        return SOLVERS[name](game, trace=trace)
    return SOLVERS[name](game)


# -- solve ------------------------------------------------------------------

def cmd_solve(args) -> int:
    if args.call_tree and args.algo not in ("improved", "parys"):
        raise UsageError("--call-tree is only available for --algo improved or parys")
    game = _read_game(args.file)
    result = _run_algo(args.algo, game, trace=bool(args.call_tree))
    stats = None
    if args.stats:
        stats = result.stats.to_dict()
        if args.algo == "improved":
            stats["bounds"] = check_bounds(result.stats, game).to_dict()
    if args.call_tree:
        with open(args.call_tree, "w", encoding="utf-8") as f:
            f.write(export_call_tree(result.recorder.tree, args.tree_format))

    if args.output == "json":
        doc = {"algorithm": result.algorithm, "even": list(result.w_even), "odd": list(result.w_odd)}
        if stats is not None:
            doc["stats"] = stats
        print(json.dumps(doc))
    else:
        print(" ".join(["EVEN:"] + [str(v) for v in result.w_even]))
        print(" ".join(["ODD:"] + [str(v) for v in result.w_odd]))
        if stats is not None:
            print("CALLS: " + " ".join(f"{k}={stats[k]}" for k in
                                       ("total_invocations", "productive_invocations", "max_depth")))
            if "bounds" in stats:
                b = stats["bounds"]
                print(f"BOUNDS: measured={b['measured']} dp={b['dp_bound']} envelope={b['envelope']} "
                      f"headline={b['headline_figure']} pass={'true' if b['pass'] else 'false'}")
    return EXIT_OK


# -- generate ---------------------------------------------------------------

def cmd_generate(args) -> int:
    spec = GeneratorSpec(args.positions, args.max_priority, args.max_degree, args.seed)
    try:
        spec.check()
    except GameError as e:
        raise UsageError(str(e))
    text = write_pgsolver(generate_random(spec))
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- verify -----------------------------------------------------------------

def _corrupt(result: SolveResult) -> SolveResult:
    """Flip the winner of position 0 (harness self-test)."""
    flip = Region.of(result.w_even.universe, [0])
    return SolveResult(result.w_even ^ flip, result.w_odd ^ flip, result.stats, result.algorithm)


def _verify_game(game: ParityGame, oracle_max: int, fault: Optional[str]) -> list[str]:
    algos = ["improved", "parys", "zielonka"] + (["oracle"] if game.n <= oracle_max else [])
    results = {}
    for name in algos:
        r = solve_oracle(game, cap=oracle_max) if name == "oracle" else _run_algo(name, game)
        results[name] = _corrupt(r) if name == fault else r
    problems = []

    ref = results[algos[0]]
    for name in algos[1:]:
        other = results[name]
        if other.w_even != ref.w_even:
            v = next(iter(other.w_even ^ ref.w_even))
            claims = ", ".join(f"{a}={'EVEN' if v in results[a].w_even else 'ODD'}" for a in algos)
            problems.append(f"regions differ ({algos[0]} vs {name}); first differing position {v}: {claims}")
            break

    view = game.view()
    for name, r in results.items():
        if (r.w_even | r.w_odd) != game.all() or not r.w_even.isdisjoint(r.w_odd):
            problems.append(f"{name}: winning regions do not partition the positions")
            continue
        for player, region in ((EVEN, r.w_even), (ODD, r.w_odd)):
            if not is_dominion(view, region, player, cap=oracle_max):
                problems.append(f"{name}: claimed {player.name} region is not a {player.name} dominion")

    report = check_bounds(results["improved"].stats, game)
    if not report.passed:
        problems.append(f"improved: call bounds violated: measured={report.measured} "
                        f"dp={report.dp_bound} envelope={report.envelope} depth={report.max_depth}")
    return problems


def cmd_verify(args) -> int:
    games = []
    for path in args.files:
        games.append((path, _read_game(path)))
    failed = 0
    for path, game in games:
        problems = _verify_game(game, args.oracle_max, args.inject_fault)
        if problems:
            failed += 1
            print(f"FAIL {path} (n={game.n})")
            for p in problems:
                print(f"  {p}")
        else:
            print(f"ok   {path} (n={game.n})")
    print(f"{len(games) - failed}/{len(games)} games verified")
    return EXIT_MISMATCH if failed else EXIT_OK


# -- bench ------------------------------------------------------------------

def bench_rows(positions, priorities, seeds: int, algos, max_degree: int = 4) -> list[dict]:
    rows = []
    for n in positions:
        for c in priorities:
            for seed in range(seeds):
                game = generate_random(GeneratorSpec(n, c, max_degree, seed))
                for algo in algos:
                    t0 = time.perf_counter_ns()
                    result = _run_algo(algo, game)
                    wall = time.perf_counter_ns() - t0
                    report = check_bounds(result.stats, game)
                    rows.append({
                        "algo": algo, "n": n, "c": c, "seed": seed, "wall_ns": wall,
                        "total_calls": result.stats.total_invocations,
                        "productive_calls": result.stats.productive_invocations,
                        "dp_bound": report.dp_bound, "envelope": report.envelope,
                        "pass": "true" if report.passed else "false",
                    })
    rows.sort(key=lambda r: (r["algo"], r["n"], r["c"], r["seed"]))
    return rows


def cmd_bench(args) -> int:
    if not args.algos:
        raise UsageError("--algos must name at least one algorithm")
    unknown = [a for a in args.algos if a not in SOLVERS]
    if unknown:
        raise UsageError(f"unknown algorithm(s): {', '.join(unknown)}")
    if not args.positions or not args.max_priority or args.seeds < 1:
        raise UsageError("--positions, --max-priority and --seeds must be non-empty / positive")
    if min(args.positions) < 1 or min(args.max_priority) < 0 or args.max_degree < 1:
        raise UsageError("positions must be >= 1, priorities >= 0, max degree >= 1")
    rows = bench_rows(args.positions, args.max_priority, args.seeds, args.algos, args.max_degree)
    with open(args.csv, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=BENCH_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    failed = sum(r["pass"] != "true" for r in rows)
    print(f"wrote {len(rows)} rows to {args.csv} ({failed} failing bound checks)")
    return EXIT_OK


# -- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="paritysolve", description="Recursive parity game solvers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve a PGSolver game")
    p.add_argument("--algo", choices=sorted(SOLVERS), default="improved")
    p.add_argument("--stats", action="store_true", help="report call counts and bounds")
    p.add_argument("--call-tree", metavar="PATH", help="write the recorded call tree")
    p.add_argument("--tree-format", choices=["dot", "json"], default="dot")
    p.add_argument("--output", choices=["json", "text"], default="text")
    p.add_argument("file", metavar="FILE", help="game file, or - for standard input")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("generate", help="write a seeded random game")
    p.add_argument("--positions", type=int, required=True)
    p.add_argument("--max-priority", type=int, required=True)
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", metavar="PATH")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="cross-check all solvers on game files")
    p.add_argument("--oracle-max", type=int, default=8)
    p.add_argument("--inject-fault", choices=sorted(SOLVERS), help=argparse.SUPPRESS)
    p.add_argument("files", nargs="+", metavar="FILE")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="call-count benchmark over generated games")
    p.add_argument("--positions", type=_int_list, required=True)
    p.add_argument("--max-priority", type=_int_list, required=True)
    p.add_argument("--seeds", type=int, required=True)
    p.add_argument("--algos", type=_name_list, required=True)
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--csv", required=True, metavar="PATH")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except GameTooLarge as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (GameError, OSError, UnicodeDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
