"""Acceptance criteria, one test each. Every test prints a pass/fail line;
the lines are collected again in the terminal summary."""
import csv
import random
import time
from math import comb

import pytest

from paritysolve.analysis import binomial_envelope, check_bounds, dp_call_bound, floor_log2
from paritysolve.attractor import attract, is_trap
from paritysolve.cli import main
from paritysolve.game import EVEN, ODD, GeneratorSpec, generate_random, parse_pgsolver, write_pgsolver
from paritysolve.solver import is_closed, solve_improved, solve_oracle, solve_parys, solve_zielonka

from _support import attractor_lemma_failures, correctness_lemma_failures, game_for_seed, naive_attract

pytestmark = pytest.mark.acceptance

ORACLE_GAMES = 5000
MID_GAMES = 500


def _mid_game(seed):
    rng = random.Random(seed)
    return generate_random(GeneratorSpec(rng.randint(1, 300), rng.randint(0, 10), rng.randint(1, 4), seed))


@pytest.fixture(scope="module")
def oracle_runs():
    """Criterion 1 games with every solver's result; reused by criteria 5 and 6."""
    runs = []
    t0 = time.perf_counter()
    for seed in range(ORACLE_GAMES):
        g = game_for_seed(seed)
        runs.append((g, solve_oracle(g), solve_improved(g), solve_parys(g), solve_zielonka(g)))
    return runs, time.perf_counter() - t0


@pytest.fixture(scope="module")
def mid_runs():
    runs = []
    t0 = time.perf_counter()
    for seed in range(MID_GAMES):
        g = _mid_game(seed)
        runs.append((g, solve_improved(g), solve_parys(g), solve_zielonka(g)))
    return runs, time.perf_counter() - t0


def test_criterion_1_oracle_equivalence(oracle_runs, criterion):
    runs, elapsed = oracle_runs
    bad = [g for g, o, *rs in runs if any(r.w_even != o.w_even or r.w_odd != o.w_odd for r in rs)]
    ok = not bad and elapsed < 60
    criterion(1, "improved, parys and zielonka match the oracle", ok,
              f"{len(runs)} games, {len(bad)} mismatches, {elapsed:.1f}s")
    assert ok


def test_criterion_2_correctness_lemma(criterion):
    t0 = time.perf_counter()
    seeds = range(600)
    failures = [(s, f) for s in seeds for f in correctness_lemma_failures(game_for_seed(s, n_max=4, c_max=3))]
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 300
    criterion(2, "both solver-contract clauses hold for all precision pairs, n <= 4", ok,
              f"{len(seeds)} seeds, {len(failures)} failures, {elapsed:.1f}s")
    assert ok, failures[:5]


def test_criterion_3_attractor_lemmas(criterion):
    seeds = range(600)
    failures = [(s, f) for s in seeds for f in attractor_lemma_failures(game_for_seed(s, n_max=6, c_max=4))]
    ok = not failures
    criterion(3, "dominion and attractor lemmas on enumerated dominions, n <= 6", ok,
              f"{len(seeds)} games, {len(failures)} failures")
    assert ok, failures[:5]


def test_criterion_4_mid_scale_agreement(mid_runs, criterion):
    runs, elapsed = mid_runs
    problems = []
    for g, imp, par, zie in runs:
        if not (imp.w_even == par.w_even == zie.w_even):
            problems.append((g.n, "disagree"))
        if (imp.w_even | imp.w_odd) != g.all() or not imp.w_even.isdisjoint(imp.w_odd):
            problems.append((g.n, "partition"))
        view = g.view()
        if not (is_closed(view, imp.w_even, EVEN) and is_closed(view, imp.w_odd, ODD)):
            problems.append((g.n, "closure"))
    ok = not problems and elapsed < 120
    criterion(4, "improved = parys = zielonka with partition and closure, n <= 300", ok,
              f"{len(runs)} games, {len(problems)} problems, {elapsed:.1f}s")
    assert ok, problems[:5]


def test_criterion_5_call_bounds(oracle_runs, mid_runs, criterion):
    games = [(g, imp) for g, _, imp, _, _ in oracle_runs[0]] + [(g, imp) for g, imp, _, _ in mid_runs[0]]
    bad = []
    for g, imp in games:
        report = check_bounds(imp.stats, g)
        consistent = (report.dp_bound == dp_call_bound(EVEN, report.h, g.n, g.n)
                      and report.envelope == binomial_envelope(report.h, 2 * floor_log2(g.n)))
        if not (report.measured_le_dp and report.dp_le_envelope and consistent):
            bad.append(g.n)

    def b(h, l):
        return 2 ** l * comb(h + l, l)
    identity = [(h, l) for h in range(1, 65) for l in range(1, 65) if 2 * b(h, l - 1) + b(h - 1, l) > b(h, l)]
    ok = not bad and not identity
    criterion(5, "measured <= dp bound <= envelope, and the recurrence identity on h, l <= 64", ok,
              f"{len(games)} runs, {len(bad)} bound violations, {len(identity)} identity violations")
    assert ok


def test_criterion_6_depth(oracle_runs, mid_runs, criterion):
    games = [(g, imp) for g, _, imp, _, _ in oracle_runs[0]] + [(g, imp) for g, imp, _, _ in mid_runs[0]]
    bad = [g.n for g, imp in games if not check_bounds(imp.stats, g).depth_ok]
    deepest = max(imp.stats.max_depth for _, imp in games)
    ok = not bad
    criterion(6, "recursion depth <= h + 2 floor(log2 n) + 2", ok,
              f"{len(games)} runs, {len(bad)} violations, deepest {deepest}")
    assert ok


def test_criterion_7_attractor_suite(criterion):
    rng = random.Random(2024)
    failures = 0
    for _ in range(1000):
        n = rng.randint(1, 12)
        g = generate_random(GeneratorSpec(n, rng.randint(0, 5), rng.randint(1, 4), rng.getrandbits(64)))
        cut = g.region(v for v in range(n) if rng.random() < 0.15)
        view = g.view(g.all() - attract(g.view(), rng.choice([EVEN, ODD]), cut))
        p = rng.choice([EVEN, ODD])
        y = g.region(v for v in view.active if rng.random() < 0.4)
        x = g.region(v for v in y if rng.random() < 0.5)
        ax, ay = attract(view, p, x), attract(view, p, y)
        checks = (
            ax <= ay,
            attract(view, p, ax) == ax,
            x <= ax <= view.active,
            is_trap(view, p, view.active - ax),
            ax == naive_attract(view, p, x),
        )
        failures += not all(checks)
    ok = failures == 0
    criterion(7, "attractor monotonicity, idempotence, containment, trap complement, fixpoint", ok,
              f"1000 triples, {failures} failures")
    assert ok


EDGE_FILES = {
    "sparse ids": ("parity 30;\n3 2 0 30;\n30 1 1 3,30;\n", [(1,), (0, 1)]),
    "names": ('0 1 0 1 "start";\n1 2 1 0 "has;semicolon";\n', [(1,), (0,)]),
    "missing final semicolon": ("0 1 0 1;\n1 2 1 0", [(1,), (0,)]),
    "whitespace": ("  parity 1 ;\n\n0\t1 0   1 ;\n 1 2 1 0 ;\n", [(1,), (0,)]),
}


def test_criterion_8_round_trip(criterion):
    failures = []
    for seed in range(1000):
        g = game_for_seed(seed, n_max=40, c_max=9, d_max=5)
        if parse_pgsolver(write_pgsolver(g)) != g:
            failures.append(seed)
    for label, (text, succ) in EDGE_FILES.items():
        g = parse_pgsolver(text)
        if [tuple(s) for s in g.successors] != succ or parse_pgsolver(write_pgsolver(g)) != g:
            failures.append(label)
    ok = not failures
    criterion(8, "parse(write(g)) = g", ok, f"1000 generated games + {len(EDGE_FILES)} edge files, "
                                            f"{len(failures)} failures")
    assert ok, failures


def test_criterion_9_performance(tmp_path, criterion):
    g = generate_random(GeneratorSpec(100_000, 8, 4, 0))
    t0 = time.perf_counter()
    r = solve_improved(g)
    elapsed = time.perf_counter() - t0
    report = check_bounds(r.stats, g)

    dest = tmp_path / "bench.csv"
    code = main(["bench", "--positions", "64,128,256", "--max-priority", "6,8", "--seeds", "5",
                 "--algos", "improved,parys", "--csv", str(dest)])
    with open(dest, newline="") as f:
        rows = list(csv.DictReader(f))
    failing = sum(row["pass"] != "true" for row in rows)
    ok = elapsed < 60 and report.passed and code == 0 and len(rows) == 60 and failing == 0
    criterion(9, "n = 100000 solve under 60 s and a passing bench CSV", ok,
              f"{elapsed:.1f}s, {r.stats.total_invocations} calls, {len(rows)} bench rows, {failing} failing")
    assert ok
