import pytest
from hypothesis import given, settings

import paritysolve.solver as solver_mod
from paritysolve.analysis import Recorder, floor_log2, top_level_ceiling
from paritysolve.game import EVEN, ODD, GeneratorSpec, ParityGame, Region, generate_random
from paritysolve.solver import (SOLVERS, GameTooLarge, PriorityAboveCeiling, is_closed, is_dominion,
                                oracle_region, solve_e, solve_improved, solve_o, solve_oracle,
                                solve_parys, solve_zielonka)

from _support import game_for_seed, games

ALGOS = ["improved", "parys", "zielonka", "oracle"]


@pytest.mark.parametrize("algo", ALGOS)
def test_single_self_loops(algo):
    for prio, winner in [(0, EVEN), (1, ODD), (2, EVEN), (5, ODD)]:
        g = ParityGame([0], [prio], [[0]])
        assert SOLVERS[algo](g).winner(0) == winner


@pytest.mark.parametrize("algo", ALGOS)
def test_two_position_cycle(algo, two_position_game):
    # the cycle's largest priority is 3, so Odd wins both positions
    r = SOLVERS[algo](two_position_game)
    assert not r.w_even and list(r.w_odd) == [0, 1]


@pytest.mark.parametrize("algo", ALGOS)
def test_choice_example(algo):
    # pos0 (Even, 2) can loop or go to pos1 (Odd, 1) which loops
    g = ParityGame([0, 1], [2, 1], [[0, 1], [1]])
    r = SOLVERS[algo](g)
    assert list(r.w_even) == [0] and list(r.w_odd) == [1]


def test_oracle_dual_is_complement():
    for seed in range(200):
        g = game_for_seed(seed)
        assert oracle_region(g, ODD) == oracle_region(g, EVEN).complement()


def test_oracle_refuses_large_games():
    g = generate_random(GeneratorSpec(12, 2, 2, 0))
    with pytest.raises(GameTooLarge):
        solve_oracle(g)
    assert len(solve_oracle(g, cap=12).w_even) + len(solve_oracle(g, cap=12).w_odd) == 12


# -- guard exits

def test_solve_e_guards():
    g = ParityGame([0, 1], [1, 2], [[1], [0]])
    assert not solve_e(g.view(g.none()), 2, 2, 2)
    assert solve_e(g.view(), 2, 2, 0) == g.all()
    flat = ParityGame([0, 1], [0, 0], [[1], [0]])
    assert solve_e(flat.view(), 0, 0, 0) == flat.all()


def test_solve_o_guards():
    g = ParityGame([0, 1], [0, 0], [[1], [0]])
    assert not solve_o(g.view(), 0, 2, 2)
    g = ParityGame([0, 1], [1, 0], [[1], [0]])
    assert solve_o(g.view(), 1, 2, 0) == g.all()


def test_ceiling_checks():
    g = ParityGame([0], [3], [[0]])
    with pytest.raises(PriorityAboveCeiling):
        solve_e(g.view(), 2, 1, 1)
    with pytest.raises(ValueError):
        solve_e(g.view(), 3, 1, 1)
    with pytest.raises(ValueError):
        solve_o(g.view(), 4, 1, 1)


def test_h_zero_even_wins_everything():
    g = ParityGame([0, 1, 1], [0, 0, 0], [[1], [2], [0]])
    assert solve_e(g.view(), 0, 3, 3) == g.all()


# -- duality

@settings(max_examples=150)
@given(games(max_n=7, max_c=5))
def test_solve_o_is_dual_of_solve_e(g):
    # shifting priorities up by one and swapping owners turns Odd into Even
    h = top_level_ceiling(max(g.priorities))
    h_odd = h + 1
    n = g.n
    for p_e in range(n + 1):
        for p_o in range(n + 1):
            odd_side = solve_o(g.view(), h_odd, p_o, p_e)
            swapped = g.swapped()
            even_side = solve_e(swapped.view(), h_odd + 1, p_o, p_e)
            assert odd_side == even_side


def test_swapped_game():
    g = ParityGame([0, 1], [0, 3], [[1], [0]])
    s = g.swapped()
    assert s.owners == (ODD, EVEN) and s.priorities == (1, 4)


# -- correctness against the oracle

@pytest.mark.parametrize("solve", [solve_improved, solve_parys, solve_zielonka])
def test_solvers_match_oracle(solve):
    for seed in range(400):
        g = game_for_seed(seed)
        o = solve_oracle(g)
        r = solve(g)
        assert r.w_even == o.w_even and r.w_odd == o.w_odd, seed


@settings(max_examples=150)
@given(games(max_n=8, max_c=6, max_d=3))
def test_solvers_match_oracle_property(g):
    o = solve_oracle(g)
    for solve in (solve_improved, solve_parys, solve_zielonka):
        assert solve(g).w_even == o.w_even


@pytest.mark.parametrize("algo", ["improved", "parys", "zielonka"])
def test_solvers_agree_on_larger_games(algo):
    for seed in range(10):
        g = generate_random(GeneratorSpec(150, 9, 3, seed))
        ref = solve_zielonka(g)
        r = SOLVERS[algo](g)
        assert r.w_even == ref.w_even
        assert r.w_even | r.w_odd == g.all() and r.w_even.isdisjoint(r.w_odd)


def test_precision_n_suffices():
    for seed in range(150):
        g = game_for_seed(seed)
        h = top_level_ceiling(max(g.priorities))
        assert solve_e(g.view(), h, g.n, g.n) == solve_oracle(g).w_even


# -- compiled engine against the reference recursion

def _reference(game, player, h, p_own, p_opp):
    rec = Recorder()
    active = solver_mod._solve(game.view(), player, h, p_own, p_opp, rec, 1, None)
    return active, rec.stats


@pytest.mark.parametrize("reuse", [True, False])
def test_engine_matches_reference(reuse):
    for seed in range(40):
        g = generate_random(GeneratorSpec(5 + seed % 25, 1 + seed % 7, 1 + seed % 3, seed))
        h = top_level_ceiling(max(g.priorities))
        want, ref = _reference(g, EVEN, h, g.n, g.n)
        rec = Recorder()
        got = solver_mod._run(g.view(), EVEN, h, g.n, g.n, rec, reuse)
        assert got == want
        s = rec.stats
        assert (s.total_invocations, s.productive_invocations, s.max_depth) == \
            (ref.total_invocations, ref.productive_invocations, ref.max_depth)
        assert dict(s.per_level) == dict(ref.per_level)
        if not reuse:
            assert s.replayed_invocations == 0


def test_traced_run_matches_untraced():
    g = generate_random(GeneratorSpec(20, 5, 3, 11))
    a = solve_improved(g)
    b = solve_improved(g, trace=True)
    assert a.w_even == b.w_even
    assert a.stats.total_invocations == b.stats.total_invocations == len(b.recorder.tree)


def test_debug_totality(monkeypatch):
    monkeypatch.setattr(solver_mod, "DEBUG", True)
    for seed in range(30):
        g = game_for_seed(seed)
        solve_improved(g, trace=True)


def test_depth_bound():
    for seed in range(300):
        g = game_for_seed(seed)
        r = solve_improved(g)
        h = top_level_ceiling(max(g.priorities))
        assert r.stats.max_depth <= h + 2 * floor_log2(g.n) + 2


# -- dominions

def test_is_dominion_examples():
    g = ParityGame([0, 1], [2, 1], [[0, 1], [1]])
    view = g.view()
    assert is_dominion(view, g.region([0]), EVEN)
    assert is_dominion(view, g.region([1]), ODD)
    assert is_dominion(view, g.region([0, 1]), ODD) is False
    assert is_dominion(view, g.none(), EVEN)
    # closed for Even, but Odd wins the loop on 1
    assert is_closed(view, g.region([0, 1]), EVEN)
    assert not is_dominion(view, g.region([0, 1]), EVEN)


def test_is_dominion_rejects_outside_region():
    g = ParityGame([0, 1], [2, 1], [[0, 1], [1]])
    with pytest.raises(ValueError):
        is_dominion(g.view(g.region([0])), g.region([1]), EVEN)


def test_winning_regions_are_dominions():
    for seed in range(100):
        g = generate_random(GeneratorSpec(30, 6, 3, seed))
        r = solve_improved(g)
        assert is_dominion(g.view(), r.w_even, EVEN)
        assert is_dominion(g.view(), r.w_odd, ODD)


def test_result_accessors():
    g = ParityGame([0, 1], [2, 1], [[0, 1], [1]])
    r = solve_improved(g)
    assert r.region(EVEN) == r.w_even and r.region(ODD) == r.w_odd
    assert isinstance(r.w_even, Region)
