"""Parity game solvers.

* :func:`solve_improved` -- the three-call recursion with precision halving
  (quasi-polynomial, one full-precision call per level).
* :func:`solve_parys` -- Parys' version with the two repeat loops.
* :func:`solve_zielonka` -- the classic recursive algorithm.
* :func:`solve_oracle` -- brute force over positional strategies, small games only.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import _engine
from .analysis import CallStats, Recorder, dp_call_bound, top_level_ceiling
from .attractor import attract
from .game import EVEN, ODD, Owner, ParityGame, Region, SubgameView, max_active_priority

# Set PARITYSOLVE_DEBUG=1 to assert subgame totality at every recursive call.
DEBUG = bool(os.environ.get("PARITYSOLVE_DEBUG"))

ORACLE_MAX_POSITIONS = 10


class PriorityAboveCeiling(ValueError):
    pass


class GameTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Precision:
    p_e: int
    p_o: int

    def __post_init__(self):
        if self.p_e < 0 or self.p_o < 0:
            raise ValueError("precisions must be non-negative")

    def halved_odd(self) -> "Precision":
        return Precision(self.p_e, self.p_o // 2)

    def halved_even(self) -> "Precision":
        return Precision(self.p_e // 2, self.p_o)


@dataclass
class SolveResult:
    w_even: Region
    w_odd: Region
    stats: CallStats = field(default_factory=CallStats)
    algorithm: str = ""
    recorder: Optional[Recorder] = field(default=None, repr=False)

    def winner(self, v: int) -> Owner:
        return EVEN if v in self.w_even else ODD

    def region(self, player: Owner) -> Region:
        return self.w_even if player == EVEN else self.w_odd


def _check_ceiling(view: SubgameView, h: int) -> None:
    top = max_active_priority(view)
    if top is not None and top > h:
        raise PriorityAboveCeiling(f"active priority {top} exceeds ceiling {h}")


# -- the improved recursion -------------------------------------------------

def _solve(view: SubgameView, player: Owner, h: int, p_own: int, p_opp: int,
           rec: Recorder, depth: int, parent) -> Region:
    """Shared body of solve_e / solve_o, written for ``player``.

    Returns the part of ``view`` left after removing three opponent-won
    regions: W1 from a half-precision call, W2 from the full-precision call
    one priority lower, W3 from a half-precision call on what remains.
    """
    active = view.active
    if not active:
        rec.call(player, h, p_own, p_opp, 0, depth, True, parent)
        return active
    if h == 0:
        rec.call(player, h, p_own, p_opp, len(active), depth, True, parent)
        # with only priority 0 left Even wins everything and Odd nothing
        return active if player == EVEN else Region.empty(active.universe)
    if p_opp == 0:
        rec.call(player, h, p_own, p_opp, len(active), depth, True, parent)
        return active
    node = rec.call(player, h, p_own, p_opp, len(active), depth, False, parent)
    if DEBUG:
        assert view.is_total(), "subgame lost totality"
    opp = Owner(1 - player)

    w = active - _solve(view, player, h, p_own, p_opp // 2, rec, depth + 1, node)
    w1 = attract(view, opp, w)
    g1 = view.without(w1)

    top = g1.positions_with_priority(h)
    g2 = g1.without(attract(g1, player, top))
    w_prime = _solve(g2, opp, h - 1, p_opp, p_own, rec, depth + 1, node)
    w2 = attract(g1, opp, w_prime)
    g3 = g1.without(w2)

    w3 = g3.active - _solve(g3, player, h, p_own, p_opp // 2, rec, depth + 1, node)
    return active - (w1 | w2 | w3)


def _run(view: SubgameView, player: Owner, h: int, p_own: int, p_opp: int,
         rec: Recorder, reuse: bool) -> Region:
    if rec.tree is not None or dp_call_bound(player, h, p_own, p_opp) >= 2 ** 63:
        # tracing needs the reference; so do counts that may not fit in 64 bits
        return _solve(view, player, h, p_own, p_opp, rec, 1, None)
    kept, (total, productive, depth, replayed), per_level = _engine.run(
        view.game, view.active.mask, int(player), h, p_own, p_opp, reuse)
    stats = rec.stats
    stats.total_invocations += total
    stats.productive_invocations += productive
    stats.replayed_invocations += replayed
    stats.max_depth = max(stats.max_depth, depth)
    stats.per_level.update(per_level)
    return Region.of(view.game.n, kept)


def solve_e(view: SubgameView, h: int, p_e: int, p_o: int,
            recorder: Optional[Recorder] = None, reuse: bool = True) -> Region:
    """Region containing every Even dominion of size <= p_e and meeting no
    Odd dominion of size <= p_o. ``h`` must be even and at least the largest
    active priority."""
    if h % 2:
        raise ValueError(f"solve_e needs an even ceiling, got {h}")
    _check_ceiling(view, h)
    return _run(view, EVEN, h, p_e, p_o, recorder or Recorder(), reuse)


def solve_o(view: SubgameView, h: int, p_o: int, p_e: int,
            recorder: Optional[Recorder] = None, reuse: bool = True) -> Region:
    """Dual of :func:`solve_e`; returns the empty region when ``h == 0``."""
    if h != 0 and h % 2 == 0:
        raise ValueError(f"solve_o needs an odd ceiling (or 0), got {h}")
    _check_ceiling(view, h)
    return _run(view, ODD, h, p_o, p_e, recorder or Recorder(), reuse)


def solve_improved(game: ParityGame, trace: bool = False, reuse: bool = True) -> SolveResult:
    """Solve ``game`` with the improved recursion at full precision n.

    ``trace`` records the complete call tree (pure-Python path, slow).
    ``reuse`` lets the compiled path skip a third call that repeats the
    first one verbatim; its invocations are still counted.
    """
    rec = Recorder(trace)
    n = game.n
    h = top_level_ceiling(max(game.priorities, default=0))
    w_even = _run(game.view(), EVEN, h, n, n, rec, reuse)
    return SolveResult(w_even, w_even.complement(), rec.stats, "improved", rec)


# -- Parys' recursion -------------------------------------------------------

def _parys(view: SubgameView, player: Owner, h: int, p_own: int, p_opp: int,
           rec: Recorder, depth: int, parent) -> Region:
    active = view.active
    if not active or p_own <= 1:
        rec.call(player, h, p_own, p_opp, len(active), depth, True, parent)
        return Region.empty(active.universe)
    node = rec.call(player, h, p_own, p_opp, len(active), depth, False, parent)
    opp = Owner(1 - player)
    g = view

    def step(precision: int) -> Region:
        nonlocal g
        top = g.positions_with_priority(h)
        sub = g.without(attract(g, player, top))
        won = _parys(sub, opp, h - 1, precision, p_own, rec, depth + 1, node)
        g = g.without(attract(g, opp, won))
        return won

    while step(p_opp // 2):
        pass
    step(p_opp)
    while step(p_opp // 2):
        pass
    return g.active


def solve_parys(game: ParityGame, trace: bool = False) -> SolveResult:
    # The ``p <= 1`` guard treats precisions as strict bounds (dominions of
    # size < p), so the whole game needs precision n + 1.
    rec = Recorder(trace)
    p = game.n + 1
    h = top_level_ceiling(max(game.priorities, default=0))
    w_even = _parys(game.view(), EVEN, h, p, p, rec, 1, None)
    return SolveResult(w_even, w_even.complement(), rec.stats, "parys", rec)


# -- Zielonka ---------------------------------------------------------------

def _zielonka(view: SubgameView, rec: Recorder, depth: int) -> tuple[Region, Region]:
    """Winning regions (even, odd) of the subgame ``view``."""
    rec.stats.total_invocations += 1
    rec.stats.max_depth = max(rec.stats.max_depth, depth)
    active = view.active
    n = active.universe
    top = max_active_priority(view)
    if top is None:
        return active, active
    rec.stats.productive_invocations += 1
    player = Owner.of_priority(top)
    opp = Owner(1 - player)
    won_by_opp = Region.empty(n)
    g = view
    while True:
        a = attract(g, player, g.positions_with_priority(top))
        sub = _zielonka(g.without(a), rec, depth + 1)
        lost = sub[opp]
        if not lost:
            mine = g.active
            break
        b = attract(g, opp, lost)
        won_by_opp = won_by_opp | b
        g = g.without(b)
        if not g:
            mine = g.active
            break
    return (mine, won_by_opp) if player == EVEN else (won_by_opp, mine)


def solve_zielonka(game: ParityGame) -> SolveResult:
    rec = Recorder()
    w_even, w_odd = _zielonka(game.view(), rec, 1)
    return SolveResult(w_even, w_odd, rec.stats, "zielonka", rec)


# -- brute-force oracle -----------------------------------------------------

def _closure(edges: list[int], allowed: int) -> list[int]:
    """Bitmask transitive closure (paths of length >= 1) inside ``allowed``."""
    n = len(edges)
    reach = [edges[v] & allowed if allowed >> v & 1 else 0 for v in range(n)]
    for k in range(n):
        bit = 1 << k
        rk = reach[k]
        for v in range(n):
            if reach[v] & bit:
                reach[v] |= rk
    return reach


def oracle_region(game: ParityGame, player: Owner, cap: int = ORACLE_MAX_POSITIONS) -> Region:
    """Positions won by ``player``, by enumerating ``player``'s positional strategies.

    Fixing a strategy leaves a one-player graph; a position is safe for that
    strategy iff it reaches no cycle whose largest priority favours the
    opponent. The winning region is the union of safe sets.
    """
    n = game.n
    if n > cap:
        raise GameTooLarge(f"oracle refuses games with {n} > {cap} positions")
    full = (1 << n) - 1
    prios = game.priorities
    mine = [v for v in range(n) if game.owners[v] == player]
    choices = [tuple(dict.fromkeys(game.successors[v])) for v in mine]
    base = [0] * n
    for v in range(n):
        if game.owners[v] != player:
            for w in game.successors[v]:
                base[v] |= 1 << w
    bad_priorities = sorted({p for p in prios if p % 2 != player})
    below = {p: sum(1 << v for v in range(n) if prios[v] <= p) for p in bad_priorities}
    won = 0
    for pick in itertools.product(*choices):
        edges = base[:]
        for v, w in zip(mine, pick):
            edges[v] = 1 << w
        bad = 0
        for p in bad_priorities:
            reach = _closure(edges, below[p])
            for v in range(n):
                if prios[v] == p and reach[v] >> v & 1:
                    bad |= 1 << v
        if bad:
            reach = _closure(edges, full)
            safe = full & ~sum(1 << v for v in range(n) if bad >> v & 1 or reach[v] & bad)
        else:
            safe = full
        won |= safe
        if won == full:
            break
    return Region.of(n, (v for v in range(n) if won >> v & 1))


def solve_oracle(game: ParityGame, cap: int = ORACLE_MAX_POSITIONS) -> SolveResult:
    w_even = oracle_region(game, EVEN, cap)
    return SolveResult(w_even, w_even.complement(), CallStats(), "oracle")


SOLVERS: dict[str, Callable[[ParityGame], SolveResult]] = {
    "improved": solve_improved,
    "parys": solve_parys,
    "zielonka": solve_zielonka,
    "oracle": solve_oracle,
}


# -- dominions --------------------------------------------------------------

def is_closed(view: SubgameView, region: Region, player: Owner) -> bool:
    """``player`` keeps one successor inside, the opponent keeps all of them."""
    active = view.active.mask
    inside = region.mask
    game = view.game
    for v in region:
        succ = [w for w in game.successors[v] if active[w]]
        if game.owners[v] == player:
            if not any(inside[w] for w in succ):
                return False
        elif not all(inside[w] for w in succ):
            return False
    return True


def is_dominion(view: SubgameView, region: Region, player: Owner,
                cap: int = ORACLE_MAX_POSITIONS) -> bool:
    if not region.issubset(view.active):
        raise ValueError("region must lie inside the view")
    if not region:
        return True
    if not is_closed(view, region, player):
        return False
    sub, _ = view.induced_game(region)
    result = solve_oracle(sub, cap) if sub.n <= cap else solve_zielonka(sub)
    return len(result.region(player)) == sub.n
