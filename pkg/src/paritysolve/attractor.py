"""Attractors and traps on subgame views."""
from __future__ import annotations

import numba
import numpy as np

from .game import Owner, Region, SubgameView


class TargetOutsideView(ValueError):
    pass


@numba.njit(cache=True)
def _attract_kernel(succ_ptr, succ_idx, pred_ptr, pred_idx, owner, active, targets, player):
    n = active.size
    attr = targets.copy()
    # remaining non-attracted active successors, filled on first visit
    remaining = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    tail = 0
    for v in range(n):
        if attr[v]:
            queue[tail] = v
            tail += 1
    head = 0
    while head < tail:
        v = queue[head]
        head += 1
        for k in range(pred_ptr[v], pred_ptr[v + 1]):
            u = pred_idx[k]
            if attr[u] or not active[u]:
                continue
            if owner[u] == player:
                attr[u] = True
                queue[tail] = u
                tail += 1
                continue
            if remaining[u] < 0:
                cnt = 0
                for j in range(succ_ptr[u], succ_ptr[u + 1]):
                    if active[succ_idx[j]]:
                        cnt += 1
                remaining[u] = cnt
            remaining[u] -= 1
            if remaining[u] == 0:
                attr[u] = True
                queue[tail] = u
                tail += 1
    return attr


def attract(view: SubgameView, player: Owner, targets: Region) -> Region:
    """Positions of ``view`` from which ``player`` can force a visit to ``targets``.

    Backward propagation from the targets: a ``player`` position joins on its
    first attracted successor, an opponent position once its count of
    non-attracted active successors drops to zero.
    """
    active = view.active.mask
    tmask = targets.mask
    if (tmask & ~active).any():
        raise TargetOutsideView("attractor targets must lie inside the view")
    if not tmask.any():
        return targets
    game = view.game
    sp, si = game.succ_csr
    pp, pi = game.pred_csr
    return Region(_attract_kernel(sp, si, pp, pi, game.owner_array, active, tmask, int(player)))


def is_trap(view: SubgameView, player: Owner, region: Region) -> bool:
    """True iff ``player`` cannot leave ``region`` while the opponent can stay.

    Every ``player`` position in the region has all active successors inside
    it, and every opponent position has at least one successor inside.
    """
    if not region.issubset(view.active):
        raise TargetOutsideView("trap region must lie inside the view")
    active = view.active.mask
    inside = region.mask
    game = view.game
    for v in region:
        succ = [w for w in game.successors[v] if active[w]]
        if game.owners[v] == player:
            if not all(inside[w] for w in succ):
                return False
        elif not any(inside[w] for w in succ):
            return False
    return True
