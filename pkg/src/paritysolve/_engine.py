"""Compiled twin of the improved recursion.

Views are int64 index arrays. Set membership uses stamp arrays: a fresh
stamp is written over a view's positions right before it is queried, so
nested calls share scratch space and every operation costs
O(|view| + edges inside it) instead of O(n).

Sibling reuse: the first and third recursive calls of a productive
invocation differ only in their subgame. When W1 and W2 are both empty
the third subgame is the invocation's own view, so the third call is the
first call repeated verbatim. With ``reuse`` on, its result is taken from
the first call and the first call's event counts are added once more, so
the statistics still describe every invocation of the recursion as
written. Executed-versus-replayed totals are reported separately.
"""
from __future__ import annotations

import numba
import numpy as np
from numba import types
from numba.typed import Dict

_KEY = types.UniTuple(types.int64, 4)

# rows of ``stamps``
_MARK, _ATTR, _COUNTED = 0, 1, 2
# slots of ``ctr``
_STAMP, _TOTAL, _PRODUCTIVE, _DEPTH, _KEYS, _REPLAYED = 0, 1, 2, 3, 4, 5


@numba.njit(cache=True)
def _fresh(ctr):
    ctr[_STAMP] += 1
    return ctr[_STAMP]


@numba.njit(cache=True)
def _stamp(view, stamps, ctr):
    s = _fresh(ctr)
    for v in view:
        stamps[_MARK, v] = s
    return s


@numba.njit(cache=True)
def _attract(view, targets, player, succ_ptr, succ_idx, pred_ptr, pred_idx, owner,
             stamps, remaining, ctr):
    """Attractor of ``targets`` inside ``view``; returns the stamp marking it."""
    vs = _stamp(view, stamps, ctr)
    aid = _fresh(ctr)
    queue = np.empty(view.size, np.int64)
    tail = 0
    for t in targets:
        if stamps[_ATTR, t] != aid:
            stamps[_ATTR, t] = aid
            queue[tail] = t
            tail += 1
    head = 0
    while head < tail:
        v = queue[head]
        head += 1
        for k in range(pred_ptr[v], pred_ptr[v + 1]):
            u = pred_idx[k]
            if stamps[_MARK, u] != vs or stamps[_ATTR, u] == aid:
                continue
            if owner[u] != player:
                if stamps[_COUNTED, u] != aid:
                    cnt = 0
                    for j in range(succ_ptr[u], succ_ptr[u + 1]):
                        if stamps[_MARK, succ_idx[j]] == vs:
                            cnt += 1
                    stamps[_COUNTED, u] = aid
                    remaining[u] = cnt
                remaining[u] -= 1
                if remaining[u] > 0:
                    continue
            stamps[_ATTR, u] = aid
            queue[tail] = u
            tail += 1
    return aid


@numba.njit(cache=True)
def _outside(view, stamps, row, s):
    out = np.empty(view.size, np.int64)
    m = 0
    for v in view:
        if stamps[row, v] != s:
            out[m] = v
            m += 1
    return out[:m]


@numba.njit(cache=True)
def _record(player, h, p_own, p_opp, depth, guard, ctr, key_ids, level_counts):
    ctr[_TOTAL] += 1
    if not guard:
        ctr[_PRODUCTIVE] += 1
    if depth > ctr[_DEPTH]:
        ctr[_DEPTH] = depth
    key = (player, h, p_own, p_opp)
    if key in key_ids:
        level_counts[key_ids[key]] += 1
    else:
        key_ids[key] = ctr[_KEYS]
        level_counts[ctr[_KEYS]] += 1
        ctr[_KEYS] += 1


@numba.njit(cache=True)
def _solve(view, player, h, p_own, p_opp, depth, reuse,
           succ_ptr, succ_idx, pred_ptr, pred_idx, owner, priority,
           stamps, remaining, ctr, key_ids, level_counts):
    if view.size == 0:
        _record(player, h, p_own, p_opp, depth, True, ctr, key_ids, level_counts)
        return view
    if h == 0:
        _record(player, h, p_own, p_opp, depth, True, ctr, key_ids, level_counts)
        if player == 0:
            return view
        return view[:0]
    if p_opp == 0:
        _record(player, h, p_own, p_opp, depth, True, ctr, key_ids, level_counts)
        return view
    _record(player, h, p_own, p_opp, depth, False, ctr, key_ids, level_counts)
    opp = 1 - player

    if reuse:
        total0 = ctr[_TOTAL]
        productive0 = ctr[_PRODUCTIVE]
        keys0 = ctr[_KEYS]
        counts0 = level_counts[:keys0].copy()
    kept = _solve(view, player, h, p_own, p_opp // 2, depth + 1, reuse,
                  succ_ptr, succ_idx, pred_ptr, pred_idx, owner, priority,
                  stamps, remaining, ctr, key_ids, level_counts)
    if reuse:
        first_total = ctr[_TOTAL] - total0
        first_productive = ctr[_PRODUCTIVE] - productive0
        first_keys = ctr[_KEYS]
        first_counts = level_counts[:first_keys].copy()
        first_counts[:keys0] -= counts0

    if kept.size == view.size:
        g1 = view
    else:
        s = _stamp(kept, stamps, ctr)
        w = _outside(view, stamps, _MARK, s)
        a1 = _attract(view, w, opp, succ_ptr, succ_idx, pred_ptr, pred_idx, owner,
                      stamps, remaining, ctr)
        g1 = _outside(view, stamps, _ATTR, a1)

    top = np.empty(g1.size, np.int64)
    m = 0
    for v in g1:
        if priority[v] == h:
            top[m] = v
            m += 1
    if m == 0:
        g2 = g1
    else:
        a2 = _attract(g1, top[:m], player, succ_ptr, succ_idx, pred_ptr, pred_idx, owner,
                      stamps, remaining, ctr)
        g2 = _outside(g1, stamps, _ATTR, a2)
    won = _solve(g2, opp, h - 1, p_opp, p_own, depth + 1, reuse,
                 succ_ptr, succ_idx, pred_ptr, pred_idx, owner, priority,
                 stamps, remaining, ctr, key_ids, level_counts)
    if won.size == 0:
        g3 = g1
    else:
        a3 = _attract(g1, won, opp, succ_ptr, succ_idx, pred_ptr, pred_idx, owner,
                      stamps, remaining, ctr)
        g3 = _outside(g1, stamps, _ATTR, a3)

    if reuse and g3.size == view.size:
        # g3 is a filtered copy of view, so equal size means the same subgame
        ctr[_TOTAL] += first_total
        ctr[_PRODUCTIVE] += first_productive
        ctr[_REPLAYED] += first_total
        level_counts[:first_keys] += first_counts
        return kept

    # G3 is the view minus W1 and W2 and the third call returns a subset of
    # G3, so removing W1, W2 and W3 = G3 minus that subset leaves exactly it.
    return _solve(g3, player, h, p_own, p_opp // 2, depth + 1, reuse,
                  succ_ptr, succ_idx, pred_ptr, pred_idx, owner, priority,
                  stamps, remaining, ctr, key_ids, level_counts)


def _key_capacity(h: int, p_own: int, p_opp: int) -> int:
    # precisions are always a base value shifted right, so at most
    # 2 * (bit_length + 1) distinct values per slot
    values = 2 * (max(p_own, p_opp).bit_length() + 1)
    return 2 * (h + 1) * values * values + 1


def run(game, active: np.ndarray, player: int, h: int, p_own: int, p_opp: int,
        reuse: bool = True):
    """Run the recursion.

    Returns ``(kept, counters, per_level)``: the kept positions, the array
    (total, productive, max depth, replayed) and a dict mapping
    (player, h, p_own, p_opp) to invocation counts.
    """
    n = game.n
    sp, si = game.succ_csr
    pp, pi = game.pred_csr
    owner = game.owner_array.astype(np.int64)
    priority = game.priority_array
    stamps = np.zeros((3, n), np.int64)
    remaining = np.zeros(n, np.int64)
    ctr = np.zeros(6, np.int64)
    key_ids = Dict.empty(key_type=_KEY, value_type=types.int64)
    level_counts = np.zeros(_key_capacity(h, p_own, p_opp), np.int64)
    view = np.flatnonzero(active).astype(np.int64)
    kept = _solve(view, int(player), int(h), int(p_own), int(p_opp), 1, bool(reuse),
                  sp, si, pp, pi, owner, priority, stamps, remaining, ctr, key_ids, level_counts)
    per_level = {tuple(int(x) for x in key): int(level_counts[k]) for key, k in key_ids.items()}
    counters = (int(ctr[_TOTAL]), int(ctr[_PRODUCTIVE]), int(ctr[_DEPTH]), int(ctr[_REPLAYED]))
    return kept, counters, per_level
