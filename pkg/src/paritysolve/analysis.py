"""Call-count instrumentation, worst-case call bounds and call-tree export."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from math import comb
from typing import Optional

from .game import EVEN, Owner, ParityGame


def floor_log2(p: int) -> int:
    if p < 1:
        raise ValueError(f"floor_log2 undefined for {p}")
    return p.bit_length() - 1


def top_level_ceiling(max_priority: int) -> int:
    """Maximum priority rounded up to an even number."""
    return max_priority + (max_priority & 1)


# -- recording --------------------------------------------------------------

@dataclass
class CallNode:
    player: Owner
    h: int
    p_own: int
    p_opp: int
    active_size: int
    guard_exit: bool
    children: list["CallNode"] = field(default_factory=list)

    def label(self) -> str:
        return f"{'E' if self.player == EVEN else 'O'},{self.h},{self.p_own},{self.p_opp},{self.active_size}"

    def to_dict(self) -> dict:
        return {
            "player": "E" if self.player == EVEN else "O",
            "h": self.h,
            "p_own": self.p_own,
            "p_opp": self.p_opp,
            "size": self.active_size,
            "guard_exit": self.guard_exit,
            "children": [c.to_dict() for c in self.children],
        }

    def walk(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


@dataclass
class CallTree:
    root: Optional[CallNode] = None

    def nodes(self):
        return self.root.walk() if self.root is not None else iter(())

    def __len__(self) -> int:
        return sum(1 for _ in self.nodes())

    def leaves(self) -> int:
        return sum(1 for node in self.nodes() if not node.children)


@dataclass
class CallStats:
    total_invocations: int = 0
    productive_invocations: int = 0
    max_depth: int = 0
    per_level: Counter = field(default_factory=Counter)
    # invocations accounted for by reusing an identical earlier sibling
    replayed_invocations: int = 0

    def merge(self, other: "CallStats") -> "CallStats":
        return CallStats(self.total_invocations + other.total_invocations,
                         self.productive_invocations + other.productive_invocations,
                         max(self.max_depth, other.max_depth),
                         self.per_level + other.per_level,
                         self.replayed_invocations + other.replayed_invocations)

    def to_dict(self) -> dict:
        return {
            "total_invocations": self.total_invocations,
            "productive_invocations": self.productive_invocations,
            "max_depth": self.max_depth,
            "replayed_invocations": self.replayed_invocations,
        }


class Recorder:
    """Collects one event per solver invocation.

    Counting is always on; pass ``trace=True`` to also build the full
    :class:`CallTree` (memory grows with the number of calls).
    """

    def __init__(self, trace: bool = False):
        self.stats = CallStats()
        self.tree = CallTree() if trace else None

    def call(self, player, h, p_own, p_opp, size, depth, guard_exit, parent=None):
        stats = self.stats
        stats.total_invocations += 1
        if not guard_exit:
            stats.productive_invocations += 1
        if depth > stats.max_depth:
            stats.max_depth = depth
        stats.per_level[(int(player), h, p_own, p_opp)] += 1
        if self.tree is None:
            return None
        node = CallNode(Owner(player), h, p_own, p_opp, size, guard_exit)
        if parent is None:
            self.tree.root = node
        else:
            parent.children.append(node)
        return node


# -- bounds -----------------------------------------------------------------

@lru_cache(maxsize=None)
def _dp(player: int, h: int, p_own: int, p_opp: int) -> int:
    if h == 0 or p_opp == 0:
        return 1
    return 1 + 2 * _dp(player, h, p_own, p_opp // 2) + _dp(1 - player, h - 1, p_opp, p_own)


def dp_call_bound(player: Owner, h: int, p_own: int, p_opp: int) -> int:
    """Worst-case number of invocations of the improved recursion.

    Every non-guard call spawns two half-precision calls at the same
    ceiling and one call one priority lower with the precisions swapped;
    subgames are assumed never to become empty.
    """
    if min(h, p_own, p_opp) < 0:
        raise ValueError("arguments must be non-negative")
    return _dp(int(player), h, p_own, p_opp)


def headline_bound(h: int, l: int) -> int:
    """The headline figure 2^l * C(h+l, l)."""
    return 2 ** l * comb(h + l, l)


def binomial_envelope(h: int, l: int) -> int:
    """Rigorous envelope on total invocations: 3 * 2^(l+1) * C(h+l+1, l+1).

    Productive calls obey P(h,l) <= 1 + 2P(h,l-1) + P(h-1,l), which solves
    to P <= 2^(l+1) C(h+l+1, l+1) - 1; each productive call has at most
    three children, so leaves add at most a factor of three.
    """
    if h < 0 or l < 0:
        raise ValueError("h and l must be non-negative")
    return 3 * 2 ** (l + 1) * comb(h + l + 1, l + 1)


@dataclass
class BoundReport:
    n: int
    h: int
    l: int
    measured: int
    productive: int
    max_depth: int
    dp_bound: int
    envelope: int
    headline_figure: int
    depth_limit: int
    measured_le_dp: bool
    dp_le_envelope: bool
    depth_ok: bool
    note: str = ("headline_figure excludes the calling node and guard exits from its count, "
                 "so it is reported for context only and not compared with measured")

    @property
    def passed(self) -> bool:
        return self.measured_le_dp and self.dp_le_envelope and self.depth_ok

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        return d


def check_bounds(stats: CallStats, game: ParityGame) -> BoundReport:
    """Compare a completed improved-solver run with the call bounds."""
    n = game.n
    h = top_level_ceiling(max(game.priorities, default=0))
    l = 2 * floor_log2(n)
    dp = dp_call_bound(EVEN, h, n, n)
    env = binomial_envelope(h, l)
    depth_limit = h + l + 2
    return BoundReport(
        n=n, h=h, l=l,
        measured=stats.total_invocations,
        productive=stats.productive_invocations,
        max_depth=stats.max_depth,
        dp_bound=dp, envelope=env, headline_figure=headline_bound(h, l),
        depth_limit=depth_limit,
        measured_le_dp=stats.total_invocations <= dp,
        dp_le_envelope=dp <= env,
        depth_ok=stats.max_depth <= depth_limit,
    )


def growth_table(h: int, sizes) -> list[tuple[int, int, Optional[float]]]:
    """Rows (n, dp(E,h,n,n), ratio to the previous row) for doubling studies."""
    rows = []
    prev = None
    for n in sizes:
        dp = dp_call_bound(EVEN, h, n, n)
        rows.append((n, dp, dp / prev if prev else None))
        prev = dp
    return rows


# -- export -----------------------------------------------------------------

class UnsupportedFormat(ValueError):
    pass


def export_call_tree(tree: CallTree, format: str = "dot") -> str:
    if format == "json":
        return json.dumps(tree.root.to_dict() if tree.root else None, indent=1) + "\n"
    if format != "dot":
        raise UnsupportedFormat(f"unsupported call-tree format {format!r} (use dot or json)")
    lines = ["digraph calls {", "  node [shape=box];"]
    ids = {}
    for i, node in enumerate(tree.nodes()):
        ids[id(node)] = i
        style = ", style=dashed" if node.guard_exit else ""
        lines.append(f'  n{i} [label="{node.label()}"{style}];')
    for node in tree.nodes():
        for child in node.children:
            lines.append(f"  n{ids[id(node)]} -> n{ids[id(child)]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "BoundReport", "CallNode", "CallStats", "CallTree", "Recorder", "UnsupportedFormat",
    "binomial_envelope", "check_bounds", "dp_call_bound", "export_call_tree", "floor_log2",
    "growth_table", "headline_bound", "top_level_ceiling",
]
