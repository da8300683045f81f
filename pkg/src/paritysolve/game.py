"""Parity game arenas, regions, subgame views, PGSolver I/O and the seeded generator.

Positions are dense integers ``0..n-1``. A :class:`Region` is an immutable
bit-vector over that range; a :class:`SubgameView` pairs a game with the
region that is still active, so recursive solvers never copy arenas.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np


class Owner(enum.IntEnum):
    EVEN = 0
    ODD = 1

    @property
    def opponent(self) -> "Owner":
        return Owner(1 - self)

    @classmethod
    def of_priority(cls, priority: int) -> "Owner":
        """The player favoured by ``priority``."""
        return cls(priority & 1)


EVEN = Owner.EVEN
ODD = Owner.ODD


def opponent(player: Owner) -> Owner:
    return Owner(1 - player)


# -- errors -----------------------------------------------------------------

class GameError(ValueError):
    """Base class for malformed games and game files."""


class MalformedLine(GameError):
    def __init__(self, lineno: int, token: str = ""):
        self.lineno = lineno
        self.token = token
        super().__init__(f"line {lineno}: malformed statement {token!r}")


class DanglingSuccessor(GameError):
    def __init__(self, id: int, lineno: Optional[int] = None):
        self.id = id
        self.lineno = lineno
        where = f" (line {lineno})" if lineno is not None else ""
        super().__init__(f"successor {id} is not a declared position{where}")


class NoSuccessor(GameError):
    def __init__(self, id: int, lineno: Optional[int] = None):
        self.id = id
        self.lineno = lineno
        where = f" (line {lineno})" if lineno is not None else ""
        super().__init__(f"position {id} has no successor{where}")


class DuplicateId(GameError):
    def __init__(self, id: int, lineno: Optional[int] = None):
        self.id = id
        self.lineno = lineno
        where = f" (line {lineno})" if lineno is not None else ""
        super().__init__(f"position {id} declared twice{where}")


class InvalidSpec(GameError):
    pass


class InvalidGame(GameError):
    def __init__(self, violations: Sequence["Violation"]):
        self.violations = list(violations)
        shown = "; ".join(str(v) for v in self.violations[:5])
        super().__init__(f"invalid game: {shown}")


# -- regions ----------------------------------------------------------------

class Region:
    """Immutable set of positions of a fixed game, stored as a boolean mask."""

    __slots__ = ("_mask",)

    def __init__(self, mask: np.ndarray):
        if mask.dtype != np.bool_ or mask.ndim != 1:
            raise TypeError("Region mask must be a 1-d boolean array")
        if mask.flags.writeable:
            mask.flags.writeable = False
        self._mask = mask

    @classmethod
    def empty(cls, n: int) -> "Region":
        return cls(np.zeros(n, dtype=np.bool_))

    @classmethod
    def full(cls, n: int) -> "Region":
        return cls(np.ones(n, dtype=np.bool_))

    @classmethod
    def of(cls, n: int, indices: Iterable[int]) -> "Region":
        mask = np.zeros(n, dtype=np.bool_)
        idx = np.fromiter(indices, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= n):
            raise IndexError(f"region index out of range [0..{n - 1}]")
        mask[idx] = True
        return cls(mask)

    @property
    def mask(self) -> np.ndarray:
        """Read-only boolean view of the region."""
        return self._mask

    @property
    def universe(self) -> int:
        return self._mask.size

    def __len__(self) -> int:
        return int(np.count_nonzero(self._mask))

    def __bool__(self) -> bool:
        return bool(self._mask.any())

    def __contains__(self, v: object) -> bool:
        return isinstance(v, (int, np.integer)) and 0 <= v < self._mask.size and bool(self._mask[v])

    def __iter__(self) -> Iterator[int]:
        return iter(np.flatnonzero(self._mask).tolist())

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self._mask)

    def _check(self, other: "Region") -> None:
        if not isinstance(other, Region):
            raise TypeError(f"expected Region, got {type(other).__name__}")
        if other._mask.size != self._mask.size:
            raise ValueError("regions belong to games of different size")

    def __or__(self, other: "Region") -> "Region":
        self._check(other)
        return Region(self._mask | other._mask)

    def __and__(self, other: "Region") -> "Region":
        self._check(other)
        return Region(self._mask & other._mask)

    def __sub__(self, other: "Region") -> "Region":
        self._check(other)
        return Region(self._mask & ~other._mask)

    def __xor__(self, other: "Region") -> "Region":
        self._check(other)
        return Region(self._mask ^ other._mask)

    def complement(self) -> "Region":
        return Region(~self._mask)

    def issubset(self, other: "Region") -> bool:
        self._check(other)
        return not (self._mask & ~other._mask).any()

    def isdisjoint(self, other: "Region") -> bool:
        self._check(other)
        return not (self._mask & other._mask).any()

    def __le__(self, other: "Region") -> bool:
        return self.issubset(other)

    def __ge__(self, other: "Region") -> bool:
        return other.issubset(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Region):
            return NotImplemented
        return self._mask.size == other._mask.size and bool(np.array_equal(self._mask, other._mask))

    def __hash__(self) -> int:
        return hash((self._mask.size, np.packbits(self._mask).tobytes()))

    def __repr__(self) -> str:
        items = list(self)
        if len(items) > 20:
            body = ", ".join(map(str, items[:20])) + ", ..."
        else:
            body = ", ".join(map(str, items))
        return f"Region({{{body}}}, n={self._mask.size})"


# -- the arena --------------------------------------------------------------

def _csr(lists: Sequence[Sequence[int]]) -> tuple[np.ndarray, np.ndarray]:
    ptr = np.zeros(len(lists) + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(s) for s in lists])
    idx = np.fromiter((v for s in lists for v in s), dtype=np.int64, count=int(ptr[-1]))
    return ptr, idx


class ParityGame:
    """A finite parity game arena.

    ``owners[i]`` is 0 (Even) or 1 (Odd), ``priorities[i]`` a non-negative
    integer and ``successors[i]`` an ordered tuple of position indices.
    Construction does not validate; use :func:`validate` or
    :meth:`checked`. Predecessor lists and CSR arrays are derived lazily.
    """

    def __init__(self, owners: Sequence[int], priorities: Sequence[int],
                 successors: Sequence[Sequence[int]],
                 names: Optional[Sequence[Optional[str]]] = None,
                 max_priority: Optional[int] = None):
        n = len(owners)
        if len(priorities) != n or len(successors) != n:
            raise ValueError("owners, priorities and successors must have equal length")
        if names is not None and len(names) != n:
            raise ValueError("names must have one entry per position")
        self._owners = tuple(Owner(int(o)) for o in owners)
        self._priorities = tuple(int(p) for p in priorities)
        self._successors = tuple(tuple(int(s) for s in succ) for succ in successors)
        self._names = tuple(names) if names is not None else (None,) * n
        if max_priority is None:
            max_priority = max(self._priorities, default=0)
        self._c = int(max_priority)

    @classmethod
    def checked(cls, *args, **kwargs) -> "ParityGame":
        game = cls(*args, **kwargs)
        problems = validate(game)
        if problems:
            raise InvalidGame(problems)
        return game

    @property
    def n(self) -> int:
        return len(self._owners)

    def __len__(self) -> int:
        return len(self._owners)

    @property
    def c(self) -> int:
        """Largest declared priority."""
        return self._c

    @property
    def owners(self) -> tuple[Owner, ...]:
        return self._owners

    @property
    def priorities(self) -> tuple[int, ...]:
        return self._priorities

    @property
    def successors(self) -> tuple[tuple[int, ...], ...]:
        return self._successors

    @property
    def names(self) -> tuple[Optional[str], ...]:
        return self._names

    def owner(self, v: int) -> Owner:
        return self._owners[v]

    def priority(self, v: int) -> int:
        return self._priorities[v]

    def name(self, v: int) -> Optional[str]:
        return self._names[v]

    @cached_property
    def predecessors(self) -> tuple[tuple[int, ...], ...]:
        preds: list[list[int]] = [[] for _ in range(self.n)]
        for v, succ in enumerate(self._successors):
            for w in succ:
                if 0 <= w < self.n:
                    preds[w].append(v)
        return tuple(tuple(p) for p in preds)

    # array forms used by the attractor kernel and the solvers

    @cached_property
    def owner_array(self) -> np.ndarray:
        a = np.array(self._owners, dtype=np.int8)
        a.flags.writeable = False
        return a

    @cached_property
    def priority_array(self) -> np.ndarray:
        a = np.array(self._priorities, dtype=np.int64)
        a.flags.writeable = False
        return a

    @cached_property
    def succ_csr(self) -> tuple[np.ndarray, np.ndarray]:
        return _csr(self._successors)

    @cached_property
    def pred_csr(self) -> tuple[np.ndarray, np.ndarray]:
        return _csr(self.predecessors)

    def priority_mask(self, h: int) -> np.ndarray:
        """Boolean mask of positions with priority exactly ``h``."""
        cache = self.__dict__.setdefault("_priority_masks", {})
        mask = cache.get(h)
        if mask is None:
            mask = self.priority_array == h
            mask.flags.writeable = False
            cache[h] = mask
        return mask

    def region(self, indices: Iterable[int] = ()) -> Region:
        return Region.of(self.n, indices)

    def all(self) -> Region:
        return Region.full(self.n)

    def none(self) -> Region:
        return Region.empty(self.n)

    def view(self, active: Optional[Region] = None) -> "SubgameView":
        return SubgameView(self, self.all() if active is None else active)

    def swapped(self) -> "ParityGame":
        """Owners swapped and every priority shifted up by one."""
        return ParityGame([1 - o for o in self._owners], [p + 1 for p in self._priorities],
                          self._successors, self._names, self._c + 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ParityGame):
            return NotImplemented
        return (self._owners == other._owners and self._priorities == other._priorities
                and self._successors == other._successors and self._names == other._names)

    def __hash__(self) -> int:
        return hash((self._owners, self._priorities, self._successors, self._names))

    def __repr__(self) -> str:
        return f"ParityGame(n={self.n}, c={self._c})"


class SubgameView:
    """A game together with the region of positions still in play."""

    __slots__ = ("game", "active")

    def __init__(self, game: ParityGame, active: Region):
        if active.universe != game.n:
            raise ValueError("active region does not match the game size")
        self.game = game
        self.active = active

    def __len__(self) -> int:
        return len(self.active)

    def __bool__(self) -> bool:
        return bool(self.active)

    def __contains__(self, v: object) -> bool:
        return v in self.active

    def without(self, region: Region) -> "SubgameView":
        return SubgameView(self.game, self.active - region)

    def restrict(self, region: Region) -> "SubgameView":
        return SubgameView(self.game, self.active & region)

    def positions_with_priority(self, h: int) -> Region:
        return Region(self.active.mask & self.game.priority_mask(h))

    def is_total(self) -> bool:
        """Every active position keeps at least one active successor."""
        mask = self.active.mask
        succ = self.game.successors
        return all(any(mask[w] for w in succ[v]) for v in self.active)

    def induced_game(self, region: Optional[Region] = None) -> tuple[ParityGame, list[int]]:
        """Materialize ``region`` (default: the active set) as a standalone game.

        Returns the game and the list mapping its dense indices back to
        positions of the original arena. Successors outside the region are
        dropped; the caller is responsible for totality.
        """
        region = self.active if region is None else region & self.active
        keep = list(region)
        local = {v: i for i, v in enumerate(keep)}
        g = self.game
        succ = [[local[w] for w in g.successors[v] if w in local] for v in keep]
        return (ParityGame([g.owners[v] for v in keep], [g.priorities[v] for v in keep],
                           succ, [g.names[v] for v in keep]), keep)

    def __repr__(self) -> str:
        return f"SubgameView({self.game!r}, active={len(self.active)})"


def max_active_priority(view: SubgameView) -> Optional[int]:
    mask = view.active.mask
    if not mask.any():
        return None
    return int(view.game.priority_array[mask].max())


# -- validation -------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str
    position: int
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.kind} at {self.position}" + (f": {self.detail}" if self.detail else "")


def validate(game: ParityGame) -> list[Violation]:
    out = []
    n = game.n
    for v in range(n):
        succ = game.successors[v]
        if not succ:
            out.append(Violation("NoSuccessor", v))
        for w in succ:
            if not 0 <= w < n:
                out.append(Violation("DanglingSuccessor", v, f"successor {w}"))
        p = game.priorities[v]
        if not 0 <= p <= game.c:
            out.append(Violation("PriorityOutOfRange", v, f"priority {p} outside [0..{game.c}]"))
    return out


# -- PGSolver format --------------------------------------------------------

_TOKEN = re.compile(r'"(?:[^"\\]|\\.)*"|[^\s"]+')
_INT = re.compile(r"-?\d+")


def _statements(text: str) -> Iterator[tuple[int, str]]:
    """Split on ';' outside quoted names, yielding (line number, statement)."""
    lineno = 1
    stmt_line = None
    in_quote = escape = False
    buf_start = 0
    for i, ch in enumerate(text):
        if stmt_line is None and not ch.isspace():
            stmt_line = lineno
        if in_quote:
            if escape:
                escape = False
            elif ch == "\\":
                escape = True
            elif ch == '"':
                in_quote = False
        elif ch == '"':
            in_quote = True
        elif ch == ";":
            yield stmt_line or lineno, text[buf_start:i]
            buf_start = i + 1
            stmt_line = None
        if ch == "\n":
            lineno += 1
    rest = text[buf_start:]
    if rest.strip():
        if in_quote:
            raise MalformedLine(stmt_line or lineno, rest.strip())
        yield stmt_line or lineno, rest


def _unquote(token: str) -> str:
    return re.sub(r"\\(.)", r"\1", token[1:-1])


def _quote(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def parse_pgsolver(text: str) -> ParityGame:
    """Parse a game in PGSolver format.

    Statements are ``<id> <priority> <owner> <succ,succ,...> ["name"]``
    separated by semicolons, optionally preceded by ``parity <max-id>``.
    Sparse ids are compacted to ``0..n-1`` in ascending order; a position
    whose id moved and which carries no name keeps its id as name.
    """
    rows: dict[int, tuple[int, int, int, list[int], Optional[str]]] = {}
    seen_statement = False
    for lineno, stmt in _statements(text):
        tokens = _TOKEN.findall(stmt)
        if not tokens:
            continue
        head = tokens[0]
        if head in ("parity", "start"):
            if len(tokens) != 2 or not _INT.fullmatch(tokens[1]) or (head == "parity" and seen_statement):
                raise MalformedLine(lineno, stmt.strip())
            continue
        seen_statement = True
        name = None
        if tokens[-1].startswith('"'):
            name = _unquote(tokens[-1])
            tokens = tokens[:-1]
        if any(t.startswith('"') for t in tokens):
            raise MalformedLine(lineno, stmt.strip())
        if len(tokens) < 3 or not all(_INT.fullmatch(t) for t in tokens[:3]):
            raise MalformedLine(lineno, stmt.strip())
        ident, prio, owner = (int(t) for t in tokens[:3])
        if ident < 0 or prio < 0 or owner not in (0, 1):
            raise MalformedLine(lineno, stmt.strip())
        succ_text = " ".join(tokens[3:])
        if not succ_text.strip():
            raise NoSuccessor(ident, lineno)
        succ = []
        for part in succ_text.split(","):
            part = part.strip()
            if not _INT.fullmatch(part) or int(part) < 0:
                raise MalformedLine(lineno, stmt.strip())
            succ.append(int(part))
        if ident in rows:
            raise DuplicateId(ident, lineno)
        rows[ident] = (lineno, prio, owner, succ, name)

    ids = sorted(rows)
    if not ids:
        raise MalformedLine(1, text.strip()[:40])
    dense = {ident: i for i, ident in enumerate(ids)}
    owners, prios, succs, names = [], [], [], []
    for i, ident in enumerate(ids):
        lineno, prio, owner, succ, name = rows[ident]
        mapped = []
        for w in succ:
            if w not in dense:
                raise DanglingSuccessor(w, lineno)
            mapped.append(dense[w])
        if name is None and ident != i:
            name = str(ident)
        owners.append(owner)
        prios.append(prio)
        succs.append(mapped)
        names.append(name)
    return ParityGame(owners, prios, succs, names)


def read_pgsolver(path) -> ParityGame:
    with open(path, encoding="utf-8") as f:
        return parse_pgsolver(f.read())


def write_pgsolver(game: ParityGame) -> str:
    lines = [f"parity {game.n - 1};"]
    for v in range(game.n):
        line = f"{v} {game.priorities[v]} {int(game.owners[v])} " + ",".join(map(str, game.successors[v]))
        name = game.names[v]
        if name is not None:
            line += " " + _quote(name)
        lines.append(line + ";")
    return "\n".join(lines) + "\n"


# -- random generation ------------------------------------------------------

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """The splitmix64 generator; 64-bit outputs from a 64-bit seed."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)


@dataclass(frozen=True)
class GeneratorSpec:
    n: int
    c: int
    d_max: int
    seed: int = 0

    def check(self) -> None:
        if self.n < 1:
            raise InvalidSpec(f"n must be >= 1, got {self.n}")
        if self.c < 0:
            raise InvalidSpec(f"c must be >= 0, got {self.c}")
        if self.d_max < 1:
            raise InvalidSpec(f"d_max must be >= 1, got {self.d_max}")
        if not 0 <= self.seed <= _MASK64:
            raise InvalidSpec(f"seed must be an unsigned 64-bit integer, got {self.seed}")


def generate_random(spec: GeneratorSpec) -> ParityGame:
    """Deterministic random game.

    Per position, in order: owner from the low bit of one draw, priority as
    a draw mod (c+1), out-degree 1 + draw mod d_max, then that many
    successor draws mod n with repeats dropped (first occurrence kept).
    """
    spec.check()
    rng = SplitMix64(spec.seed)
    n, c1, d = spec.n, spec.c + 1, spec.d_max
    owners, prios, succs = [], [], []
    for _ in range(n):
        owners.append(rng.next() & 1)
        prios.append(rng.next() % c1)
        k = 1 + rng.next() % d
        succ = list(dict.fromkeys(rng.next() % n for _ in range(k)))
        succs.append(succ)
    return ParityGame(owners, prios, succs, max_priority=spec.c)
