"""Breadth-first enumeration of word-metric balls.

Elements are packed into int64 keys by a mixed radix whose bounds come from
the radius.  Each shell is a sorted key array; a new shell is the set of
neighbours of the current one minus the previous and current shells, which
is enough in an undirected Cayley graph.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .group import GeneratingSet, GroupElement, SpellingPath

log = logging.getLogger(__name__)

_KEY_LIMIT = 2 ** 62


class BudgetExceeded(MemoryError):
    """Raised when the ball does not fit the memory budget.

    ``partial`` holds the table up to ``last_shell``.
    """

    def __init__(self, last_shell: int, partial: "BallTable"):
        super().__init__(f"memory budget exceeded; last completed shell is {last_shell}")
        self.last_shell = last_shell
        self.partial = partial


@dataclass(frozen=True)
class KeyPacker:
    amax: int
    bmax: int
    cmax: int

    @classmethod
    def for_radius(cls, S: GeneratingSet, R: int) -> "KeyPacker":
        ma = max(abs(g.element.a) for g in S)
        mb = max(abs(g.element.b) for g in S)
        mc = max(abs(g.element.c2) for g in S)
        R = max(R, 1)
        packer = cls(R * ma, R * mb, R * mc + R * R * ma * mb)
        if (2 * packer.amax + 1) * (2 * packer.bmax + 1) * (2 * packer.cmax + 1) >= _KEY_LIMIT:
            raise OverflowError(f"radius {R} too large for 64-bit keys")
        return packer

    @property
    def nb(self) -> int:
        return 2 * self.bmax + 1

    @property
    def nc(self) -> int:
        return 2 * self.cmax + 1

    def pack(self, a, b, c2):
        return ((np.asarray(a, dtype=np.int64) + self.amax) * self.nb
                + (np.asarray(b, dtype=np.int64) + self.bmax)) * self.nc \
            + (np.asarray(c2, dtype=np.int64) + self.cmax)

    def unpack(self, keys):
        keys = np.asarray(keys, dtype=np.int64)
        c2 = keys % self.nc - self.cmax
        rest = keys // self.nc
        b = rest % self.nb - self.bmax
        a = rest // self.nb - self.amax
        return a, b, c2

    def in_range(self, a, b, c2):
        return (np.abs(a) <= self.amax) & (np.abs(b) <= self.bmax) & (np.abs(c2) <= self.cmax)


def _letter_arrays(S: GeneratingSet):
    ga = np.array([g.element.a for g in S], dtype=np.int64)
    gb = np.array([g.element.b for g in S], dtype=np.int64)
    gc = np.array([g.element.c2 for g in S], dtype=np.int64)
    return ga, gb, gc


def right_multiply(a, b, c2, s: GroupElement):
    """Vectorized (a, b, c2) * s."""
    return a + s.a, b + s.b, c2 + s.c2 + a * s.b - b * s.a


@dataclass
class BallTable:
    S: GeneratingSet
    radius: int
    packer: KeyPacker
    shells: list[np.ndarray]
    preds: list[np.ndarray] | None = None

    @property
    def sigma(self) -> list[int]:
        return [len(s) for s in self.shells]

    @property
    def beta(self) -> list[int]:
        return list(np.cumsum(self.sigma).tolist())

    @property
    def size(self) -> int:
        return int(sum(self.sigma))

    @cached_property
    def _index(self):
        keys = np.concatenate(self.shells)
        dist = np.concatenate([np.full(len(s), n, dtype=np.int16) for n, s in enumerate(self.shells)])
        order = np.argsort(keys, kind="stable")
        return keys[order], dist[order]

    def shell_elements(self, n: int):
        return self.packer.unpack(self.shells[n])

    def all_elements(self):
        a, b, c2 = self.packer.unpack(np.concatenate(self.shells))
        dist = np.concatenate([np.full(len(s), n, dtype=np.int16) for n, s in enumerate(self.shells)])
        return a, b, c2, dist

    def lookup(self, a, b, c2) -> np.ndarray:
        """Distances for arrays of elements; -1 where outside the ball."""
        a, b, c2 = (np.asarray(x, dtype=np.int64) for x in (a, b, c2))
        ok = self.packer.in_range(a, b, c2)
        keys = self.packer.pack(np.where(ok, a, 0), np.where(ok, b, 0), np.where(ok, c2, 0))
        skeys, sdist = self._index
        pos = np.searchsorted(skeys, keys)
        pos = np.minimum(pos, len(skeys) - 1)
        found = ok & (skeys[pos] == keys)
        return np.where(found, sdist[pos], -1).astype(np.int64)

    def dist(self, g: GroupElement) -> int | None:
        d = int(self.lookup([g.a], [g.b], [g.c2])[0])
        return None if d < 0 else d

    def __contains__(self, g: GroupElement) -> bool:
        return self.dist(g) is not None

    def pred_letter(self, g: GroupElement) -> int:
        d = self.dist(g)
        if d is None:
            raise KeyError(f"{g} outside the ball of radius {self.radius}")
        if d == 0:
            raise ValueError("the identity has no predecessor")
        if self.preds is not None:
            key = self.packer.pack(g.a, g.b, g.c2)
            shell = self.shells[d]
            return int(self.preds[d][np.searchsorted(shell, key)])
        for i, s in enumerate(self.S):
            h = g * s.element.__invert__()
            if self.dist(h) == d - 1:
                return i
        raise RuntimeError("inconsistent table")  # pragma: no cover


def bfs_ball(S: GeneratingSet, R: int, memory_budget: int | None = None,
             store_pred: bool = True) -> BallTable:
    """Exact ball of radius R.  ``memory_budget`` is in bytes."""
    if R < 0:
        raise ValueError("radius must be nonnegative")
    packer = KeyPacker.for_radius(S, R)
    ga, gb, gc = _letter_arrays(S)
    identity = packer.pack(0, 0, 0).reshape(1)
    shells = [identity]
    preds = [np.zeros(1, dtype=np.int8)] if store_pred else None
    table = BallTable(S, 0, packer, shells, preds)
    used = identity.nbytes
    prev = np.empty(0, dtype=np.int64)
    for n in range(1, R + 1):
        cur = shells[-1]
        a, b, c2 = packer.unpack(cur)
        cand = np.concatenate([packer.pack(a + ga[i], b + gb[i], c2 + gc[i] + a * gb[i] - b * ga[i])
                               for i in range(len(S))])
        letters = np.repeat(np.arange(len(S), dtype=np.int8), len(cur))
        # np.unique with return_index keeps the first occurrence, i.e. the lowest letter
        new, first = np.unique(cand, return_index=True)
        keep = ~np.isin(new, cur, assume_unique=True)
        if len(prev):
            keep &= ~np.isin(new, prev, assume_unique=True)
        new = new[keep]
        used += new.nbytes + (new.size if store_pred else 0)
        if memory_budget is not None and used + cand.nbytes > memory_budget:
            table.radius = n - 1
            raise BudgetExceeded(n - 1, table)
        shells.append(new)
        if store_pred:
            preds.append(letters[first[keep]])
        prev = cur
        table.radius = n
        log.debug("shell %d: %d elements", n, len(new))
    return table


def geodesic(table: BallTable, g: GroupElement) -> SpellingPath:
    d = table.dist(g)
    if d is None:
        raise KeyError(f"{g} outside the ball of radius {table.radius}")
    letters = []
    S = table.S
    while d > 0:
        i = table.pred_letter(g)
        letters.append(i)
        g = g * S[S.inverse_index[i]].element
        d -= 1
    return SpellingPath(tuple(reversed(letters)))


@dataclass
class FiberProfile:
    base: tuple[int, int]
    n0: int
    w: dict[int, int] = field(default_factory=dict)

    @property
    def W(self) -> int:
        return self.w[self.n0]


def fiber_profile(table: BallTable, a: int, b: int) -> FiberProfile:
    """w_n = max doubled height over the fiber reachable with at most n letters."""
    A, B, C, D = table.all_elements()
    mask = (A == a) & (B == b)
    if not mask.any():
        raise ValueError(f"fiber over ({a}, {b}) is empty within radius {table.radius}")
    c, d = C[mask], D[mask]
    n0 = int(d.min())
    w = {n: int(c[d <= n].max()) for n in range(n0, table.radius + 1)}
    return FiberProfile((a, b), n0, w)


def planar_word_length(a: int, b: int, projections) -> int:
    """n0(a, b): word length of (a, b) in Z^2 with the given steps."""
    steps = {tuple(p) for p in projections if tuple(p) != (0, 0)}
    target = (a, b)
    if target == (0, 0):
        return 0
    seen = {(0, 0)}
    frontier = [(0, 0)]
    n = 0
    while frontier:
        n += 1
        nxt = []
        for x, y in frontier:
            for dx, dy in steps:
                p = (x + dx, y + dy)
                if p == target:
                    return n
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    raise ValueError("steps do not generate the target")  # pragma: no cover


def walk_word(S: GeneratingSet, letters) -> list[GroupElement]:
    """Prefix evaluations of a word, identity first."""
    out = [GroupElement(0, 0, 0)]
    for i in letters:
        out.append(out[-1] * S[i].element)
    return out


def ball_dict(table: BallTable) -> dict[tuple[int, int, int], int]:
    A, B, C, D = table.all_elements()
    return dict(zip(zip(A.tolist(), B.tolist(), C.tolist()), D.tolist()))


__all__ = ["BallTable", "BudgetExceeded", "FiberProfile", "KeyPacker", "bfs_ball", "geodesic",
           "fiber_profile", "planar_word_length", "right_multiply", "ball_dict", "walk_word"]
