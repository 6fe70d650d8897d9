"""Highest heights over a planar point and the height intervals swept by patterns.

Heights are doubled (c2) throughout.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .group import GeneratingSet, SpellingPath, evaluate, wedge2
from .planar import angle_key
from .shapes import Pattern, context, eval_pattern


# highest height ---------------------------------------------------------------

def _best_letters(S: GeneratingSet) -> dict[tuple[int, int], int]:
    """Projection -> the letter with the largest boost among those projecting there."""
    best: dict[tuple[int, int], int] = {}
    for i, g in enumerate(S.generators):
        p = g.projection
        if p == (0, 0):
            continue
        if p not in best or g.boost2 > S.generators[best[p]].boost2:
            best[p] = i
    return best


@lru_cache(maxsize=16)
def _planar_distances(S: GeneratingSet, radius: int) -> dict[tuple[int, int], int]:
    steps = list(_best_letters(S))
    dist = {(0, 0): 0}
    frontier = [(0, 0)]
    for n in range(1, radius + 1):
        nxt = []
        for x, y in frontier:
            for dx, dy in steps:
                p = (x + dx, y + dy)
                if p not in dist:
                    dist[p] = n
                    nxt.append(p)
        frontier = nxt
    return dist


def minimal_multisets(a: int, b: int, S: GeneratingSet) -> tuple[int, list[dict[int, int]]]:
    """n0(a, b) and every multiset of best letters of size n0 with projected sum (a, b)."""
    best = _best_letters(S)
    projs = sorted(best)
    # a radius bound: walk with the coordinate steps, if present, else grow until found
    radius = 4
    while True:
        dist = _planar_distances(S, radius)
        if (a, b) in dist:
            break
        radius *= 2
    n0 = dist[(a, b)]
    out: list[dict[int, int]] = []

    def rec(t, rem, left, chosen):
        if left == 0:
            if rem == (0, 0):
                out.append({best[projs[k]]: c for k, c in chosen.items() if c})
            return
        if t == len(projs) or dist.get(rem, math.inf) > left:
            return
        dx, dy = projs[t]
        for c in range(left, -1, -1):
            r = (rem[0] - c * dx, rem[1] - c * dy)
            if dist.get(r, math.inf) <= left - c:
                chosen[t] = c
                rec(t + 1, r, left - c, chosen)
                chosen[t] = 0

    rec(0, (a, b), n0, {})
    return n0, out


def convex_order(counts: dict[int, int], v: tuple[int, int], S: GeneratingSet) -> tuple[int, ...]:
    """Letters sorted counterclockwise starting just after the direction of -v (largest area)."""
    start = angle_key((-v[0], -v[1])) if v != (0, 0) else angle_key((1, 0))

    def key(i):
        k = angle_key(S.generators[i].projection)
        return (not start < k, k)

    word: list[int] = []
    for i in sorted(counts, key=key):
        word.extend([i] * counts[i])
    return tuple(word)


def highest_height2(a: int, b: int, S: GeneratingSet) -> tuple[int, SpellingPath]:
    """Doubled W(a, b): the top height over (a, b) among shortest planar spellings, and a witness."""
    n0, multisets = minimal_multisets(a, b, S)
    if n0 == 0:
        return 0, SpellingPath(())
    best = None
    for ms in multisets:
        w = convex_order(ms, (a, b), S)
        c2 = evaluate(w, S).c2
        if best is None or c2 > best[0]:
            best = (c2, w)
    return best[0], SpellingPath(best[1])


# height intervals ----------------------------------------------------------------

@dataclass(frozen=True)
class HeightInterval:
    """Doubled heights lo, lo + step, ..., hi (empty when lo > hi)."""

    base: tuple[int, int]
    lo: int
    hi: int
    step: int
    top: int          # height of the unrearranged pattern word
    ceiling: int      # 2W

    @property
    def empty(self) -> bool:
        return self.lo > self.hi

    @property
    def values(self) -> list[int]:
        return [] if self.empty else list(range(self.lo, self.hi + 1, self.step))

    def __contains__(self, c2: int) -> bool:
        return not self.empty and self.lo <= c2 <= self.hi and (c2 - self.lo) % self.step == 0


def _moves(word: tuple[int, ...], y: int, S: GeneratingSet, N: int):
    """Positions where a block y^d can jump left over x, lowering c2 by 2N."""
    py = S.generators[y].projection
    for pos in range(len(word) - 1):
        x = word[pos]
        w = wedge2(S.generators[x].projection, py)
        if w <= 0 or N % w:
            continue
        d = N // w
        if word[pos + 1:pos + 1 + d] == (y,) * d:
            yield pos, d


def _jump(word, pos, d):
    return word[:pos] + word[pos + 1:pos + 1 + d] + (word[pos],) + word[pos + 1 + d:]


def lowering_greedy(word: tuple[int, ...], y: int, S: GeneratingSet) -> int:
    """Number of N-steps the greedy process takes (leftmost available jump first)."""
    N = S.swap_lcm_N
    steps = 0
    while True:
        mv = next(_moves(word, y, S, N), None)
        if mv is None:
            return steps
        word = _jump(word, *mv)
        steps += 1


def _lowering_states(word, y, S, max_states=200_000) -> dict[tuple[int, ...], int]:
    N = S.swap_lcm_N
    seen = {word: 0}
    q = deque([word])
    while q:
        w = q.popleft()
        for pos, d in _moves(w, y, S, N):
            nw = _jump(w, pos, d)
            if nw not in seen:
                if len(seen) >= max_states:
                    raise MemoryError("rearrangement state budget exhausted")
                seen[nw] = seen[w] + 1
                q.append(nw)
    return seen


def lowering_exhaustive(word: tuple[int, ...], y: int, S: GeneratingSet, max_states: int = 200_000) -> set[int]:
    """All step counts reachable by any sequence of block jumps."""
    return set(_lowering_states(word, y, S, max_states).values())


def pattern_interval(w: Pattern, n1: int, n2: int, S: GeneratingSet, W2: int | None = None,
                     exhaustive_upto: int = 30) -> HeightInterval:
    """Doubled heights reachable by lowering the pattern word, within [0, W2]."""
    word = eval_pattern(w, n1, n2, S).letters
    g = evaluate(word, S)
    if W2 is None:
        W2 = highest_height2(g.a, g.b, S)[0]
    ctx = context(S)
    y = ctx.letter(w.i + 1)
    step = 2 * S.swap_lcm_N
    if len(word) <= exhaustive_upto:
        # each jump removes one quantum, so the reachable counts are 0..kmax
        kmax = max(lowering_exhaustive(word, y, S))
    else:
        kmax = lowering_greedy(word, y, S)
    top, bottom = g.c2, g.c2 - kmax * step
    hi = top if top <= W2 else top - math.ceil((top - W2) / step) * step
    lo = bottom if bottom >= 0 else bottom + math.ceil(-bottom / step) * step
    return HeightInterval((g.a, g.b), lo, hi, step, top, W2)


def rearrangement(w: Pattern, n1: int, n2: int, target_c2: int, S: GeneratingSet,
                  exhaustive_upto: int = 30) -> SpellingPath:
    """A word of the same length reaching ``target_c2`` by block jumps."""
    word = eval_pattern(w, n1, n2, S).letters
    y = context(S).letter(w.i + 1)
    N = S.swap_lcm_N
    c2 = evaluate(word, S).c2
    if len(word) <= exhaustive_upto and target_c2 <= c2 and (c2 - target_c2) % (2 * N) == 0:
        k = (c2 - target_c2) // (2 * N)
        for v, depth in _lowering_states(word, y, S).items():
            if depth == k:
                return SpellingPath(v)
    while c2 > target_c2:
        mv = next(_moves(word, y, S, N), None)
        if mv is None:
            raise ValueError("target height is below the pattern's reach")
        word = _jump(word, *mv)
        c2 -= 2 * N
    if c2 != target_c2:
        raise ValueError("target height is not in the pattern's residue class")
    return SpellingPath(word)
