"""Does every element have a geodesic spelled by a general shape or a rearranged pattern?

The check is exact over a ball: the geodesic DAG (edges from distance n-1 to
n) carries, for each element, the set of automaton states reachable by
reading some geodesic spelling.  Two nondeterministic automata run side by
side for a fixed parameter K:

* shapes: along sides I, I+1, ..., J each side is K runs of its block with
  K-1 break words (length <= K) between them; the column sums x_t must admit
  some s >= 0 and corrections b_t in [0, K] with x_t - b_t = s on middle
  sides and 0 <= x_t - b_t <= s on the two end sides.  Only the interval
  [lo, hi] of admissible s is tracked.
* patterns: c1 a_I^{n1} c2 a_{I+1}^{n2} c3 with |c_i| <= K, after moving
  blocks of a_{I+1} leftward over letters x with x^a_{I+1} > 0 in groups of
  N / (x^a_{I+1}); equivalently, the number of a_{I+1} in front of each
  letter of a_I^{n1} c2 is a multiple of its group size (and 0 when the
  letter cannot be passed).

Elements of negative height are judged through their inverses.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .ball import BallTable
from .group import wedge2
from .shapes import context

log = logging.getLogger(__name__)

INF = 1 << 30
RUN = -1


class _Automaton:
    def __init__(self, S, K: int):
        ctx = context(S)
        self.S, self.K, self.m, self.N = S, K, ctx.m, ctx.N
        self.side_letter = [ctx.letter(t) for t in range(1, self.m + 1)]
        self.sigma = list(ctx.sigma)
        proj = [g.projection for g in S.generators]
        # group size of letter x under blocks of the side-(I+1) letter, 0 if it cannot be passed
        self.group = []
        for I in range(self.m):
            y = proj[self.side_letter[(I + 1) % self.m]]
            row = []
            for x in proj:
                w = wedge2(x, y)
                row.append(self.N // w if w > 0 and self.N % w == 0 else 0)
            self.group.append(row)
        self._sets: dict[frozenset, int] = {}
        self._by_id: list[frozenset] = []
        self._step: dict[tuple[int, int], int] = {}
        self._acc: dict[int, bool] = {}

    # state sets are interned; transitions are memoized on (set id, letter)
    def intern(self, states) -> int:
        fs = frozenset(states)
        sid = self._sets.get(fs)
        if sid is None:
            sid = len(self._by_id)
            self._sets[fs] = sid
            self._by_id.append(fs)
        return sid

    def initial(self) -> int:
        start = [("S", I, 0, 0, RUN, 0, 0, 0, INF) for I in range(self.m)]
        start += [("P", I, 0, 0, 0, 0) for I in range(self.m)]
        return self.intern(self._closure(start))

    def _closure(self, states):
        out = set()
        todo = list(states)
        K, m = self.K, self.m
        while todo:
            q = todo.pop()
            if q in out:
                continue
            out.add(q)
            if q[0] == "S":
                _, I, off, brk, prog, res, x, lo, hi = q
                if prog != RUN:
                    todo.append(("S", I, off, brk, RUN, res, x, lo, hi))
                elif res == 0 and off + 1 < m:
                    lo2 = max(lo, x - K)
                    hi2 = hi if off == 0 else min(hi, x)
                    if lo2 <= hi2:
                        todo.append(("S", I, off + 1, 0, RUN, 0, 0, lo2, hi2))
            else:
                _, I, phase, p, yc, flag = q
                if phase < 4:
                    nxt = phase + 1
                    keep = nxt == 2
                    todo.append(("P", I, nxt, 0, yc if keep else 0, flag if keep else 0))
        return _prune(out)

    def step(self, sid: int, letter: int) -> int:
        key = (sid, letter)
        hit = self._step.get(key)
        if hit is not None:
            return hit
        out = []
        K, m, N = self.K, self.m, self.N
        for q in self._by_id[sid]:
            if q[0] == "S":
                _, I, off, brk, prog, res, x, lo, hi = q
                if prog == RUN:
                    side = (I + off) % m
                    if letter == self.side_letter[side]:
                        r = res + 1
                        if r == self.sigma[side]:
                            out.append(("S", I, off, brk, RUN, 0, x + 1, lo, hi))
                        else:
                            out.append(("S", I, off, brk, RUN, r, x, lo, hi))
                    if res == 0 and brk < K - 1:
                        out.append(("S", I, off, brk + 1, 1, 0, x, lo, hi))
                elif prog < K:
                    out.append(("S", I, off, brk, prog + 1, res, x, lo, hi))
            else:
                _, I, phase, p, yc, flag = q
                y = self.side_letter[(I + 1) % m]
                if phase in (0, 4):
                    if p < K:
                        out.append(("P", I, phase, p + 1, yc, flag))
                    continue
                if letter == y and phase != 3:
                    out.append(("P", I, phase, p, (yc + 1) % N, 1))
                if phase == 3:
                    if letter == y:
                        out.append(q)
                    continue
                if phase == 1 and letter != self.side_letter[I]:
                    continue
                if phase == 2 and p >= K:
                    continue
                d = self.group[I][letter]
                if flag and (d == 0 or yc % d):
                    continue
                out.append(("P", I, phase, p + (phase == 2), yc, flag))
        sid2 = self.intern(self._closure(out))
        self._step[key] = sid2
        return sid2

    def accepts(self, sid: int) -> bool:
        hit = self._acc.get(sid)
        if hit is None:
            hit = False
            for q in self._by_id[sid]:
                if q[0] == "P":
                    hit = True
                    break
                _, I, off, brk, prog, res, x, lo, hi = q
                if prog == RUN and res == 0 and off >= 1 and max(lo, x - self.K) <= hi:
                    hit = True
                    break
            self._acc[sid] = hit
        return hit

    @property
    def distinct_sets(self) -> int:
        return len(self._by_id)


def _prune(states):
    """Drop shape states whose admissible interval is contained in a sibling's."""
    groups: dict[tuple, list] = {}
    rest = []
    for q in states:
        if q[0] == "S":
            groups.setdefault(q[:7], []).append(q)
        else:
            rest.append(q)
    for qs in groups.values():
        if len(qs) == 1:
            rest.append(qs[0])
            continue
        for q in qs:
            if not any(o is not q and o[7] <= q[7] and o[8] >= q[8] and (o[7], o[8]) != (q[7], q[8])
                       for o in qs):
                rest.append(q)
    return rest


def _predecessors(table: BallTable, n: int):
    """For shell n: arrays (element index, predecessor index in shell n-1, letter)."""
    A, B, C = table.shell_elements(n)
    prev = table.shells[n - 1]
    js, ps, ls = [], [], []
    for s, g in enumerate(table.S.generators):
        sa, sb, sc = g.element.a, g.element.b, g.element.c2
        pa, pb = A - sa, B - sb
        pc = C - sc - A * sb + B * sa
        ok = table.packer.in_range(pa, pb, pc)
        keys = table.packer.pack(np.where(ok, pa, 0), np.where(ok, pb, 0), np.where(ok, pc, 0))
        pos = np.minimum(np.searchsorted(prev, keys), len(prev) - 1)
        hit = ok & (prev[pos] == keys)
        idx = np.nonzero(hit)[0]
        js.append(idx)
        ps.append(pos[idx])
        ls.append(np.full(len(idx), s))
    j, p, l = np.concatenate(js), np.concatenate(ps), np.concatenate(ls)
    order = np.argsort(j, kind="stable")
    return j[order], p[order], l[order]


def accepted_by_shell(table: BallTable, K: int) -> tuple[list[np.ndarray], int]:
    """Per shell, a boolean array: some geodesic is a shape or pattern word at parameter K."""
    auto = _Automaton(table.S, K)
    cur = np.array([auto.initial()], dtype=np.int64)
    acc = [np.array([True])]
    for n in range(1, table.radius + 1):
        j, p, l = _predecessors(table, n)
        size = len(table.shells[n])
        merged: list[set | None] = [None] * size
        for jj, pp, ll in zip(j.tolist(), p.tolist(), l.tolist()):
            sid = auto.step(int(cur[pp]), ll)
            if merged[jj] is None:
                merged[jj] = {sid}
            else:
                merged[jj].add(sid)
        nxt = np.empty(size, dtype=np.int64)
        for jj, sids in enumerate(merged):
            if len(sids) == 1:
                nxt[jj] = next(iter(sids))
            else:
                nxt[jj] = auto.intern(set().union(*(auto._by_id[s] for s in sids)))
        cur = nxt
        acc.append(np.array([auto.accepts(int(s)) for s in cur.tolist()]))
        log.debug("K=%d shell %d: %d state sets", K, n, auto.distinct_sets)
    return acc, auto.distinct_sets


@dataclass
class RealizationReport:
    radius: int
    K_max: int
    min_K: dict[int, int]                      # K -> number of elements first covered at K
    uncovered: list[tuple[int, int, int]]      # (a, b, c2)
    size: int
    use_inverse: bool = True
    state_sets: dict[int, int] = field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return not self.uncovered

    def to_json(self) -> dict:
        return {"radius": self.radius, "K_max": self.K_max, "size": self.size,
                "first_covered_at_K": {str(k): v for k, v in sorted(self.min_K.items())},
                "uncovered": [list(t) for t in self.uncovered], "complete": self.complete,
                "negative_heights_via_inverse": self.use_inverse}


def realization_check(table: BallTable, K_max: int = 4, use_inverse: bool = True) -> RealizationReport:
    """Smallest K at which each ball element is covered; stops early once all are."""
    remaining = [np.ones(len(s), dtype=bool) for s in table.shells]
    inverse_pos = []
    for n in range(table.radius + 1):
        A, B, C = table.shell_elements(n)
        inverse_pos.append(np.searchsorted(table.shells[n], table.packer.pack(-A, -B, -C)))
    first: dict[int, int] = {}
    sets: dict[int, int] = {}
    for K in range(1, K_max + 1):
        acc, nsets = accepted_by_shell(table, K)
        sets[K] = nsets
        count = 0
        for n in range(table.radius + 1):
            ok = acc[n]
            if use_inverse:
                C = table.shell_elements(n)[2]
                ok = np.where(C < 0, ok[inverse_pos[n]], ok)
            newly = remaining[n] & ok
            count += int(newly.sum())
            remaining[n] &= ~ok
        first[K] = count
        if not any(r.any() for r in remaining):
            break
    uncovered = []
    for n in range(table.radius + 1):
        A, B, C = table.shell_elements(n)
        idx = np.nonzero(remaining[n])[0]
        uncovered.extend((int(A[i]), int(B[i]), int(C[i])) for i in idx)
    return RealizationReport(table.radius, K_max, first, uncovered, table.size, use_inverse, sets)
