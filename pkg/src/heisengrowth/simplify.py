"""Word simplification toward a simple shape.

Every step keeps the endpoint in the plane, never lengthens the word, and
raises c2 by a nonnegative multiple of 2N:

0. free reduction of adjacent inverse letters;
1. N-block swaps: a letter x jumps over a block y^d with d |x^y| = N whenever
   that raises the height (by exactly N);
2. cash-in: runs u^{kNq} of a non-significant letter become
   a_i^{kNp} a_{i+1}^{kNr} (q u = p a_i + r a_{i+1}) when the height goes up
   by a multiple of N;
3. letters commuting with a run they sit in are moved to its nearer end;
4. balancing: side lengths move along endpoint-preserving, non-lengthening
   directions in steps of N while the height increases.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .group import GeneratingSet, SpellingPath, as_letters, wedge2
from .planar import sector_coordinates
from .shapes import ShapeContext, ShapeFit, context, fit_simple_shape, path_sides
from .surgery import side_relation


@dataclass
class SimplifyResult:
    word: SpellingPath
    fit: ShapeFit
    delta2: int
    log: list[tuple[str, int, int]] = field(default_factory=list)   # (phase, length, c2)


def _proj(ctx, i):
    return ctx.S.generators[i].projection


def free_reduce(word: list[int], ctx: ShapeContext) -> list[int]:
    inv = ctx.S.inverse_index
    out: list[int] = []
    for x in word:
        if out and inv[out[-1]] == x:
            out.pop()
        else:
            out.append(x)
    return out


def block_swaps(word: list[int], ctx: ShapeContext) -> list[int]:
    N = ctx.N
    w = list(word)
    changed = True
    while changed:
        changed = False
        for pos in range(len(w)):
            x = w[pos]
            px = _proj(ctx, x)
            # right neighbour run
            if pos + 1 < len(w):
                y = w[pos + 1]
                wy = wedge2(_proj(ctx, y), px)
                if wy > 0 and N % wy == 0:
                    d = N // wy
                    if w[pos + 1:pos + 1 + d] == [y] * d:
                        w[pos:pos + d + 1] = [y] * d + [x]
                        changed = True
                        break
            if pos >= 1:
                y = w[pos - 1]
                wx = wedge2(px, _proj(ctx, y))
                if wx > 0 and N % wx == 0:
                    d = N // wx
                    if pos >= d and w[pos - d:pos] == [y] * d:
                        w[pos - d:pos + 1] = [x] + [y] * d
                        changed = True
                        break
    return w


def _cash_rules(ctx: ShapeContext):
    """For each non-side letter: (i, p, q, r) with q u = p a_i + r a_{i+1}, q >= p + r."""
    rules = {}
    dirs = ctx.iso.directions
    for u, g in enumerate(ctx.S.generators):
        if u in ctx.side_letter or g.projection == (0, 0):
            continue
        i, fp, fr = sector_coordinates(g.projection, dirs)
        q = math.lcm(Fraction(fp).denominator, Fraction(fr).denominator)
        p, r = int(fp * q), int(fr * q)
        gg = math.gcd(math.gcd(p, q), r)
        p, q, r = p // gg, q // gg, r // gg
        if q >= p + r:
            rules[u] = (i + 1, p, q, r)
    return rules


def cash_in(word: list[int], ctx: ShapeContext) -> list[int]:
    rules = _cash_rules(ctx)
    N = ctx.N
    w = list(word)
    pos = 0
    while pos < len(w):
        u = w[pos]
        if u not in rules:
            pos += 1
            continue
        end = pos
        while end < len(w) and w[end] == u:
            end += 1
        side, p, q, r = rules[u]
        base = ctx.c2(w)
        done = False
        for k in range((end - pos) // (N * q), 0, -1):
            repl = [ctx.letter(side)] * (k * N * p) + [ctx.letter(side + 1)] * (k * N * r)
            cand = w[:pos] + repl + w[pos + k * N * q:]
            d = ctx.c2(cand) - base
            if d >= 0 and d % (2 * N) == 0:
                w = cand
                done = True
                break
        pos = pos + 1 if not done else pos
        if done:
            pos = 0
    return w


def push_commuting(word: list[int], ctx: ShapeContext) -> list[int]:
    """Move a letter that commutes with the run around it to the run's nearer end."""
    w = list(word)
    changed = True
    while changed:
        changed = False
        for pos in range(1, len(w) - 1):
            x = w[pos]
            y = w[pos - 1]
            if y == x or w[pos + 1] != y or wedge2(_proj(ctx, x), _proj(ctx, y)) != 0:
                continue
            lo = pos - 1
            while lo > 0 and w[lo - 1] == y:
                lo -= 1
            hi = pos + 1
            while hi + 1 < len(w) and w[hi + 1] == y:
                hi += 1
            left, right = pos - lo, hi - pos
            run = [y] * (left + right)
            w[lo:hi + 1] = ([x] + run) if left <= right else (run + [x])
            changed = True
            break
    return w


def _side_runs(word, ctx, fit):
    """(side, start, length) for the runs chosen by the fitted shape, in path order."""
    sides = path_sides(fit.shape.i, fit.shape.j, ctx.m)
    out, pos = [], 0
    for side in sides:
        letter = ctx.letter(side)
        best = None
        p = pos
        while p < len(word):
            if word[p] == letter:
                q = p
                while q < len(word) and word[q] == letter:
                    q += 1
                if best is None or q - p > best[1] - best[0]:
                    best = (p, q)
                p = q
            else:
                p += 1
        if best is None:
            out.append((side, pos, 0))
        else:
            out.append((side, best[0], best[1] - best[0]))
            pos = best[1]
    return out


def _apply_delta(word, runs, delta, ctx):
    w = list(word)
    # edit from the back so earlier positions stay valid; at a shared position
    # delete before inserting so new letters are not removed again
    for (side, start, length), d in sorted(zip(runs, delta), key=lambda z: (-z[0][1], z[1] > 0)):
        if d > 0:
            w[start:start] = [ctx.letter(side)] * d
        elif d < 0:
            del w[start:start - d]
    return w


def balance(word: list[int], ctx: ShapeContext) -> list[int]:
    N = ctx.N
    w = list(word)
    while True:
        fit = fit_simple_shape(w, ctx.S)
        runs = _side_runs(w, ctx, fit)
        n = len(runs)
        strips = []
        for t in range(n - 2):
            s1, s2, s3 = runs[t][0], runs[t + 1][0], runs[t + 2][0]
            p, q, r = side_relation(ctx.direction(s1), ctx.direction(s2), ctx.direction(s3))
            v = [0] * n
            v[t], v[t + 1], v[t + 2] = N * p, -N * q, N * r
            strips.append(v)
        moves = [v for v in strips] + [[-x for x in v] for v in strips]
        for a, b in itertools.combinations(strips, 2):
            for sa, sb in ((1, -1), (-1, 1)):
                moves.append([sa * x + sb * y for x, y in zip(a, b)])
        base = ctx.c2(w)
        best, best_gain = None, 0
        for d in moves:
            if sum(d) > 0:
                continue
            if any(length + x < 0 for (_, _, length), x in zip(runs, d)):
                continue
            cand = _apply_delta(w, runs, d, ctx)
            gain = ctx.c2(cand) - base
            if gain > best_gain and gain % (2 * N) == 0:
                best, best_gain = cand, gain
        if best is None:
            return w
        w = best


def simplify(word: SpellingPath | list[int], S: GeneratingSet, max_rounds: int = 50) -> SimplifyResult:
    ctx = context(S)
    w = list(as_letters(word))
    c_start = ctx.c2(w)
    log = [("input", len(w), c_start)]
    w = free_reduce(w, ctx)
    log.append(("reduce", len(w), ctx.c2(w)))
    for _ in range(max_rounds):
        before = w
        w = block_swaps(w, ctx)
        w = cash_in(w, ctx)
        w = free_reduce(w, ctx)
        if w == before:
            break
    log.append(("reorder+cash", len(w), ctx.c2(w)))
    w = push_commuting(w, ctx)
    w = free_reduce(w, ctx)
    log.append(("corners", len(w), ctx.c2(w)))
    w = balance(w, ctx)
    log.append(("balance", len(w), ctx.c2(w)))
    fit = fit_simple_shape(w, S)
    return SimplifyResult(SpellingPath(tuple(w)), fit, ctx.c2(w) - c_start, log)
