"""Two- and three-sided surgeries on consecutive sides, and unsimplification.

Heights here are doubled (c2).  A surgery on side i acts on a subword
a_{i-1}^{s1} c1 a_i^{s2} c2 a_{i+1}^{s3}; both keep the endpoint in the plane.
The three-sided one removes 2Np letters a_{i-1} and 2Nr letters a_{i+1} and
adds 2Nq letters a_i, where q a_i = p a_{i-1} + r a_{i+1}.  The two-sided one
moves 3Np letters a_{i-1} past c1 into the a_i run with k inversions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .group import GeneratingSet, SpellingPath, as_letters, wedge2
from .shapes import ShapeContext, context, fit_simple_shape, path_sides


class SurgeryError(ValueError):
    pass


def side_relation(u: tuple[int, int], v: tuple[int, int], w: tuple[int, int]) -> tuple[int, int, int]:
    """Coprime p, q, r >= 0 with q v = p u + r w (p = r = 1, q = 0 when w = -u)."""
    det = wedge2(u, w)
    if det == 0:
        # parallel: p u + r w = 0
        gu = math.gcd(*u)
        gw = math.gcd(*w)
        p, r = gw, gu
        g = math.gcd(p, r)
        return p // g, 0, r // g
    alpha = Fraction(wedge2(v, w), det)
    beta = Fraction(wedge2(u, v), det)
    q = math.lcm(alpha.denominator, beta.denominator)
    p, r = int(alpha * q), int(beta * q)
    g = math.gcd(math.gcd(p, q), r)
    return p // g, q // g, r // g


@dataclass(frozen=True)
class Triple:
    """Positions of a_{i-1}^{s1} c1 a_i^{s2} c2 a_{i+1}^{s3} inside a word (half-open spans)."""

    side: int
    run1: tuple[int, int]
    run2: tuple[int, int]
    run3: tuple[int, int]

    @property
    def s1(self):
        return self.run1[1] - self.run1[0]

    @property
    def s2(self):
        return self.run2[1] - self.run2[0]

    @property
    def s3(self):
        return self.run3[1] - self.run3[0]


def _maximal_runs(word, letter):
    out, p = [], 0
    while p < len(word):
        if word[p] == letter:
            q = p
            while q < len(word) and word[q] == letter:
                q += 1
            out.append((p, q))
            p = q
        else:
            p += 1
    return out


def locate(word: Sequence[int], side: int, S: GeneratingSet) -> Triple:
    """The longest a_side run, with the nearest a_{side-1} run before and a_{side+1} run after."""
    ctx = context(S)
    word = as_letters(word)
    mids = _maximal_runs(word, ctx.letter(side))
    if not mids:
        raise SurgeryError(f"no run of side {side} letters")
    run2 = max(mids, key=lambda r: (r[1] - r[0], -r[0]))
    before = [r for r in _maximal_runs(word, ctx.letter(side - 1)) if r[1] <= run2[0]]
    after = [r for r in _maximal_runs(word, ctx.letter(side + 1)) if r[0] >= run2[1]]
    if not before or not after:
        raise SurgeryError(f"side {side} lacks a neighbouring run on one side")
    return Triple(side, before[-1], run2, after[0])


def _pqr(ctx: ShapeContext, side: int):
    return side_relation(ctx.direction(side - 1), ctx.direction(side), ctx.direction(side + 1))


def _boost2(ctx, side):
    return ctx.S.generators[ctx.letter(side)].boost2


def three_sided_delta2(word: Sequence[int], t: Triple, S: GeneratingSet) -> int:
    """Predicted change of c2 under the three-sided surgery (negative lowers).

    The area part is twice 2Np(a1^c1) + 2Np s2 (a1^a2) + 2N^2 pr (a1^a3) + 2Nr (c2^a3);
    boosts of removed and added letters are added on top.
    """
    ctx = context(S)
    word = as_letters(word)
    N = ctx.N
    p, q, r = _pqr(ctx, t.side)
    a1, a2, a3 = (ctx.direction(t.side + d) for d in (-1, 0, 1))
    c1 = ctx.proj(word[t.run1[1]:t.run2[0]])
    c2 = ctx.proj(word[t.run2[1]:t.run3[0]])
    area = (2 * N * p * wedge2(a1, c1) + 2 * N * p * t.s2 * wedge2(a1, a2)
            + 2 * N * N * p * r * wedge2(a1, a3) + 2 * N * r * wedge2(c2, a3))
    boost = 2 * N * (-p * _boost2(ctx, t.side - 1) + q * _boost2(ctx, t.side) - r * _boost2(ctx, t.side + 1))
    return -2 * area + boost


def two_sided_delta2(word: Sequence[int], t: Triple, k: int, S: GeneratingSet) -> int:
    """Predicted c2 change of the two-sided surgery with k inversions: -2(3Np(a1^c1) + k(a1^a2))."""
    ctx = context(S)
    word = as_letters(word)
    p, _, _ = _pqr(ctx, t.side)
    a1, a2 = ctx.direction(t.side - 1), ctx.direction(t.side)
    c1 = ctx.proj(word[t.run1[1]:t.run2[0]])
    return -2 * (3 * ctx.N * p * wedge2(a1, c1) + k * wedge2(a1, a2))


@dataclass(frozen=True)
class SurgeryResult:
    word: SpellingPath
    delta2: int
    p: int
    q: int
    r: int


def surgery_3(word: SpellingPath | Sequence[int], side: int, S: GeneratingSet,
              triple: Triple | None = None) -> SurgeryResult:
    ctx = context(S)
    word = as_letters(word)
    t = triple or locate(word, side, S)
    p, q, r = _pqr(ctx, side)
    N = ctx.N
    if t.s1 < 2 * N * p or t.s3 < 2 * N * r:
        raise SurgeryError(f"runs too short for the three-sided surgery (need {2 * N * p}, {2 * N * r})")
    delta = three_sided_delta2(word, t, S)
    new = (word[:t.run1[1] - 2 * N * p] + word[t.run1[1]:t.run2[1]]
           + (ctx.letter(side),) * (2 * N * q) + word[t.run2[1]:t.run3[0]]
           + word[t.run3[0] + 2 * N * r:])
    return SurgeryResult(SpellingPath(new), delta, p, q, r)


def _interleave(moved: int, stay: int, k: int, x: int, y: int) -> tuple[int, ...]:
    """x^moved and y^stay with exactly k (y before x) pairs, inversions loaded onto the last x letters."""
    before = []
    left = k
    for _ in range(moved):
        take = min(left, stay)
        before.append(take)
        left -= take
    before.reverse()           # nondecreasing counts of y in front of each x
    out, placed = [], 0
    for cnt in before:
        out.extend([y] * (cnt - placed))
        placed = cnt
        out.append(x)
    out.extend([y] * (stay - placed))
    return tuple(out)


def surgery_2(word: SpellingPath | Sequence[int], side: int, k: int, S: GeneratingSet,
              triple: Triple | None = None) -> SurgeryResult:
    ctx = context(S)
    word = as_letters(word)
    t = triple or locate(word, side, S)
    p, q, r = _pqr(ctx, side)
    width = 3 * ctx.N * p
    if t.s1 < width:
        raise SurgeryError(f"run of side {side - 1} too short for the two-sided surgery (need {width})")
    if not 0 <= k <= width * (t.s2 - 1):
        raise SurgeryError(f"k must lie in [0, {width * max(t.s2 - 1, 0)}]")
    delta = two_sided_delta2(word, t, k, S)
    w = _interleave(width, t.s2 - 1, k, ctx.letter(side - 1), ctx.letter(side))
    new = (word[:t.run1[1] - width] + word[t.run1[1]:t.run2[0]] + w
           + (ctx.letter(side),) + word[t.run2[1]:])
    return SurgeryResult(SpellingPath(new), delta, p, q, r)


@dataclass
class UnsimplifyResult:
    word: SpellingPath
    three_sided: int
    two_sided_k: int | None
    side: int


def unsimplify(word: SpellingPath | Sequence[int], target_c2: int, S: GeneratingSet,
               side: int | None = None) -> UnsimplifyResult:
    """Lower a (simple-shape) word to height ``target_c2`` on one full side.

    Three-sided surgeries run while the remaining drop is at least
    (2SS)_0 + (3SS); one two-sided surgery then absorbs the rest.
    """
    ctx = context(S)
    word = as_letters(word)
    drop = ctx.c2(word) - target_c2
    if drop == 0:
        return UnsimplifyResult(SpellingPath(word), 0, None, side or 0)
    if drop < 0:
        raise SurgeryError("target lies above the word's height")
    if drop % (2 * ctx.N):
        raise SurgeryError(f"height drop {drop} is not a multiple of 2N = {2 * ctx.N}")
    if side is None:
        side = _full_side(word, S)
    count = 0
    while True:
        t = locate(word, side, S)
        base = -two_sided_delta2(word, t, 0, S)
        if drop < base:
            raise SurgeryError(f"drop {drop} is below the two-sided threshold {base}")
        three = -three_sided_delta2(word, t, S)
        if three > 0 and drop >= base + three:
            res = surgery_3(word, side, S, t)
            word = res.word.letters
            drop += res.delta2
            count += 1
            continue
        step = 2 * wedge2(ctx.direction(side - 1), ctx.direction(side))
        if (drop - base) % step:
            raise SurgeryError("no two-sided surgery matches the remaining drop")
        k = (drop - base) // step
        res = surgery_2(word, side, k, S, t)
        return UnsimplifyResult(res.word, count, k, side)


def _full_side(word, S) -> int:
    """A middle side of the fitted shape with the longest run."""
    ctx = context(S)
    fit = fit_simple_shape(word, S)
    sides = path_sides(fit.shape.i, fit.shape.j, ctx.m)
    mids = sides[1:-1] if fit.shape.i != fit.shape.j else sides[1:-1]
    if not mids:
        raise SurgeryError("fewer than three sides: no full side")
    best, best_len = None, -1
    for sd in mids:
        try:
            t = locate(word, sd, S)
        except SurgeryError:
            continue
        if t.s2 > best_len:
            best, best_len = sd, t.s2
    if best is None:
        raise SurgeryError("no full side with neighbouring runs")
    return best
