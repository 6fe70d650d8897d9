"""Simple shapes, general shapes and patterns, and their evaluation to words.

Sides are 1-based indices into the isoperimetrix directions a_1..a_2k.  The
letter used on side i is the highest-boost generator projecting to a_i, and
a block on side i is that letter repeated sigma_i times.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .group import GeneratingSet, SpellingPath, as_letters, evaluate, wedge2
from .planar import Isoperimetrix, isoperimetrix, significant_letters

Word = tuple[int, ...]


class DomainError(ValueError):
    """Evaluation data outside a shape's domain; ``condition`` names the violated rule."""

    def __init__(self, condition: str, detail: str = ""):
        super().__init__(f"{condition}: {detail}" if detail else condition)
        self.condition = condition


@dataclass(frozen=True)
class ShapeContext:
    S: GeneratingSet
    iso: Isoperimetrix
    side_letter: tuple[int, ...]     # 0-based side -> generator index
    sigma: tuple[int, ...]
    N: int

    @property
    def m(self) -> int:
        return len(self.side_letter)

    def letter(self, side: int) -> int:
        """Generator index for a 1-based (cyclic) side."""
        return self.side_letter[(side - 1) % self.m]

    def block(self, side: int) -> Word:
        k = (side - 1) % self.m
        return (self.side_letter[k],) * self.sigma[k]

    def direction(self, side: int) -> tuple[int, int]:
        return self.iso.integer_directions[(side - 1) % self.m]

    def proj(self, word: Sequence[int]) -> tuple[int, int]:
        x = y = 0
        for i in word:
            px, py = self.S.generators[i].projection
            x += px
            y += py
        return x, y

    def c2(self, word: Sequence[int]) -> int:
        return evaluate(word, self.S).c2


@lru_cache(maxsize=64)
def context(S: GeneratingSet) -> ShapeContext:
    iso = isoperimetrix(S)
    letters = tuple(group[0] for group in significant_letters(S, iso))
    return ShapeContext(S, iso, letters, iso.multiplicities, S.swap_lcm_N)


def path_sides(i: int, j: int, m: int) -> list[int]:
    """Sides visited by a shape of type (i, j), 1-based, cyclic.

    For i == j the path runs once around (m sides) and has no closing run.
    """
    stop = j if j > i else j + m
    if i == j:
        stop = i + m - 1
    return [((t - 1) % m) + 1 for t in range(i, stop + 1)]


def _check_sides(i, j, m):
    if not (1 <= i <= m and 1 <= j <= m):
        raise DomainError("side-range", f"sides must lie in 1..{m}, got ({i}, {j})")


# simple shapes -----------------------------------------------------------------

@dataclass(frozen=True)
class SimpleShape:
    i: int
    j: int
    b: tuple[int, ...]
    c: tuple[Word, ...]          # 2k + 1 break words

    @property
    def K(self) -> int:
        return max([0, *self.b, *(len(w) for w in self.c)])

    def break_index(self, r: int) -> int:
        """Index into ``c`` of the break word after run r (r = -1: leading word)."""
        return (self.i + r) % len(self.c)


def _cone_check(sminus, s, splus, same_side):
    if min(sminus, s, splus) < 0:
        raise DomainError("cone", "exponents must be nonnegative")
    if sminus > s or splus > s:
        raise DomainError("cone", f"need s- , s+ <= s, got ({sminus}, {s}, {splus})")
    if same_side and splus != 0:
        raise DomainError("cone0", "a shape starting and ending on one side needs s+ = 0")


def run_exponents(shape_i: int, shape_j: int, m: int, sminus: int, s: int, splus: int) -> list[int]:
    sides = path_sides(shape_i, shape_j, m)
    exps = [s] * len(sides)
    exps[0] = sminus
    if shape_i != shape_j:
        exps[-1] = splus
    return exps


def eval_simple(shape: SimpleShape, sminus: int, s: int, splus: int, S: GeneratingSet,
                check_domain: bool = True) -> SpellingPath:
    ctx = context(S)
    m = ctx.m
    _check_sides(shape.i, shape.j, m)
    if len(shape.b) != m or len(shape.c) != m + 1:
        raise DomainError("arity", f"need {m} corrections and {m + 1} break words")
    if check_domain:
        _cone_check(sminus, s, splus, shape.i == shape.j)
    sides = path_sides(shape.i, shape.j, m)
    exps = run_exponents(shape.i, shape.j, m, sminus, s, splus)
    out = list(shape.c[shape.break_index(-1)])
    for r, (side, e) in enumerate(zip(sides, exps)):
        e += shape.b[side - 1]
        if e < 0:
            raise DomainError("negative-exponent", f"side {side} exponent {e}")
        out.extend(ctx.block(side) * e)
        out.extend(shape.c[shape.break_index(r)])
    return SpellingPath(tuple(out))


def shape_endpoint_length(shape: SimpleShape, sminus, s, splus, S) -> tuple[int, int, int]:
    w = eval_simple(shape, sminus, s, splus, S, check_domain=False)
    a, b = context(S).proj(w.letters)
    return a, b, len(w)


# general shapes ------------------------------------------------------------------

@dataclass(frozen=True)
class GeneralShape:
    i: int
    j: int
    b: tuple[int, ...]
    chi: tuple[tuple[Word, ...], ...]   # (K - 1) rows of 2k break words

    @property
    def K(self) -> int:
        return len(self.chi) + 1


def Lambda(shape: GeneralShape, X: Sequence[Sequence[int]], m: int) -> tuple[int, int, int]:
    """Column sums minus corrections, checked against the domain rules, as (s-, s, s+)."""
    K = shape.K
    if len(X) != K or any(len(row) != m for row in X):
        raise DomainError("arity", f"X must be {K} x {m}")
    if any(x < 0 for row in X for x in row):
        raise DomainError("nonnegative", "run lengths must be >= 0")
    if any(not 0 <= bi <= K for bi in shape.b):
        raise DomainError("corrections", f"b entries must lie in [0, {K}]")
    lam = [sum(X[r][t] for r in range(K)) - shape.b[t] for t in range(m)]
    sides = path_sides(shape.i, shape.j, m)
    first = sides[0]
    if shape.i == shape.j:
        mids, last = sides[1:], None
    else:
        mids, last = sides[1:-1], sides[-1]
    on_path = set(sides)
    for t in range(1, m + 1):
        if t not in on_path and lam[t - 1] != 0:
            raise DomainError("outside-zero", f"side {t} is off the path but lambda = {lam[t - 1]}")
    mid_vals = {lam[t - 1] for t in mids}
    if len(mid_vals) > 1:
        raise DomainError("middle-equal", f"middle sides have lambdas {sorted(mid_vals)}")
    sminus = lam[first - 1]
    splus = lam[last - 1] if last is not None else 0
    if mid_vals:
        s = mid_vals.pop()
        if sminus > s or splus > s:
            raise DomainError("ends-bounded", f"end lambdas ({sminus}, {splus}) exceed {s}")
    else:
        s = max(sminus, splus)
    if sminus < 0 or splus < 0:
        raise DomainError("cone", "end lambdas must be >= 0")
    return sminus, s, splus


def eval_general(shape: GeneralShape, X: Sequence[Sequence[int]], S: GeneratingSet) -> SpellingPath:
    ctx = context(S)
    m = ctx.m
    _check_sides(shape.i, shape.j, m)
    if len(shape.b) != m or any(len(row) != m for row in shape.chi):
        raise DomainError("arity", "b and chi rows need one entry per side")
    Lambda(shape, X, m)
    out: list[int] = []
    for side in path_sides(shape.i, shape.j, m):
        t = side - 1
        for r in range(shape.K):
            out.extend(ctx.block(side) * X[r][t])
            if r < shape.K - 1:
                out.extend(shape.chi[r][t])
    return SpellingPath(tuple(out))


def simple_as_general(shape: SimpleShape, sminus: int, s: int, splus: int, S: GeneratingSet):
    """Embed a simple shape evaluation as a general shape with three rows."""
    ctx = context(S)
    m = ctx.m
    sides = path_sides(shape.i, shape.j, m)
    exps = run_exponents(shape.i, shape.j, m, sminus, s, splus)
    empty: Word = ()
    chi = [[empty] * m for _ in range(2)]
    X = [[0] * m for _ in range(3)]
    first = sides[0] - 1
    chi[0][first] = tuple(shape.c[shape.break_index(-1)])
    X[1][first] = exps[0] + shape.b[first]
    chi[1][first] = tuple(shape.c[shape.break_index(0)])
    for r, side in enumerate(sides[1:], start=1):
        t = side - 1
        X[0][t] = exps[r] + shape.b[t]
        chi[0][t] = tuple(shape.c[shape.break_index(r)])
    b = list(shape.b)
    g = GeneralShape(shape.i, shape.j, tuple(b), tuple(tuple(row) for row in chi))
    return g, [tuple(row) for row in X]


def trace(i: int, j: int, sminus: int, s: int, splus: int, S: GeneratingSet) -> list[tuple[int, int]]:
    """Shadow of the isoperimetrix arc with the same side lengths (vertices only)."""
    ctx = context(S)
    pts = [(0, 0)]
    for side, e in zip(path_sides(i, j, ctx.m), run_exponents(i, j, ctx.m, sminus, s, splus)):
        k = (side - 1) % ctx.m
        dx, dy = ctx.direction(side)
        x, y = pts[-1]
        pts.append((x + e * ctx.sigma[k] * dx, y + e * ctx.sigma[k] * dy))
    return pts


# patterns ------------------------------------------------------------------------

@dataclass(frozen=True)
class Pattern:
    i: int
    c1: Word
    c2: Word
    c3: Word

    @property
    def K(self) -> int:
        return max(len(self.c1), len(self.c2), len(self.c3))


def eval_pattern(w: Pattern, n1: int, n2: int, S: GeneratingSet) -> SpellingPath:
    if n1 < 0 or n2 < 0:
        raise DomainError("negative-exponent", "pattern exponents must be >= 0")
    ctx = context(S)
    _check_sides(w.i, w.i, ctx.m)
    word = w.c1 + (ctx.letter(w.i),) * n1 + w.c2 + (ctx.letter(w.i + 1),) * n2 + w.c3
    return SpellingPath(tuple(word))


# recovering a simple shape from a word ------------------------------------------------

@dataclass(frozen=True)
class ShapeFit:
    shape: SimpleShape
    sminus: int
    s: int
    splus: int

    @property
    def K(self) -> int:
        return self.shape.K


def _runs(word: Word, ctx: ShapeContext):
    """Maximal runs of side letters as (0-based side, start, block count)."""
    side_of = {letter: k for k, letter in enumerate(ctx.side_letter)}
    out = []
    p = 0
    while p < len(word):
        k = side_of.get(word[p])
        if k is None:
            p += 1
            continue
        q = p
        while q < len(word) and word[q] == word[p]:
            q += 1
        blocks = (q - p) // ctx.sigma[k]
        if blocks:
            out.append((k, p, blocks))
        p = q
    return out


def _fit_path(word, ctx, first, count, runs):
    m = ctx.m
    pos = 0
    chosen = []
    for r in range(count):
        k = (first + r) % m
        best = None
        for rk, start, blocks in runs:
            if rk == k and start >= pos and (best is None or blocks > best[2]):
                best = (rk, start, blocks)
        if best is None:
            chosen.append((k, pos, 0))
        else:
            chosen.append(best)
            pos = best[1] + best[2] * ctx.sigma[k]
    exps = [blocks for _, _, blocks in chosen]
    mids = exps[1:-1]
    if mids:
        s = min(mids)
        sminus, splus = min(exps[0], s), min(exps[-1], s)
    else:
        sminus, splus = exps[0], exps[-1]
        s = max(sminus, splus)
    b = [0] * m
    b[chosen[0][0]] = exps[0] - sminus
    b[chosen[-1][0]] = exps[-1] - splus
    for (k, _, _), e in zip(chosen[1:-1], mids):
        b[k] = e - s
    i = first + 1
    j = (first + count - 1) % m + 1
    c = [()] * (m + 1)
    shape_tmp = SimpleShape(i, j, tuple(b), tuple(c))
    cut = 0
    for r, (k, start, blocks) in enumerate(chosen):
        c[shape_tmp.break_index(r - 1)] = tuple(word[cut:start])
        cut = start + blocks * ctx.sigma[k]
    c[shape_tmp.break_index(count - 1)] = tuple(word[cut:])
    return ShapeFit(SimpleShape(i, j, tuple(b), tuple(c)), sminus, s, splus)


def fit_simple_shape(word: SpellingPath | Sequence[int], S: GeneratingSet) -> ShapeFit:
    """Write ``word`` as a simple-shape evaluation, preferring small K.

    Every word admits such a description (break words absorb everything
    else); the search over starting side and number of sides picks the one
    with the smallest K found by a greedy longest-run choice per side.
    """
    word = as_letters(word)
    ctx = context(S)
    runs = _runs(word, ctx)
    best = None
    for first in range(ctx.m):
        for count in range(2, ctx.m + 1):
            fit = _fit_path(word, ctx, first, count, runs)
            if best is None or fit.K < best.K:
                best = fit
    return best

