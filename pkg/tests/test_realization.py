import itertools
from functools import lru_cache

import numpy as np
import pytest

from heisengrowth.ball import ball_dict, bfs_ball
from heisengrowth.group import GroupElement, preset, wedge2
from heisengrowth.realization import accepted_by_shell, realization_check
from heisengrowth.shapes import context


# direct parsers used as the oracle ---------------------------------------------

def is_shape_word(word, S, K):
    ctx = context(S)
    m = ctx.m

    def sides_split(pos, side, count):
        """Yield lists of column sums for sides side..side+count-1 consuming word[pos:]."""
        if count == 0:
            if pos == len(word):
                yield []
            return
        letter = ctx.letter(side)
        for end, x in side_chunks(pos, letter, K - 1):
            for rest in sides_split(end, side + 1, count - 1):
                yield [x] + rest

    def side_chunks(pos, letter, breaks):
        # run of letter, then optionally a break (1..K letters) and recurse
        q = pos
        while True:
            yield q, q - pos
            if breaks > 0:
                for L in range(1, K + 1):
                    if q + L <= len(word):
                        for end, x in side_chunks(q + L, letter, breaks - 1):
                            yield end, (q - pos) + x
            if q < len(word) and word[q] == letter:
                q += 1
            else:
                return

    for I in range(1, m + 1):
        for count in range(2, m + 1):
            for xs in sides_split(0, I, count):
                mids = xs[1:-1]
                lo = max(0, xs[0] - K, xs[-1] - K, *(x - K for x in mids))
                hi = min(mids) if mids else 10 ** 9
                if lo <= hi:
                    return True
    return False


def is_pattern_word(word, S, K):
    ctx = context(S)
    N = ctx.N
    proj = [g.projection for g in S.generators]
    for I in range(1, ctx.m + 1):
        aI, y = ctx.letter(I), ctx.letter(I + 1)
        for i in range(min(K, len(word)) + 1):
            for j in range(max(i, len(word) - K), len(word) + 1):
                M = word[i:j]
                ypos = [k for k, l in enumerate(M) if l == y]
                for r in range(len(ypos) + 1):
                    for moved in itertools.combinations(ypos, r):
                        moved = set(moved)
                        X = [(k, l) for k, l in enumerate(M) if k not in moved]
                        # trailing y's are unmoved; strip them
                        while X and X[-1][1] == y and all(k < X[-1][0] for k in moved):
                            X.pop()
                        # X must be aI^n1 c2 with |c2| <= K
                        t = 0
                        while t < len(X) and X[t][1] == aI:
                            t += 1
                        if len(X) - t > K:
                            continue
                        ok = True
                        for k, l in X:
                            c = sum(1 for mk in moved if mk < k)
                            if c:
                                w = wedge2(proj[l], proj[y])
                                if w <= 0 or N % w or c % (N // w):
                                    ok = False
                                    break
                        if ok:
                            return True
    return False


def geodesic_words(S, R):
    T = bfs_ball(S, R, store_pred=False)
    dist = ball_dict(T)
    gens = [g.element for g in S.generators]
    words = {(0, 0, 0): [()]}
    by_dist = sorted(dist, key=dist.get)
    for t in by_dist[1:]:
        g = GroupElement(*t)
        out = []
        for s, e in enumerate(gens):
            p = (g * e.__invert__()).as_tuple()
            if dist.get(p) == dist[t] - 1:
                out.extend(w + (s,) for w in words[p])
        words[t] = out
    return T, words


@pytest.mark.parametrize("name,R", [("std", 6), ("abAB", 4), ("hex", 5)])
@pytest.mark.parametrize("K", [1, 2])
def test_automaton_matches_direct_parsing(name, R, K):
    S = preset(name)
    T, words = geodesic_words(S, R)
    acc, _ = accepted_by_shell(T, K)
    for n in range(R + 1):
        A, B, C = T.shell_elements(n)
        for idx in range(len(A)):
            t = (int(A[idx]), int(B[idx]), int(C[idx]))
            expect = any(is_shape_word(w, S, K) or is_pattern_word(w, S, K) for w in words[t])
            assert bool(acc[n][idx]) == expect, (t, K)


def test_generators_covered_at_K1():
    for name in ("std", "abAB", "hex"):
        S = preset(name)
        T = bfs_ball(S, 1)
        acc, _ = accepted_by_shell(T, 1)
        assert acc[1].all()


def test_center_generator_via_square():
    S = preset("std")
    assert is_shape_word(S.parse_word("e1 e2 -e1 -e2").letters, S, 1)
    T = bfs_ball(S, 4)
    rep = realization_check(T, 2)
    assert rep.complete


def test_std_radius_12_fully_covered():
    T = bfs_ball(preset("std"), 12)
    rep = realization_check(T, 3)
    assert rep.complete and sum(rep.min_K.values()) == T.size
    assert max(rep.min_K) <= 2
