import random

import numpy as np
import pytest

from heisengrowth.ball import (BudgetExceeded, bfs_ball, fiber_profile, geodesic,
                               planar_word_length)
from heisengrowth.group import GroupElement, evaluate, preset

C_N = {1: -7, 2: -14, 3: 9, 4: -16, 5: -23, 6: 18, 7: -7, 8: -32, 9: 9, 10: 2, 11: -23, 12: 0}


def golden(n):
    return (31 * n ** 3 - 57 * n ** 2 + 105 * n + C_N[(n - 1) % 12 + 1]) // 18


def naive_ball(S, R):
    dist = {(0, 0, 0): 0}
    frontier = [GroupElement(0, 0, 0)]
    for n in range(1, R + 1):
        nxt = []
        for g in frontier:
            for s in S:
                h = g * s.element
                if h.as_tuple() not in dist:
                    dist[h.as_tuple()] = n
                    nxt.append(h)
        frontier = nxt
    return dist


@pytest.fixture(scope="module")
def std20():
    return bfs_ball(preset("std"), 20)


@pytest.mark.parametrize("name,R", [("std", 8), ("hex", 7), ("abAB", 6), ("std3", 6)])
def test_matches_naive_bfs(name, R):
    S = preset(name)
    T = bfs_ball(S, R)
    ref = naive_ball(S, R)
    A, B, C, D = T.all_elements()
    got = dict(zip(zip(A.tolist(), B.tolist(), C.tolist()), D.tolist()))
    assert got == ref


def test_small_shells(std20):
    assert std20.sigma[:3] == [1, 4, 12]
    assert bfs_ball(preset("hex"), 0).sigma == [1]


def test_golden_shells(std20):
    for n in range(1, 21):
        assert std20.sigma[n] == golden(n), n


def test_printed_c8_is_not_integral():
    for n in (8, 20, 32):
        assert (31 * n ** 3 - 57 * n ** 2 + 105 * n + 32) % 18 != 0
        assert (31 * n ** 3 - 57 * n ** 2 + 105 * n - 32) % 18 == 0


def test_geodesics(std20):
    S = preset("std")
    assert len(geodesic(std20, GroupElement(0, 0, 0))) == 0
    e3 = geodesic(std20, GroupElement(0, 0, 2))
    assert len(e3) == 4 and evaluate(e3, S) == GroupElement(0, 0, 2)
    assert len(geodesic(std20, GroupElement(1, 0, 0))) == 1
    A, B, C, D = std20.all_elements()
    rng = np.random.default_rng(0)
    for k in rng.choice(len(A), size=2000, replace=False):
        g = GroupElement(int(A[k]), int(B[k]), int(C[k]))
        p = geodesic(std20, g)
        assert len(p) == D[k] and evaluate(p, S) == g


def test_geodesic_without_predecessors():
    S = preset("hex")
    T = bfs_ball(S, 6, store_pred=False)
    g = GroupElement(2, -1, 4)
    p = geodesic(T, g)
    assert evaluate(p, S) == g and len(p) == T.dist(g)
    with pytest.raises(KeyError):
        geodesic(T, GroupElement(50, 0, 0))


def test_inverse_symmetry_and_growth(std20):
    A, B, C, D = std20.all_elements()
    inv = std20.lookup(-A, -B, -C)
    assert (inv == D).all()
    beta = std20.beta
    assert all(s > 0 for s in std20.sigma)
    for n in range(5, 11):
        assert 12 <= beta[2 * n] / beta[n] <= 20


def test_lipschitz_along_edges():
    S = preset("hex")
    T = bfs_ball(S, 8)
    A, B, C, D = T.all_elements()
    for s in S:
        e = s.element
        d2 = T.lookup(A + e.a, B + e.b, C + e.c2 + A * e.b - B * e.a)
        inside = d2 >= 0
        assert (np.abs(d2[inside] - D[inside]) <= 1).all()


def test_budget_error():
    with pytest.raises(BudgetExceeded) as info:
        bfs_ball(preset("std"), 30, memory_budget=200_000)
    err = info.value
    assert 0 < err.last_shell < 30
    assert err.partial.radius == err.last_shell
    assert err.partial.sigma[:3] == [1, 4, 12]


def test_fiber_profile(std20):
    f = fiber_profile(std20, 0, 0)
    assert f.n0 == 0 and f.w[4] == 2
    ws = [f.w[n] for n in sorted(f.w)]
    assert all(x <= y for x, y in zip(ws, ws[1:]))
    rng = random.Random(2)
    for _ in range(20):
        a, b = rng.randrange(-6, 7), rng.randrange(-6, 7)
        prof = fiber_profile(std20, a, b)
        assert prof.n0 == abs(a) + abs(b)
        for n in range(prof.n0, 19):
            assert prof.w[n] < prof.w[n + 2]
    assert fiber_profile(std20, 5, 0).W == 0
    with pytest.raises(ValueError):
        fiber_profile(std20, 40, 0)


def test_planar_word_length():
    steps = [g.projection for g in preset("std")]
    assert planar_word_length(1, 0, steps) == 1
    assert planar_word_length(3, 4, steps) == 7
    assert planar_word_length(0, 0, steps) == 0
    hexsteps = [g.projection for g in preset("hex")]
    assert planar_word_length(3, 2, hexsteps) == 3
