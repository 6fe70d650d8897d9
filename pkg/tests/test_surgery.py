import random

import pytest

from heisengrowth.ball import bfs_ball, geodesic
from heisengrowth.group import GroupElement, evaluate, preset
from heisengrowth.shapes import context
from heisengrowth.simplify import simplify
from heisengrowth.surgery import (SurgeryError, Triple, side_relation, surgery_2, surgery_3,
                                  three_sided_delta2, two_sided_delta2, unsimplify)


def test_side_relation():
    assert side_relation((1, 0), (0, 1), (-1, 0)) == (1, 0, 1)
    assert side_relation((1, 0), (1, 1), (0, 1)) == (1, 1, 1)
    p, q, r = side_relation((3, 0), (1, 2), (0, 3))
    assert (q * 1, q * 2) == (p * 3, r * 3) and (p, q, r) == (1, 3, 2)


def _eligible(S, side, rng, need1, need3):
    """prefix a1^s1 c1 a2^s2 c2 a3^s3 suffix with the triple's positions."""
    ctx = context(S)
    a1, a2, a3 = (ctx.letter(side + d) for d in (-1, 0, 1))
    rand = lambda k: tuple(rng.randrange(len(S)) for _ in range(k))
    pre, c1, c2, suf = rand(rng.randrange(6)), rand(rng.randrange(4)), rand(rng.randrange(4)), rand(rng.randrange(6))
    s1 = need1 + rng.randrange(6)
    s2 = 1 + rng.randrange(8)
    s3 = need3 + rng.randrange(6)
    w = pre + (a1,) * s1 + c1 + (a2,) * s2 + c2 + (a3,) * s3 + suf
    o1 = len(pre)
    o2 = o1 + s1 + len(c1)
    o3 = o2 + s2 + len(c2)
    return w, Triple(side, (o1, o1 + s1), (o2, o2 + s2), (o3, o3 + s3))


@pytest.mark.parametrize("name", ["std", "hex", "abAB"])
def test_surgeries_exact_on_random_words(name):
    S = preset(name)
    ctx = context(S)
    N = ctx.N
    rng = random.Random(2024)
    bad = 0
    for trial in range(1000 // 3 + 1):
        side = rng.randrange(1, ctx.m + 1)
        p, q, r = side_relation(ctx.direction(side - 1), ctx.direction(side), ctx.direction(side + 1))
        w, t = _eligible(S, side, rng, 3 * N * p, 2 * N * r)
        g = evaluate(w, S)
        res = surgery_3(w, side, S, t)
        h = evaluate(res.word, S)
        bad += (h.a, h.b) != (g.a, g.b) or h.c2 - g.c2 != res.delta2
        bad += len(res.word) - len(w) != 2 * N * (q - p - r)
        k = rng.randrange(0, 3 * N * p * (t.s2 - 1) + 1)
        res = surgery_2(w, side, k, S, t)
        h = evaluate(res.word, S)
        bad += (h.a, h.b) != (g.a, g.b) or h.c2 - g.c2 != res.delta2 or len(res.word) != len(w)
    assert bad == 0


def test_std_three_sided_shortens_by_4N():
    S = preset("std")
    w = S.parse_word("e1 e1 e1 e2 e2 e2 -e1 -e1 -e1").letters
    res = surgery_3(w, 2, S)
    assert (res.p, res.q, res.r) == (1, 0, 1)
    assert len(w) - len(res.word) == 4
    assert evaluate(res.word, S).c2 - evaluate(w, S).c2 == res.delta2 == -12


def test_two_sided_k0_is_c1_term_only():
    S = preset("std")
    w = S.parse_word("e1 e1 e1 e1 -e2 e2 e2 e2 -e1").letters
    t = Triple(2, (0, 4), (5, 8), (8, 9))
    assert two_sided_delta2(w, t, 0, S) == -2 * 3 * (1 * -1 - 0)
    res = surgery_2(w, 2, 0, S, t)
    assert evaluate(res.word, S).c2 - evaluate(w, S).c2 == res.delta2


def test_surgery_run_too_short():
    S = preset("std")
    w = S.parse_word("e1 e2 e2 -e1").letters
    with pytest.raises(SurgeryError):
        surgery_3(w, 2, S)
    with pytest.raises(SurgeryError):
        surgery_2(w, 2, 0, S)


def test_rectangle_unsimplify():
    S = preset("std")
    w = S.parse_word(" ".join(["e1"] * 10 + ["e2"] * 10 + ["-e1"] * 10 + ["-e2"] * 10)).letters
    assert evaluate(w, S).c2 == 200
    res = unsimplify(w, 192, S, side=2)
    assert evaluate(res.word, S) == GroupElement(0, 0, 192)
    assert len(res.word) == 40
    assert (res.three_sided, res.two_sided_k) == (0, 4)
    assert S.format_word(res.word).startswith(" ".join(["e1"] * 9 + ["e2"] * 4 + ["e1"] + ["e2"] * 6))
    same = unsimplify(w, 200, S)
    assert same.word.letters == w
    deep = unsimplify(w, 100, S)
    assert evaluate(deep.word, S) == GroupElement(0, 0, 100) and deep.three_sided >= 1


def test_unsimplify_errors():
    S = preset("std")
    w = S.parse_word(" ".join(["e1"] * 10 + ["e2"] * 10 + ["-e1"] * 10 + ["-e2"] * 10)).letters
    with pytest.raises(SurgeryError):
        unsimplify(w, 201, S)
    assert evaluate(unsimplify(w, 198, S).word, S).c2 == 198    # empty c1: threshold 0
    abab = preset("abAB")
    sq = abab.parse_word(" ".join(["A"] * 10 + ["B"] * 10 + ["-A"] * 10 + ["-B"] * 10)).letters
    with pytest.raises(SurgeryError):
        unsimplify(sq, evaluate(sq, abab).c2 - 2, abab)   # not a multiple of 2N


def test_simplify_then_unsimplify_roundtrip():
    """Simplify never lengthens a geodesic; unsimplify returns to the element with a geodesic."""
    S = preset("std")
    T = bfs_ball(S, 12)
    rng = random.Random(8)
    shell = T.shells[12]
    tried = done = 0
    for key in rng.sample(list(shell), 1000):
        a, b, c2 = (int(v) for v in T.packer.unpack(key))
        g = GroupElement(a, b, c2)
        w = geodesic(T, g).letters
        res = simplify(w, S)
        assert len(res.word) <= len(w) == 12
        tried += 1
        try:
            back = unsimplify(res.word, c2, S)
        except SurgeryError:
            continue
        assert evaluate(back.word, S) == g and len(back.word) == 12
        done += 1
    assert tried == 1000 and done > 100


def test_three_sided_area_formula_symbolically():
    """Doubled area of a segment path is sum_{i<j} v_i ^ v_j; compare before/after symbolically."""
    sp = pytest.importorskip("sympy")
    x1, y1, x3, y3, p, q, r, N, s1, s2, s3 = sp.symbols("x1 y1 x3 y3 p q r N s1 s2 s3")
    cx1, cy1, cx2, cy2, ux, uy, vx, vy = sp.symbols("cx1 cy1 cx2 cy2 ux uy vx vy")
    a1, a3 = sp.Matrix([x1, y1]), sp.Matrix([x3, y3])
    a2 = (p * a1 + r * a3) / q
    c1, c2, pre, suf = sp.Matrix([cx1, cy1]), sp.Matrix([cx2, cy2]), sp.Matrix([ux, uy]), sp.Matrix([vx, vy])
    wedge = lambda u, v: u[0] * v[1] - u[1] * v[0]

    def area2(segs):
        return sp.expand(sum(wedge(segs[i], segs[j]) for i in range(len(segs)) for j in range(i + 1, len(segs))))

    before = area2([pre, s1 * a1, c1, s2 * a2, c2, s3 * a3, suf])
    after = area2([pre, (s1 - 2 * N * p) * a1, c1, (s2 + 2 * N * q) * a2, c2, (s3 - 2 * N * r) * a3, suf])
    area = (2 * N * p * wedge(a1, c1) + 2 * N * p * s2 * wedge(a1, a2)
            + 2 * N ** 2 * p * r * wedge(a1, a3) + 2 * N * r * wedge(c2, a3))
    assert sp.simplify(after - before + 2 * area) == 0
