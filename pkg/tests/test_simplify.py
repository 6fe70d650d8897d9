import random

import pytest
from hypothesis import given, settings, strategies as st

from heisengrowth.group import evaluate, preset
from heisengrowth.shapes import eval_simple
from heisengrowth.simplify import simplify


def rect(S, x, y):
    return S.parse_word(" ".join(["e1"] * x + ["e2"] * y + ["-e1"] * x + ["-e2"] * y)).letters


def test_rectangle_balances_to_square():
    S = preset("std")
    res = simplify(rect(S, 8, 12), S)
    assert res.word.letters == rect(S, 10, 10)
    assert evaluate(rect(S, 8, 12), S).c2 == 192
    assert evaluate(res.word, S).c2 == 200 and res.delta2 == 8


def test_simple_input_is_fixed():
    S = preset("std")
    w = rect(S, 6, 6)
    assert simplify(w, S).word.letters == w


def _check(S, w):
    g = evaluate(w, S)
    res = simplify(w, S)
    h = evaluate(res.word, S)
    N = S.swap_lcm_N
    assert (h.a, h.b) == (g.a, g.b)
    assert h.c2 >= g.c2 and (h.c2 - g.c2) % (2 * N) == 0 and h.c2 - g.c2 == res.delta2
    assert len(res.word) <= len(w)
    fit = res.fit
    assert eval_simple(fit.shape, fit.sminus, fit.s, fit.splus, S, check_domain=False) == res.word


@pytest.mark.parametrize("name", ["std", "hex", "abAB", "std3"])
def test_simplify_contract_random_words(name):
    S = preset(name)
    rng = random.Random(17)
    for _ in range(150):
        _check(S, [rng.randrange(len(S)) for _ in range(40)])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 3), max_size=40))
def test_simplify_contract_hypothesis(w):
    _check(preset("std"), w)
