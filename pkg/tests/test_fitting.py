from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from heisengrowth.ball import bfs_ball
from heisengrowth.fitting import (QuasiPolynomial, RationalGF, fit_quasipolynomial, fit_recurrence,
                                  gf_from_recurrence, solve_exact)
from heisengrowth.group import preset

C_N = [-7, -14, 9, -16, -23, 18, -7, -32, 9, 2, -23, 0]


@pytest.fixture(scope="module")
def std_sigma():
    return bfs_ball(preset("std"), 45, store_pred=False).sigma


def test_solve_exact_detects_inconsistency():
    assert solve_exact([[1, 1], [1, 1]], [1, 2]) is None
    assert solve_exact([[2, 0], [0, 3]], [1, 1]) == [F(1, 2), F(1, 3)]


def test_trivial_recurrences():
    r = fit_recurrence([1] * 20, 4)
    assert r.order == 1 and r.coeffs == (1,)
    sq = fit_recurrence([n * n for n in range(30)], 6)
    assert sq.order == 3 and list(sq.coeffs) == [1, -3, 3]
    g = fit_recurrence([2 ** n for n in range(20)], 4)
    assert gf_from_recurrence([2 ** n for n in range(20)], g) == RationalGF((1,), (1, -2))
    lin = [n + 1 for n in range(20)]
    gf = gf_from_recurrence(lin, fit_recurrence(lin, 4))
    assert gf == RationalGF((1,), (1, -2, 1))


def test_no_recurrence_is_none():
    # primes have no short recurrence
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89]
    assert fit_recurrence(primes, 4) is None


def test_threshold_detection():
    seq = [5, -3, 17] + [3 ** n for n in range(3, 25)]
    r = fit_recurrence(seq, 3)
    assert r.order == 1 and r.threshold == 3


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_recurrence_roundtrip(coeffs, init):
    k = len(coeffs)
    seq = list(init[:k])
    while len(seq) < 4 * k + 12:
        seq.append(sum(c * seq[-k + j] for j, c in enumerate(coeffs)))
    r = fit_recurrence(seq, k)
    assert r is not None and r.order <= k
    gf = gf_from_recurrence(seq, r)
    assert gf.series(len(seq)) == seq


def test_std_recurrence_predicts(std_sigma):
    rec = fit_recurrence(std_sigma[:41], 16)
    assert rec is not None and rec.order == 8
    assert rec.extend(std_sigma[:41], 46)[41:] == std_sigma[41:46]
    gf = gf_from_recurrence(std_sigma[:41], rec)
    assert gf.numerator == (1, 1, 4, 11, 8, 21, 6, 9, 1)
    assert gf.denominator == (1, -3, 4, -5, 6, -5, 4, -3, 1)
    assert gf.series(46) == std_sigma[:46]


def test_cumulative_series_relation(std_sigma):
    beta = [sum(std_sigma[: n + 1]) for n in range(41)]
    S = gf_from_recurrence(std_sigma[:41], fit_recurrence(std_sigma[:41], 16))
    B = gf_from_recurrence(beta, fit_recurrence(beta, 16))
    assert S.cumulative().same_function(B)
    assert B.series(41) == beta


def test_std_quasipolynomial(std_sigma):
    qp = fit_quasipolynomial(std_sigma[:31], max_degree=3, periods=[1, 2, 3, 4, 6, 12])
    assert qp.period == 12 and qp.degree == 3 and qp.threshold <= 13
    for n in range(13, 46):
        c = 18 * qp(n) - (31 * n ** 3 - 57 * n ** 2 + 105 * n)
        assert c == C_N[(n - 1) % 12]
        assert qp(n) == std_sigma[n]


def test_constant_and_triangle_quasipolynomials():
    qp = fit_quasipolynomial([7] * 20)
    assert qp.period == 1 and qp.degree == 0
    tri = [(n + 1) * (n + 2) // 2 for n in range(30)]
    qp = fit_quasipolynomial(tri)
    assert qp.period == 1 and qp.coeffs[0] == (1, F(3, 2), F(1, 2))


def test_quasipolynomial_implies_recurrence():
    seq = [n * n // 3 + (n % 2) for n in range(60)]
    qp = fit_quasipolynomial(seq, max_degree=2)
    assert qp.period == 6
    rec = qp.as_recurrence()
    assert rec.holds_on(seq)
    assert rec.extend(seq[:40], 60) == seq
    direct = fit_recurrence(seq, rec.order)
    assert direct.order <= rec.order
    assert direct.extend(seq[:40], 60) == seq


def test_quasipolynomial_eval():
    qp = QuasiPolynomial(2, ((F(0), F(1)), (F(1), F(1))), 0)
    assert [qp(n) for n in range(5)] == [0, 2, 2, 4, 4]
    assert qp.uniform_degree
