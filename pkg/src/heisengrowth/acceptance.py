"""The twelve end-to-end acceptance checks.

Each check returns a :class:`CriterionResult`; ``run_all`` runs a selection
and ``format_line`` renders one status line per check.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Callable

import numpy as np

from .ball import bfs_ball
from .cc import CCMetric
from .families import counts, shipped_families
from .fitting import candidate_periods, fit_quasipolynomial, fit_recurrence
from .group import GeneratingSet, balayage_area2, boost2, evaluate, preset
from .planar import isoperimetrix
from .realization import realization_check
from .scans import ac_scan, bounded_difference_scan, zero_height_lemma
from .shapes import context
from .surgery import Triple, side_relation, surgery_2, surgery_3

# constant terms of 18 sigma(n) - (31 n^3 - 57 n^2 + 105 n), indexed by n mod 12 starting at n = 1
STD_CONSTANTS = (-7, -14, 9, -16, -23, 18, -7, -32, 9, 2, -23, 0)


def std_sigma_closed_form(n: int) -> int:
    c = STD_CONSTANTS[(n - 1) % 12]
    return (31 * n ** 3 - 57 * n ** 2 + 105 * n + c) // 18


@dataclass
class AcceptanceConfig:
    golden_radius: int = 30
    recurrence_train: int = 40
    recurrence_check: int = 45
    hex_terms: int = 35
    max_period: int = 60
    difference_radii: tuple[int, int] = (15, 20)
    difference_tol: float = 1e-9
    realization_std_radius: int = 12
    realization_abab_radius: int = 10
    realization_K: int = 4
    height_words: int = 100_000
    height_word_length: int = 30
    surgery_words: int = 1000
    zero_height_bound: int = 30
    dilation_points: int = 100
    dilation_tol: float = 1e-6
    ac_radii: tuple[int, int] = (10, 20)
    ac_exhaustive_upto: int = 15
    family_terms: int = 60
    seed: int = 20240601


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    data: dict = field(default_factory=dict)


def format_line(r: CriterionResult) -> str:
    return f"[{'PASS' if r.passed else 'FAIL'}] #{r.number:<2} {r.name}: {r.detail} ({r.seconds:.1f}s)"


# individual checks ----------------------------------------------------------------

def golden_growth(cfg: AcceptanceConfig) -> CriterionResult:
    sigma = bfs_ball(preset("std"), cfg.golden_radius, store_pred=False).sigma
    bad = [n for n in range(13, cfg.golden_radius + 1)
           if 18 * sigma[n] != 31 * n ** 3 - 57 * n ** 2 + 105 * n + STD_CONSTANTS[(n - 1) % 12]]
    ok = sigma[1] == 4 and sigma[2] == 12 and not bad
    return CriterionResult(1, "golden std growth", ok,
                           f"sigma(1..2)={sigma[1:3]}, closed form on 13..{cfg.golden_radius}: "
                           f"{'exact' if not bad else f'mismatch at {bad}'}", data={"sigma": sigma})


def recurrence_closure(cfg: AcceptanceConfig) -> CriterionResult:
    sigma = bfs_ball(preset("std"), cfg.recurrence_check, store_pred=False).sigma
    train = sigma[:cfg.recurrence_train + 1]
    rec = fit_recurrence(train, 16)
    if rec is None:
        return CriterionResult(2, "recurrence closure", False, "no recurrence found")
    pred = [int(x) for x in rec.extend(train, cfg.recurrence_check + 1)[cfg.recurrence_train + 1:]]
    truth = sigma[cfg.recurrence_train + 1:]
    return CriterionResult(2, "recurrence closure", pred == truth,
                           f"order {rec.order} from n<={cfg.recurrence_train}; predicted "
                           f"{cfg.recurrence_train + 1}..{cfg.recurrence_check} {'match' if pred == truth else 'differ'}",
                           data={"predicted": pred, "bfs": truth})


def hex_quasipolynomial(cfg: AcceptanceConfig) -> CriterionResult:
    sigma = bfs_ball(preset("hex"), cfg.hex_terms, store_pred=False).sigma
    qp = fit_quasipolynomial(sigma, max_degree=4, periods=candidate_periods(cfg.max_period))
    if qp is None:
        return CriterionResult(3, "hex quasipolynomial", False, "no fit with period <= %d" % cfg.max_period)
    return CriterionResult(3, "hex quasipolynomial", qp.period <= cfg.max_period,
                           f"period {qp.period}, degree {qp.degree}, threshold {qp.threshold}, 8-term holdout exact",
                           data={"period": qp.period, "threshold": qp.threshold})


def bounded_difference(cfg: AcceptanceConfig) -> CriterionResult:
    r1, r2 = cfg.difference_radii
    parts, ok = [], True
    for name in ("std", "hex"):
        S = preset(name)
        scan = bounded_difference_scan(bfs_ball(S, r2, store_pred=False), CCMetric(isoperimetrix(S)))
        a, b = scan.per_shell[r1], scan.per_shell[r2]
        same = abs(a - b) <= cfg.difference_tol
        ok &= same
        parts.append(f"{name}: {a:.6f} at {r1} vs {b:.6f} at {r2}, sup<2 {max(scan.per_shell) < 2}")
    return CriterionResult(4, "bounded difference stabilization", ok, "; ".join(parts))


def realization(cfg: AcceptanceConfig) -> CriterionResult:
    parts, ok = [], True
    for name, R in (("std", cfg.realization_std_radius), ("abAB", cfg.realization_abab_radius)):
        rep = realization_check(bfs_ball(preset(name), R), cfg.realization_K)
        ok &= rep.complete
        parts.append(f"{name} R={R}: {rep.size} elements, first K {dict(sorted(rep.min_K.items()))}, "
                     f"uncovered {len(rep.uncovered)}")
    return CriterionResult(5, "realization by shapes and patterns", ok, "; ".join(parts))


def height_identity(cfg: AcceptanceConfig) -> CriterionResult:
    rng = np.random.default_rng(cfg.seed)
    sets = [preset("std"), preset("hex"), preset("abAB")]
    bad = 0
    per = cfg.height_words // len(sets) + 1
    total = 0
    for S in sets:
        gens = S.generators
        A = np.array([g.element.a for g in gens])
        B = np.array([g.element.b for g in gens])
        C = np.array([g.element.c2 for g in gens])
        words = rng.integers(0, len(gens), size=(per, cfg.height_word_length))
        # group law, letter by letter, vectorized over the batch
        a = np.zeros(per, dtype=np.int64)
        b = np.zeros(per, dtype=np.int64)
        c = np.zeros(per, dtype=np.int64)
        for k in range(cfg.height_word_length):
            l = words[:, k]
            c = c + C[l] + a * B[l] - b * A[l]
            a = a + A[l]
            b = b + B[l]
        # boost plus the doubled balayage area from the shadow polyline
        xs = np.concatenate([np.zeros((per, 1), dtype=np.int64), np.cumsum(A[words], axis=1)], axis=1)
        ys = np.concatenate([np.zeros((per, 1), dtype=np.int64), np.cumsum(B[words], axis=1)], axis=1)
        area2 = (xs[:, :-1] * ys[:, 1:] - xs[:, 1:] * ys[:, :-1]).sum(axis=1)
        boost = C[words].sum(axis=1)
        bad += int((c != boost + area2).sum())
        # spot check against the scalar implementations
        for w in words[:200]:
            w = w.tolist()
            bad += evaluate(w, S).c2 != boost2(w, S) + balayage_area2(w, S)
        total += per
    return CriterionResult(6, "height = boost + area", bad == 0, f"{total} words over 3 sets, {bad} violations")


def _eligible_word(S: GeneratingSet, side: int, rng: random.Random):
    ctx = context(S)
    N = ctx.N
    p, q, r = side_relation(ctx.direction(side - 1), ctx.direction(side), ctx.direction(side + 1))
    a1, a2, a3 = (ctx.letter(side + d) for d in (-1, 0, 1))

    def rand(k):
        return tuple(rng.randrange(len(S)) for _ in range(k))

    pre, c1, c2, suf = rand(rng.randrange(6)), rand(rng.randrange(4)), rand(rng.randrange(4)), rand(rng.randrange(6))
    s1 = 3 * N * p + rng.randrange(6)
    s2 = 1 + rng.randrange(8)
    s3 = 2 * N * r + rng.randrange(6)
    w = pre + (a1,) * s1 + c1 + (a2,) * s2 + c2 + (a3,) * s3 + suf
    o1 = len(pre)
    o2 = o1 + s1 + len(c1)
    o3 = o2 + s2 + len(c2)
    return w, Triple(side, (o1, o1 + s1), (o2, o2 + s2), (o3, o3 + s3)), (p, q, r)


def surgery_contracts(cfg: AcceptanceConfig) -> CriterionResult:
    rng = random.Random(cfg.seed)
    sets = [preset("std"), preset("hex"), preset("abAB")]
    bad = 0
    for t in range(cfg.surgery_words):
        S = sets[t % 3]
        ctx = context(S)
        side = rng.randrange(1, ctx.m + 1)
        w, tr, (p, q, r) = _eligible_word(S, side, rng)
        g = evaluate(w, S)
        res = surgery_3(w, side, S, tr)
        h = evaluate(res.word, S)
        bad += (h.a, h.b) != (g.a, g.b) or h.c2 - g.c2 != res.delta2 \
            or len(res.word) - len(w) != 2 * ctx.N * (q - p - r)
        k = rng.randrange(0, 3 * ctx.N * p * (tr.s2 - 1) + 1)
        res = surgery_2(w, side, k, S, tr)
        h = evaluate(res.word, S)
        bad += (h.a, h.b) != (g.a, g.b) or h.c2 - g.c2 != res.delta2 or len(res.word) != len(w)
    return CriterionResult(7, "surgery contracts", bad == 0,
                           f"{cfg.surgery_words} words (both surgeries each), {bad} violations")


def zero_height(cfg: AcceptanceConfig) -> CriterionResult:
    bad = zero_height_lemma(cfg.zero_height_bound)
    return CriterionResult(8, "zero-height lemma", not bad,
                           f"|a|,|b| <= {cfg.zero_height_bound}: {len(bad)} violations")


def isoperimetrix_shapes(cfg: AcceptanceConfig) -> CriterionResult:
    std = isoperimetrix(preset("std"))
    hexi = isoperimetrix(preset("hex"))
    square = std.k2 == 4 and std.multiplicities == (1, 1, 1, 1)
    closes = tuple(sum((s * Fraction(v[k]) for s, v in zip(hexi.multiplicities, hexi.directions)), Fraction(0))
                   for k in (0, 1)) == (0, 0)
    hexagon = hexi.k2 == 6 and closes and reduce(math.gcd, hexi.multiplicities) == 1
    return CriterionResult(9, "isoperimetrix", square and hexagon,
                           f"std sigma={std.multiplicities} ({std.k2} sides); hex sigma={hexi.multiplicities} "
                           f"({hexi.k2} sides), closes={closes}")


def cc_dilation(cfg: AcceptanceConfig) -> CriterionResult:
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for name in ("std", "hex", "abAB"):
        metric = CCMetric(isoperimetrix(preset(name)))
        n = cfg.dilation_points
        a = rng.integers(-12, 13, n)
        b = rng.integers(-12, 13, n)
        c2 = rng.integers(-150, 151, n)
        d1 = metric.distance(a, b, c2)
        d3 = metric.distance(3 * a, 3 * b, 9 * c2)
        worst = max(worst, float(np.abs(d3 - 3 * d1).max()))
    return CriterionResult(10, "CC dilation", worst <= cfg.dilation_tol,
                           f"max |d(3a,3b,9c) - 3 d(a,b,c)| = {worst:.2e} over {3 * cfg.dilation_points} points")


def almost_convexity(cfg: AcceptanceConfig) -> CriterionResult:
    lo, hi = cfg.ac_radii
    parts, ok = [], True
    for name in ("std", "hex"):
        T = bfs_ball(preset(name), hi + 2, store_pred=False)
        rep = ac_scan(T, k=2, radii=range(lo, hi + 1), exhaustive_upto=cfg.ac_exhaustive_upto, seed=cfg.seed)
        vals = [rep.maxima[n] for n in range(lo, hi + 1)]
        # plateau: the second half never exceeds the first half's maximum
        half = len(vals) // 2
        plateau = max(vals[half:]) <= max(vals[:half + 1])
        ok &= plateau
        parts.append(f"{name}: maxima {sorted(set(vals))} on [{lo},{hi}]")
    return CriterionResult(11, "almost convexity plateau", ok, "; ".join(parts))


def family_recurrences(cfg: AcceptanceConfig) -> CriterionResult:
    parts, ok = [], True
    for name, spec in shipped_families().items():
        seq = counts(spec.family, range(cfg.family_terms + 1), spec.weight)
        rec = fit_recurrence(seq, spec.recurrence_order_bound())
        ok &= rec is not None
        parts.append(f"{name}:{rec.order if rec else 'none'}")
    return CriterionResult(12, "polyhedral family recurrences", ok, "orders " + ", ".join(parts))


CRITERIA: dict[int, Callable[[AcceptanceConfig], CriterionResult]] = {
    1: golden_growth, 2: recurrence_closure, 3: hex_quasipolynomial, 4: bounded_difference,
    5: realization, 6: height_identity, 7: surgery_contracts, 8: zero_height,
    9: isoperimetrix_shapes, 10: cc_dilation, 11: almost_convexity, 12: family_recurrences,
}


def run_criterion(number: int, cfg: AcceptanceConfig | None = None) -> CriterionResult:
    cfg = cfg or AcceptanceConfig()
    t = time.perf_counter()
    res = CRITERIA[number](cfg)
    res.seconds = time.perf_counter() - t
    return res


def run_all(cfg: AcceptanceConfig | None = None, only=None, echo: Callable[[str], None] | None = None):
    out = []
    for number in sorted(only or CRITERIA):
        res = run_criterion(number, cfg)
        if echo:
            echo(format_line(res))
        out.append(res)
    return out
