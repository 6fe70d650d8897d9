"""Empirical probe of linear comparison between two simple shapes.

For each sample (s-, s, s+) of the first shape and each length offset delta
with |delta| <= K, the second shape's parameters are solved from the affine
map (t-, t, t+) -> (a, b, l + delta).  On each such piece the height
difference should be an affine function of the parameters, possibly
depending on a residue class; the probe fits that exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .fitting import rational_str, solve_exact
from .group import GeneratingSet, evaluate
from .shapes import SimpleShape, context, eval_simple


def _free_params(shape: SimpleShape, m: int) -> list[int]:
    """Which of (s-, s, s+) actually move the word."""
    if shape.i == shape.j:
        return [0, 1]
    if (shape.j - shape.i) % m == 1:
        return [0, 2]
    return [0, 1, 2]


def _triple(shape: SimpleShape, m: int, p) -> tuple[int, int, int]:
    free = _free_params(shape, m)
    t = [0, 0, 0]
    for k, v in zip(free, p):
        t[k] = v
    if free == [0, 2]:
        t[1] = max(t[0], t[2])
    return tuple(t)


def _image(shape, t, S):
    w = eval_simple(shape, *t, S, check_domain=False)
    g = evaluate(w, S)
    return (g.a, g.b, len(w)), g.c2


@dataclass(frozen=True)
class AffineMap:
    """(a, b, l) = offset + sum_k p_k * columns[k] over the free parameters."""

    offset: tuple[int, int, int]
    columns: tuple[tuple[int, int, int], ...]

    def solve(self, target) -> tuple[Fraction, ...] | None:
        rows = [[Fraction(col[r]) for col in self.columns] for r in range(3)]
        rhs = [Fraction(target[r] - self.offset[r]) for r in range(3)]
        return solve_exact(rows, rhs)


def affine_map(shape: SimpleShape, S: GeneratingSet) -> AffineMap:
    m = context(S).m
    free = _free_params(shape, m)
    zero = [0] * len(free)
    base, _ = _image(shape, _triple(shape, m, zero), S)
    cols = []
    for k in range(len(free)):
        e = list(zero)
        e[k] = 1
        img, _ = _image(shape, _triple(shape, m, e), S)
        cols.append(tuple(x - y for x, y in zip(img, base)))
    return AffineMap(base, tuple(cols))


def _in_domain(shape, t):
    sm, s, sp = t
    if min(t) < 0 or sm > s or sp > s:
        return False
    return not (shape.i == shape.j and sp != 0)


@dataclass
class ComparisonReport:
    status: str                                   # "exact", "counterexample" or "vacuous"
    pieces: dict[int, dict] = field(default_factory=dict)
    counterexample: dict | None = None
    pairs: int = 0

    def to_json(self) -> dict:
        return {"status": self.status, "pairs": self.pairs, "pieces": {str(k): v for k, v in self.pieces.items()},
                "counterexample": self.counterexample}


def _fit_affine(rows, values):
    A = [[Fraction(1)] + [Fraction(x) for x in r] for r in rows]
    sol = solve_exact(A, [Fraction(v) for v in values])
    return sol


def linear_comparison_probe(omega: SimpleShape, omega2: SimpleShape, S: GeneratingSet, K: int = 2,
                            samples: int = 200, bound: int = 40, seed: int = 0,
                            max_modulus: int = 6) -> ComparisonReport:
    m = context(S).m
    rng = random.Random(seed)
    map2 = affine_map(omega2, S)
    free1 = _free_params(omega, m)
    by_delta: dict[int, list] = {}
    for _ in range(samples):
        s = rng.randrange(0, bound + 1)
        t = (rng.randrange(0, s + 1), s, 0 if omega.i == omega.j else rng.randrange(0, s + 1))
        if free1 == [0, 2]:
            t = (t[0], max(t[0], t[2]), t[2])
        (a, b, l), h1 = _image(omega, t, S)
        for delta in range(-K, K + 1):
            sol = map2.solve((a, b, l + delta))
            if sol is None or any(x.denominator != 1 for x in sol):
                continue
            t2 = _triple(omega2, m, [int(x) for x in sol])
            if not _in_domain(omega2, t2):
                continue
            (a2, b2, l2), h2 = _image(omega2, t2, S)
            if (a2, b2, l2) != (a, b, l + delta):
                continue
            params = [t[k] for k in free1]
            by_delta.setdefault(delta, []).append((tuple(params), h1 - h2, t, t2))
    pairs = sum(len(v) for v in by_delta.values())
    if not pairs:
        return ComparisonReport("vacuous")
    report = ComparisonReport("exact", pairs=pairs)
    for delta, rows in sorted(by_delta.items()):
        piece = None
        for mod in range(1, max_modulus + 1):
            classes: dict[tuple, list] = {}
            for params, diff, t, t2 in rows:
                classes.setdefault(tuple(x % mod for x in params), []).append((params, diff, t, t2))
            models, ok, bad = {}, True, None
            for res, cls in classes.items():
                sol = _fit_affine([c[0] for c in cls], [c[1] for c in cls])
                if sol is None:
                    ok = False
                    bad = cls
                    break
                models[",".join(map(str, res))] = [rational_str(x) for x in sol]
            if ok:
                piece = {"modulus": mod, "samples": len(rows), "classes": len(classes), "models": models,
                         "determined": all(len(c) > len(free1) + 1 for c in classes.values())}
                break
        if piece is None:
            report.status = "counterexample"
            report.counterexample = {"delta": delta, "samples": [{"s": list(c[2]), "t": list(c[3]), "diff": c[1]}
                                                                  for c in bad[:len(free1) + 3]]}
            return report
        report.pieces[delta] = piece
    return report
