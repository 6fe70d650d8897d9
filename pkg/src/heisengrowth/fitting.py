"""Exact recurrence and quasipolynomial fitting, and rational generating functions.

Everything here is exact rational arithmetic: a fit either reproduces the
data exactly (including a held-out suffix) or is rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

HOLDOUT = 8


def solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Solve an (over)determined system exactly; None if inconsistent.

    Free variables are set to zero.
    """
    n = len(rows[0]) if rows else 0
    M = [list(map(Fraction, r)) + [Fraction(v)] for r, v in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    if any(M[i][n] != 0 for i in range(r, len(M))):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = M[i][n]
    return x


# recurrences ----------------------------------------------------------------

@dataclass(frozen=True)
class Recurrence:
    """f(n + P) = sum_j coeffs[j] * f(n + j) for n >= threshold."""

    coeffs: tuple[Fraction, ...]
    threshold: int

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def extend(self, seq: Sequence[int], upto: int) -> list[Fraction]:
        """Continue ``seq`` to length ``upto`` with the recurrence."""
        out = [Fraction(v) for v in seq]
        P = self.order
        while len(out) < upto:
            n = len(out) - P
            out.append(sum(c * out[n + j] for j, c in enumerate(self.coeffs)))
        return out[:upto]

    def holds_on(self, seq: Sequence[int]) -> bool:
        P = self.order
        return all(seq[n + P] == sum(c * seq[n + j] for j, c in enumerate(self.coeffs))
                   for n in range(self.threshold, len(seq) - P))

    def characteristic(self) -> list[Fraction]:
        """Q(x) = 1 - sum_i coeffs[P - i] x^i, low degree first."""
        P = self.order
        return [Fraction(1)] + [-self.coeffs[P - i] for i in range(1, P + 1)]


def _recurrence_at(seq, P, T, end):
    rows = [[seq[n + j] for j in range(P)] for n in range(T, end - P)]
    rhs = [seq[n + P] for n in range(T, end - P)]
    return solve_exact(rows, rhs)


def fit_recurrence(seq: Sequence[int], max_order: int, holdout: int = HOLDOUT,
                   margin: int = 2) -> Recurrence | None:
    """Minimal-order exact linear recurrence, valid past a threshold, checked on a holdout.

    ``margin`` extra equations beyond the unknown count are required in the
    training window; when the data cannot afford that for some order the
    margin drops to 1 for that order.
    """
    seq = [Fraction(v) for v in seq]
    end = len(seq) - holdout
    if end <= 0:
        raise ValueError("sequence shorter than the holdout")
    for P in range(1, max_order + 1):
        need = P + margin if end - 2 * P >= margin else P + 1
        T = 0
        while end - T - P >= need:
            sol = _recurrence_at(seq, P, T, end)
            if sol is not None:
                rec = Recurrence(tuple(sol), T)
                if rec.holds_on(seq):
                    return rec
            T += 1
    return None


# quasipolynomials -------------------------------------------------------------

@dataclass(frozen=True)
class QuasiPolynomial:
    """f(n) = sum_d coeffs[n % period][d] * n^d for n >= threshold."""

    period: int
    coeffs: tuple[tuple[Fraction, ...], ...]
    threshold: int

    @property
    def degree(self) -> int:
        return max((d for row in self.coeffs for d, c in enumerate(row) if c != 0), default=0)

    def __call__(self, n: int) -> Fraction:
        return sum(c * n ** d for d, c in enumerate(self.coeffs[n % self.period]))

    @property
    def uniform_degree(self) -> bool:
        degs = {max((d for d, c in enumerate(row) if c), default=0) for row in self.coeffs}
        return len(degs) == 1

    def as_recurrence(self) -> Recurrence:
        """The recurrence with characteristic polynomial (1 - x^P)^(deg+1)."""
        P, k = self.period, self.degree + 1
        # (1 - y)^k with y = x^P
        poly = [Fraction(0)] * (P * k + 1)
        for i in range(k + 1):
            poly[P * i] = Fraction((-1) ** i * math.comb(k, i))
        order = P * k
        coeffs = tuple(-poly[order - j] for j in range(order))
        return Recurrence(coeffs, self.threshold)


def candidate_periods(limit: int = 60, base: int = 12) -> list[int]:
    L = reduce(math.lcm, range(1, base + 1))
    return [p for p in range(1, limit + 1) if L % p == 0]


def prime_power_parts(P: int) -> list[int]:
    """P = prod q with q maximal prime powers."""
    parts, p = [], 2
    while P > 1:
        if P % p == 0:
            q = 1
            while P % p == 0:
                P //= p
                q *= p
            parts.append(q)
        p += 1
    return parts


def _columns(P, deg, osc, basis):
    """Columns (d, q, r): n^d times [n = r mod q]."""
    cols = [(d, 1, 0) for d in range(deg + 1)]
    for d in range(osc):
        if basis == "residue":
            cols = [c for c in cols if c[0] != d] + [(d, P, r) for r in range(P)]
        else:
            cols += [(d, q, r) for q in prime_power_parts(P) for r in range(1, q)]
    return cols


def _fit_structured(seq, cols, T, end):
    rows, rhs = [], []
    for n in range(T, end):
        rows.append([Fraction(n) ** d if n % q == r else Fraction(0) for d, q, r in cols])
        rhs.append(seq[n])
    return rows, rhs


def fit_quasipolynomial(seq: Sequence[int], max_degree: int = 4, periods: Sequence[int] | None = None,
                        holdout: int = HOLDOUT, margin: int = 2) -> QuasiPolynomial | None:
    """Smallest period admitting an exact quasipolynomial past a threshold.

    Per period, degrees and the number of oscillating low-order coefficients
    are scanned upward, then the threshold; the fit is validated on the last
    ``holdout`` terms.  Oscillating coefficients are first tried as arbitrary
    functions of n mod P, then (when that has too many unknowns for the data)
    as sums of periodic parts over the prime-power factors of P.
    """
    seq = [Fraction(v) for v in seq]
    end = len(seq) - holdout
    periods = candidate_periods() if periods is None else sorted(periods)
    for P in periods:
        bases = ["residue"] if len(prime_power_parts(P)) < 2 else ["residue", "component"]
        for deg in range(max_degree + 1):
            for osc in range(1, deg + 2):
                for basis in bases:
                    qp = _scan_threshold(seq, P, deg, osc, basis, end, margin)
                    if qp is not None:
                        return qp
    return None


def _scan_threshold(seq, P, deg, osc, basis, end, margin):
    cols = _columns(P, deg, osc, basis)
    for T in range(end):
        if end - T < len(cols) + margin:
            return None
        if basis == "residue" and min(len(range(T + r, end, P)) for r in range(P)) < osc:
            return None
        rows, rhs = _fit_structured(seq, cols, T, end)
        sol = solve_exact(rows, rhs)
        if sol is not None:
            qp = _assemble(sol, cols, P, deg, T)
            if all(qp(n) == seq[n] for n in range(T, len(seq))):
                return qp
    return None


def _assemble(sol, cols, P, deg, T) -> QuasiPolynomial:
    rows = []
    for res in range(P):
        row = [Fraction(0)] * (deg + 1)
        for (d, q, r), v in zip(cols, sol):
            if res % q == r:
                row[d] += v
        rows.append(tuple(row))
    return QuasiPolynomial(P, tuple(rows), T)


# generating functions --------------------------------------------------------

def _poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


@dataclass(frozen=True)
class RationalGF:
    numerator: tuple[int, ...]
    denominator: tuple[int, ...]

    def series(self, N: int) -> list[Fraction]:
        """First N coefficients of numerator / denominator."""
        den = [Fraction(c) for c in self.denominator]
        num = [Fraction(c) for c in self.numerator]
        out = []
        for n in range(N):
            v = num[n] if n < len(num) else Fraction(0)
            v -= sum(den[i] * out[n - i] for i in range(1, min(n, len(den) - 1) + 1))
            out.append(v / den[0])
        return out

    def cumulative(self) -> "RationalGF":
        """Series of partial sums: divide by (1 - x)."""
        den = _poly_mul([Fraction(c) for c in self.denominator], [Fraction(1), Fraction(-1)])
        return RationalGF(self.numerator, tuple(int(c) for c in den))

    def same_function(self, other: "RationalGF") -> bool:
        lhs = _trim(_poly_mul(list(map(Fraction, self.numerator)), list(map(Fraction, other.denominator))))
        rhs = _trim(_poly_mul(list(map(Fraction, other.numerator)), list(map(Fraction, self.denominator))))
        return lhs == rhs


def gf_from_recurrence(seq: Sequence[int], rec: Recurrence) -> RationalGF:
    Q = rec.characteristic()
    cut = rec.threshold + rec.order
    F = [Fraction(v) for v in seq[:cut]]
    if len(F) < cut:
        raise ValueError("not enough terms for the numerator")
    num = _poly_mul(Q, F)[:cut]
    scale = reduce(math.lcm, (c.denominator for c in Q + num), 1)
    num_i = [int(c * scale) for c in _trim(num)]
    den_i = [int(c * scale) for c in _trim(Q)]
    g = reduce(math.gcd, num_i + den_i)
    if den_i[0] < 0:
        g = -g
    return RationalGF(tuple(c // g for c in num_i), tuple(c // g for c in den_i))


def rational_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
