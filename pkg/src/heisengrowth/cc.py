"""Carnot-Caratheodory distance for the polygonal norm of a generating set.

Regular geodesics project to arcs of a scaled isoperimetrix; unstable ones
to L-norm geodesics.  An arc of type (i, r) runs s- along side i, s along
the r following sides and s+ along side i+r+1.  For fixed endpoint and
length the exponents are affine in the length, so the enclosed area is a
quadratic in the length and feasibility is an interval.  The distance is
the smallest length at which some type reaches the required area.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .group import GroupElement
from .planar import Isoperimetrix, as_point, cross, sector_coordinates

UNSTABLE, THRESHOLD, REGULAR = "unstable", "threshold", "regular"

_EPS = 1e-12


@dataclass(frozen=True)
class IArc:
    """Arc of the isoperimetrix of scale s: s- on side i, s on the middle sides, s+ on side j.

    Sides are 0-based here.  ``translation`` places the arc on s*I + q.
    """

    i: int
    j: int
    s_minus: float
    s: float
    s_plus: float
    translation: tuple[float, float]
    sides: tuple[int, ...]
    exponents: tuple[float, ...]

    @property
    def combinatorial_length(self) -> float:
        return sum(self.exponents)

    def polyline(self, iso: Isoperimetrix) -> list[tuple[float, float]]:
        pts = [(0.0, 0.0)]
        for t, x in zip(self.sides, self.exponents):
            ex, ey = iso.edge_vectors[t]
            px, py = pts[-1]
            pts.append((px + x * float(ex), py + x * float(ey)))
        return pts


@dataclass(frozen=True)
class CCResult:
    distance: float
    kind: str
    witness: IArc | None
    tolerance: float = 1e-9
    exact: Fraction | None = None


@dataclass(frozen=True)
class _ArcType:
    # area_form W gives doubled area: area2 = f^T W f with f = (s-, s, s+)
    i: int
    r: int
    sides: tuple[int, ...]
    roles: tuple[int, ...]       # 0 -> s-, 1 -> s, 2 -> s+
    solve_xy: np.ndarray          # (3, 2): exponents from endpoint
    solve_l: np.ndarray           # (3,): exponents per unit length
    area_form: np.ndarray


def _area_form(iso: Isoperimetrix, sides, roles) -> list[list[Fraction]]:
    W = [[Fraction(0)] * 3 for _ in range(3)]
    E = iso.edge_vectors
    for k in range(len(sides)):
        for l in range(k + 1, len(sides)):
            w = cross(E[sides[k]], E[sides[l]])
            p, q = roles[k], roles[l]
            W[p][q] += w / 2
            W[q][p] += w / 2
    return W


def _regular_types(iso: Isoperimetrix) -> list[_ArcType]:
    m = iso.k2
    E, sig = iso.edge_vectors, iso.multiplicities
    out = []
    for i in range(m):
        for r in range(1, m - 1):
            j = (i + r + 1) % m
            mid = [(i + t) % m for t in range(1, r + 1)]
            F = (sum(E[t][0] for t in mid), sum(E[t][1] for t in mid))
            sF = sum(sig[t] for t in mid)
            cols = [(E[i][0], E[i][1], sig[i]), (F[0], F[1], sF), (E[j][0], E[j][1], sig[j])]
            M = [[Fraction(cols[c][r_]) for c in range(3)] for r_ in range(3)]
            Minv = _inv3(M)
            sides = (i, *mid, j)
            roles = (0,) + (1,) * r + (2,)
            out.append(_ArcType(
                i, r, sides, roles,
                np.array([[float(Minv[k][0]), float(Minv[k][1])] for k in range(3)]),
                np.array([float(Minv[k][2]) for k in range(3)]),
                np.array(_area_form(iso, sides, roles), dtype=float)))
    return out


def _inv3(M):
    a, b, c = M[0]
    d, e, f = M[1]
    g, h, i = M[2]
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    if det == 0:
        raise ZeroDivisionError("singular arc type")
    adj = [[e * i - f * h, c * h - b * i, b * f - c * e],
           [f * g - d * i, a * i - c * g, c * d - a * f],
           [d * h - e * g, b * g - a * h, a * e - b * d]]
    return [[x / det for x in row] for row in adj]


def _smallest_reaching(alpha, beta, gamma, target, lo, hi):
    """Smallest l in [lo, hi] with alpha l^2 + beta l + gamma >= target (inf if none)."""
    lo = np.asarray(lo, float)
    hi = np.asarray(hi, float)
    ok = lo <= hi
    f_lo = alpha * lo ** 2 + beta * lo + gamma
    scale = np.maximum(1.0, np.abs(target))
    res = np.where(ok & (f_lo >= target - _EPS * scale), lo, np.inf)
    need = ok & ~np.isfinite(res)
    if not need.any():
        return res
    A = np.broadcast_to(alpha, lo.shape)[need]
    B = np.broadcast_to(beta, lo.shape)[need]
    C = np.broadcast_to(gamma, lo.shape)[need] - np.broadcast_to(target, lo.shape)[need]
    L, H = lo[need], hi[need]
    roots = np.full((len(L), 2), np.inf)
    lin = np.abs(A) < 1e-15
    with np.errstate(divide="ignore", invalid="ignore"):
        roots[lin, 0] = np.where(np.abs(B[lin]) > 0, -C[lin] / B[lin], np.inf)
        disc = B * B - 4 * A * C
        q = -0.5 * (B + np.copysign(np.sqrt(np.maximum(disc, 0)), B))
        quad = ~lin & (disc >= -1e-12 * np.maximum(1, B * B))
        r1 = np.where(q != 0, q / A, np.inf)
        r2 = np.where(q != 0, C / q, 0.0)
        roots[quad, 0] = r1[quad]
        roots[quad, 1] = r2[quad]
    tol = 1e-12 * np.maximum(1.0, np.abs(L))
    inside = (roots >= L[:, None] - tol[:, None]) & (roots <= H[:, None] + tol[:, None])
    best = np.where(inside, roots, np.inf).min(axis=1)
    res[need] = np.maximum(best, L)
    return res


class CCMetric:
    """CC distance from the identity for a fixed isoperimetrix."""

    def __init__(self, iso: Isoperimetrix):
        self.iso = iso
        self.m = iso.k2
        self.P = iso.perimeter
        self.area_I = iso.area
        self.dual = np.array([[float(x), float(y)] for x, y in iso.dual.vertices])

    @cached_property
    def types(self) -> list[_ArcType]:
        return _regular_types(self.iso)

    # exact quantities ---------------------------------------------------

    def norm_exact(self, a, b) -> Fraction:
        return self.iso.norm((a, b))

    def c0_exact(self, a, b) -> Fraction:
        """First height reached by a regular geodesic over (a, b)."""
        if a == 0 and b == 0:
            return Fraction(0)
        i, p, q = sector_coordinates((a, b), self.iso.directions)
        u, w = self.iso.directions[i], self.iso.directions[(i + 1) % self.m]
        return p * q * cross(u, w) / 2

    def kind(self, g: GroupElement) -> str:
        if (g.a, g.b, g.c2) == (0, 0, 0):
            return THRESHOLD
        c0 = self.c0_exact(g.a, g.b)
        h = abs(Fraction(g.c2, 2))
        return UNSTABLE if h < c0 else THRESHOLD if h == c0 else REGULAR

    # vectorized distance -------------------------------------------------

    def norm(self, a, b) -> np.ndarray:
        v = np.stack([np.asarray(a, float), np.asarray(b, float)], axis=-1)
        return (v @ self.dual.T).max(axis=-1)

    def c0(self, a, b) -> np.ndarray:
        a = np.asarray(a, float)
        b = np.asarray(b, float)
        out = np.zeros(np.broadcast(a, b).shape)
        for i in range(self.m):
            u = np.array([float(x) for x in self.iso.directions[i]])
            w = np.array([float(x) for x in self.iso.directions[(i + 1) % self.m]])
            det = u[0] * w[1] - u[1] * w[0]
            p = (a * w[1] - b * w[0]) / det
            q = (u[0] * b - u[1] * a) / det
            inside = (p >= 0) & (q >= 0)
            out = np.where(inside, np.maximum(out, p * q * det / 2), out)
        return out

    def distance(self, a, b, c2) -> np.ndarray:
        """Vectorized CC distance of (a, b, c2/2) from the identity."""
        a, b, c2 = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float),
                                       np.asarray(c2, float))
        target = np.abs(c2)                       # needed doubled area
        nrm = self.norm(a, b)
        c0_2 = 2 * self.c0(a, b)
        best = np.where(target <= c0_2 + 1e-12 * np.maximum(1, c0_2), nrm, np.inf)
        todo = ~np.isfinite(best)
        if todo.any():
            best[todo] = self._regular_distance(a[todo], b[todo], target[todo], nrm[todo])
        return best

    def _regular_distance(self, a, b, target, nrm):
        best = np.full(a.shape, np.inf)
        for T in self.types:
            x0 = np.outer(a, T.solve_xy[:, 0]) + np.outer(b, T.solve_xy[:, 1])   # (n, 3)
            x1 = T.solve_l
            lo, hi = self._feasible(x0, x1, nrm)
            W = T.area_form
            alpha = x1 @ W @ x1
            beta = 2 * (x0 @ (W @ x1))
            gamma = np.einsum("ni,ij,nj->n", x0, W, x0)
            best = np.minimum(best, _smallest_reaching(alpha, beta, gamma, target, lo, hi))
        best = np.minimum(best, self._loop_distance(a, b, target))
        return best

    @staticmethod
    def _feasible(x0, x1, nrm):
        # s- >= 0, s+ >= 0, s - s- >= 0, s - s+ >= 0 as g0 + g1*l >= 0
        G0 = np.stack([x0[:, 0], x0[:, 2], x0[:, 1] - x0[:, 0], x0[:, 1] - x0[:, 2]], axis=1)
        G1 = np.array([x1[0], x1[2], x1[1] - x1[0], x1[1] - x1[2]])
        slack = 1e-12 * np.maximum(1.0, np.abs(G0))
        lo = nrm.copy()
        hi = np.full(len(nrm), np.inf)
        for k in range(4):
            g1 = G1[k]
            if g1 > 1e-15:
                lo = np.maximum(lo, -(G0[:, k] + slack[:, k]) / g1)
            elif g1 < -1e-15:
                hi = np.minimum(hi, (G0[:, k] + slack[:, k]) / -g1)
            else:
                hi = np.where(G0[:, k] >= -slack[:, k], hi, -np.inf)
        return lo, hi

    def _loop_distance(self, a, b, target):
        """Type (i, i): the whole polygon once, endpoint on the ray of -a_i."""
        out = np.full(a.shape, np.inf)
        E, sig, m, P = self.iso.edge_vectors, self.iso.multiplicities, self.m, self.P
        for i in range(m):
            ex, ey = float(E[i][0]), float(E[i][1])
            # (a, b) = -tau * E_i with tau >= 0
            tau = -(a * ex + b * ey) / (ex * ex + ey * ey)
            on_ray = (np.abs(a * ey - b * ex) <= 1e-12 * np.maximum(1, np.abs(a) + np.abs(b))) \
                & (tau >= -1e-12)
            if not on_ray.any():
                continue
            tau = np.maximum(tau, 0)
            # s = (l + tau sigma_i)/P, s- = s - tau, s+ = 0; area2 is quadratic in s
            sides = tuple((i + t) % m for t in range(m))
            roles = (0,) + (1,) * (m - 1)
            W = np.array(_area_form(self.iso, sides, roles), dtype=float)
            # f = (s - tau, s, 0)
            alpha_s = W[0, 0] + 2 * W[0, 1] + W[1, 1]
            beta_s = -2 * tau * (W[0, 0] + W[0, 1])
            gamma_s = tau * tau * W[0, 0]
            # l = P s - tau sigma_i, and s >= tau
            s_min = tau
            s_hit = _smallest_reaching(alpha_s, beta_s, gamma_s, target,
                                       s_min, np.full(a.shape, np.inf))
            ell = P * s_hit - tau * sig[i]
            out = np.where(on_ray, np.minimum(out, ell), out)
        return out

    # scalar API with witnesses ------------------------------------------

    def max_area_at_length(self, a, b, ell) -> tuple[float, IArc | None]:
        """Largest doubled-height/2 (area) over arcs from 0 to (a, b) of L-length ell."""
        nrm = float(self.norm_exact(a, b))
        if ell < nrm - 1e-9:
            raise ValueError(f"length {ell} below the norm {nrm}")
        best, wit = float(self.c0_exact(a, b)) if abs(ell - nrm) <= 1e-12 else -np.inf, None
        if wit is None and np.isfinite(best):
            wit = self._staircase_arc(a, b)
        for T, x in self._feasible_arcs(a, b, ell):
            area = float(x @ T.area_form @ x) / 2
            if area > best:
                best, wit = area, self._make_arc(T.sides, T.roles, x)
        for sides, roles, x in self._feasible_loops(a, b, ell):
            area = float(x @ np.array(_area_form(self.iso, sides, roles), dtype=float) @ x) / 2
            if area > best:
                best, wit = area, self._make_arc(sides, roles, x)
        if not np.isfinite(best):
            raise ValueError("no feasible arc")
        return best, wit

    def _feasible_arcs(self, a, b, ell):
        for T in self.types:
            x = T.solve_xy @ np.array([a, b], float) + T.solve_l * ell
            tol = 1e-9 * max(1.0, ell)
            if x[0] >= -tol and x[2] >= -tol and x[1] - x[0] >= -tol and x[1] - x[2] >= -tol:
                yield T, np.maximum(x, 0)

    def _feasible_loops(self, a, b, ell):
        E, sig, m, P = self.iso.edge_vectors, self.iso.multiplicities, self.m, self.P
        for i in range(m):
            ex, ey = float(E[i][0]), float(E[i][1])
            if abs(a * ey - b * ex) > 1e-12:
                continue
            tau = -(a * ex + b * ey) / (ex * ex + ey * ey)
            if tau < -1e-12:
                continue
            s = (ell + tau * sig[i]) / P
            if s - tau < -1e-9:
                continue
            sides = tuple((i + t) % m for t in range(m))
            yield sides, (0,) + (1,) * (m - 1), np.array([max(s - tau, 0), s, 0.0])

    def _make_arc(self, sides, roles, x) -> IArc:
        exps = tuple(float(x[r]) for r in roles)
        s = float(x[1])
        E = self.iso.edge_vectors
        i = sides[0]
        # start of side i on s*I sits at s * (E_0 + ... + E_{i-1})
        vx = s * sum(float(E[t][0]) for t in range(i + 1))
        vy = s * sum(float(E[t][1]) for t in range(i + 1))
        q = (exps[0] * float(E[i][0]) - vx, exps[0] * float(E[i][1]) - vy)
        return IArc(i, sides[-1], float(x[0]), s, float(x[2]), q, tuple(sides), exps)

    def _staircase_arc(self, a, b) -> IArc | None:
        if a == 0 and b == 0:
            return None
        i, p, q = sector_coordinates((a, b), self.iso.directions)
        j = (i + 1) % self.m
        sm = float(p) / self.iso.multiplicities[i]
        sp = float(q) / self.iso.multiplicities[j]
        return IArc(i, j, sm, max(sm, sp), sp, (0.0, 0.0), (i, j), (sm, sp))

    def cc_distance(self, g: GroupElement) -> CCResult:
        kind = self.kind(g)
        if (g.a, g.b, g.c2) == (0, 0, 0):
            return CCResult(0.0, THRESHOLD, None, exact=Fraction(0))
        if kind in (UNSTABLE, THRESHOLD):
            n = self.norm_exact(g.a, g.b)
            return CCResult(float(n), kind, self._staircase_arc(g.a, g.b), exact=n)
        d = float(self.distance([g.a], [g.b], [g.c2])[0])
        if not np.isfinite(d):
            raise ArithmeticError(f"no arc reaches {g}")  # pragma: no cover
        _, wit = self.max_area_at_length(g.a, g.b, d)
        return CCResult(d, REGULAR, wit)

    def distance_bisect(self, g: GroupElement, tol: float = 1e-11) -> float:
        """Oracle: bisection on the monotone max-area function."""
        h = abs(g.c2) / 2
        if h <= float(self.c0_exact(g.a, g.b)):
            return float(self.norm_exact(g.a, g.b))
        lo = float(self.norm_exact(g.a, g.b))
        hi = max(lo, 1.0)
        while self.max_area_at_length(g.a, g.b, hi)[0] < h:
            hi *= 2
        while hi - lo > tol * max(1.0, hi):
            mid = (lo + hi) / 2
            if self.max_area_at_length(g.a, g.b, mid)[0] >= h:
                hi = mid
            else:
                lo = mid
        return hi

    def shadow(self, g: GroupElement) -> list[tuple[float, float]]:
        """Witness shadow polyline from 0 to (a, b)."""
        if g.c2 < 0:
            pts = self.shadow(GroupElement(g.a, g.b, -g.c2))
            return [(g.a - x, g.b - y) for x, y in reversed(pts)]
        res = self.cc_distance(g)
        if res.witness is None:
            return [(0.0, 0.0)]
        return res.witness.polyline(self.iso)


def cc_distance(g: GroupElement, iso: Isoperimetrix) -> CCResult:
    return CCMetric(iso).cc_distance(g)


def loop_distance_exact(c: Fraction, iso: Isoperimetrix) -> float:
    """Distance of (0, 0, c): the perimeter of the isoperimetrix scaled to area |c|."""
    return iso.perimeter * math.sqrt(abs(c) / iso.area)


def as_float_point(v):
    x, y = as_point(v)
    return float(x), float(y)
