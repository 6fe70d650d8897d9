"""Exact rational planar geometry for the projected generating set.

Points are pairs of ``Fraction``.  Polygons are stored counterclockwise,
starting from the vertex of smallest polar angle in [0, 2*pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Sequence

from .group import GeneratingSet, GeneratingSetError

Point = tuple[Fraction, Fraction]

SIGNIFICANT, EDGE, INTERIOR = "significant", "edge", "interior"


class GeometryError(ValueError):
    pass


def as_point(v: Sequence) -> Point:
    return (Fraction(v[0]), Fraction(v[1]))


def cross(u: Sequence, v: Sequence):
    return u[0] * v[1] - u[1] * v[0]


def dot(u: Sequence, v: Sequence):
    return u[0] * v[0] + u[1] * v[1]


def _half(v: Sequence) -> int:
    # 0 for polar angle in [0, pi), 1 for [pi, 2pi)
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def angle_key(v: Sequence):
    """Sort key equivalent to polar angle in [0, 2pi), exact."""
    if v[0] == 0 and v[1] == 0:
        raise GeometryError("the zero vector has no direction")
    return _AngleKey(_half(v), as_point(v))


class _AngleKey:
    __slots__ = ("h", "v")

    def __init__(self, h, v):
        self.h, self.v = h, v

    def __lt__(self, other):
        if self.h != other.h:
            return self.h < other.h
        return cross(self.v, other.v) > 0

    def __eq__(self, other):
        return self.h == other.h and cross(self.v, other.v) == 0


def convex_hull(points: Iterable[Sequence]) -> list[Point]:
    """Strict convex hull (collinear points dropped), exact, monotone chain."""
    pts = sorted({as_point(p) for p in points})
    if len(pts) < 3:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and cross(_sub(lower[-1], lower[-2]), _sub(p, lower[-2])) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(_sub(upper[-1], upper[-2]), _sub(p, upper[-2])) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _sub(u, v):
    return (u[0] - v[0], u[1] - v[1])


def _canonical_order(vertices: Sequence[Point]) -> tuple[Point, ...]:
    """Rotate a CCW cycle around the origin so the smallest polar angle comes first."""
    start = min(range(len(vertices)), key=lambda i: angle_key(vertices[i]))
    return tuple(vertices[start:]) + tuple(vertices[:start])


@dataclass(frozen=True)
class ConvexPolygon:
    vertices: tuple[Point, ...]

    @classmethod
    def from_points(cls, points: Iterable[Sequence]) -> "ConvexPolygon":
        hull = convex_hull(points)
        if len(hull) < 3:
            raise GeometryError("degenerate hull: projections are collinear")
        poly = cls(tuple(hull))
        if poly.contains_strictly((0, 0)):
            return cls(_canonical_order(hull))
        return poly

    def __len__(self) -> int:
        return len(self.vertices)

    @cached_property
    def symmetric(self) -> bool:
        vs = set(self.vertices)
        return all((-x, -y) in vs for x, y in self.vertices)

    def edges(self):
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def contains(self, p: Sequence) -> bool:
        p = as_point(p)
        return all(cross(_sub(v, u), _sub(p, u)) >= 0 for u, v in self.edges())

    def contains_strictly(self, p: Sequence) -> bool:
        p = as_point(p)
        return all(cross(_sub(v, u), _sub(p, u)) > 0 for u, v in self.edges())

    def on_boundary(self, p: Sequence) -> bool:
        return self.contains(p) and not self.contains_strictly(p)

    @cached_property
    def area(self) -> Fraction:
        return Fraction(sum(cross(u, v) for u, v in self.edges()), 2)

    def scaled(self, t) -> "ConvexPolygon":
        t = Fraction(t)
        vs = [(t * x, t * y) for x, y in self.vertices]
        return ConvexPolygon(_canonical_order(vs) if t > 0 else tuple(vs))

    def to_json(self) -> list[list[str]]:
        return [[_frac_str(x), _frac_str(y)] for x, y in self.vertices]


def _frac_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def line_meet(u: Point, v: Point) -> Point:
    """The point n with n.u = n.v = 1."""
    det = cross(u, v)
    if det == 0:
        raise GeometryError("parallel supporting lines")
    return (Fraction(v[1] - u[1]) / det, Fraction(u[0] - v[0]) / det)


def polar_dual(Q: ConvexPolygon) -> ConvexPolygon:
    if not Q.contains_strictly((0, 0)):
        raise GeometryError("polar dual needs the origin in the interior")
    n = len(Q)
    vs = Q.vertices
    dual = [line_meet(vs[i], vs[(i + 1) % n]) for i in range(n)]
    return ConvexPolygon(_canonical_order(dual))


def hull_and_classify(S: GeneratingSet) -> tuple[ConvexPolygon, tuple[str, ...]]:
    projections = [g.projection for g in S.generators]
    try:
        Q = ConvexPolygon.from_points(projections)
    except GeometryError as exc:
        raise GeneratingSetError(f"rank-deficient projection: {exc}") from None
    verts = set(Q.vertices)
    labels = []
    for p in projections:
        pp = as_point(p)
        if pp in verts:
            labels.append(SIGNIFICANT)
        elif Q.on_boundary(pp):
            labels.append(EDGE)
        else:
            labels.append(INTERIOR)
    return Q, tuple(labels)


def _rational_gcd(values: Iterable[Fraction]) -> Fraction:
    vals = [Fraction(v) for v in values]
    num = reduce(math.gcd, (v.numerator for v in vals))
    den = reduce(math.lcm, (v.denominator for v in vals))
    return Fraction(num, den)


@dataclass(frozen=True)
class Isoperimetrix:
    """Significant directions a_i with multiplicities sigma_i.

    The standard isoperimetrix is the closed polygon with edge vectors
    sigma_i * a_i.  ``scale`` is the lambda with lambda * (rotated dual) = I.
    """

    directions: tuple[Point, ...]
    multiplicities: tuple[int, ...]
    scale: Fraction
    hull: ConvexPolygon
    dual: ConvexPolygon

    @property
    def k2(self) -> int:
        return len(self.directions)

    @cached_property
    def integer_directions(self) -> tuple[tuple[int, int], ...]:
        out = []
        for x, y in self.directions:
            if x.denominator != 1 or y.denominator != 1:
                raise GeometryError("directions are not integral")
            out.append((int(x), int(y)))
        return tuple(out)

    @cached_property
    def edge_vectors(self) -> tuple[Point, ...]:
        return tuple((s * x, s * y) for s, (x, y) in zip(self.multiplicities, self.directions))

    @cached_property
    def vertices(self) -> tuple[Point, ...]:
        pts = [(Fraction(0), Fraction(0))]
        for ex, ey in self.edge_vectors[:-1]:
            x, y = pts[-1]
            pts.append((x + ex, y + ey))
        return tuple(pts)

    @cached_property
    def area(self) -> Fraction:
        vs = self.vertices
        n = len(vs)
        return Fraction(sum(cross(vs[i], vs[(i + 1) % n]) for i in range(n)), 2)

    @cached_property
    def perimeter(self) -> int:
        # every a_i sits on L, so its L-length is 1
        return sum(self.multiplicities)

    def norm(self, v: Sequence) -> Fraction:
        return L_norm(v, self.hull, self.dual)

    def sector_of(self, v: Sequence) -> int:
        return sector_of(v, self.directions)

    def to_json(self) -> dict:
        return {
            "L": self.hull.to_json(),
            "dual": self.dual.to_json(),
            "directions": [[_frac_str(x), _frac_str(y)] for x, y in self.directions],
            "sigma": list(self.multiplicities),
            "lambda": _frac_str(self.scale),
            "isoperimetrix": [[_frac_str(x), _frac_str(y)] for x, y in self.vertices],
            "area": _frac_str(self.area),
        }


def isoperimetrix(Q: ConvexPolygon | GeneratingSet) -> Isoperimetrix:
    if isinstance(Q, GeneratingSet):
        Q = hull_and_classify(Q)[0]
    if not Q.symmetric:
        raise GeometryError("hull is not centrally symmetric")
    dual = polar_dual(Q)
    vs = Q.vertices
    n = len(vs)
    meets = [line_meet(vs[i], vs[(i + 1) % n]) for i in range(n)]
    mu = []
    for i, (x, y) in enumerate(vs):
        ex, ey = _sub(meets[i], meets[i - 1])
        # rotate the dual edge on the line n.a_i = 1 by -90 degrees; it is mu_i * a_i
        rx, ry = ey, -ex
        m = rx / x if x != 0 else ry / y
        if m <= 0 or (rx, ry) != (m * x, m * y):
            raise GeometryError("dual edge not parallel to its direction")
        mu.append(m)
    g = _rational_gcd(mu)
    sigma = tuple(int(m / g) for m in mu)
    return Isoperimetrix(tuple(vs), sigma, 1 / g, Q, dual)


def L_norm(v: Sequence, Q: ConvexPolygon, dual: ConvexPolygon | None = None) -> Fraction:
    """Minkowski functional of Q, i.e. the max of n.v over dual vertices."""
    if dual is None:
        dual = polar_dual(Q)
    v = as_point(v)
    return max(dot(n, v) for n in dual.vertices)


def sector_of(v: Sequence, directions: Sequence[Point]) -> int:
    """0-based i with v in cone(a_i, a_{i+1}); rays go to the sector they start."""
    v = as_point(v)
    if v == (0, 0):
        raise GeometryError("the origin has no sector")
    n = len(directions)
    for i in range(n):
        u, w = directions[i], directions[(i + 1) % n]
        if cross(u, v) >= 0 and cross(v, w) > 0 and not (cross(u, v) == 0 and dot(u, v) < 0):
            return i
    raise GeometryError(f"{v} not in any sector")


def sector_coordinates(v: Sequence, directions: Sequence[Point], i: int | None = None):
    """(i, p, q) with v = p*a_i + q*a_{i+1}, p > 0 or v on ray a_i, q >= 0."""
    if i is None:
        i = sector_of(v, directions)
    u, w = directions[i], directions[(i + 1) % len(directions)]
    v = as_point(v)
    det = cross(u, w)
    p = cross(v, w) / det
    q = cross(u, v) / det
    return i, p, q


def significant_letters(S: GeneratingSet, iso: Isoperimetrix) -> list[list[int]]:
    """Letters projecting to each a_i, highest boost first (ties by index)."""
    out = []
    for d in iso.directions:
        idx = [i for i, g in enumerate(S.generators) if as_point(g.projection) == d]
        idx.sort(key=lambda i: (-S.generators[i].boost2, i))
        out.append(idx)
    return out
