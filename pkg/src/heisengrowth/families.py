"""Parametric lattice-point families and their weighted counts.

A family assigns to each n >= 0 a finite subset of Z^d.  Elementary
families are cut out by equalities, inequalities and congruences whose
right-hand sides are affine in n; polyhedral families are finite unions of
them.  Counting enumerates an explicit bounding box, vectorized.

JSON form::

    {"name": "triangle", "dim": 2,
     "box": [{"lo": [0, 0], "hi": [0, 1]}, {"lo": [0, 0], "hi": [0, 1]}],
     "union": [{"constraints": [{"kind": "le", "a": [1, 1], "b": [0, 1]},
                                {"kind": "cong", "a": [1, 0], "b": [0, 0], "mod": 2}]}],
     "weight": [[1, [0, 0]]]}

``b`` and box bounds are [constant, coefficient of n]; ``weight`` is a list
of [coefficient, exponent vector] monomials (default 1).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import reduce
from pathlib import Path
from typing import Sequence

import numpy as np

DATA_DIR = Path(__file__).parent / "data" / "families"


class UnboundedFamily(ValueError):
    pass


@dataclass(frozen=True)
class Affine:
    const: int
    slope: int = 0

    def __call__(self, n: int) -> int:
        return self.const + self.slope * n

    def shift(self, k: int) -> "Affine":
        return Affine(self.const + k, self.slope)

    def neg(self) -> "Affine":
        return Affine(-self.const, -self.slope)

    def to_json(self):
        return [self.const, self.slope]


@dataclass(frozen=True)
class Constraint:
    kind: str            # "eq", "le" or "cong"
    a: tuple[int, ...]
    b: Affine
    mod: int = 0

    def __post_init__(self):
        if self.kind not in ("eq", "le", "cong"):
            raise ValueError(f"unknown constraint kind {self.kind!r}")
        if self.kind == "cong" and self.mod < 1:
            raise ValueError("congruence needs a positive modulus")

    def holds(self, X: np.ndarray, n: int) -> np.ndarray:
        v = X @ np.array(self.a, dtype=np.int64)
        b = self.b(n)
        if self.kind == "eq":
            return v == b
        if self.kind == "le":
            return v <= b
        return (v - b) % self.mod == 0

    def complement(self) -> list["Constraint"]:
        """Disjoint constraints whose union is the complement."""
        if self.kind == "eq":
            return [Constraint("le", self.a, self.b.shift(-1)),
                    Constraint("le", tuple(-x for x in self.a), self.b.neg().shift(-1))]
        if self.kind == "le":
            return [Constraint("le", tuple(-x for x in self.a), self.b.neg().shift(-1))]
        return [Constraint("cong", self.a, self.b.shift(r), self.mod) for r in range(1, self.mod)]

    def to_json(self):
        d = {"kind": self.kind, "a": list(self.a), "b": self.b.to_json()}
        if self.kind == "cong":
            d["mod"] = self.mod
        return d


@dataclass(frozen=True)
class ElementaryFamily:
    dim: int
    constraints: tuple[Constraint, ...] = ()

    def holds(self, X: np.ndarray, n: int) -> np.ndarray:
        ok = np.ones(len(X), dtype=bool)
        for c in self.constraints:
            ok &= c.holds(X, n)
        return ok

    def __and__(self, other: "ElementaryFamily") -> "ElementaryFamily":
        return ElementaryFamily(self.dim, self.constraints + other.constraints)


@dataclass(frozen=True)
class Box:
    lo: tuple[Affine, ...]
    hi: tuple[Affine, ...]

    def points(self, n: int) -> np.ndarray:
        ranges = [np.arange(l(n), h(n) + 1, dtype=np.int64) for l, h in zip(self.lo, self.hi)]
        if any(len(r) == 0 for r in ranges):
            return np.empty((0, len(ranges)), dtype=np.int64)
        grids = np.meshgrid(*ranges, indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    def hull(self, other: "Box") -> "Box":
        # a box valid for both: loosen slopes and constants (n >= 0)
        lo = tuple(Affine(min(a.const, b.const), min(a.slope, b.slope)) for a, b in zip(self.lo, other.lo))
        hi = tuple(Affine(max(a.const, b.const), max(a.slope, b.slope)) for a, b in zip(self.hi, other.hi))
        return Box(lo, hi)

    def to_json(self):
        return [{"lo": l.to_json(), "hi": h.to_json()} for l, h in zip(self.lo, self.hi)]


Weight = tuple[tuple[int, tuple[int, ...]], ...]


def eval_weight(weight: Weight | None, X: np.ndarray) -> np.ndarray:
    if not weight:
        return np.ones(len(X), dtype=object)
    total = np.zeros(len(X), dtype=object)
    Xo = X.astype(object)
    for coef, exps in weight:
        term = np.full(len(X), coef, dtype=object)
        for j, e in enumerate(exps):
            if e:
                term = term * Xo[:, j] ** e
        total = total + term
    return total


@dataclass(frozen=True)
class PolyhedralFamily:
    dim: int
    members: tuple[ElementaryFamily, ...]
    box: Box | None = None
    name: str = ""

    def points(self, n: int) -> np.ndarray:
        if self.box is None:
            raise UnboundedFamily(f"family {self.name or ''} needs an explicit bounding box")
        X = self.box.points(n)
        ok = np.zeros(len(X), dtype=bool)
        for m in self.members:
            ok |= m.holds(X, n)
        return X[ok]

    def moduli(self) -> list[int]:
        return [c.mod for m in self.members for c in m.constraints if c.kind == "cong"]

    # set operations -----------------------------------------------------

    def union(self, other: "PolyhedralFamily") -> "PolyhedralFamily":
        return PolyhedralFamily(self.dim, self.members + other.members, _merge_box(self.box, other.box))

    def intersection(self, other: "PolyhedralFamily") -> "PolyhedralFamily":
        members = tuple(a & b for a in self.members for b in other.members)
        box = self.box if self.box is not None else other.box
        return PolyhedralFamily(self.dim, members, box)

    def complement(self) -> "PolyhedralFamily":
        """Complement inside the bounding box."""
        if self.box is None:
            raise UnboundedFamily("complement needs a bounding box")
        # complement of a union is the intersection of the members' complements;
        # each member's complement is a union of single negated constraints
        pieces = []
        for m in self.members:
            alts = [ElementaryFamily(self.dim, (nc,)) for c in m.constraints for nc in c.complement()]
            pieces.append(alts)
        if not pieces:
            return PolyhedralFamily(self.dim, (ElementaryFamily(self.dim),), self.box)
        members = []
        for combo in itertools.product(*pieces):
            members.append(reduce(lambda x, y: x & y, combo))
        return PolyhedralFamily(self.dim, tuple(members), self.box)

    def difference(self, other: "PolyhedralFamily") -> "PolyhedralFamily":
        box = self.box
        other_in_box = PolyhedralFamily(other.dim, other.members, box)
        return self.intersection(other_in_box.complement())

    def pushforward(self, matrix: Sequence[Sequence[int]], offset: Sequence[int]) -> "PushforwardFamily":
        if self.box is None:
            raise UnboundedFamily("pushforward needs a bounding box")
        return PushforwardFamily(self, np.array(matrix, dtype=np.int64), np.array(offset, dtype=np.int64))

    def to_json(self) -> dict:
        return {"name": self.name, "dim": self.dim,
                "box": self.box.to_json() if self.box else None,
                "union": [{"constraints": [c.to_json() for c in m.constraints]} for m in self.members]}


def _merge_box(a: Box | None, b: Box | None) -> Box | None:
    if a is None or b is None:
        return None
    return a.hull(b)


@dataclass(frozen=True)
class PushforwardFamily:
    """Image of a family under x -> M x + t, evaluated lazily by mapping points."""

    base: PolyhedralFamily
    matrix: np.ndarray
    offset: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def points(self, n: int) -> np.ndarray:
        X = self.base.points(n)
        Y = X @ self.matrix.T + self.offset
        return np.unique(Y, axis=0) if len(Y) else Y.reshape(0, self.dim)

    def moduli(self) -> list[int]:
        return self.base.moduli()


@dataclass
class FamilySpec:
    family: PolyhedralFamily | PushforwardFamily
    weight: Weight | None = None
    name: str = ""
    notes: dict = field(default_factory=dict)

    def recurrence_order_bound(self) -> int:
        deg = max((sum(e) for _, e in self.weight), default=0) if self.weight else 0
        mods = self.family.moduli() or [1]
        return (self.family.dim + 1 + deg) * reduce(math.lcm, mods)


def count_family(family, n: int, weight: Weight | None = None) -> int:
    """Sum of the weight over the lattice points of family(n)."""
    X = family.points(n)
    return int(eval_weight(weight, X).sum()) if len(X) else 0


def counts(family, ns, weight: Weight | None = None) -> list[int]:
    return [count_family(family, n, weight) for n in ns]


# JSON IR ----------------------------------------------------------------------

def _affine(v) -> Affine:
    if isinstance(v, int):
        return Affine(v, 0)
    return Affine(int(v[0]), int(v[1]) if len(v) > 1 else 0)


def family_from_json(doc: dict) -> FamilySpec:
    try:
        dim = int(doc["dim"])
        box = None
        if doc.get("box"):
            if len(doc["box"]) != dim:
                raise ValueError("box dimension mismatch")
            box = Box(tuple(_affine(b["lo"]) for b in doc["box"]), tuple(_affine(b["hi"]) for b in doc["box"]))
        members = []
        for m in doc["union"]:
            cons = []
            for c in m.get("constraints", []):
                a = tuple(int(x) for x in c["a"])
                if len(a) != dim:
                    raise ValueError("constraint dimension mismatch")
                cons.append(Constraint(c["kind"], a, _affine(c["b"]), int(c.get("mod", 0))))
            members.append(ElementaryFamily(dim, tuple(cons)))
        fam: PolyhedralFamily | PushforwardFamily = PolyhedralFamily(dim, tuple(members), box, doc.get("name", ""))
        if "pushforward" in doc:
            pf = doc["pushforward"]
            fam = fam.pushforward(pf["matrix"], pf["offset"])
        weight = None
        if doc.get("weight"):
            weight = tuple((int(c), tuple(int(e) for e in exps)) for c, exps in doc["weight"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed family description: {exc}") from exc
    return FamilySpec(fam, weight, doc.get("name", ""), doc.get("notes", {}))


def load_family(path: str | Path) -> FamilySpec:
    p = Path(path)
    if not p.exists() and (DATA_DIR / f"{path}.json").exists():
        p = DATA_DIR / f"{path}.json"
    return family_from_json(json.loads(p.read_text()))


def shipped_families() -> dict[str, FamilySpec]:
    return {p.stem: load_family(p) for p in sorted(DATA_DIR.glob("*.json"))}
