"""Exact arithmetic in the integer Heisenberg group.

Elements are stored in exponential coordinates with the height doubled,
``(a, b, c2)`` where ``c2 = 2c``.  The group law becomes

    (a1, b1, u1) * (a2, b2, u2) = (a1 + a2, b1 + b2, u1 + u2 + a1*b2 - b1*a2)

so everything stays in Python integers.  A triple is a lattice point iff
``c2 = a*b (mod 2)``.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from pathlib import Path
from typing import Iterable, Sequence


class GeneratingSetError(ValueError):
    """Raised for malformed or unusable generating sets."""


@dataclass(frozen=True, order=True)
class GroupElement:
    a: int
    b: int
    c2: int = 0

    def __post_init__(self):
        if (self.c2 - self.a * self.b) % 2:
            raise ValueError(
                f"({self.a}, {self.b}, c2={self.c2}) is not a lattice point: "
                "c2 must have the parity of a*b")

    @property
    def height(self) -> Fraction:
        return Fraction(self.c2, 2)

    @property
    def shadow(self) -> tuple[int, int]:
        return (self.a, self.b)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return multiply(self, other)

    def __invert__(self) -> "GroupElement":
        return inverse(self)

    def __pow__(self, n: int) -> "GroupElement":
        return power(self, n)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c2)


IDENTITY = GroupElement(0, 0, 0)


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    return GroupElement(g.a + h.a, g.b + h.b,
                        g.c2 + h.c2 + g.a * h.b - g.b * h.a)


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement(-g.a, -g.b, -g.c2)


def power(g: GroupElement, n: int) -> GroupElement:
    # one-parameter subgroups are straight lines in exponential coordinates
    return GroupElement(n * g.a, n * g.b, n * g.c2)


def commutator(g: GroupElement, h: GroupElement) -> GroupElement:
    return multiply(multiply(g, h), multiply(inverse(g), inverse(h)))


def epsilon(a: int, b: int) -> Fraction:
    """Fractional part of heights over the fiber (a, b): 1/2 iff a, b both odd."""
    return Fraction(1, 2) if (a % 2 and b % 2) else Fraction(0)


def wedge2(u: tuple[int, int], v: tuple[int, int]) -> int:
    return u[0] * v[1] - u[1] * v[0]


@dataclass(frozen=True)
class Generator:
    element: GroupElement
    label: str

    @property
    def projection(self) -> tuple[int, int]:
        return (self.element.a, self.element.b)

    @property
    def boost2(self) -> int:
        return self.element.c2


def wedge(u: Generator | tuple[int, int], v: Generator | tuple[int, int]) -> int:
    """Determinant of the projected vectors; swapping adjacent u, v moves c2 by 2(u^v)."""
    pu = u.projection if isinstance(u, Generator) else u
    pv = v.projection if isinstance(v, Generator) else v
    return wedge2(pu, pv)


def _default_inverse_label(label: str) -> str:
    return label[1:] if label.startswith("-") else "-" + label


@dataclass(frozen=True)
class GeneratingSet:
    """A symmetric finite alphabet for H(Z).

    ``generators`` is ordered; letters are referred to by index everywhere
    else in the package.  Classification of letters (significant / edge /
    interior) needs the hull and lives in :mod:`heisengrowth.planar`; it is
    exposed here lazily through :attr:`classification`.
    """

    generators: tuple[Generator, ...]
    name: str = ""

    def __post_init__(self):
        elems = [g.element for g in self.generators]
        if len(set(elems)) != len(elems):
            raise GeneratingSetError("duplicate generators")
        if IDENTITY in elems:
            raise GeneratingSetError("the identity is not allowed as a generator")
        labels = [g.label for g in self.generators]
        if len(set(labels)) != len(labels):
            raise GeneratingSetError("duplicate labels")
        present = set(elems)
        missing = [g.label for g in self.generators if inverse(g.element) not in present]
        if missing:
            raise GeneratingSetError(f"not symmetric: inverses missing for {missing}")

    # construction -------------------------------------------------------

    @classmethod
    def from_triples(cls, triples: Iterable[tuple[str, int, int, int]], symmetrize: bool = False,
                     name: str = "") -> "GeneratingSet":
        gens: list[Generator] = []
        seen: set[GroupElement] = set()
        for label, a, b, c2 in triples:
            g = GroupElement(int(a), int(b), int(c2))
            if g in seen:
                raise GeneratingSetError(f"duplicate generator {label}")
            gens.append(Generator(g, label))
            seen.add(g)
        if symmetrize:
            for gen in list(gens):
                inv = inverse(gen.element)
                if inv not in seen:
                    gens.append(Generator(inv, _default_inverse_label(gen.label)))
                    seen.add(inv)
        return cls(tuple(gens), name=name)

    # basic data ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self.generators)

    def __getitem__(self, i: int) -> Generator:
        return self.generators[i]

    def __iter__(self):
        return iter(self.generators)

    @property
    def labels(self) -> list[str]:
        return [g.label for g in self.generators]

    @cached_property
    def index_of_label(self) -> dict[str, int]:
        return {g.label: i for i, g in enumerate(self.generators)}

    @cached_property
    def inverse_index(self) -> tuple[int, ...]:
        pos = {g.element: i for i, g in enumerate(self.generators)}
        return tuple(pos[inverse(g.element)] for g in self.generators)

    @cached_property
    def swap_lcm_N(self) -> int:
        """lcm of |u^v| over pairs with nonzero wedge (commuting pairs are skipped)."""
        ws = {abs(wedge(u, v)) for u in self.generators for v in self.generators}
        ws.discard(0)
        if not ws:
            raise GeneratingSetError("all projections are parallel")
        return reduce(math.lcm, ws)

    @cached_property
    def classification(self) -> tuple[str, ...]:
        from .planar import hull_and_classify
        return hull_and_classify(self)[1]

    def parse_word(self, text: str | Sequence[str]) -> "SpellingPath":
        tokens = text.split() if isinstance(text, str) else list(text)
        try:
            return SpellingPath(tuple(self.index_of_label[t] for t in tokens))
        except KeyError as exc:
            raise GeneratingSetError(f"unknown letter {exc.args[0]!r}") from None

    def format_word(self, path: "SpellingPath | Sequence[int]") -> str:
        letters = path.letters if isinstance(path, SpellingPath) else path
        return " ".join(self.generators[i].label for i in letters)

    def check_generation(self, radius: int = 8) -> bool:
        """Warn if e3 = (0,0,c2=2) is not reached within ``radius``.

        Deciding generation in general is out of reach; a short BFS is the
        practical check.
        """
        from .ball import bfs_ball
        table = bfs_ball(self, radius, store_pred=False)
        ok = GroupElement(0, 0, 2) in table and GroupElement(1, 0, 0) in table and \
            GroupElement(0, 1, 0) in table
        if not ok:
            warnings.warn(f"generating set {self.name or self.labels}: e1, e2, e3 not all "
                          f"reached within radius {radius}", stacklevel=2)
        return ok

    def to_json(self) -> dict:
        return {"name": self.name,
                "generators": [{"label": g.label, "element": list(g.element.as_tuple())}
                               for g in self.generators],
                "symmetrize": False}


@dataclass(frozen=True)
class SpellingPath:
    letters: tuple[int, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __add__(self, other: "SpellingPath") -> "SpellingPath":
        return SpellingPath(self.letters + other.letters)

    @property
    def length(self) -> int:
        return len(self.letters)


def as_letters(path: SpellingPath | Sequence[int]) -> tuple[int, ...]:
    return path.letters if isinstance(path, SpellingPath) else tuple(path)


def evaluate(path: SpellingPath | Sequence[int], S: GeneratingSet) -> GroupElement:
    a = b = c2 = 0
    gens = S.generators
    n = len(gens)
    for i in as_letters(path):
        if not 0 <= i < n:
            raise IndexError(f"letter index {i} out of range for {n} generators")
        e = gens[i].element
        c2 += e.c2 + a * e.b - b * e.a
        a += e.a
        b += e.b
    return GroupElement(a, b, c2)


def shadow_polyline(path: SpellingPath | Sequence[int], S: GeneratingSet) -> list[tuple[int, int]]:
    pts = [(0, 0)]
    x = y = 0
    for i in as_letters(path):
        p = S.generators[i].projection
        x += p[0]
        y += p[1]
        pts.append((x, y))
    return pts


def balayage_area2(path: SpellingPath | Sequence[int], S: GeneratingSet) -> int:
    """Twice the signed area of the shadow closed up by the chord to the origin."""
    pts = shadow_polyline(path, S)
    # the closing chord ends at the origin, so its shoelace term vanishes
    return sum(wedge2(pts[k], pts[k + 1]) for k in range(len(pts) - 1))


def boost2(path: SpellingPath | Sequence[int], S: GeneratingSet) -> int:
    return sum(S.generators[i].boost2 for i in as_letters(path))


# presets -----------------------------------------------------------------

PRESETS: dict[str, list[tuple[str, int, int, int]]] = {
    "std": [("e1", 1, 0, 0), ("e2", 0, 1, 0)],
    "std3": [("e1", 1, 0, 0), ("e2", 0, 1, 0), ("e3", 0, 0, 2)],
    # e1*e2 = (1, 1, c2=1), i.e. height 1/2
    "hex": [("e1", 1, 0, 0), ("e2", 0, 1, 0), ("e12", 1, 1, 1)],
    "abAB": [("a", 1, 0, 0), ("b", 0, 1, 0), ("A", 3, 0, 0), ("B", 0, 3, 0)],
}


def preset(name: str) -> GeneratingSet:
    try:
        triples = PRESETS[name]
    except KeyError:
        raise GeneratingSetError(f"unknown preset {name!r}; known: {sorted(PRESETS)}") from None
    return GeneratingSet.from_triples(triples, symmetrize=True, name=name)


def load_generating_set(source: str | Path) -> GeneratingSet:
    """Load a preset name, a JSON document, or a whitespace text file.

    JSON: ``{"generators": [{"label": "a", "element": [1, 0, 0]}, ...],
    "symmetrize": true}`` with elements given as (a, b, c2).
    Text: one ``label a b c2`` per line; ``# symmetrize`` on its own line
    turns on symmetrization; other ``#`` lines are comments.
    """
    if isinstance(source, str) and source in PRESETS:
        return preset(source)
    path = Path(source)
    if not path.exists():
        raise GeneratingSetError(f"no preset or file named {source!r}")
    text = path.read_text()
    try:
        if path.suffix == ".json" or text.lstrip().startswith("{"):
            doc = json.loads(text)
            triples = [(g["label"], *g["element"]) for g in doc["generators"]]
            symmetrize = bool(doc.get("symmetrize", False))
            name = doc.get("name", path.stem)
        else:
            triples, symmetrize = [], False
            for line in text.splitlines():
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    symmetrize |= line.lstrip("# ").lower().startswith("symmetrize")
                    continue
                label, a, b, c2 = line.split()
                triples.append((label, int(a), int(b), int(c2)))
            name = path.stem
    except (KeyError, ValueError, TypeError, json.JSONDecodeError) as exc:
        raise GeneratingSetError(f"malformed generating-set file {path}: {exc}") from exc
    try:
        return GeneratingSet.from_triples(triples, symmetrize=symmetrize, name=name)
    except ValueError as exc:
        raise GeneratingSetError(str(exc)) from exc
