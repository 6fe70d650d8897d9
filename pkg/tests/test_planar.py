import random
from fractions import Fraction as F

import numpy as np
import pytest

from heisengrowth.group import GeneratingSet, GeneratingSetError, preset
from heisengrowth.planar import (EDGE, INTERIOR, SIGNIFICANT, ConvexPolygon, GeometryError,
                                 L_norm, hull_and_classify, isoperimetrix, polar_dual, sector_of,
                                 significant_letters)


def pts(*xy):
    return tuple((F(x), F(y)) for x, y in xy)


def test_std_hull_is_diamond():
    Q, cls = hull_and_classify(preset("std"))
    assert Q.vertices == pts((1, 0), (0, 1), (-1, 0), (0, -1))
    assert set(cls) == {SIGNIFICANT}


def test_hex_hull_and_std3_interior():
    Q, _ = hull_and_classify(preset("hex"))
    assert len(Q) == 6 and Q.symmetric
    S3 = preset("std3")
    _, cls = hull_and_classify(S3)
    assert cls[S3.index_of_label["e3"]] == INTERIOR
    assert cls[S3.index_of_label["-e3"]] == INTERIOR


def test_edge_letters():
    S = GeneratingSet.from_triples([("x", 2, 0, 0), ("y", 0, 2, 0), ("z", 1, 1, 1)], symmetrize=True)
    _, cls = hull_and_classify(S)
    assert cls[S.index_of_label["z"]] == EDGE
    assert cls[S.index_of_label["x"]] == SIGNIFICANT


def test_collinear_rejected():
    S = GeneratingSet.from_triples([("x", 1, 0, 0), ("y", 2, 0, 0)], symmetrize=True)
    with pytest.raises(GeneratingSetError):
        hull_and_classify(S)


def test_polar_dual_square_diamond():
    diamond = ConvexPolygon.from_points([(1, 0), (0, 1), (-1, 0), (0, -1)])
    square = polar_dual(diamond)
    assert set(square.vertices) == set(pts((1, 1), (-1, 1), (-1, -1), (1, -1)))
    assert set(polar_dual(square).vertices) == set(diamond.vertices)
    dual3 = polar_dual(diamond.scaled(3))
    assert set(dual3.vertices) == {(x / 3, y / 3) for x, y in square.vertices}


def test_polar_dual_needs_interior_origin():
    with pytest.raises(GeometryError):
        polar_dual(ConvexPolygon.from_points([(1, 1), (2, 1), (1, 2)]))


def random_symmetric_polygon(rng):
    n = rng.randrange(2, 7)
    raw = [(F(rng.randrange(-9, 10), rng.randrange(1, 5)), F(rng.randrange(-9, 10), rng.randrange(1, 5)))
           for _ in range(n)]
    raw += [(-x, -y) for x, y in raw]
    return ConvexPolygon.from_points(raw)


def test_duality_is_involution():
    rng = random.Random(11)
    done = 0
    while done < 100:
        try:
            Q = random_symmetric_polygon(rng)
        except GeometryError:
            continue
        if not Q.contains_strictly((0, 0)):
            continue
        assert polar_dual(polar_dual(Q)).vertices == Q.vertices
        done += 1


def test_std_isoperimetrix():
    iso = isoperimetrix(preset("std"))
    assert iso.multiplicities == (1, 1, 1, 1)
    assert iso.integer_directions == ((1, 0), (0, 1), (-1, 0), (0, -1))
    assert iso.area == 1 and iso.perimeter == 4


def test_figure_two_hexagon():
    Q = ConvexPolygon.from_points([(1, 0), (F(3, 2), 1), (0, 1), (-1, 0), (F(-3, 2), -1), (0, -1)])
    iso = isoperimetrix(Q)
    assert iso.multiplicities == (1, 2, 2, 1, 2, 2)
    assert iso.scale == 2
    # drawn vertices of the figure: 0, a1, a1 + 2 a2, ...
    assert iso.vertices[:4] == pts((0, 0), (1, 0), (4, 2), (4, 4))


@pytest.mark.parametrize("name", ["std", "hex", "abAB", "std3"])
def test_isoperimetrix_closes(name):
    iso = isoperimetrix(preset(name))
    sx = sum(s * x for s, (x, y) in zip(iso.multiplicities, iso.directions))
    sy = sum(s * y for s, (x, y) in zip(iso.multiplicities, iso.directions))
    assert (sx, sy) == (0, 0)
    assert np.gcd.reduce(iso.multiplicities) == 1
    for (ex, ey), (x, y) in zip(iso.edge_vectors, iso.directions):
        assert ex * y - ey * x == 0


def test_hex_isoperimetrix():
    iso = isoperimetrix(preset("hex"))
    assert iso.k2 == 6 and iso.multiplicities == (1,) * 6


def test_rotated_set_has_rotated_isoperimetrix():
    S = preset("hex")
    R = GeneratingSet.from_triples([(g.label, -g.element.b, g.element.a, g.element.c2) for g in S])
    a, b = isoperimetrix(S), isoperimetrix(R)
    assert sorted(a.multiplicities) == sorted(b.multiplicities)
    assert a.area == b.area


def test_norm_values():
    iso = isoperimetrix(preset("std"))
    assert iso.norm((1, 0)) == 1
    assert iso.norm((3, 4)) == 7
    assert iso.norm((-3, 4)) == iso.norm((3, -4))
    hexa = isoperimetrix(preset("hex"))
    assert hexa.norm((2, 1)) == 2 and hexa.norm((1, -1)) == 2


def test_norm_is_a_norm():
    rng = random.Random(5)
    Q = hull_and_classify(preset("hex"))[0]
    for _ in range(200):
        u = (F(rng.randrange(-20, 21), 3), F(rng.randrange(-20, 21), 7))
        v = (F(rng.randrange(-20, 21), 2), F(rng.randrange(-20, 21), 5))
        t = F(rng.randrange(1, 9), rng.randrange(1, 9))
        assert L_norm((u[0] + v[0], u[1] + v[1]), Q) <= L_norm(u, Q) + L_norm(v, Q)
        assert L_norm((t * u[0], t * u[1]), Q) == t * L_norm(u, Q)


def test_sector_of():
    iso = isoperimetrix(preset("hex"))
    assert iso.sector_of((5, 1)) == 0
    assert iso.sector_of((1, 1)) == 1        # ray of a_2 goes to the sector it starts
    assert iso.sector_of((1, 0)) == 0
    assert iso.sector_of((-1, -5)) == 4
    with pytest.raises(GeometryError):
        iso.sector_of((0, 0))


def test_significant_letters_by_boost():
    S = GeneratingSet.from_triples([("a", 1, 0, 0), ("b", 0, 1, 0), ("c", 1, 0, 2)], symmetrize=True)
    iso = isoperimetrix(S)
    lists = significant_letters(S, iso)
    assert lists[0] == [S.index_of_label["c"], S.index_of_label["a"]]


@pytest.mark.parametrize("name", ["std", "hex"])
def test_isoperimetrix_maximizes_area_ratio(name):
    iso = isoperimetrix(preset(name))
    D = np.array([[float(x) for x, _ in iso.directions], [float(y) for _, y in iso.directions]])
    sigma = np.array(iso.multiplicities, float)
    _, _, vt = np.linalg.svd(D)
    kernel = vt[2:]
    best = float(iso.area) / float(iso.perimeter) ** 2

    def ratio(t):
        pts_ = np.cumsum((D * t).T, axis=0)
        x, y = pts_[:, 0], pts_[:, 1]
        area = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
        return area / t.sum() ** 2

    assert abs(ratio(sigma) - best) < 1e-12
    rng = np.random.default_rng(1)
    for _ in range(500):
        t = sigma + rng.normal(size=len(kernel)) @ kernel * rng.uniform(0, 0.5)
        if (t >= 0).all():
            assert ratio(t) <= best + 1e-12
