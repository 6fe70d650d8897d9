from heisengrowth.group import preset
from heisengrowth.shapes import SimpleShape
from heisengrowth.comparison import affine_map, linear_comparison_probe

EMPTY = ((),) * 5


def test_identical_shapes_have_zero_difference():
    S = preset("std")
    w = SimpleShape(1, 3, (0,) * 4, EMPTY)
    rep = linear_comparison_probe(w, w, S)
    assert rep.status == "exact"
    assert rep.pieces[0]["models"] == {"0,0,0": ["0", "0", "0", "0"]}


def test_central_loop_gives_constant_difference():
    S = preset("std")
    loop = S.parse_word("e1 e2 -e1 -e2").letters
    w = SimpleShape(1, 3, (0,) * 4, EMPTY)
    w2 = SimpleShape(1, 3, (0,) * 4, (loop, (), (), (), ()))
    rep = linear_comparison_probe(w, w2, S, K=4)
    assert rep.status == "exact"
    model = rep.pieces[4]["models"]["0,0,0"]
    assert model == ["-2", "0", "0", "0"]


def test_different_corrections_fit_exactly():
    S = preset("std")
    L = S.index_of_label
    w = SimpleShape(1, 3, (1, 0, 1, 0), EMPTY)
    w2 = SimpleShape(1, 3, (0, 1, 2, 0), ((L["-e2"],), (L["e1"],), (), (L["e2"],), ()))
    rep = linear_comparison_probe(w, w2, S, samples=300)
    assert rep.status == "exact" and rep.pairs >= 50
    assert all(p["determined"] for p in rep.pieces.values())


def test_disjoint_images_are_vacuous():
    S = preset("std")
    w = SimpleShape(2, 2, (0,) * 4, EMPTY)
    w2 = SimpleShape(2, 2, (1, 0, 0, 0), EMPTY)
    assert linear_comparison_probe(w, w2, S).status == "vacuous"


def test_affine_map_columns():
    S = preset("std")
    A = affine_map(SimpleShape(1, 3, (0,) * 4, EMPTY), S)
    assert A.offset == (0, 0, 0)
    assert A.columns == ((1, 0, 1), (0, 1, 1), (-1, 0, 1))


def test_hex_pair_exact():
    S = preset("hex")
    w = SimpleShape(1, 4, (0,) * 6, ((),) * 7)
    w2 = SimpleShape(1, 4, (1, 0, 0, 1, 0, 0), ((),) * 7)
    rep = linear_comparison_probe(w, w2, S, samples=300)
    assert rep.status == "exact" and rep.pairs > 50
