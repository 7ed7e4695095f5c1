"""Normalization, intersection numbers, isotopy verdicts, twists."""

import pytest

from conftest import build_square, square_with_curves
from blowmap.isotopy import (MappingClassWord, apply_word, are_isotopic_arcs,
                             are_isotopic_curves, are_isotopic_graphs,
                             crossing_count, curve_sides, draw_curve_by_tokens,
                             draw_path, edge_multiplicity, graph_intersection,
                             intersection_number, is_essential,
                             isotope_off_graph, parallel_copy)
from blowmap.errors import NonzeroIntersection
from blowmap.oracle import oracle_isotopic_arcs, oracle_min_crossings
from blowmap.sphere import GraphView, build_complex


def test_paper_intersection_numbers():
    sk, ed = square_with_curves()
    assert graph_intersection(sk, "graph", "g1") == 2
    assert graph_intersection(sk, "graph", "g2") == 4
    assert intersection_number(sk, "g1", "g2") == 2
    assert sorted(map(tuple, curve_sides(sk, "g1"))) == [("A", "B"), ("C", "D")]
    assert sorted(map(tuple, curve_sides(sk, "g2"))) == [("A", "C"), ("B", "D")]
    assert is_essential(sk, "g1") and is_essential(sk, "g2")


def test_intersection_symmetric_and_invariant():
    sk, ed = square_with_curves()
    assert intersection_number(sk, "g1", "g2") == intersection_number(sk, "g2", "g1")
    # invariance under twisting both arguments by the same word
    work = sk.copy()
    w = MappingClassWord([("g2", 1)])
    apply_word(work, w, ["g1"])
    # twisting g1 about g2 changes g1 but i(g1, g2) is preserved
    assert intersection_number(work, "g1", "g2") == 2


def test_wiggle_straightened():
    # arc A->C crossing cd twice: both crossings removed, leaving the
    # face diagonal
    sk, ed = build_square()
    f1 = sk.face_of(sk.twin(ed["ab"]))
    cornerA = [d for d in sk.vertex_darts("A") if sk.face_of(d) == f1][0]
    cornerC = [d for d in sk.vertex_darts("C") if sk.face_of(d) == f1][0]
    side = ed["cd"] if sk.face_of(ed["cd"]) == f1 else sk.twin(ed["cd"])
    draw_path(sk, "wig", cornerA, [side, sk.twin(side)], cornerC)
    sk.check(strict=True)
    assert crossing_count(sk, "wig", "graph") == 2
    assert graph_intersection(sk, "graph", "wig") == 0
    # compare with the straight diagonal
    f1b = sk.face_of(sk.twin(ed["ab"]))
    cA = [d for d in sk.vertex_darts("A") if sk.face_of(d) == f1b][0]
    cC = [d for d in sk.vertex_darts("C") if sk.face_of(d) == f1b][0]
    draw_path(sk, "diag", cA, [], cC)
    assert are_isotopic_arcs(sk, "wig", "diag")


def test_half_bigon_straightened():
    # arc A->C crossing bc once, ending at C from the far side: removable
    sk, ed = build_square()
    f0 = sk.face_of(ed["ab"])
    f1 = sk.face_of(sk.twin(ed["ab"]))
    cornerA = [d for d in sk.vertex_darts("A") if sk.face_of(d) == f1][0]
    side_bc = ed["bc"] if sk.face_of(ed["bc"]) == f1 else sk.twin(ed["bc"])
    cornerC = [d for d in sk.vertex_darts("C") if sk.face_of(d) == f0][0]
    draw_path(sk, "wig", cornerA, [side_bc], cornerC)
    assert graph_intersection(sk, "graph", "wig") == 0


def test_arcs_opposite_sides_not_isotopic():
    # the two A->C diagonals pass on opposite sides of marked points
    sk, ed = build_square()
    f0 = sk.face_of(ed["ab"])
    f1 = sk.face_of(sk.twin(ed["ab"]))
    for face, name in ((f0, "d0"), (f1, "d1")):
        cA = [d for d in sk.vertex_darts("A") if sk.face_of(d) == face][0]
        cC = [d for d in sk.vertex_darts("C") if sk.face_of(d) == face][0]
        draw_path(sk, name, cA, [], cC)
    assert are_isotopic_arcs(sk, "d0", "d0")
    assert not are_isotopic_arcs(sk, "d0", "d1")
    assert oracle_isotopic_arcs(sk, "d0", "d1") == False


def test_oracle_agrees_on_fixture_arcs():
    sk, ed = square_with_curves()
    gv = GraphView(sk, "graph")
    da = gv.strand_of_dart(ed["da"])
    parallel_copy(sk, list(da.darts), "left", "x")
    w = MappingClassWord([("g1", 1)])
    apply_word(sk, w, ["x"])
    assert intersection_number(sk, "x", "graph") == \
        oracle_min_crossings(sk, "x", "graph")
    assert intersection_number(sk, "x", "g2") == \
        oracle_min_crossings(sk, "x", "g2")


def test_edge_multiplicity():
    sk, ed = build_complex(
        {"e1": ("a", "b"), "e2": ("a", "b"), "e3": ("a", "b")},
        {"a": ["e1", "e2", "e3"], "b": ["e3", "e2", "e1"]}, marked="ab")
    gv = GraphView(sk, "graph")
    for s in gv.strands:
        assert edge_multiplicity(sk, "graph", s.key) == 3
    sq, ed2 = build_square()
    for s in GraphView(sq, "graph").strands:
        assert edge_multiplicity(sq, "graph", s.key) == 1


def test_are_isotopic_graphs_square_vs_wiggly():
    sk, ed = build_square()
    # redraw the square with one wiggly edge: isotope a parallel copy around
    gv = GraphView(sk, "graph")
    for s in gv.strands:
        parallel_copy(sk, list(s.darts), "left", "copy")
    assert are_isotopic_graphs(sk, "graph", "copy")


def test_multiplicity_mismatch_graphs():
    sk, _ = build_complex(
        {"e1": ("a", "b"), "e2": ("a", "b")},
        {"a": ["e1", "e2"], "b": ["e2", "e1"]}, marked="ab",
        owners={"e1": "g", "e2": "g"})
    gv = GraphView(sk, "g")
    parallel_copy(sk, list(gv.strands[0].darts), "left", "h")
    # g is a double edge, h a single edge between the same endpoints
    from blowmap.isotopy import are_isotopic_graphs
    assert not are_isotopic_graphs(sk, "g", "h")


def test_isotope_off_graph():
    sk, ed = build_square()
    f1 = sk.face_of(sk.twin(ed["ab"]))
    cA = [d for d in sk.vertex_darts("A") if sk.face_of(d) == f1][0]
    cC = [d for d in sk.vertex_darts("C") if sk.face_of(d) == f1][0]
    side = ed["cd"] if sk.face_of(ed["cd"]) == f1 else sk.twin(ed["cd"])
    draw_path(sk, "tree", cA, [side, sk.twin(side)], cC)
    isotope_off_graph(sk, "tree", "graph")
    assert crossing_count(sk, "tree", "graph") == 0
    # an essential crossing cannot be removed
    sk2, ed2 = square_with_curves()
    with pytest.raises(NonzeroIntersection):
        isotope_off_graph(sk2, "g2", "graph")


def test_twist_inverse_roundtrip():
    sk, ed = square_with_curves()
    gv = GraphView(sk, "graph")
    da = gv.strand_of_dart(ed["da"])
    parallel_copy(sk, list(da.darts), "left", "x")
    parallel_copy(sk, list(da.darts), "left", "y")
    assert are_isotopic_arcs(sk, "x", "y")
    for power in (1, -1, 2):
        work = sk.copy()
        w = MappingClassWord([("g1", power)])
        apply_word(work, w, ["x"])
        work.check(strict=True)
        apply_word(work, w.inverse(), ["x"])
        work.check(strict=True)
        assert are_isotopic_arcs(work, "x", "y")


def test_twist_about_nonessential_curve_trivial():
    sk, ed = build_square()
    f0 = sk.face_of(ed["ab"])
    # null-homotopic curve crossing ab twice inside f0
    draw_curve_by_tokens(sk, "triv", [(ed["ab"], ed["ab"]),
                                      (ed["ab"], ed["ab"])],
                         carrier_owners={"graph"})
    assert not is_essential(sk, "triv")
    gv = GraphView(sk, "graph")
    da = gv.strand_of_dart(ed["da"])
    parallel_copy(sk, list(da.darts), "left", "x")
    parallel_copy(sk, list(da.darts), "left", "y")
    apply_word(sk, MappingClassWord([("triv", 1)]), ["x"])
    assert are_isotopic_arcs(sk, "x", "y")


def test_twist_disjoint_object_unchanged():
    sk, ed = square_with_curves()
    gv = GraphView(sk, "graph")
    ab = gv.strand_of_dart(ed["ab"])
    parallel_copy(sk, list(ab.darts), "left", "x")
    parallel_copy(sk, list(ab.darts), "left", "y")
    # ab is disjoint from g1
    apply_word(sk, MappingClassWord([("g1", 3)]), ["x"])
    assert are_isotopic_arcs(sk, "x", "y")


def test_normalize_idempotent():
    sk, ed = square_with_curves()
    gv = GraphView(sk, "graph")
    da = gv.strand_of_dart(ed["da"])
    parallel_copy(sk, list(da.darts), "left", "x")
    apply_word(sk, MappingClassWord([("g2", 1)]), ["x"])
    from blowmap.isotopy import normalize
    normalize(sk, "x", ["graph"])
    text1 = sk.canonical_text()
    normalize(sk, "x", ["graph"])
    assert sk.canonical_text() == text1


def test_curve_isotopy_parallel_copies():
    sk, ed = square_with_curves()
    # a second curve parallel to g1
    p0 = ed["ab"]
    p1 = sk.twin(ed["ab"])
    gv = GraphView(sk, "graph")
    draw_curve_by_tokens(sk, "g1b", [(p1, ed["da"]), (p0, ed["bc"])],
                         carrier_owners={"graph"})
    assert are_isotopic_curves(sk, "g1", "g1b")
    assert not are_isotopic_curves(sk, "g1", "g2")
