"""Shared fixture builders: the square pair, its twist curves, helpers."""

from blowmap.errors import ParseError
from blowmap.isotopy import draw_curve_by_tokens, draw_path
from blowmap.sphere import build_complex

SQUARE_EDGES = {"ab": ("A", "B"), "bc": ("B", "C"), "cd": ("C", "D"), "da": ("D", "A")}
SQUARE_ROT = {"A": ["ab", "da"], "B": ["ab", "bc"], "C": ["bc", "cd"], "D": ["cd", "da"]}


def build_square():
    """The square graph on four marked vertices; returns (sketch, edge_dart)."""
    return build_complex(SQUARE_EDGES, SQUARE_ROT, marked="ABCD")


def square_with_curves():
    """Square plus the two paper twist curves.

    g1 separates {A,B} from {C,D} (crosses da and bc once each);
    g2 separates {A,C} from {B,D} (crosses every edge once).
    """
    sk, ed = build_square()
    p0 = ed["ab"]                  # probe corner in the A->B->C->D face
    p1 = sk.twin(ed["ab"])         # probe corner in the other face
    draw_curve_by_tokens(sk, "g1", [(p1, ed["da"]), (p0, ed["bc"])],
                         carrier_owners={"graph"})
    draw_curve_by_tokens(sk, "g2",
                         [(p1, ed["ab"]), (p0, ed["bc"]),
                          (p1, ed["cd"]), (p0, ed["da"])],
                         carrier_owners={"graph"})
    sk.check(strict=True)
    return sk, ed


def add_arc(sk, owner, start_corner, items, end_corner):
    return draw_path(sk, owner, start_corner, items, end_corner)
