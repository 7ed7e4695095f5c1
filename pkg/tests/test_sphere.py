"""Core rotation-system tests: building, face tracing, refinement, isomorphisms."""

import itertools

import pytest

from blowmap.errors import InvalidTarget, MalformedRotation, NonSphere
from blowmap.sphere import (GraphView, Sketch, build_complex,
                            enumerate_isomorphisms, euler_component_count,
                            trace_faces)

SQUARE_EDGES = {"ab": ("A", "B"), "bc": ("B", "C"), "cd": ("C", "D"), "da": ("D", "A")}
SQUARE_ROT = {"A": ["ab", "da"], "B": ["ab", "bc"], "C": ["bc", "cd"], "D": ["cd", "da"]}


def square():
    return build_complex(SQUARE_EDGES, SQUARE_ROT, marked="ABCD")


def test_single_edge_sphere():
    sk, _ = build_complex({"e": ("a", "b")}, {"a": ["e"], "b": ["e"]}, marked="ab")
    faces = trace_faces(sk)
    assert len(faces) == 1
    assert len(faces[0]) == 2  # both darts on the one face
    assert sk.euler_characteristic() == 2


def test_square_two_faces():
    sk, _ = square()
    faces = trace_faces(sk)
    assert sorted(len(f) for f in faces) == [4, 4]
    assert sk.euler_characteristic() == 2
    sk.check(strict=True)


def test_double_edge_two_bigons():
    sk, _ = build_complex({"e1": ("a", "b"), "e2": ("a", "b")},
                          {"a": ["e1", "e2"], "b": ["e1", "e2"]}, marked="ab")
    assert sorted(len(f) for f in trace_faces(sk)) == [2, 2]


def test_nonsphere_rejected():
    # theta graph with the same cyclic order at both endpoints is a torus map
    with pytest.raises(NonSphere):
        build_complex({"e1": ("a", "b"), "e2": ("a", "b"), "e3": ("a", "b")},
                      {"a": ["e1", "e2", "e3"], "b": ["e1", "e2", "e3"]},
                      marked="ab")


def test_planar_theta():
    sk, _ = build_complex({"e1": ("a", "b"), "e2": ("a", "b"), "e3": ("a", "b")},
                          {"a": ["e1", "e2", "e3"], "b": ["e3", "e2", "e1"]},
                          marked="ab")
    assert sorted(len(f) for f in trace_faces(sk)) == [2, 2, 2]


def test_malformed_rotation():
    with pytest.raises(MalformedRotation):
        build_complex({"e": ("a", "b")}, {"a": ["e", "e"], "b": ["e"]}, marked="ab")
    with pytest.raises(MalformedRotation):
        build_complex({"e": ("a", "b")}, {"a": ["e"], "b": []}, marked="ab")


def test_subdivide_keeps_sphere():
    sk, ed = square()
    nv, ne = len(sk.vertices()), sk.edge_count()
    nf = len(sk.faces())
    sk.subdivide(ed["ab"])
    assert len(sk.vertices()) == nv + 1
    assert sk.edge_count() == ne + 1
    assert len(sk.faces()) == nf
    sk.check()


def test_chord_insertion_splits_face():
    sk, ed = square()
    nf = len(sk.faces())
    # diagonal A-C through the face left of the A->B dart
    dA = ed["ab"]
    face = sk.face_of(dA)
    cornerC = [d for d in sk.vertex_darts("C") if sk.face_of(d) == face][0]
    sk.add_edge(dA, cornerC, "extra")
    assert sk.edge_count() == 5
    assert len(sk.faces()) == nf + 1
    sk.check()


def test_refine_roundtrip():
    sk, ed = square()
    before = sk.canonical_text()
    m, d_first, _ = sk.subdivide(ed["bc"])
    assert sk.smooth(m)
    assert sk.canonical_text() == before


def test_loop_rejected():
    sk, ed = square()
    d = ed["ab"]
    with pytest.raises(InvalidTarget):
        sk.add_edge(d, sk.nxt(d), "x") if sk.org(sk.nxt(d)) == sk.org(d) else (_ for _ in ()).throw(InvalidTarget(""))


def _rotation_compatible(sk, gv, perm):
    """Oracle for graph self-maps: vertex bijection extends over edges and
    preserves the counterclockwise rotation of neighbors at every vertex."""
    nbrs = {}
    for v in gv.nodes:
        seq = []
        for d in sk.vertex_darts(v):
            if sk.owner(d) == gv.owner:
                seq.append(sk.dst(d))
        nbrs[v] = seq
    for v in gv.nodes:
        img = [perm[w] for w in nbrs[v]]
        target = nbrs[perm[v]]
        if len(img) != len(target):
            return False
        n = len(target)
        if n == 0:
            continue
        ok = False
        for shift in range(n):
            if all(img[i] == target[(i + shift) % n] for i in range(n)):
                ok = True
                break
        if not ok:
            return False
    return True


def test_square_self_isomorphisms_match_exhaustive_oracle():
    sk, _ = square()
    gv = GraphView(sk, "graph")
    isos = enumerate_isomorphisms(gv, gv)
    vmaps = sorted(tuple(sorted(vm.items())) for vm, _ in isos)
    assert len(vmaps) == len(set(vmaps))
    # oracle: all 4! vertex bijections filtered by rotation compatibility
    oracle = []
    for perm_vals in itertools.permutations("ABCD"):
        perm = dict(zip("ABCD", perm_vals))
        # must map edges to edges
        edges = {frozenset(e) for e in SQUARE_EDGES.values()}
        if any(frozenset((perm[u], perm[v])) not in edges for u, v in SQUARE_EDGES.values()):
            continue
        if _rotation_compatible(sk, gv, perm):
            oracle.append(tuple(sorted(perm.items())))
    assert sorted(oracle) == vmaps
    assert len(isos) == 8  # the square is a dihedron: all 8 dihedral elements


def test_identity_always_found_and_group_closed():
    sk, _ = square()
    gv = GraphView(sk, "graph")
    isos = enumerate_isomorphisms(gv, gv)
    vmaps = {tuple(sorted(vm.items())) for vm, _ in isos}
    ident = tuple(sorted({v: v for v in "ABCD"}.items()))
    assert ident in vmaps
    for vm1, _ in isos:
        for vm2, _ in isos:
            comp = tuple(sorted((v, vm2[vm1[v]]) for v in "ABCD"))
            assert comp in vmaps


def test_chirality_detected():
    # star with arms of lengths 1, 2, 3: the two cyclic arm orders at the
    # center are mirror images, not related by an orientation-preserving map
    def star(rot_c):
        edges = {"ca": ("c", "a"), "cb": ("c", "b1"), "b12": ("b1", "b2"),
                 "cd": ("c", "d1"), "d12": ("d1", "d2"), "d23": ("d2", "d3")}
        rot = {"c": rot_c, "a": ["ca"], "b1": ["cb", "b12"], "b2": ["b12"],
               "d1": ["cd", "d12"], "d2": ["d12", "d23"], "d3": ["d23"]}
        return build_complex(edges, rot,
                             marked=["c", "a", "b1", "b2", "d1", "d2", "d3"])

    sk1, _ = star(["ca", "cb", "cd"])
    sk2, _ = star(["ca", "cd", "cb"])
    gv1, gv2 = GraphView(sk1, "graph"), GraphView(sk2, "graph")
    assert len(enumerate_isomorphisms(gv1, gv1)) == 1
    assert not enumerate_isomorphisms(gv1, gv2)


def test_single_vs_double_edge_not_isomorphic():
    sk1, _ = build_complex({"e": ("a", "b")}, {"a": ["e"], "b": ["e"]}, marked="ab")
    sk2, _ = build_complex({"e1": ("a", "b"), "e2": ("a", "b")},
                           {"a": ["e1", "e2"], "b": ["e1", "e2"]}, marked="ab")
    assert enumerate_isomorphisms(GraphView(sk1, "graph"), GraphView(sk2, "graph")) == []


def test_component_counts_agree_with_euler_formula():
    edges = {"ab": ("a", "b"), "cd": ("c", "d")}
    rot = {"a": ["ab"], "b": ["ab", "s"], "c": ["s", "cd"], "d": ["cd"]}
    edges["s"] = ("b", "c")
    sk, _ = build_complex(edges, rot, marked="abcd",
                          owners={"ab": "graph", "cd": "graph", "s": None})
    gv = GraphView(sk, "graph")
    assert gv.component_count() == 2
    assert euler_component_count(gv) == 2


def test_disconnected_containment_isomorphism():
    # three bigon components: "chain" (middle one separates the others) vs
    # "claw" (both outer ones in the same face of the middle one)
    def build(rot_y2):
        edges = {"xe1": ("x1", "x2"), "xe2": ("x1", "x2"),
                 "ye1": ("y1", "y2"), "ye2": ("y1", "y2"),
                 "ze1": ("z1", "z2"), "ze2": ("z1", "z2"),
                 "s1": ("x2", "y1"), "s2": ("y2", "z1")}
        owners = {n: ("graph" if n[0] != "s" else None) for n in edges}
        rot = {"x1": ["xe1", "xe2"], "x2": ["xe1", "s1", "xe2"],
               "y1": ["ye1", "s1", "ye2"], "y2": rot_y2,
               "z1": ["ze1", "s2", "ze2"], "z2": ["ze1", "ze2"]}
        return build_complex(edges, rot, marked=["x1", "x2", "y1", "y2", "z1", "z2"],
                             owners=owners)

    def walk_pattern(sk):
        _, region_of_walk, _ = sk.view_walks({"graph"})
        counts = {}
        for r in region_of_walk:
            counts[r] = counts.get(r, 0) + 1
        return sorted(counts.values())

    sk_a, _ = build(["ye1", "s2", "ye2"])
    sk_b, _ = build(["ye1", "ye2", "s2"])
    pa, pb = tuple(walk_pattern(sk_a)), tuple(walk_pattern(sk_b))
    assert {pa, pb} == {(1, 1, 2, 2), (1, 1, 1, 3)}
    chain = sk_a if pa == (1, 1, 2, 2) else sk_b
    claw = sk_b if pa == (1, 1, 2, 2) else sk_a
    gv_chain, gv_claw = GraphView(chain, "graph"), GraphView(claw, "graph")
    assert enumerate_isomorphisms(gv_chain, gv_chain)
    assert enumerate_isomorphisms(gv_claw, gv_claw)
    assert not enumerate_isomorphisms(gv_chain, gv_claw)


def test_view_walks_regions():
    sk, _ = square()
    walks, region_of_walk, region_data = sk.view_walks({"graph"})
    assert len(walks) == 2
    assert len(region_data) == 2
    assert all(not r["free_marked"] for r in region_data)


def test_canonical_text_deterministic():
    sk1, _ = square()
    sk2, _ = square()
    assert sk1.canonical_text() == sk2.canonical_text()
