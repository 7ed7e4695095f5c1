"""Arcs, curves, and graphs up to isotopy rel the marked set.

Objects are owner-labeled strand systems in a sketch.  Isotopy classes are
handled through normal position: deterministic innermost-first removal of
bigons and half-bigons puts a pair of objects in minimal position, after
which intersection numbers are plain crossing counts and isotopy verdicts
reduce to region bookkeeping (a complementary component free of marked
points).

Dehn twists and fractional graph rotations share one primitive: an exact
rational rebuild of the annulus around a curve, where each transversal
either stays radial or is redrawn as a spiral with a prescribed angular
displacement.  Crossings between the rebuilt segments are solved exactly in
(angle, height) coordinates, so the surgered picture is embedded by
construction.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import (CarrierMismatch, InvalidSpec, NonzeroIntersection,
                     VertexSetMismatch)
from .sphere import SCAFFOLD, GraphView, Sketch


# ----------------------------------------------------------------------
# crossings


def crossing_vertices(sk, owner_a, owner_b):
    """Transverse crossing vertices between two owners (sorted)."""
    out = []
    for v in sk.vertices():
        if sk.is_marked(v):
            continue
        ds = sk.vertex_darts(v)
        if len(ds) != 4:
            continue
        owners = [sk.owner(d) for d in ds]
        if sorted(map(str, owners)) == sorted(map(str, [owner_a, owner_a, owner_b, owner_b])) \
                and owner_a != owner_b and owners[0] != owners[1]:
            out.append(v)
    return out


def crossing_count(sk, owner_a, owner_b):
    return len(crossing_vertices(sk, owner_a, owner_b))


# ----------------------------------------------------------------------
# drawing machinery


def beside_items(sk, run, side):
    """Side-darts to cross when travelling parallel to a dart run.

    run: consecutive darts (dst of each = org of next).  side: "left" or
    "right" of the run's direction.  Returns the list of side-darts in
    crossing order; each is crossed entering from its own face.
    """
    items = []
    for i in range(len(run) - 1):
        w_in, w_out = run[i], run[i + 1]
        v = sk.dst(w_in)
        assert sk.org(w_out) == v
        if side == "right":
            g = sk.nxt(sk.twin(w_in))
            while g != w_out:
                items.append(sk.twin(g))
                g = sk.nxt(g)
        else:
            g = sk.prv(sk.twin(w_in))
            while g != w_out:
                items.append(g)
                g = sk.prv(g)
    return items


def draw_path(sk, owner, start_corner, items, end_corner):
    """Draw a new path from one corner to another, crossing the given items.

    Each item is a side-dart s: the path crosses the edge of s entering from
    face_of(s).  Returns the list of new path darts, in order.
    """
    new_darts = []
    cur = start_corner
    for s in items:
        if sk.face_of(cur) != sk.face_of(s):
            raise CarrierMismatch("path step leaves the current face")
        _, kept, far = sk.subdivide(s)
        d_new = sk.add_edge(cur, far, owner)
        new_darts.append(d_new)
        cur = sk.twin(kept)
    d_new = sk.add_edge(cur, end_corner, owner)
    new_darts.append(d_new)
    return new_darts


def draw_closed(sk, owner, items):
    """Draw a closed curve crossing the given side-darts, in order."""
    if not items:
        raise InvalidSpec("a closed curve needs at least one crossing")
    s0 = items[0]
    m0, kept0, far0 = sk.subdivide(s0)
    # the first segment continues on the far side of the crossed edge; the
    # last segment returns to it from face_of(s0)
    start = sk.twin(kept0)
    end = far0
    if len(items) == 1:
        # single crossing: route through an anchor vertex to avoid a loop
        spur = sk.add_spur(start, owner)
        tip = sk.twin(spur)
        second = sk.add_edge(tip, end, owner)
        return [spur, second]
    return draw_path(sk, owner, start, items[1:], end)


def parallel_copy(sk, run, side, owner):
    """Duplicate a strand run by a parallel path on the given side."""
    items = beside_items(sk, run, side)
    g0 = run[0]
    start = g0 if side == "left" else sk.prv(g0)
    g1 = sk.twin(run[-1])
    end = sk.prv(g1) if side == "left" else g1
    return draw_path(sk, owner, start, items, end)


# ----------------------------------------------------------------------
# bigon search and removal


class _Move:
    __slots__ = ("kind", "walk", "mov", "st", "marked_vertex", "cost", "key")

    def __init__(self, kind, walk, mov, st, marked_vertex, cost):
        self.kind = kind
        self.walk = walk
        self.mov = mov           # moving run (darts of the x side)
        self.st = st             # stationary run
        self.marked_vertex = marked_vertex
        self.cost = cost
        self.key = (min(min(mov), min(st)), kind)


def _runs_of_walk(sk, walk):
    """Split a cyclic walk into maximal same-owner runs.

    Returns list of (start_index, darts).  Empty if the walk has a single
    owner throughout.
    """
    n = len(walk)
    breaks = [i for i in range(n)
              if sk.owner(walk[i]) != sk.owner(walk[(i + 1) % n])]
    if not breaks:
        return []
    runs = []
    for bi, b in enumerate(breaks):
        nxt_b = breaks[(bi + 1) % len(breaks)]
        idxs = []
        i = (b + 1) % n
        while True:
            idxs.append(i)
            if i == nxt_b:
                break
            i = (i + 1) % n
        runs.append((b, [walk[i] for i in idxs]))
    return runs


def _find_moves(sk, x_owner, ref_owner, movable=None):
    """Crossing-decreasing bigon/half-bigon moves between two owners.

    Only runs owned by `movable` owners (default: just x_owner) may move.
    """
    if movable is None:
        movable = {x_owner}
    visible = {x_owner, ref_owner}
    walks, region_of_walk, region_data = sk.view_walks(visible)
    walk_count = {}
    for r in region_of_walk:
        walk_count[r] = walk_count.get(r, 0) + 1
    moves = []
    for wi, walk in enumerate(walks):
        r = region_of_walk[wi]
        if walk_count[r] != 1 or region_data[r]["free_marked"]:
            continue
        runs = _runs_of_walk(sk, walk)
        if len(runs) != 2:
            continue
        (b1, run1), (b2, run2) = runs
        n = len(walk)
        corner1 = sk.dst(walk[b1])
        corner2 = sk.dst(walk[b2])
        marked_corners = [v for v in (corner1, corner2) if sk.is_marked(v)]
        interior_marked = False
        for run in (run1, run2):
            for d in run[:-1]:
                if sk.is_marked(sk.dst(d)):
                    interior_marked = True
        if interior_marked or len(marked_corners) > 1:
            continue
        if corner1 == corner2:
            continue
        kind = "half" if marked_corners else "full"
        for mov, st in ((run1, run2), (run2, run1)):
            if sk.owner(mov[0]) not in movable:
                continue
            # the moving run must be a plain embedded subarc: simple
            # passthrough at every interior vertex, no bounces
            plain = True
            seen_v = set()
            for i, d in enumerate(mov[:-1]):
                v = sk.dst(d)
                if v in seen_v or mov[i + 1] == sk.twin(d):
                    plain = False
                    break
                seen_v.add(v)
                own = sk.owner(d)
                if sum(1 for g in sk.vertex_darts(v) if sk.owner(g) == own) != 2:
                    plain = False
                    break
            if not plain:
                continue
            if kind == "half":
                # the moving run must end at the marked corner
                mv = marked_corners[0]
                if sk.dst(mov[-1]) != mv and sk.org(mov[0]) != mv:
                    continue
            rev = [sk.twin(d) for d in reversed(st)]
            items = beside_items(sk, rev, "left")
            ref = sk.owner(st[0])
            added = sum(1 for s in items if sk.owner(s) == ref)
            if any(sk.owner(s) == sk.owner(mov[0]) for s in items):
                continue  # would self-cross; not a clean bigon
            removed = 2 if kind == "full" else 1
            cost = added - removed
            if cost < 0:
                moves.append(_Move(kind, walk, mov, st,
                                   marked_corners[0] if marked_corners else None,
                                   cost))
    moves.sort(key=lambda m: m.key)
    return moves


def _apply_full_move(sk, move):
    mov, st = move.mov, move.st
    owner = sk.owner(mov[0])
    c1, c2 = sk.org(mov[0]), sk.dst(mov[-1])
    x_cont1 = next(d for d in sk.vertex_darts(c1)
                   if sk.owner(d) == owner and d != mov[0])
    x_cont2 = next(d for d in sk.vertex_darts(c2)
                   if sk.owner(d) == owner and d != sk.twin(mov[-1]))
    rev = [sk.twin(d) for d in reversed(st)]
    items = beside_items(sk, rev, "left")
    _, kept1, _far1 = sk.subdivide(x_cont1)
    start = sk.twin(kept1)
    _, kept2, far2 = sk.subdivide(x_cont2)
    end = far2
    interior = set([c1, c2] + [sk.org(d) for d in mov[1:]])
    draw_path(sk, owner, start, items, end)
    for d in [kept1] + list(mov) + [kept2]:
        sk.delete_edge(min(d, sk.twin(d)))
    for v in interior:
        if v in sk._vdart:
            sk.smooth(v)
    sk.cleanup()


def _apply_half_move(sk, move):
    mov, st = move.mov, move.st
    owner = sk.owner(mov[0])
    mv = move.marked_vertex
    if sk.dst(mov[-1]) == mv:
        # moving run: crossing c -> marked vertex; st runs mv -> c.
        # Redraw from a point past c, beside reversed-st on its left, to the
        # corner just clockwise of the st germ at mv.
        c = sk.org(mov[0])
        x_cont = next(d for d in sk.vertex_darts(c)
                      if sk.owner(d) == owner and d != mov[0])
        rev = [sk.twin(d) for d in reversed(st)]
        items = beside_items(sk, rev, "left")
        _, kept, _far = sk.subdivide(x_cont)
        start = sk.twin(kept)
        end = sk.prv(st[0])
    else:
        # moving run: marked vertex -> crossing c; st runs c -> mv.
        # Redraw from a point past c, beside st on its right, ending just
        # counterclockwise of the st germ at mv.
        c = sk.dst(mov[-1])
        x_cont = next(d for d in sk.vertex_darts(c)
                      if sk.owner(d) == owner and d != sk.twin(mov[-1]))
        items = beside_items(sk, st, "right")
        _, kept, far = sk.subdivide(x_cont)
        start = far
        end = sk.twin(st[-1])
    interior = set([c] + [sk.org(d) for d in mov[1:]])
    draw_path(sk, owner, start, items, end)
    for d in [kept] + list(mov):
        sk.delete_edge(min(d, sk.twin(d)))
    for v in interior:
        if v in sk._vdart and not sk.is_marked(v):
            sk.smooth(v)
    sk.cleanup()


def normalize_pair(sk, x_owner, ref_owner, movable=None):
    """Remove bigons between two owners until none are applicable.

    Mutates the sketch.  Only `movable` owners' runs are rerouted (default
    just x_owner), so references stay pinned in place.
    """
    guard = 0
    while True:
        guard += 1
        if guard > 10000:
            raise AssertionError("bigon removal did not terminate")
        moves = _find_moves(sk, x_owner, ref_owner, movable=movable)
        if not moves:
            return
        mv = moves[0]
        if mv.kind == "full":
            _apply_full_move(sk, mv)
        else:
            _apply_half_move(sk, mv)


def normalize(sk, x_owner, ref_owners, mutual=False):
    """Minimal position of x against each reference owner (mutating).

    With mutual=True the references' plain runs may also move, which is
    needed for exact counts against branched references.
    """
    changed = True
    while changed:
        changed = False
        for ref in ref_owners:
            if ref == x_owner:
                continue
            before = crossing_count(sk, x_owner, ref)
            movable = {x_owner, ref} if mutual else {x_owner}
            normalize_pair(sk, x_owner, ref, movable=movable)
            if crossing_count(sk, x_owner, ref) != before:
                changed = True


# ----------------------------------------------------------------------
# intersection numbers and isotopy tests


def intersection_number(sk, a_owner, b_owner):
    """i_Z(a, b): minimal crossings over isotopies of both objects."""
    work = sk.copy()
    normalize(work, a_owner, [b_owner], mutual=True)
    return crossing_count(work, a_owner, b_owner)


def graph_intersection(sk, graph_owner, a_owner):
    """i_Z(G, a) = total crossings after joint normalization."""
    gv = GraphView(sk, graph_owner)
    for v in gv.nodes:
        if gv.node_degree(v) == 0:
            raise InvalidSpec("graph has an isolated vertex")
    return intersection_number(sk, a_owner, graph_owner)


def strand_intersection(sk, x_owner, ref_owner, ref_strand_key):
    """i_Z(x, e) for a single reference strand e, by relabeling a copy."""
    work = sk.copy()
    gv = GraphView(work, ref_owner)
    tmp = "!edge"
    for s in gv.strands:
        if s.key == ref_strand_key:
            for d in s.darts:
                work.relabel_edge(d, tmp)
            break
    else:
        raise KeyError(ref_strand_key)
    normalize(work, x_owner, [tmp], mutual=True)
    return crossing_count(work, x_owner, tmp)


def _endpoints(sk, owner):
    gv = GraphView(sk, owner)
    assert len(gv.strands) == 1 and not gv.strands[0].closed
    return gv.endpoints(gv.strands[0])


def are_isotopic_arcs(sk, a_owner, b_owner):
    """Arcs isotopic rel marked set: same endpoints, zero intersection, and
    a complementary component of their union free of marked points."""
    ea = set(_endpoints(sk, a_owner))
    eb = set(_endpoints(sk, b_owner))
    if ea != eb:
        return False
    work = sk.copy()
    normalize(work, a_owner, [b_owner], mutual=True)
    if crossing_count(work, a_owner, b_owner) != 0:
        return False
    _, _, region_data = work.view_walks({a_owner, b_owner})
    return any(not r["free_marked"] for r in region_data)


def are_isotopic_curves(sk, a_owner, b_owner):
    """Closed curves isotopic rel marked set."""
    work = sk.copy()
    normalize(work, a_owner, [b_owner], mutual=True)
    if crossing_count(work, a_owner, b_owner) != 0:
        return False
    walks, region_of_walk, region_data = work.view_walks({a_owner, b_owner})
    # disjoint curves: isotopic iff the region touching both is unmarked
    for r, data in enumerate(region_data):
        owners_here = set()
        for wi, walk in enumerate(walks):
            if region_of_walk[wi] == r:
                owners_here.update(work.owner(d) for d in walk)
        if owners_here == {a_owner, b_owner} and not data["free_marked"]:
            return True
    return False


def curve_sides(sk, curve_owner):
    """Marked points on the two sides of a closed curve (sorted lists)."""
    walks, region_of_walk, region_data = sk.view_walks({curve_owner})
    sides = {r: list(data["free_marked"]) for r, data in enumerate(region_data)}
    out = []
    for wi in range(len(walks)):
        r = region_of_walk[wi]
        out.append(sorted(sides[r]))
    assert len(out) == 2
    return out


def is_essential(sk, curve_owner):
    sides = curve_sides(sk, curve_owner)
    return len(sides[0]) >= 2 and len(sides[1]) >= 2


def is_null_homotopic(sk, curve_owner):
    sides = curve_sides(sk, curve_owner)
    return len(sides[0]) == 0 or len(sides[1]) == 0


def edge_multiplicity(sk, graph_owner, strand_key):
    """Number of graph strands isotopic to the given one (incl. itself)."""
    gv = GraphView(sk, graph_owner)
    target = next(s for s in gv.strands if s.key == strand_key)
    count = 0
    for s in gv.strands:
        if s.key == strand_key:
            count += 1
            continue
        if _strands_isotopic(sk, graph_owner, target, s):
            count += 1
    return count


def _strands_isotopic(sk, owner, s1, s2):
    work = sk.copy()
    for d in s1.darts:
        work.relabel_edge(d, "!a")
    for d in s2.darts:
        work.relabel_edge(d, "!b")
    return are_isotopic_arcs(work, "!a", "!b")


def are_isotopic_graphs(sk, g_owner, h_owner):
    """Graphs with a common vertex set isotopic rel marked set.

    Criterion: same number of edges and, for each edge of one, an edge of
    the other isotopic to it with equal multiplicity.
    """
    gv = GraphView(sk, g_owner)
    hv = GraphView(sk, h_owner)
    if set(gv.nodes) != set(hv.nodes):
        raise VertexSetMismatch("graphs have different vertex sets")
    if len(gv.strands) != len(hv.strands):
        return False
    for s in gv.strands:
        m = edge_multiplicity(sk, g_owner, s.key)
        mate = None
        for t in hv.strands:
            if _strands_isotopic(sk, g_owner, s, t):
                mate = t
                break
        if mate is None:
            return False
        if edge_multiplicity(sk, h_owner, mate.key) != m:
            return False
    return True


def isotope_off_graph(sk, h_owner, g_owner):
    """Reposition h so that it meets g only in marked vertices (mutating).

    Requires i_Z(G, e) = 0 for every strand e of h; raises
    NonzeroIntersection otherwise.
    """
    normalize(sk, h_owner, [g_owner])
    if crossing_count(sk, h_owner, g_owner) != 0:
        raise NonzeroIntersection(
            "object cannot be isotoped off the graph")
    return sk


# ----------------------------------------------------------------------
# mapping classes: words of Dehn twists, applied by annulus surgery


class MappingClassWord:
    """Composition of Dehn twists: letters[(curve, power)], leftmost first.

    Applying the word applies the rightmost letter first, so the word reads
    like a composition of maps.
    """

    def __init__(self, letters=()):
        self.letters = [(c, int(n)) for c, n in letters if int(n) != 0]

    def inverse(self):
        return MappingClassWord([(c, -n) for c, n in reversed(self.letters)])

    def is_identity(self):
        return not self.letters

    def curves(self):
        return sorted({c for c, _ in self.letters})

    def __repr__(self):
        return "MappingClassWord(%r)" % (self.letters,)


def _vec_ccw_key(v):
    x, y = v
    if y == 0:
        q = 0 if x > 0 else 2
    elif y > 0:
        q = 1
    else:
        q = 3
    return q


def _ccw_sort(pairs):
    """Sort (vector, payload) pairs counterclockwise from the +x axis."""
    import functools

    def cmp(a, b):
        (ax, ay), _ = a
        (bx, by), _ = b
        qa, qb = _vec_ccw_key((ax, ay)), _vec_ccw_key((bx, by))
        if qa != qb:
            return -1 if qa < qb else 1
        cross = ax * by - ay * bx
        if cross > 0:
            return -1
        if cross < 0:
            return 1
        raise AssertionError("parallel direction vectors at a crossing")
    return sorted(pairs, key=functools.cmp_to_key(cmp))


def twist_about(sk, curve_owner, target_owners, power):
    """Apply the `power`-fold Dehn twist about a curve to target objects.

    Mutates the sketch: strands of owners in target_owners are redrawn as
    spirals through the annulus around the curve; everything else stays
    put, so the output positions the twisted objects relative to the
    untouched references.
    """
    if power == 0:
        return
    gv = GraphView(sk, curve_owner)
    if len(gv.strands) != 1 or not gv.strands[0].closed:
        raise InvalidSpec("twist curve must be a single closed strand")
    darts = list(gv.strands[0].darts)
    crossings = []
    for i, d in enumerate(darts):
        v = sk.dst(d)
        out_dart = darts[(i + 1) % len(darts)]
        rot = sk.vertex_darts(v)
        if len(rot) == 2:
            continue  # anchor vertex
        assert len(rot) == 4, "curve through a non-crossing vertex"
        k = rot.index(out_dart)
        left = rot[(k + 1) % 4]
        back = rot[(k + 2) % 4]
        right = rot[(k + 3) % 4]
        assert back == sk.twin(d)
        crossings.append((v, left, right, sk.owner(left)))
    K = len(crossings)
    if K == 0 or not any(o in target_owners for (_, _, _, o) in crossings):
        return
    _annulus_surgery(
        sk, curve_owner, crossings,
        [Fraction(power) if o in target_owners else Fraction(0)
         for (_, _, _, o) in crossings])


def rotate_about(sk, curve_owner, steps):
    """Fractional rotation: every transversal shifts `steps` crossings on.

    This is the n-rotation surgery: with m crossings each one is displaced
    by steps/m of a full turn, reconnecting crossing j to crossing j+steps.
    """
    gv = GraphView(sk, curve_owner)
    if len(gv.strands) != 1 or not gv.strands[0].closed:
        raise InvalidSpec("rotation curve must be a single closed strand")
    darts = list(gv.strands[0].darts)
    crossings = []
    for i, d in enumerate(darts):
        v = sk.dst(d)
        out_dart = darts[(i + 1) % len(darts)]
        rot = sk.vertex_darts(v)
        if len(rot) == 2:
            continue
        assert len(rot) == 4
        k = rot.index(out_dart)
        crossings.append((v, rot[(k + 1) % 4], rot[(k + 3) % 4],
                          sk.owner(rot[(k + 1) % 4])))
    m = len(crossings)
    if m == 0:
        raise InvalidSpec("rotation needs at least one crossing")
    _annulus_surgery(sk, curve_owner, crossings,
                     [Fraction(steps, m)] * m)


def _annulus_surgery(sk, curve_owner, crossings, displacements):
    """Rebuild the annulus around a curve with prescribed displacements.

    crossings: list of (vertex, left_germ, right_germ, owner) along the
    curve; displacements: rational angular shifts (in full turns) per
    crossing.  Segment j runs from the left (X) rim point of crossing j to
    the right (Y) rim point of the crossing at angle a_j + delta_j.
    Segments are drawn as exact-slope lines in (angle, height) coordinates,
    every pairwise crossing solved exactly, so the result is embedded.
    """
    K = len(crossings)
    angles = [Fraction(j, K) for j in range(K)]
    rim_index = {a % 1: j for j, a in enumerate(angles)}
    exits = []
    for j in range(K):
        target = (angles[j] + displacements[j]) % 1
        if target not in rim_index:
            raise InvalidSpec("displacement does not land on a crossing")
        exits.append(rim_index[target])

    # core height parameter: avoid collisions of core-crossing angles and
    # triple points with segment-segment events
    seg_events = {}  # j -> list of (t, tag)
    pair_events = []
    for i in range(K):
        for j in range(i + 1, K):
            di, dj = displacements[i], displacements[j]
            if di == dj:
                continue
            # t = (a_j - a_i + c) / (d_i - d_j) for integer c, t in (0,1)
            denom = di - dj
            cs = []
            c = -(abs(denom) + 2)
            while c <= abs(denom) + 2:
                t = (angles[j] - angles[i] + c) / denom
                if 0 < t < 1:
                    cs.append(t)
                c += 1
            for t in cs:
                pair_events.append((i, j, t))
    t0 = None
    for cand in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3),
                 Fraction(2, 5), Fraction(3, 5), Fraction(3, 7)):
        core_angles = [(angles[j] + displacements[j] * cand) % 1
                       for j in range(K)]
        if len(set(core_angles)) != K:
            continue
        if any(t == cand for (_, _, t) in pair_events):
            continue
        t0 = cand
        break
    assert t0 is not None, "no collision-free core height found"
    core_angles = [(angles[j] + displacements[j] * t0) % 1 for j in range(K)]

    # plan event vertices
    events = {j: [] for j in range(K)}   # j -> (t, vertex_name, kind)
    counter = itertools.count()
    pair_vertex = {}
    for (i, j, t) in pair_events:
        name = sk.add_vertex()
        pair_vertex[(i, j, t)] = name
        events[i].append((t, name, ("pair", j)))
        events[j].append((t, name, ("pair", i)))
    core_vertex = {}
    for j in range(K):
        name = sk.add_vertex()
        core_vertex[j] = name
        events[j].append((t0, name, ("core", None)))
    for j in range(K):
        events[j].sort(key=lambda e: e[0])

    # detach rims: X keeps the original crossing vertex, Y is fresh
    owners = [c[3] for c in crossings]
    x_vertex = [c[0] for c in crossings]
    y_vertex = []
    for j, (v, left, right, own) in enumerate(crossings):
        # remove the curve edges at v later; first detach the right germ
        y = sk.add_vertex()
        _detach_germ(sk, right, y)
        y_vertex.append(y)
    # delete all old curve edges
    cv = GraphView(sk, curve_owner)
    for s in cv.strands:
        for d in list(s.darts):
            if d in sk._twin:
                sk.delete_edge(min(d, sk.twin(d)))

    # wire segments
    rot_plan = {}  # vertex -> list of (direction vector, dart)
    for j in range(K):
        own = owners[j]
        chain = [(None, x_vertex[j])] + [(e, e[1]) for e in events[j]] \
            + [(None, y_vertex[exits[j]])]
        prev_vertex = x_vertex[j]
        prev_t = Fraction(0)
        for (ev, vtx) in chain[1:]:
            d1, d2 = _raw_edge(sk, prev_vertex, vtx, own)
            # direction of the segment: (delta_j, -2) scaled; at prev it
            # points forward, at vtx it points backward
            fwd = (displacements[j], Fraction(-2))
            bwd = (-displacements[j], Fraction(2))
            rot_plan.setdefault(prev_vertex, []).append((fwd, d1))
            rot_plan.setdefault(vtx, []).append((bwd, d2))
            prev_vertex = vtx
    # wire the core
    order = sorted(range(K), key=lambda j: core_angles[j])
    for idx in range(K):
        j1 = order[idx]
        j2 = order[(idx + 1) % K]
        d1, d2 = _raw_edge(sk, core_vertex[j1], core_vertex[j2], curve_owner)
        rot_plan.setdefault(core_vertex[j1], []).append(((Fraction(1), Fraction(0)), d1))
        rot_plan.setdefault(core_vertex[j2], []).append(((Fraction(-1), Fraction(0)), d2))

    # assemble rotations
    for v, pairs in rot_plan.items():
        ds = sk._vdart.get(v)
        existing = sk.vertex_darts(v) if ds is not None else []
        if existing:
            # rim vertices keep their outside germ; append the new germ
            assert len(existing) == 1 and len(pairs) == 1
            _set_rotation(sk, v, existing + [pairs[0][1]])
        else:
            ordered = [d for _, d in _ccw_sort(pairs)]
            _set_rotation(sk, v, ordered)
    sk._invalidate()
    # dissolve rim anchors
    for v in x_vertex + y_vertex:
        sk.smooth(v)
    sk.cleanup()


def _raw_edge(sk, u, v, owner):
    d1 = sk._new_dart(u, owner)
    d2 = sk._new_dart(v, owner)
    sk._twin[d1] = d2
    sk._twin[d2] = d1
    return d1, d2


def _set_rotation(sk, v, darts):
    for i, d in enumerate(darts):
        sk._next[d] = darts[(i + 1) % len(darts)]
        sk._prev[darts[(i + 1) % len(darts)]] = d
    sk._vdart[v] = darts[0]
    sk._invalidate()


def _detach_germ(sk, d, new_vertex):
    """Move dart d to a fresh vertex (rotation surgery)."""
    v = sk._org[d]
    nx, pv = sk._next[d], sk._prev[d]
    if nx == d:
        del sk._vdart[v]
    else:
        sk._next[pv] = nx
        sk._prev[nx] = pv
        if sk._vdart[v] == d:
            sk._vdart[v] = nx
    sk._org[d] = new_vertex
    sk._next[d] = d
    sk._prev[d] = d
    sk._vdart[new_vertex] = d
    sk._invalidate()


def apply_word(sk, word, target_owners):
    """Apply a mapping-class word to the target objects (mutating).

    The rightmost letter acts first.  Twist curves are other objects of the
    sketch and stay pinned; each letter normalizes the targets against its
    curve before the surgery to keep pictures small.
    """
    for curve, power in reversed(word.letters):
        for t in sorted(target_owners):
            normalize_pair(sk, t, curve)
        twist_about(sk, curve, set(target_owners), power)


# ----------------------------------------------------------------------
# region-aware routing and token-based drawing


def region_lookup(sk, visible):
    """Map each sketch face index to its region index for a view."""
    _, _, region_data = sk.view_walks(visible)
    out = {}
    for r, data in enumerate(region_data):
        for f in data["faces"]:
            out[f] = r
    return out


def face_route(sk, start_face, goal_face, crossable):
    """Side-darts to cross to walk from one face to another.

    Breadth-first over the face adjacency generated by edges whose owner is
    in `crossable`; deterministic; raises CarrierMismatch when the goal is
    unreachable.
    """
    if start_face == goal_face:
        return []
    prev = {start_face: None}
    queue = [start_face]
    while queue:
        f = queue.pop(0)
        for walk in (sk.faces()[f],):
            for d in walk:
                if sk.owner(d) not in crossable:
                    continue
                g = sk.face_of(sk.twin(d))
                if g not in prev:
                    prev[g] = (f, d)
                    if g == goal_face:
                        queue = []
                        break
                    queue.append(g)
            else:
                continue
            break
    if goal_face not in prev:
        raise CarrierMismatch("no route between faces")
    items = []
    f = goal_face
    while prev[f] is not None:
        pf, d = prev[f]
        items.append(d)
        f = pf
    return list(reversed(items))


def _route_to(sk, start_face, goal_faces, crossable):
    """BFS route (side-darts) from a face to the nearest goal face."""
    goal_faces = set(goal_faces)
    if start_face in goal_faces:
        return [], start_face
    prev = {start_face: None}
    queue = [start_face]
    while queue:
        f = queue.pop(0)
        hit = None
        for d in sk.faces()[f]:
            if sk.owner(d) not in crossable:
                continue
            g = sk.face_of(sk.twin(d))
            if g not in prev:
                prev[g] = (f, d)
                if g in goal_faces:
                    hit = g
                    break
                queue.append(g)
        if hit is not None:
            items = []
            f = hit
            while prev[f] is not None:
                pf, d = prev[f]
                items.append(d)
                f = pf
            return list(reversed(items)), hit
    raise CarrierMismatch("no route to the requested region")


def _strand_side_candidates(sk, regions, sdart, region):
    gv = GraphView(sk, sk.owner(sdart))
    strand = gv.strand_of_dart(sdart)
    cands = []
    for d in list(strand.darts) + [sk.twin(x) for x in strand.darts]:
        if regions[sk.face_of(d)] == region:
            cands.append(d)
    if not cands:
        raise CarrierMismatch("edge does not bound the token region")
    return sorted(cands)


def _hop(sk, owner, cursor, side):
    _, kept, far = sk.subdivide(side)
    sk.add_edge(cursor, far, owner)
    return sk.twin(kept)


def draw_curve_by_tokens(sk, owner, tokens, carrier_owners):
    """Draw a closed curve from (region_probe_corner, edge_dart) tokens.

    Each token: travel within the carrier region holding the probe corner,
    then cross the strand of the given dart.  Earlier-drawn curves may be
    crossed en route (invisible to the isotopy class); the carrier is only
    crossed at the listed tokens.  Incremental: every hop is replanned
    against the current sketch, so the drawing is embedded by construction.
    """
    visible = set(carrier_owners)
    cursor = None
    closing_corner = None
    for probe, sdart in tokens:
        regions = region_lookup(sk, visible)
        r = regions[sk.face_of(probe)]
        cands = _strand_side_candidates(sk, regions, sdart, r)
        crossable = set(sk.owners()) - visible - {owner}
        if cursor is None:
            side = cands[0]
            _, kept0, far0 = sk.subdivide(side)
            cursor = sk.twin(kept0)
            closing_corner = far0
            continue
        route, hit = _route_to(sk, sk.face_of(cursor),
                               [sk.face_of(d) for d in cands], crossable)
        for s in route:
            cursor = _hop(sk, owner, cursor, s)
        side = min(d for d in cands if sk.face_of(d) == hit)
        cursor = _hop(sk, owner, cursor, side)
    crossable = set(sk.owners()) - visible - {owner}
    route, _ = _route_to(sk, sk.face_of(cursor),
                         [sk.face_of(closing_corner)], crossable)
    for s in route:
        cursor = _hop(sk, owner, cursor, s)
    sk.add_edge(cursor, closing_corner, owner)


def draw_arc_by_tokens(sk, owner, v_start, probe_start, tokens, v_end,
                       probe_end, carrier_owners):
    """Draw an arc between marked vertices through region/edge tokens."""
    visible = set(carrier_owners)
    regions = region_lookup(sk, visible)
    r0 = regions[sk.face_of(probe_start)]
    starts = [d for d in sk.vertex_darts(v_start)
              if regions[sk.face_of(d)] == r0]
    if not starts:
        raise CarrierMismatch("start vertex does not touch the first region")
    cursor = starts[0]
    for probe, sdart in tokens:
        regions = region_lookup(sk, visible)
        r = regions[sk.face_of(probe)]
        cands = _strand_side_candidates(sk, regions, sdart, r)
        crossable = set(sk.owners()) - visible - {owner}
        route, hit = _route_to(sk, sk.face_of(cursor),
                               [sk.face_of(d) for d in cands], crossable)
        for s in route:
            cursor = _hop(sk, owner, cursor, s)
        side = min(d for d in cands if sk.face_of(d) == hit)
        cursor = _hop(sk, owner, cursor, side)
    regions = region_lookup(sk, visible)
    r1 = regions[sk.face_of(probe_end)]
    crossable = set(sk.owners()) - visible - {owner}
    goal_corners = [d for d in sk.vertex_darts(v_end)
                    if regions[sk.face_of(d)] == r1]
    if not goal_corners:
        raise CarrierMismatch("end vertex does not touch the last region")
    route, hit = _route_to(sk, sk.face_of(cursor),
                           [sk.face_of(d) for d in goal_corners], crossable)
    for s in route:
        cursor = _hop(sk, owner, cursor, s)
    end = min(d for d in goal_corners if sk.face_of(d) == hit)
    sk.add_edge(cursor, end, owner)
