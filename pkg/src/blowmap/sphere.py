"""Oriented combinatorial maps on the 2-sphere, with labeled strands.

A :class:`Sketch` is a rotation system: darts (directed edge halves) with a
fixed-point-free twin involution and a counterclockwise `next` permutation at
every vertex.  Faces are the orbits of ``d -> prev(twin(d))``; the face of a
dart lies to the dart's left, and the wedge between a dart ``d`` and its
rotational successor belongs to ``face_of(d)``.

Every edge carries an owner label.  Owned edges form the embedded objects of
interest (graphs, arcs, closed curves); edges owned by ``None`` are scaffold,
used only to keep the sketch connected and to pin the embedding of otherwise
disconnected objects.  All isotopy-sensitive computations treat scaffold
edges as transparent.

Unmarked vertices are structural: anchors/subdivisions (degree 2, one owner),
transverse crossings (degree 4, two owners alternating), or branch points of
a single owner (degree >= 3).  Marked vertices are the pinned points of the
underlying marked sphere and admit arbitrary incident structure.
"""

from __future__ import annotations

import itertools
from collections import deque

from .errors import InvalidTarget, MalformedRotation, NonSphere

SCAFFOLD = None


class Sketch:
    """Mutable rotation system on the sphere with owner-labeled edges."""

    def __init__(self):
        self._twin = {}
        self._next = {}
        self._prev = {}
        self._org = {}
        self._owner = {}
        self._vdart = {}   # vertex -> one incident dart, or None while isolated
        self._marked = set()
        self._dart_seq = itertools.count()
        self._vert_seq = itertools.count()
        self._faces = None
        self._face_of = None

    # ------------------------------------------------------------------
    # basic accessors

    def darts(self):
        return sorted(self._twin)

    def vertices(self):
        return sorted(self._vdart, key=str)

    def twin(self, d):
        return self._twin[d]

    def nxt(self, d):
        return self._next[d]

    def prv(self, d):
        return self._prev[d]

    def org(self, d):
        return self._org[d]

    def dst(self, d):
        return self._org[self._twin[d]]

    def owner(self, d):
        return self._owner[d]

    def is_marked(self, v):
        return v in self._marked

    def marked(self):
        return sorted(self._marked, key=str)

    def degree(self, v):
        return len(self.vertex_darts(v))

    def vertex_darts(self, v):
        """Darts leaving v, in counterclockwise rotation order."""
        d0 = self._vdart[v]
        if d0 is None:
            return []
        out = [d0]
        d = self._next[d0]
        while d != d0:
            out.append(d)
            d = self._next[d]
        return out

    def edge_count(self):
        return len(self._twin) // 2

    def edge_darts(self):
        """One canonical dart per edge (the smaller id)."""
        return [d for d in sorted(self._twin) if d < self._twin[d]]

    def owner_darts(self, owner):
        return [d for d in sorted(self._twin) if self._owner[d] == owner]

    def owners(self):
        seen = set(self._owner.values())
        seen.discard(SCAFFOLD)
        return sorted(seen)

    def has_object(self, owner):
        return any(o == owner for o in self._owner.values())

    # ------------------------------------------------------------------
    # construction

    def add_vertex(self, name=None, marked=False):
        if name is None:
            name = "p%d" % next(self._vert_seq)
            while name in self._vdart:
                name = "p%d" % next(self._vert_seq)
        if name in self._vdart:
            raise MalformedRotation("duplicate vertex %r" % (name,))
        self._vdart[name] = None
        if marked:
            self._marked.add(name)
        return name

    def mark(self, v):
        self._marked.add(v)

    def _new_dart(self, v, owner):
        d = next(self._dart_seq)
        self._org[d] = v
        self._owner[d] = owner
        return d

    def _splice_after(self, corner, d):
        """Insert dart d into the rotation at org(corner), right after corner."""
        after = self._next[corner]
        self._next[corner] = d
        self._prev[d] = corner
        self._next[d] = after
        self._prev[after] = d

    def _attach_lonely(self, v, d):
        self._next[d] = d
        self._prev[d] = d
        self._vdart[v] = d

    def add_edge(self, corner1, corner2, owner):
        """Add an edge between two corners of a common face.

        A corner is a dart d: the wedge between d and its rotational
        successor, inside face_of(d).  Returns the new dart at corner1's
        vertex.  Both corners must lie on the same face and at distinct
        vertices (no loops).
        """
        v1, v2 = self._org[corner1], self._org[corner2]
        if v1 == v2:
            raise InvalidTarget("loop edges are not allowed")
        if self.face_of(corner1) != self.face_of(corner2):
            raise InvalidTarget("corners lie on different faces")
        d1 = self._new_dart(v1, owner)
        d2 = self._new_dart(v2, owner)
        self._twin[d1] = d2
        self._twin[d2] = d1
        self._splice_after(corner1, d1)
        self._splice_after(corner2, d2)
        self._invalidate()
        return d1

    def add_first_edge(self, v1, v2, owner):
        """Edge between two isolated vertices (sketch bootstrap only)."""
        if self._vdart[v1] is not None or self._vdart[v2] is not None:
            raise InvalidTarget("vertices are not isolated")
        d1 = self._new_dart(v1, owner)
        d2 = self._new_dart(v2, owner)
        self._twin[d1] = d2
        self._twin[d2] = d1
        self._attach_lonely(v1, d1)
        self._attach_lonely(v2, d2)
        self._invalidate()
        return d1

    def add_spur(self, corner, owner, v_new=None, marked=False):
        """Add a new degree-1 vertex joined to corner's vertex."""
        v2 = self.add_vertex(v_new, marked=marked)
        v1 = self._org[corner]
        d1 = self._new_dart(v1, owner)
        d2 = self._new_dart(v2, owner)
        self._twin[d1] = d2
        self._twin[d2] = d1
        self._splice_after(corner, d1)
        self._attach_lonely(v2, d2)
        self._invalidate()
        return d1

    def subdivide(self, d):
        """Split the edge of d at a fresh unmarked vertex.

        Returns (m, d, p): m is the new vertex, d keeps its origin and now
        ends at m, p is the dart from m toward the old head.
        """
        t = self._twin[d]
        m = self.add_vertex()
        p = self._new_dart(m, self._owner[d])
        q = self._new_dart(m, self._owner[d])
        self._twin[d] = q
        self._twin[q] = d
        self._twin[p] = t
        self._twin[t] = p
        self._next[p] = q
        self._next[q] = p
        self._prev[p] = q
        self._prev[q] = p
        self._vdart[m] = p
        self._invalidate()
        return m, d, p

    def delete_edge(self, d):
        """Remove the edge of d; merges the adjacent faces.

        Never isolates a marked vertex (raises InvalidTarget instead);
        unmarked vertices left isolated are removed.
        """
        t = self._twin[d]
        for x in (d, t):
            if self._next[x] == x and self._org[x] in self._marked:
                raise InvalidTarget(
                    "deletion isolates marked vertex %r" % (self._org[x],))
        for x in (d, t):
            v = self._org[x]
            nx, pv = self._next[x], self._prev[x]
            if nx == x:
                del self._vdart[v]
            else:
                self._next[pv] = nx
                self._prev[nx] = pv
                if self._vdart[v] == x:
                    self._vdart[v] = nx
            for table in (self._twin, self._next, self._prev, self._org, self._owner):
                table.pop(x, None)
        self._invalidate()

    def smooth(self, v):
        """Merge the two edges at an unmarked degree-2 vertex of one owner.

        Skipped (returns False) when it would create a loop or a free
        circle, when v is marked, or when the edge owners differ.
        """
        if v in self._marked or self._vdart.get(v) is None:
            return False
        ds = self.vertex_darts(v)
        if len(ds) != 2:
            return False
        x, y = ds
        if self._owner[x] != self._owner[y]:
            return False
        a, b = self._twin[x], self._twin[y]
        if self._org[a] == self._org[b]:
            return False  # merging would create a loop
        self._twin[a] = b
        self._twin[b] = a
        for x_ in (x, y):
            for table in (self._twin, self._next, self._prev, self._org, self._owner):
                table.pop(x_, None)
        del self._vdart[v]
        self._invalidate()
        return True

    def smooth_object(self, owner):
        """Smooth every smoothable degree-2 vertex of one owner."""
        changed = True
        while changed:
            changed = False
            for v in list(self._vdart):
                if v in self._marked or self._vdart.get(v) is None:
                    continue
                ds = self.vertex_darts(v)
                if len(ds) == 2 and all(self._owner[d] == owner for d in ds):
                    if self.smooth(v):
                        changed = True

    def relabel_edge(self, d, owner):
        self._owner[d] = owner
        self._owner[self._twin[d]] = owner

    def relabel_object(self, old, new):
        for d in list(self._owner):
            if self._owner[d] == old:
                self._owner[d] = new

    def delete_object(self, owner):
        """Delete all edges of an owner, keeping the sketch connected.

        Edges whose removal would disconnect the sketch (or isolate a marked
        vertex) are turned into scaffold instead.  Crossing remnants are
        smoothed away.
        """
        for d in self.owner_darts(owner):
            if d not in self._twin or self._owner.get(d) != owner:
                continue
            e = min(d, self._twin[d])
            if self._deletable(e):
                self.delete_edge(e)
            else:
                self.relabel_edge(e, SCAFFOLD)
        self.cleanup()

    def _deletable(self, d):
        t = self._twin[d]
        u, w = self._org[d], self._org[t]
        if self._next[d] == d and u in self._marked:
            return False
        if self._next[t] == t and w in self._marked:
            return False
        # still connected without this edge?
        if self._next[d] == d or self._next[t] == t:
            return True  # removes a spur (and its unmarked endpoint)
        seen = {u}
        queue = deque([u])
        while queue:
            a = queue.popleft()
            for x in self.vertex_darts(a):
                if x == d or x == t:
                    continue
                b = self.dst(x)
                if b not in seen:
                    seen.add(b)
                    queue.append(b)
        return w in seen

    def cleanup(self):
        """Drop removable scaffold and smooth leftover degree-2 vertices."""
        changed = True
        while changed:
            changed = False
            for d in self.owner_darts(SCAFFOLD):
                if d not in self._twin or self._owner.get(d) != SCAFFOLD:
                    continue
                e = min(d, self._twin[d])
                if self._deletable(e):
                    self.delete_edge(e)
                    changed = True
            for v in list(self._vdart):
                if v in self._marked or self._vdart.get(v) is None:
                    continue
                ds = self.vertex_darts(v)
                if len(ds) == 2 and self._owner[ds[0]] == self._owner[ds[1]]:
                    if self.smooth(v):
                        changed = True

    def copy(self):
        s = Sketch.__new__(Sketch)
        s._twin = dict(self._twin)
        s._next = dict(self._next)
        s._prev = dict(self._prev)
        s._org = dict(self._org)
        s._owner = dict(self._owner)
        s._vdart = dict(self._vdart)
        s._marked = set(self._marked)
        s._dart_seq = itertools.count(max(self._twin, default=-1) + 1)
        s._vert_seq = itertools.count()
        s._faces = None
        s._face_of = None
        return s

    # ------------------------------------------------------------------
    # faces

    def _invalidate(self):
        self._faces = None
        self._face_of = None

    def face_step(self, d):
        """The next dart along the boundary of the face left of d."""
        return self._prev[self._twin[d]]

    def _ensure_faces(self):
        if self._faces is not None:
            return
        seen = set()
        faces = []
        for d0 in sorted(self._twin):
            if d0 in seen:
                continue
            cyc = [d0]
            seen.add(d0)
            d = self.face_step(d0)
            while d != d0:
                cyc.append(d)
                seen.add(d)
                d = self.face_step(d)
            faces.append(tuple(cyc))
        faces.sort(key=lambda c: min(c))
        self._faces = faces
        self._face_of = {}
        for i, cyc in enumerate(faces):
            for d in cyc:
                self._face_of[d] = i

    def faces(self):
        """Face boundary cycles (each a tuple of darts), sorted by min dart."""
        self._ensure_faces()
        return self._faces

    def face_of(self, d):
        self._ensure_faces()
        return self._face_of[d]

    def euler_characteristic(self):
        return len(self._vdart) - self.edge_count() + len(self.faces())

    def is_connected(self):
        verts = set(self._vdart)
        if not verts:
            return True
        start = next(iter(verts))
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for d in self.vertex_darts(v):
                w = self.dst(d)
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(verts)

    def corners_at(self, v, face):
        """Darts d at v with face_of(d) == face."""
        return [d for d in self.vertex_darts(v) if self.face_of(d) == face]

    # ------------------------------------------------------------------
    # validation

    def check(self, strict=False):
        for d, t in self._twin.items():
            if t == d or self._twin[t] != d:
                raise MalformedRotation("twin is not a fixed-point-free involution")
            if self._owner[d] != self._owner[t]:
                raise MalformedRotation("owner differs across edge halves")
            if self._org[d] == self._org[t]:
                raise MalformedRotation("loop edge at %r" % (self._org[d],))
        for d in self._twin:
            if self._prev[self._next[d]] != d or self._next[self._prev[d]] != d:
                raise MalformedRotation("rotation links broken at dart %d" % d)
        covered = set()
        for v, d0 in self._vdart.items():
            if d0 is None:
                raise MalformedRotation("isolated vertex %r" % (v,))
            for d in self.vertex_darts(v):
                if self._org[d] != v:
                    raise MalformedRotation("rotation of %r strays" % (v,))
                covered.add(d)
        if covered != set(self._twin):
            raise MalformedRotation("darts outside any vertex rotation")
        if not self.is_connected():
            raise NonSphere("sketch is disconnected")
        if self.euler_characteristic() != 2:
            raise NonSphere("Euler characteristic %d != 2" % self.euler_characteristic())
        if strict:
            self._check_vertex_types()
        return True

    def _check_vertex_types(self):
        for v in self._vdart:
            if v in self._marked:
                continue
            ds = self.vertex_darts(v)
            owners = [self._owner[d] for d in ds]
            kinds = set(owners)
            if len(kinds) == 1:
                if len(ds) < 2:
                    raise MalformedRotation("unmarked degree-1 vertex %r" % (v,))
            elif len(kinds) == 2 and len(ds) == 4:
                if owners[0] == owners[1] or owners[1] == owners[2]:
                    raise MalformedRotation("non-transverse crossing at %r" % (v,))
            else:
                raise MalformedRotation("invalid unmarked vertex %r" % (v,))

    # ------------------------------------------------------------------
    # views: the sub-sketch of selected owners, with regions

    def view_step(self, d, visible):
        """Face step in the view keeping only edges of visible owners."""
        e = self._prev[self._twin[d]]
        while self._owner[e] not in visible:
            e = self._prev[e]
        return e

    def view_walks(self, visible):
        """Boundary walks of the sub-sketch of `visible` owners.

        Returns (walks, region_of_walk, region_data): walks are tuples of
        darts; region_of_walk[i] is the index of the region on the left of
        walk i; region_data[r] has keys "faces" (sketch face indices) and
        "free_marked" (marked vertices inside the region, not on the view).
        Regions are the complementary components of the visible sub-sketch.
        """
        visible = set(visible)
        vis_darts = [d for d in sorted(self._twin) if self._owner[d] in visible]
        seen = set()
        walks = []
        for d0 in vis_darts:
            if d0 in seen:
                continue
            cyc = [d0]
            seen.add(d0)
            d = self.view_step(d0, visible)
            while d != d0:
                cyc.append(d)
                seen.add(d)
                d = self.view_step(d, visible)
            walks.append(tuple(cyc))
        walks.sort(key=lambda c: min(c))

        self._ensure_faces()
        parent = list(range(len(self._faces)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for d in self._twin:
            if self._owner[d] not in visible:
                a, b = find(self.face_of(d)), find(self.face_of(self._twin[d]))
                if a != b:
                    parent[max(a, b)] = min(a, b)

        roots = sorted({find(i) for i in range(len(self._faces))})
        region_index = {r: i for i, r in enumerate(roots)}
        region_of_face = {i: region_index[find(i)] for i in range(len(self._faces))}
        region_of_walk = [region_of_face[self.face_of(w[0])] for w in walks]
        region_data = [{"faces": set(), "free_marked": []} for _ in roots]
        for i in range(len(self._faces)):
            region_data[region_of_face[i]]["faces"].add(i)
        for v in self.marked():
            ds = self.vertex_darts(v)
            if all(self._owner[d] not in visible for d in ds):
                region_data[region_of_face[self.face_of(ds[0])]]["free_marked"].append(v)
        return walks, region_of_walk, region_data

    # ------------------------------------------------------------------
    # canonical serialization

    def canonical_text(self):
        """Deterministic textual form: rotations by sorted vertex id."""
        names = {}
        counter = itertools.count()
        for v in self.vertices():
            for d in self.vertex_darts(v):
                e = min(d, self._twin[d])
                if e not in names:
                    names[e] = "e%d" % next(counter)
        lines = []
        for v in self.vertices():
            tokens = [names[min(d, self._twin[d])] for d in self.vertex_darts(v)]
            star = "*" if v in self._marked else ""
            lines.append("%s%s: %s" % (v, star, " ".join(tokens)))
        for e in sorted(names, key=lambda e: int(names[e][1:])):
            own = self._owner[e]
            lines.append("%s = %s %s [%s]" % (
                names[e], self._org[e], self._org[self._twin[e]],
                "-" if own is SCAFFOLD else own))
        return "\n".join(lines) + "\n"


def build_complex(edges, rotations, marked, owners=None):
    """Build a sketch from named edges and per-vertex rotation lists.

    edges: dict name -> (u, v); rotations: dict vertex -> list of edge names
    in counterclockwise order; marked: iterable of vertex names; owners:
    dict name -> owner label (default "graph" for every edge).
    Returns (sketch, edge_dart) with edge_dart[name] = the u->v dart.
    """
    owners = owners or {}
    sk = Sketch()
    verts = set()
    for name, (u, v) in edges.items():
        if u == v:
            raise MalformedRotation("edge %r is a loop" % (name,))
        verts.update((u, v))
    verts.update(rotations)
    marked = set(marked)
    for v in sorted(verts, key=str):
        sk.add_vertex(v, marked=v in marked)
    edge_dart = {}
    for name in edges:
        u, v = edges[name]
        own = owners.get(name, "graph")
        d1 = sk._new_dart(u, own)
        d2 = sk._new_dart(v, own)
        sk._twin[d1] = d2
        sk._twin[d2] = d1
        edge_dart[name] = d1
    at_vertex = {}
    for name, (u, v) in edges.items():
        at_vertex.setdefault(u, {})[name] = edge_dart[name]
        at_vertex.setdefault(v, {})[name] = sk._twin[edge_dart[name]]
    for v in sorted(verts, key=str):
        listed = rotations.get(v, [])
        have = at_vertex.get(v, {})
        if sorted(listed) != sorted(have):
            raise MalformedRotation(
                "rotation at %r lists %s but incident edges are %s"
                % (v, sorted(listed), sorted(have)))
        if len(set(listed)) != len(listed):
            raise MalformedRotation("edge repeated in rotation at %r" % (v,))
        if not listed:
            raise MalformedRotation("isolated vertex %r" % (v,))
        ds = [have[name] for name in listed]
        for i, d in enumerate(ds):
            sk._next[d] = ds[(i + 1) % len(ds)]
            sk._prev[ds[(i + 1) % len(ds)]] = d
        sk._vdart[v] = ds[0]
    if not sk.is_connected():
        raise NonSphere("rotation system is disconnected")
    if sk.euler_characteristic() != 2:
        raise NonSphere("Euler characteristic %d != 2" % sk.euler_characteristic())
    sk.check()
    return sk, edge_dart


def trace_faces(sketch):
    """Face boundary cycles of a sketch (tuples of darts)."""
    return sketch.faces()


# ----------------------------------------------------------------------
# object views: strands and embedded-graph structure


class Strand:
    """A maximal run of one owner's edges between nodes (or a closed run)."""

    __slots__ = ("darts", "closed")

    def __init__(self, darts, closed):
        self.darts = tuple(darts)
        self.closed = closed

    @property
    def key(self):
        return min(self.darts)

    def __repr__(self):
        return "Strand(%s%s)" % (list(self.darts), ", closed" if self.closed else "")


class GraphView:
    """The embedded object named `owner` inside a sketch.

    nodes: vertices where the object has degree != 2 or which are marked;
    strands: maximal dart runs between nodes (closed strands touch none).
    """

    def __init__(self, sketch, owner):
        self.sketch = sketch
        self.owner = owner
        self._extract()

    def _extract(self):
        sk = self.sketch
        own_darts = [d for d in sorted(sk._twin) if sk._owner[d] == self.owner]
        incident = {}
        for d in own_darts:
            incident.setdefault(sk.org(d), []).append(d)
        self.nodes = sorted(
            (v for v, ds in incident.items()
             if len(ds) != 2 or sk.is_marked(v)), key=str)
        nodeset = set(self.nodes)
        self.strands = []
        used = set()
        for v in self.nodes:
            for d in sk.vertex_darts(v):
                if sk._owner[d] != self.owner or d in used:
                    continue
                run = [d]
                cur = d
                while True:
                    w = sk.dst(cur)
                    if w in nodeset:
                        break
                    outs = [x for x in sk.vertex_darts(w)
                            if sk._owner[x] == self.owner and x != sk.twin(cur)]
                    assert len(outs) == 1, "broken passthrough at %r" % (w,)
                    cur = outs[0]
                    run.append(cur)
                used.update(run)
                used.update(sk.twin(x) for x in run)
                self.strands.append(Strand(run, closed=False))
        rest = [d for d in own_darts if d not in used]
        while rest:
            d = rest[0]
            run = [d]
            cur = d
            while True:
                w = sk.dst(cur)
                outs = [x for x in sk.vertex_darts(w)
                        if sk._owner[x] == self.owner and x != sk.twin(cur)]
                assert len(outs) == 1
                cur = outs[0]
                if cur == d:
                    break
                run.append(cur)
            used.update(run)
            used.update(sk.twin(x) for x in run)
            self.strands.append(Strand(run, closed=True))
            rest = [x for x in own_darts if x not in used]
        self.strands.sort(key=lambda s: s.key)
        self._dart_strand = {}
        for s in self.strands:
            for x in s.darts:
                self._dart_strand[x] = s
                self._dart_strand[sk.twin(x)] = s

    def strand_of_dart(self, d):
        return self._dart_strand[d]

    def endpoints(self, strand):
        if strand.closed:
            return None
        return (self.sketch.org(strand.darts[0]),
                self.sketch.dst(strand.darts[-1]))

    def node_degree(self, v):
        sk = self.sketch
        return sum(1 for d in sk.vertex_darts(v) if sk._owner[d] == self.owner)

    def germs_at(self, v):
        """Outgoing (strand, direction) germs at node v, in ccw order."""
        sk = self.sketch
        out = []
        for d in sk.vertex_darts(v):
            if sk._owner[d] != self.owner:
                continue
            s = self.strand_of_dart(d)
            if s.darts[0] == d:
                out.append((s, +1))
            elif sk.twin(s.darts[-1]) == d:
                out.append((s, -1))
            else:
                raise AssertionError("strand does not start or end at node")
        return out

    def component_split(self):
        """Connected components as (nodes, strands); closed strands alone."""
        adj = {}
        for s in self.strands:
            if s.closed:
                continue
            u, w = self.endpoints(s)
            adj.setdefault(u, []).append((s, w))
            adj.setdefault(w, []).append((s, u))
        comps = []
        seen_nodes = set()
        for v in self.nodes:
            if v in seen_nodes:
                continue
            if v not in adj:
                seen_nodes.add(v)
                continue  # node with no strands cannot happen (views drop it)
            comp_nodes = {v}
            comp_strands = []
            seen_strands = set()
            queue = deque([v])
            seen_nodes.add(v)
            while queue:
                u = queue.popleft()
                for s, w in adj[u]:
                    if s.key not in seen_strands:
                        seen_strands.add(s.key)
                        comp_strands.append(s)
                    if w not in comp_nodes:
                        comp_nodes.add(w)
                        seen_nodes.add(w)
                        queue.append(w)
            comp_strands.sort(key=lambda s: s.key)
            comps.append((sorted(comp_nodes, key=str), comp_strands))
        for s in self.strands:
            if s.closed:
                comps.append(([], [s]))
        comps.sort(key=lambda c: c[1][0].key)
        return comps

    def component_count(self):
        return len(self.component_split())


def euler_component_count(view):
    """Component count via |F| - |E| + |V| - 1 over the view sub-sketch."""
    _, _, region_data = view.sketch.view_walks({view.owner})
    return len(region_data) - len(view.strands) + len(view.nodes) - 1


# ----------------------------------------------------------------------
# orientation-preserving isomorphisms of embedded graphs


def _germ_tables(view, strands, nodes):
    """Rotation and reversal tables for strand germs of one component."""
    keys = {s.key for s in strands}
    germs = []
    gid = {}
    for v in nodes:
        for s, di in view.germs_at(v):
            if s.key not in keys:
                continue
            gid[(s.key, di)] = len(germs)
            germs.append((v, s, di))
    gnext = [None] * len(germs)
    for v in nodes:
        local = [gid[(s.key, di)] for s, di in view.germs_at(v) if s.key in keys]
        for i, g in enumerate(local):
            gnext[g] = local[(i + 1) % len(local)]
    gtwin = [gid[(germs[i][1].key, -germs[i][2])] for i in range(len(germs))]
    return germs, gnext, gtwin


def _connected_germ_isos(t1, t2):
    """All germ bijections commuting with rotation and reversal."""
    germs1, gnext1, gtwin1 = t1
    germs2, gnext2, gtwin2 = t2
    if len(germs1) != len(germs2):
        return []
    if not germs1:
        return [dict()]
    out = []
    for start2 in range(len(germs2)):
        mapping = {0: start2}
        queue = deque([0])
        ok = True
        while queue and ok:
            g = queue.popleft()
            for step1, step2 in ((gnext1, gnext2), (gtwin1, gtwin2)):
                a, b = step1[g], step2[mapping[g]]
                if a in mapping:
                    if mapping[a] != b:
                        ok = False
                        break
                else:
                    mapping[a] = b
                    queue.append(a)
        if ok and len(mapping) == len(germs1) \
                and len(set(mapping.values())) == len(germs1):
            out.append(mapping)
    return out


def _component_isos(view1, c1, view2, c2):
    """(vertex_map, strand_map, germ_map) isomorphisms of two components.

    germ_map sends (strand key, direction) to (strand, direction).
    """
    t1 = _germ_tables(view1, c1[1], c1[0])
    t2 = _germ_tables(view2, c2[1], c2[0])
    germs1, _, _ = t1
    germs2, _, _ = t2
    out = []
    for gmap in _connected_germ_isos(t1, t2):
        vmap, smap, dmap = {}, {}, {}
        ok = True
        for g1, g2 in gmap.items():
            v1, s1, di1 = germs1[g1]
            v2, s2, di2 = germs2[g2]
            if vmap.setdefault(v1, v2) != v2:
                ok = False
                break
            prev = smap.setdefault(s1.key, s2)
            if prev is not s2:
                ok = False
                break
            dmap[(s1.key, di1)] = (s2, di2)
        if ok and len(set(vmap.values())) == len(vmap):
            out.append((vmap, smap, dmap))
    return out


def _walk_tables(view):
    """walk index per dart, and region per walk, for one owner's view."""
    walks, region_of_walk, region_data = view.sketch.view_walks({view.owner})
    of_dart = {}
    for wi, w in enumerate(walks):
        for d in w:
            of_dart[d] = wi
    return walks, region_of_walk, of_dart


def _germ_walk(view, of_dart, strand, direction):
    d = strand.darts[0] if direction == +1 else view.sketch.twin(strand.darts[-1])
    return of_dart[d]


def enumerate_isomorphisms(view1, view2):
    """Orientation-preserving embedded-graph isomorphisms view1 -> view2.

    Returns a list of (vertex_map, strand_map).  For disconnected graphs the
    containment structure of components inside each other's faces must also
    match, so every returned bijection is realizable by an orientation
    preserving homeomorphism of the sphere.
    """
    comps1 = view1.component_split()
    comps2 = view2.component_split()
    if len(comps1) != len(comps2):
        return []
    if any(c[1][0].closed for c in comps1 + comps2):
        raise InvalidTarget("isomorphism enumeration expects graphs, not curves")

    cand = {}
    for i, c1 in enumerate(comps1):
        for j, c2 in enumerate(comps2):
            cand[(i, j)] = _component_isos(view1, c1, view2, c2)

    walks1, regions1, of_dart1 = _walk_tables(view1)
    walks2, regions2, of_dart2 = _walk_tables(view2)

    results = []
    n = len(comps1)

    def region_check(picks):
        fwd, bwd = {}, {}
        for (i, j, vmap, smap, dmap) in picks:
            strand_by_key = {s.key: s for s in comps1[i][1]}
            for (skey, di), (s2, di2) in dmap.items():
                s1 = strand_by_key[skey]
                r1 = regions1[_germ_walk(view1, of_dart1, s1, di)]
                r2 = regions2[_germ_walk(view2, of_dart2, s2, di2)]
                if fwd.setdefault(r1, r2) != r2 or bwd.setdefault(r2, r1) != r1:
                    return False
        return True

    def backtrack(i, used, picks):
        if i == n:
            if region_check(picks):
                vmap, smap = {}, {}
                for (_, _, vm, sm, _) in picks:
                    vmap.update(vm)
                    smap.update(sm)
                results.append((vmap, smap))
            return
        for j in range(n):
            if j in used:
                continue
            for vm, sm, dm in cand[(i, j)]:
                backtrack(i + 1, used | {j}, picks + [(i, j, vm, sm, dm)])

    backtrack(0, frozenset(), [])
    return results
