"""Exact tracing of embedded closed curves on the doubled-surface complex.

A traced curve is a cyclic list of passages (edge, position) with exact
Fraction positions, consecutive passages joined by chords through declared
faces.  Because every face is a disk with a cyclically ordered boundary,
all geometry reduces to combinatorics:

- two chords in a face cross iff their endpoints interleave on the face
  boundary; chords of a single embedded curve never cross;
- in arrangements whose per-face chords are triangle-free (no three
  pairwise-crossing chords - true for any two curves, or one curve against
  a pairwise-disjoint family), the order of crossings along a chord is
  fully determined by endpoint order;
- the complement of the curves is computed exactly: each face is cut into
  sub-regions by a left-hand boundary walk of the local arrangement, and
  sub-regions are glued across edge intervals.  Regions report their exact
  Euler characteristic (#sub-disks - #gluings), their boundary circles as
  curve arcs, and their corners (curve crossings).

This yields exact predicates: a complementary disk region with two corners
is an innermost bigon (the only obstruction to minimal position); a disk
region bounded by a whole curve certifies null-homotopy; an annulus region
cobounded by two whole disjoint curves certifies isotopy; all-regions-disks
certifies filling.  Signed crossings use the face orientations, which the
cell complex guarantees are globally coherent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .cells import CellComplex

__all__ = [
    "TracedCurve",
    "EngineLimitError",
    "Arrangement",
    "Region",
    "Crossing",
    "BigonMove",
    "validate_curve",
]


class EngineLimitError(RuntimeError):
    """The arrangement falls outside the engine's decidable regime
    (three pairwise-crossing chords in one face)."""


@dataclass(frozen=True)
class TracedCurve:
    """Closed curve transverse to the complex: passages[k] = (edge, pos with
    0 < pos < 1 along the edge's canonical orientation); chords[k] = face
    id of the chord joining passage k to passage k+1 (cyclically)."""

    passages: tuple[tuple[int, Fraction], ...]
    chords: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.passages)

    def edge_of(self, k: int) -> int:
        return self.passages[k % len(self.passages)][0]

    def pos_of(self, k: int) -> Fraction:
        return self.passages[k % len(self.passages)][1]


def validate_curve(cx: CellComplex, curve: TracedCurve) -> None:
    n = len(curve.passages)
    assert n >= 2, "a transverse closed curve crosses at least two edges"
    assert len(curve.chords) == n
    for (edge, pos) in curve.passages:
        assert 0 <= edge < len(cx.edges)
        assert isinstance(pos, Fraction) and 0 < pos < 1
    for k in range(n):
        edge = curve.edge_of(k)
        f_in = curve.chords[(k - 1) % n]
        f_out = curve.chords[k]
        incident = {fi for fi, _ in cx.edge_sides(edge)}
        assert f_in != f_out, f"passage {k} does not cross its edge"
        assert {f_in, f_out} == incident, f"passage {k} chords not on the edge's faces"
    seen: dict[int, set[Fraction]] = {}
    for (edge, pos) in curve.passages:
        bucket = seen.setdefault(edge, set())
        assert pos not in bucket, "duplicate passage position on one edge"
        bucket.add(pos)
    # self-chords in each face must not cross (embeddedness)
    arr = Arrangement(cx, [curve], _validate=False)
    for f, chords in arr._face_chords.items():
        for i in range(len(chords)):
            for j in range(i + 1, len(chords)):
                assert not arr._chords_cross(f, chords[i], chords[j]), (
                    f"curve self-crossing in face {f}")


# -- Crossing bookkeeping -------------------------------------------------------


@dataclass(frozen=True)
class Crossing:
    """One transverse crossing between chords of two curves.

    ca/cb index the curves in the arrangement, ka/kb their chords; fa/fb
    are exact positions of the crossing along each chord in (0,1) (rank
    fractions); sign is the orientation sign in the face's (coherent)
    orientation."""

    face: int
    ca: int
    ka: int
    fa: Fraction
    cb: int
    kb: int
    fb: Fraction
    sign: int

    def along(self, curve_index: int) -> tuple[int, Fraction]:
        if curve_index == self.ca:
            return (self.ka, self.fa)
        if curve_index == self.cb:
            return (self.kb, self.fb)
        raise ValueError("curve not part of this crossing")


@dataclass
class Region:
    """A connected component of the complement of the curve system."""

    index: int
    chi: int
    subregions: int
    gluings: int
    corner_count: int
    boundary: list[list]  # circles: alternating ("arc", curve, [piece refs...]) runs
    corners: list[Crossing]

    def touched_curves(self) -> set[int]:
        return {run[1] for circle in self.boundary for run in circle}

    def circle_full_curve(self, circle: list, curve: int, n_chords: int) -> bool:
        """True iff this boundary circle consists of every chord of the given
        curve exactly once and nothing else."""
        if any(run[1] != curve for run in circle):
            return False
        pieces = [p for run in circle for p in run[2]]
        return sorted(p[0] for p in pieces) == list(range(n_chords))


# -- The arrangement ------------------------------------------------------------


class Arrangement:
    """Exact arrangement of one or more embedded curves on the complex.

    Curves must have pairwise-distinct passage positions on every edge (use
    moves.separate_positions first) and a triangle-free chord system in
    every face, else EngineLimitError.
    """

    def __init__(self, cx: CellComplex, curves: Sequence[TracedCurve], _validate: bool = True):
        self.cx = cx
        self.curves = list(curves)
        self._build_faces()
        if _validate:
            self._assert_distinct_positions()
            self._build_crossings()
            self._trace_subregions()
            self._glue()

    # -- per-face markup ---------------------------------------------------

    def _build_faces(self) -> None:
        cx = self.cx
        # all passage points per edge: (pos, curve, passage index)
        self._edge_points: dict[int, list[tuple[Fraction, int, int]]] = {}
        for ci, curve in enumerate(self.curves):
            for pi, (edge, pos) in enumerate(curve.passages):
                self._edge_points.setdefault(edge, []).append((pos, ci, pi))
        for pts in self._edge_points.values():
            pts.sort()

        # boundary markup per face: cyclic list of ("corner", si) / ("pass", ci, pi)
        self._face_pts: dict[int, list[tuple]] = {}
        self._rank: dict[tuple[int, int, int], int] = {}  # (face, ci, pi) -> rank
        self._face_chords: dict[int, list[tuple[int, int]]] = {}
        for f, sides in enumerate(cx.faces):
            pts: list[tuple] = []
            for si, side in enumerate(sides):
                pts.append(("corner", si))
                on_edge = self._edge_points.get(side.edge, [])
                ordered = on_edge if side.direction == 1 else list(reversed(on_edge))
                for (_, ci, pi) in ordered:
                    pts.append(("pass", ci, pi))
            self._face_pts[f] = pts
            for r, p in enumerate(pts):
                if p[0] == "pass":
                    self._rank[(f, p[1], p[2])] = r
            self._face_chords[f] = []
        for ci, curve in enumerate(self.curves):
            for k, f in enumerate(curve.chords):
                self._face_chords[f].append((ci, k))

    def _chord_ranks(self, f: int, chord: tuple[int, int]) -> tuple[int, int]:
        ci, k = chord
        n = len(self.curves[ci].passages)
        return (self._rank[(f, ci, k)], self._rank[(f, ci, (k + 1) % n)])

    @staticmethod
    def _cyc_in(x: int, a: int, b: int, m: int) -> bool:
        """x lies strictly inside the ccw-open interval (a, b) mod m."""
        return 0 < (x - a) % m < (b - a) % m

    def _chords_cross(self, f: int, c1: tuple[int, int], c2: tuple[int, int]) -> bool:
        m = len(self._face_pts[f])
        a, b = self._chord_ranks(f, c1)
        c, d = self._chord_ranks(f, c2)
        return self._cyc_in(c, a, b, m) != self._cyc_in(d, a, b, m)

    def _assert_distinct_positions(self) -> None:
        for edge, pts in self._edge_points.items():
            for (p1, *_), (p2, *_) in zip(pts, pts[1:]):
                assert p1 != p2, (
                    f"two passages share position {p1} on edge {edge}; "
                    "run separate_positions first")

    # -- crossings ----------------------------------------------------------

    def _build_crossings(self) -> None:
        self._crossings_in_face: dict[int, list[tuple[tuple[int, int], tuple[int, int]]]] = {}
        self._cross_along: dict[tuple[int, tuple[int, int]], list[tuple[int, int]]] = {}
        # _cross_along[(f, chord)] = crossing ids along the chord in order
        self._crossing_recs: list[Crossing] = []
        for f, chords in self._face_chords.items():
            m = len(self._face_pts[f])
            ranks = {ch: self._chord_ranks(f, ch) for ch in chords}
            pairs: list[tuple[tuple[int, int], tuple[int, int]]] = []
            # per chord: (in-arc offset, out-arc offset, crossing key), where
            # offsets are measured ccw from the chord's own endpoints
            crossers: dict[tuple[int, int], list[tuple[int, int, tuple]]] = {}
            for i in range(len(chords)):
                a, b = ranks[chords[i]]
                for j in range(i + 1, len(chords)):
                    if chords[i][0] == chords[j][0]:
                        continue  # same curve: validated non-crossing
                    c, d = ranks[chords[j]]
                    in_c = self._cyc_in(c, a, b, m)
                    if in_c == self._cyc_in(d, a, b, m):
                        continue
                    key = (chords[i], chords[j])
                    pairs.append(key)
                    r1 = c if in_c else d     # endpoint of j inside arc of i
                    s1 = d if in_c else c
                    r2 = a if self._cyc_in(a, c, d, m) else b
                    s2 = b if self._cyc_in(a, c, d, m) else a
                    crossers.setdefault(chords[i], []).append(
                        ((r1 - a) % m, (s1 - b) % m, key))
                    crossers.setdefault(chords[j], []).append(
                        ((r2 - c) % m, (s2 - d) % m, key))
            self._crossings_in_face[f] = pairs
            # order along each chord: ascending in-arc offset, ties (a shared
            # endpoint of two chords of one curve) broken by descending
            # out-arc offset.  The same sort certifies the crossers are
            # pairwise non-crossing (out-offsets non-increasing), which is
            # what makes the order combinatorially forced.
            order_of: dict[tuple, dict[tuple, int]] = {}
            counts: dict[tuple, int] = {}
            for chord, lst in crossers.items():
                lst.sort(key=lambda x: (x[0], -x[1]))
                for (o1, u1, _), (o2, u2, _) in zip(lst, lst[1:]):
                    if u1 < u2:
                        raise EngineLimitError(
                            f"three pairwise-crossing chords in face {f}")
                order_of[chord] = {key: t for t, (_, _, key) in enumerate(lst)}
                counts[chord] = len(lst)
                self._cross_along[(f, chord)] = [key for _, _, key in lst]
            for (c1, c2) in pairs:
                t1 = order_of[c1][(c1, c2)]
                t2 = order_of[c2][(c1, c2)]
                fa = Fraction(t1 + 1, counts[c1] + 1)
                fb = Fraction(t2 + 1, counts[c2] + 1)
                a, b = ranks[c1]
                c, d = ranks[c2]
                sign = 1 if self._cyc_in(c, a, b, m) else -1
                self._crossing_recs.append(Crossing(
                    face=f, ca=c1[0], ka=c1[1], fa=fa,
                    cb=c2[0], kb=c2[1], fb=fb, sign=sign))

    # -- local planar graph and sub-region tracing ---------------------------

    def _piece_node(self, f: int, chord: tuple[int, int], t: int):
        """Node at the start of piece t of a chord (t=0: tail endpoint;
        t>=1: crossing t-1)."""
        if t == 0:
            return ("pt", f, self._chord_ranks(f, chord)[0])
        key = self._cross_along[(f, chord)][t - 1]
        return ("x", f, key)

    def _piece_count(self, f: int, chord: tuple[int, int]) -> int:
        return len(self._cross_along.get((f, chord), ())) + 1

    def _arrival(self, elem) -> tuple:
        kind = elem[0]
        if kind == "b":
            _, f, k, d = elem
            m = len(self._face_pts[f])
            return ("pt", f, (k + 1) % m if d == 1 else k)
        _, f, chord, t, d = elem
        if d == 1:
            np = self._piece_count(f, chord)
            if t == np - 1:
                return ("pt", f, self._chord_ranks(f, chord)[1])
            return ("x", f, self._cross_along[(f, chord)][t])
        return self._piece_node(f, chord, t)

    @staticmethod
    def _reverse(elem):
        if elem[0] == "b":
            _, f, k, d = elem
            return ("b", f, k, -d)
        _, f, chord, t, d = elem
        return ("c", f, chord, t, -d)

    def _outgoing_ccw(self, node) -> list:
        if node[0] == "pt":
            _, f, r = node
            m = len(self._face_pts[f])
            pt = self._face_pts[f][r]
            out = [("b", f, r, 1)]
            if pt[0] == "pass":
                ci, pi = pt[1], pt[2]
                curve = self.curves[ci]
                n = len(curve.passages)
                # the unique chord of this curve in this face ending here
                for k in (pi, (pi - 1) % n):
                    if curve.chords[k] != f:
                        continue
                    ra, rb = self._chord_ranks(f, (ci, k))
                    if ra == r:
                        out.append(("c", f, (ci, k), 0, 1))
                    elif rb == r:
                        out.append(("c", f, (ci, k), self._piece_count(f, (ci, k)) - 1, -1))
            out.append(("b", f, (r - 1) % m, -1))
            return out
        _, f, key = node
        c1, c2 = key
        m = len(self._face_pts[f])
        t1 = self._cross_along[(f, c1)].index(key) + 1
        t2 = self._cross_along[(f, c2)].index(key) + 1
        a, b = self._chord_ranks(f, c1)
        c, d = self._chord_ranks(f, c2)
        options = [
            (a, ("c", f, c1, t1 - 1, -1)),
            (b, ("c", f, c1, t1, 1)),
            (c, ("c", f, c2, t2 - 1, -1)),
            (d, ("c", f, c2, t2, 1)),
        ]
        options.sort(key=lambda x: x[0])
        return [e for _, e in options]

    def _next_left(self, elem):
        node = self._arrival(elem)
        rot = self._outgoing_ccw(node)
        rev = self._reverse(elem)
        idx = rot.index(rev)
        return rot[(idx - 1) % len(rot)]

    def _trace_subregions(self) -> None:
        all_elems: list = []
        for f, pts in self._face_pts.items():
            m = len(pts)
            for k in range(m):
                all_elems.append(("b", f, k, 1))
                all_elems.append(("b", f, k, -1))
            for chord in self._face_chords[f]:
                for t in range(self._piece_count(f, chord)):
                    all_elems.append(("c", f, chord, t, 1))
                    all_elems.append(("c", f, chord, t, -1))
        orbit_of: dict = {}
        orbits: list[list] = []
        for e0 in all_elems:
            if e0 in orbit_of:
                continue
            oid = len(orbits)
            cyc = []
            e = e0
            while e not in orbit_of:
                orbit_of[e] = oid
                cyc.append(e)
                e = self._next_left(e)
            assert e == e0, "orbit tracing did not close"
            orbits.append(cyc)
        # identify the exterior orbit of each face (all reversed boundary segs)
        self._exterior: set[int] = set()
        for f, pts in self._face_pts.items():
            oid = orbit_of[("b", f, 0, -1)]
            ext = orbits[oid]
            assert all(e[0] == "b" and e[3] == -1 and e[1] == f for e in ext), (
                f"exterior orbit of face {f} is malformed")
            assert len(ext) == len(pts)
            self._exterior.add(oid)
        self._orbits = orbits
        self._orbit_of = orbit_of
        self._orbit_pos = {e: (oid, i) for oid, cyc in enumerate(orbits)
                           for i, e in enumerate(cyc)}
        # per-face sanity: interior orbit count == 1 + #chords + #crossings
        per_face_orbits: dict[int, set[int]] = {}
        for e, oid in orbit_of.items():
            if oid in self._exterior:
                continue
            per_face_orbits.setdefault(e[1], set()).add(oid)
        for f in self._face_pts:
            expect = 1 + len(self._face_chords[f]) + len(self._crossings_in_face[f])
            got = len(per_face_orbits.get(f, {None}))
            assert got == expect, f"face {f}: {got} sub-regions, expected {expect}"

    # -- gluing ----------------------------------------------------------------

    def _interval_bs(self, edge: int) -> list[tuple[tuple, tuple]]:
        """For each interval of an edge (between consecutive marked points,
        including the edge ends), the two directed forward boundary segments
        that realize it (one per face side)."""
        cx = self.cx
        pts = self._edge_points.get(edge, [])
        k = len(pts)
        sides = cx.edge_sides(edge)
        per_side = []
        for (f, si) in sides:
            d = cx.faces[f][si].direction
            pts_face = self._face_pts[f]
            m = len(pts_face)
            corner_rank = pts_face.index(("corner", si))
            # ranks of segments along the side in side order (k+1 segments)
            seg_ranks = [(corner_rank + t) % m for t in range(k + 1)]
            if d == 1:
                per_side.append([("b", f, r, 1) for r in seg_ranks])
            else:
                per_side.append([("b", f, r, 1) for r in reversed(seg_ranks)])
        s0, s1 = per_side
        return list(zip(s0, s1))

    def _glue(self) -> None:
        parent = list(range(len(self._orbits)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x: int, y: int) -> bool:
            rx, ry = find(x), find(y)
            if rx == ry:
                return False
            parent[rx] = ry
            return True

        self._partner: dict = {}
        gluings = 0
        gluing_pairs: list[tuple[int, int]] = []
        for edge in range(len(self.cx.edges)):
            for (e1, e2) in self._interval_bs(edge):
                o1, o2 = self._orbit_of[e1], self._orbit_of[e2]
                assert o1 not in self._exterior and o2 not in self._exterior
                self._partner[e1] = e2
                self._partner[e2] = e1
                union(o1, o2)
                gluings += 1
                gluing_pairs.append((o1, o2))

        groups: dict[int, list[int]] = {}
        for oid in range(len(self._orbits)):
            if oid in self._exterior:
                continue
            groups.setdefault(find(oid), []).append(oid)
        glue_count: dict[int, int] = {}
        for (o1, _o2) in gluing_pairs:
            glue_count[find(o1)] = glue_count.get(find(o1), 0) + 1

        # complex vertices lie in region interiors (curves avoid them); the
        # four corner sub-regions around a vertex glue into one region
        vertex_orbits: dict[int, list[int]] = {}
        for f, pts in self._face_pts.items():
            for r, p in enumerate(pts):
                if p[0] != "corner":
                    continue
                v = self.cx.side_tail(f, p[1])
                vertex_orbits.setdefault(v, []).append(self._orbit_of[("b", f, r, 1)])
        vertex_count: dict[int, int] = {}
        for v, oids in vertex_orbits.items():
            roots = {find(o) for o in oids}
            assert len(roots) == 1, f"vertex {v} corners split across regions"
            root = roots.pop()
            vertex_count[root] = vertex_count.get(root, 0) + 1

        self.regions: list[Region] = []
        self._region_of_orbit: dict[int, int] = {}
        for root, members in sorted(groups.items()):
            ridx = len(self.regions)
            for oid in members:
                self._region_of_orbit[oid] = ridx
            # chi of a surface piece built from disks glued along segments,
            # with the complex's own vertices interior to it
            chi = vertex_count.get(root, 0) + len(members) - glue_count.get(root, 0)
            corners = []
            for oid in members:
                for e in self._orbits[oid]:
                    node = self._arrival(e)
                    if node[0] == "x":
                        corners.append(self._crossing_by_key(node[1], node[2]))
            self.regions.append(Region(
                index=ridx, chi=chi, subregions=len(members),
                gluings=glue_count.get(root, 0),
                corner_count=len(corners), boundary=[], corners=corners))
        self._build_boundary_circles()
        # complement pieces satisfy sum(chi) = chi(surface) - chi(curve union),
        # and the union's chi is -(number of crossings)
        total_chi = sum(r.chi for r in self.regions)
        expect = 2 - 2 * self.cx.genus + len(self._crossing_recs)
        assert total_chi == expect, f"region chi sum {total_chi} != {expect}"

    def _crossing_key_index(self) -> dict:
        idx = {}
        for rec in self._crossing_recs:
            idx[(rec.face, ((rec.ca, rec.ka), (rec.cb, rec.kb)))] = rec
        return idx

    def _crossing_by_key(self, f: int, key) -> Crossing:
        if not hasattr(self, "_ckey_idx"):
            self._ckey_idx = self._crossing_key_index()
        return self._ckey_idx[(f, tuple(key))]

    def _build_boundary_circles(self) -> None:
        # successor walk over directed chord pieces, skipping glued segments
        succ_cache: dict = {}

        def orbit_next(e):
            oid, i = self._orbit_pos[e]
            cyc = self._orbits[oid]
            return cyc[(i + 1) % len(cyc)]

        def next_piece(e):
            cur = orbit_next(e)
            while cur[0] == "b":
                cur = orbit_next(self._partner[cur])
            return cur

        seen: set = set()
        for oid, cyc in enumerate(self._orbits):
            if oid in self._exterior:
                continue
            ridx = self._region_of_orbit[oid]
            for e in cyc:
                if e[0] != "c" or e in seen:
                    continue
                circle_elems = []
                cur = e
                while cur not in seen:
                    seen.add(cur)
                    circle_elems.append(cur)
                    cur = next_piece(cur)
                # compress into runs per curve
                runs: list = []
                for el in circle_elems:
                    _, f, (ci, k), t, d = el
                    if runs and runs[-1][1] == ci:
                        runs[-1][2].append((k, t, d, f))
                    else:
                        runs.append(["arc", ci, [(k, t, d, f)]])
                if len(runs) > 1 and runs[0][1] == runs[-1][1]:
                    runs[0][2] = runs[-1][2] + runs[0][2]
                    runs.pop()
                self.regions[ridx].boundary.append([tuple(r) for r in runs])

    # -- public queries -----------------------------------------------------

    def crossings(self, i: int, j: int) -> list[Crossing]:
        out = []
        for rec in self._crossing_recs:
            if (rec.ca, rec.cb) == (i, j):
                out.append(rec)
            elif (rec.ca, rec.cb) == (j, i):
                out.append(Crossing(rec.face, rec.cb, rec.kb, rec.fb,
                                    rec.ca, rec.ka, rec.fa, -rec.sign))
        return out

    def crossing_count(self, i: int, j: int) -> int:
        return len(self.crossings(i, j))

    def signed_count(self, i: int, j: int) -> int:
        return sum(c.sign for c in self.crossings(i, j))

    def total_crossings(self) -> int:
        return len(self._crossing_recs)

    def entering_side(self, c: Crossing) -> int:
        """1 if the first chord of the crossing starts on the second curve's
        left (in the face's coherent orientation), else 0."""
        f = c.face
        m = len(self._face_pts[f])
        nb = len(self.curves[c.cb].passages)
        ra = self._rank[(f, c.ca, c.ka)]
        rb0 = self._rank[(f, c.cb, c.kb)]
        rb1 = self._rank[(f, c.cb, (c.kb + 1) % nb)]
        return 1 if self._cyc_in(ra, rb1, rb0, m) else 0

    def find_bigon(self) -> "BigonMove | None":
        """An innermost bigon: a disk region with exactly two corners, at two
        DISTINCT crossings, whose boundary alternates arcs of two distinct
        curves.  (A disk whose boundary passes twice through one crossing is
        not removable - e.g. two curves meeting exactly once.)  Deterministic:
        lowest region index."""
        for reg in self.regions:
            if reg.chi != 1 or reg.corner_count != 2:
                continue
            if reg.corners[0] == reg.corners[1]:
                continue
            assert len(reg.boundary) == 1
            circle = reg.boundary[0]
            if len(circle) != 2:
                continue
            (_, ci, pieces_i), (_, cj, pieces_j) = circle
            if ci == cj:
                continue
            return BigonMove(region=reg, curve_a=ci, arc_a=pieces_i,
                             curve_b=cj, arc_b=pieces_j, arrangement=self)
        return None


@dataclass
class BigonMove:
    """A removable bigon: boundary arc_a on curve_a, arc_b on curve_b, the
    region lying to the LEFT of both walks (pieces listed in walk order as
    (chord, piece, direction, face))."""

    region: Region
    curve_a: int
    arc_a: list
    curve_b: int
    arc_b: list
    arrangement: "Arrangement"
