"""Cell structure of the doubled planar surface.

The closed orientable surface of genus g is modeled as the double of a
planar surface P (a sphere with g+1 holes, indexed 0..g) across its
boundary.  Shrinking the holes to points, P is triangulated on the vertex
set {0..g}: the polygon cycle {i, i+1 mod g+1}, an inner fan of diagonals
(0, j) for j = 2..g-1, and an outer fan (1, j) for j = 3..g.  This gives
3g-3 triangulation edges and 2g-2 triangles, coherently oriented.

Doubling turns this into a cell complex on the closed surface:

- each triangulation edge e becomes an essential simple closed curve
  (its double), made of a front arc edge e+ and a back arc edge e-; the
  3g-3 doubled curves form a pants decomposition;
- each hole circle is subdivided by arc endpoints into seam edges shared
  by the front and back copies;
- each triangle becomes two hexagonal faces (front/back) whose sides
  alternate arc edges and seam edges.

Counts validated on construction: V = 6g-6, E = 12g-12 (half arcs, half
seams), F = 4g-4, Euler characteristic 2-2g; every edge is traversed
exactly once in each direction by the face boundaries (orientability) and
every vertex link is a single 4-corner cycle (the complex is a closed
surface, not a pinched one).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

__all__ = [
    "Side",
    "EdgeInfo",
    "CellComplex",
    "doubled_surface",
    "sphere_triangulation",
]


# -- Triangulation of the (g+1)-vertex sphere ---------------------------------


def sphere_triangulation(genus: int) -> list[tuple[int, int, int]]:
    """Coherently oriented triangle list on vertices 0..genus: every
    undirected edge occurs in exactly two triangles, once per direction."""
    if genus < 2:
        raise ValueError("genus must be >= 2")
    g = genus
    faces = [(0, j, j + 1) for j in range(1, g)]          # inner fan at 0
    faces += [(1, j + 1, j) for j in range(2, g)]         # outer fan at 1
    faces.append((1, 0, g))
    directed = [
        (t[k], t[(k + 1) % 3]) for t in faces for k in range(3)
    ]
    if len(set(directed)) != len(directed):
        raise AssertionError("triangulation is not coherently oriented")
    if {(b, a) for a, b in directed} != set(directed):
        raise AssertionError("triangulation is not closed")
    return faces


# -- Cell complex --------------------------------------------------------------


@dataclass(frozen=True)
class Side:
    """One directed side of a face polygon: the edge is traversed along its
    canonical orientation iff direction == +1."""

    edge: int
    direction: int


@dataclass(frozen=True)
class EdgeInfo:
    """kind is "arc" (front/back copy of a triangulation arc) or "seam"
    (segment of a hole circle).  tail/head are vertex ids in the canonical
    orientation.  key identifies the edge:

    - arc:  ((i, j), sign) with i < j the triangulation edge, sign = +1
      for the front copy, -1 for the back copy;
    - seam: (face_index, corner) for the triangle corner it truncates.
    """

    kind: str
    key: tuple
    tail: int
    head: int


class CellComplex:
    """Immutable navigation structure for the doubled surface."""

    def __init__(self, genus: int, triangles: Sequence[tuple[int, int, int]],
                 edges: Sequence[EdgeInfo], faces: Sequence[tuple[Side, ...]],
                 n_vertices: int, vertex_keys: Sequence[tuple]):
        self.genus = genus
        self.triangles = tuple(tuple(t) for t in triangles)
        self.edges = tuple(edges)
        self.faces = tuple(tuple(f) for f in faces)
        self.n_vertices = n_vertices
        self.vertex_keys = tuple(vertex_keys)
        self._edge_sides: dict[int, list[tuple[int, int]]] = {}
        for fi, sides in enumerate(self.faces):
            for si, side in enumerate(sides):
                self._edge_sides.setdefault(side.edge, []).append((fi, si))
        self._validate()

    # -- navigation ------------------------------------------------------

    def side_tail(self, fi: int, si: int) -> int:
        side = self.faces[fi][si]
        e = self.edges[side.edge]
        return e.tail if side.direction == 1 else e.head

    def side_head(self, fi: int, si: int) -> int:
        side = self.faces[fi][si]
        e = self.edges[side.edge]
        return e.head if side.direction == 1 else e.tail

    def edge_sides(self, edge: int) -> list[tuple[int, int]]:
        """The two (face, side-index) placements of an edge."""
        return list(self._edge_sides[edge])

    def other_side(self, edge: int, fi: int, si: int) -> tuple[int, int]:
        a, b = self._edge_sides[edge]
        return b if (fi, si) == a else a

    def arc_edge(self, te: tuple[int, int], sign: int) -> int:
        return self._arc_ids[(tuple(sorted(te)), sign)]

    def seam_edge(self, face_index: int, corner: int) -> int:
        return self._seam_ids[(face_index, corner)]

    @property
    def triangulation_edges(self) -> list[tuple[int, int]]:
        return list(self._te_list)

    def pants_curve_cycle(self, te: tuple[int, int]) -> list[Side]:
        """The doubled curve of a triangulation arc as a closed edge path:
        front copy forward, back copy backward."""
        return [Side(self.arc_edge(te, +1), +1), Side(self.arc_edge(te, -1), -1)]

    def circle_seam_cycle(self, hole: int) -> list[Side]:
        """The hole circle as a closed edge path of seams, in the rotation
        order of the triangle fan around the hole."""
        return list(self._circle_cycles[hole])

    def vertex_edge_cycle(self, v: int) -> list[tuple[int, int]]:
        """Directed edges out of v in rotation order, as (edge, direction)."""
        return [(e, d) for e, d, _ in self._vertex_cycles[v]]

    def vertex_corner_cycle(self, v: int) -> list[tuple[int, int, int]]:
        """Directed edges out of v in rotation order, as (edge, direction,
        face) where face is the one between this edge and the next."""
        return list(self._vertex_cycles[v])

    # -- validation -------------------------------------------------------

    def _validate(self) -> None:
        g = self.genus
        arcs = [e for e in self.edges if e.kind == "arc"]
        seams = [e for e in self.edges if e.kind == "seam"]
        assert self.n_vertices == 6 * g - 6
        assert len(arcs) == 6 * g - 6 and len(seams) == 6 * g - 6
        assert len(self.faces) == 4 * g - 4
        chi = self.n_vertices - len(self.edges) + len(self.faces)
        assert chi == 2 - 2 * g, f"Euler characteristic {chi} != {2 - 2 * g}"

        # face boundaries close up, and sides alternate arc / seam
        for fi, sides in enumerate(self.faces):
            assert len(sides) == 6
            for si in range(6):
                nxt = (si + 1) % 6
                assert self.side_head(fi, si) == self.side_tail(fi, nxt)
                k1 = self.edges[sides[si].edge].kind
                k2 = self.edges[sides[nxt].edge].kind
                assert k1 != k2, "hexagon sides must alternate arc/seam"

        # each edge appears in exactly two face sides, once per direction
        for eid in range(len(self.edges)):
            placements = self._edge_sides[eid]
            assert len(placements) == 2, f"edge {eid} has {len(placements)} sides"
            dirs = sorted(self.faces[fi][si].direction for fi, si in placements)
            assert dirs == [-1, 1], f"edge {eid} not traversed once per direction"

        # every vertex link is one cycle (closed surface, no pinching)
        corner_at: dict[int, list[tuple[int, int]]] = {}
        for fi, sides in enumerate(self.faces):
            for si in range(6):
                corner_at.setdefault(self.side_tail(fi, si), []).append((fi, si))
        for v, corners in corner_at.items():
            assert len(corners) == 4, f"vertex {v} has degree {len(corners)}"
            seen = set()
            fi, si = corners[0]
            while (fi, si) not in seen:
                seen.add((fi, si))
                # cross the side entering this corner to the neighboring face
                prev = (si - 1) % 6
                edge = self.faces[fi][prev].edge
                fi2, si2 = self.other_side(edge, fi, prev)
                fi, si = fi2, si2
            assert len(seen) == 4, f"vertex {v} link splits into cycles"


# -- Factory --------------------------------------------------------------------


def doubled_surface(genus: int) -> CellComplex:
    """Build the doubled-surface cell complex for the given genus."""
    triangles = sphere_triangulation(genus)
    te_set = sorted({tuple(sorted((t[k], t[(k + 1) % 3]))) for t in triangles
                     for k in range(3)})
    te_index = {te: i for i, te in enumerate(te_set)}

    # vertices: one per (triangulation edge, endpoint hole)
    vertex_keys: list[tuple] = []
    vid: dict[tuple, int] = {}
    for te in te_set:
        for hole in te:
            vid[(te, hole)] = len(vertex_keys)
            vertex_keys.append((te, hole))

    edges: list[EdgeInfo] = []
    arc_ids: dict[tuple, int] = {}
    for te in te_set:
        for sign in (+1, -1):
            arc_ids[(te, sign)] = len(edges)
            edges.append(EdgeInfo("arc", (te, sign), vid[(te, te[0])], vid[(te, te[1])]))

    # seams: one per triangle corner; canonical direction = traversal by the
    # front hexagon (arriving along the previous arc, leaving along the next)
    seam_ids: dict[tuple, int] = {}
    for fi, (a, b, c) in enumerate(triangles):
        for (prev_v, corner, next_v) in ((a, b, c), (b, c, a), (c, a, b)):
            te_in = tuple(sorted((prev_v, corner)))
            te_out = tuple(sorted((corner, next_v)))
            seam_ids[(fi, corner)] = len(edges)
            edges.append(EdgeInfo("seam", (fi, corner),
                                  vid[(te_in, corner)], vid[(te_out, corner)]))

    def arc_side(x: int, y: int, sign: int) -> Side:
        te = tuple(sorted((x, y)))
        return Side(arc_ids[(te, sign)], +1 if (x, y) == te else -1)

    faces: list[tuple[Side, ...]] = []
    for fi, (a, b, c) in enumerate(triangles):
        front = (
            arc_side(a, b, +1), Side(seam_ids[(fi, b)], +1),
            arc_side(b, c, +1), Side(seam_ids[(fi, c)], +1),
            arc_side(c, a, +1), Side(seam_ids[(fi, a)], +1),
        )
        # mirror copy: reversed traversal on back arcs and the same seams
        back = (
            arc_side(a, c, -1), Side(seam_ids[(fi, c)], -1),
            arc_side(c, b, -1), Side(seam_ids[(fi, b)], -1),
            arc_side(b, a, -1), Side(seam_ids[(fi, a)], -1),
        )
        faces.append(front)
        faces.append(back)

    cx = CellComplex(genus, triangles, edges, faces, len(vertex_keys), vertex_keys)
    cx._arc_ids = arc_ids
    cx._seam_ids = seam_ids
    cx._te_list = te_set
    cx._circle_cycles = _circle_cycles(cx, triangles, seam_ids, te_set)
    cx._vertex_cycles = _vertex_cycles(cx)
    _validate_circles(cx)
    return cx


def _rotation_at(triangles, hole: int) -> list[tuple[int, int, int]]:
    """Triangles containing the hole, in fan rotation order, each reported
    as (face_index, previous neighbor, next neighbor) around the corner."""
    at: dict[int, tuple[int, int]] = {}  # out-neighbor -> (face, third vertex)
    for fi, t in enumerate(triangles):
        for k in range(3):
            if t[k] == hole:
                x, y = t[(k + 1) % 3], t[(k + 2) % 3]
                at[x] = (fi, y)
    start = min(at)
    order = []
    cur = start
    while True:
        fi, nxt = at[cur]
        order.append((fi, cur, nxt))
        cur = nxt
        if cur == start:
            break
    if len(order) != len(at):
        raise AssertionError(f"fan around hole {hole} is not a single cycle")
    return order


def _circle_cycles(cx: CellComplex, triangles, seam_ids, te_set):
    cycles = {}
    for hole in range(cx.genus + 1):
        fan = _rotation_at(triangles, hole)
        # a corner seam of triangle (hole, x, y) runs from arc (y, hole) to
        # arc (hole, x), so canonical (+1) seams chain in reverse fan order
        cycle = [Side(seam_ids[(fi, hole)], +1) for fi, _, _ in reversed(fan)]
        cycles[hole] = cycle
    return cycles


def _validate_circles(cx: CellComplex) -> None:
    for hole in range(cx.genus + 1):
        cyc = cx.circle_seam_cycle(hole)
        for k, side in enumerate(cyc):
            e = cx.edges[side.edge]
            nxt = cx.edges[cyc[(k + 1) % len(cyc)].edge]
            head = e.head if side.direction == 1 else e.tail
            tail = nxt.tail if cyc[(k + 1) % len(cyc)].direction == 1 else nxt.head
            assert head == tail, f"hole {hole} seam cycle does not close"
    # every seam appears in exactly one circle
    seen = [s.edge for hole in range(cx.genus + 1) for s in cx.circle_seam_cycle(hole)]
    assert sorted(seen) == sorted(e for e, info in enumerate(cx.edges) if info.kind == "seam")


def _vertex_cycles(cx: CellComplex):
    """Directed edges out of each vertex in rotation order (from the corner
    walk used in validation), each with the face lying between it and the
    next rotation edge."""
    cycles: dict[int, list[tuple[int, int, int]]] = {}
    corner_at: dict[int, list[tuple[int, int]]] = {}
    for fi, sides in enumerate(cx.faces):
        for si in range(6):
            corner_at.setdefault(cx.side_tail(fi, si), []).append((fi, si))
    for v, corners in corner_at.items():
        out = []
        fi, si = min(corners)
        for _ in range(len(corners)):
            side = cx.faces[fi][si]
            # crossing side si-1 of fi lands on the neighbour face whose
            # recorded outgoing edge IS that crossed edge, so fi sits between
            # this rotation entry and the next one
            out.append((side.edge, side.direction, fi))
            prev = (si - 1) % 6
            fi, si = cx.other_side(cx.faces[fi][prev].edge, fi, prev)
        cycles[v] = out
    return cycles
