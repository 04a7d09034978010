"""Tight positions and Whitehead graphs of a curve against a cut system.

The cut system's curves cut the surface into planar pieces; a transversal
curve decomposes into arcs between consecutive crossings.  Tight position
(no disk cobounded by an arc of the curve and an arc of a cut curve) is
exactly bigon-free position, so the engine's minimal-position search
produces it directly.

Arc classes: two arcs are parallel when they cobound a square region with
two opposite sides on the curve and the other two on cut curves; parallelism
classes are the transitive closure of that relation over the arrangement's
rectangle regions (between neighbouring parallel arcs the strip is a single
such rectangle, so the closure recovers the full class).  The Whitehead
graph has one vertex per boundary copy of each cut curve (its two sides) and
one weighted edge per arc class.

Supported claims:
  * per-cut-curve arc counts equal the geometric intersection numbers, and
    Whitehead vertex degrees match them;
  * every complement piece of the cut-open surface is planar (Euler count
    re-verified against the region decomposition on every tighten call);
  * cut_analysis implements exact component-count definitions (cut vertex:
    deleting the vertex and its open incident edges increases the component
    count; cut edge: deleting the edge AND both endpoints with all their
    incident edges increases it; waves: loop edges; bigons: pairs of
    distinct parallel non-loop arcs, including two copies inside one
    weighted class);
  * full type: tight, no degenerate pieces (no isolated vertex, graph
    components matching the cut-open pieces), no waves, no cut vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx

from ..surface import (
    Arrangement,
    CurveClass,
    TracedCurve,
    intersection_number,
    minimal_position,
    representative,
    surface_spec,
)
from .model import CutSystem

LEFT, RIGHT = 1, 0


def side_label(cut_index: int, side: int) -> str:
    return f"{cut_index}{'L' if side == LEFT else 'R'}"


# -- Graph types --------------------------------------------------------------------


@dataclass(frozen=True)
class WhiteheadEdge:
    u: str
    v: str
    weight: int

    @property
    def loop(self) -> bool:
        return self.u == self.v

    def endpoints(self) -> frozenset[str]:
        return frozenset((self.u, self.v))


@dataclass(frozen=True)
class WhiteheadGraph:
    """Weighted multigraph of arc classes; constructible abstractly, so the
    analysis functions can be exercised on synthetic graphs."""

    vertices: tuple[str, ...]
    edges: tuple[WhiteheadEdge, ...]

    def __post_init__(self):
        assert len(set(self.vertices)) == len(self.vertices)
        for e in self.edges:
            assert e.u in self.vertices and e.v in self.vertices
            assert e.weight >= 1

    def degree(self, v: str) -> int:
        return sum(e.weight * (2 if e.loop else 1)
                   for e in self.edges if v in (e.u, e.v))

    def to_json_dict(self) -> dict:
        return {"vertices": list(self.vertices),
                "edges": [{"u": e.u, "v": e.v, "weight": e.weight,
                           "loop": e.loop} for e in self.edges]}


def whitehead_graph_from_json(data: dict) -> WhiteheadGraph:
    vertices = tuple(str(v) for v in data["vertices"])
    edges = []
    for e in data["edges"]:
        edge = WhiteheadEdge(str(e["u"]), str(e["v"]), int(e["weight"]))
        if bool(e.get("loop", edge.loop)) != edge.loop:
            raise ValueError("loop flag inconsistent with endpoints")
        edges.append(edge)
    return WhiteheadGraph(vertices, tuple(edges))


# -- Tight position ----------------------------------------------------------------


@dataclass(frozen=True)
class ArcRecord:
    """One arc of the curve in the cut-open surface: endpoints as
    (cut index, side) boundary copies and the parallelism class id."""

    index: int
    start: tuple[int, int]
    end: tuple[int, int]
    class_id: int


@dataclass(frozen=True)
class TightPosition:
    """Bigon-free position of a curve against a cut system, with the arc
    decomposition and the region bookkeeping downstream passes reuse."""

    curve: CurveClass
    system: CutSystem
    arcs: tuple[ArcRecord, ...]
    vertex_sides: tuple[tuple[int, int], ...]     # (cut index, side) per vertex
    vertex_component: tuple[int, ...]             # cut-open piece per vertex
    component_count: int
    arrangement: Arrangement = field(repr=False, compare=False)
    curves: tuple[TracedCurve, ...] = field(repr=False, compare=False)

    @property
    def vertex_labels(self) -> tuple[str, ...]:
        return tuple(side_label(i, s) for i, s in self.vertex_sides)

    @cached_property
    def crossings_along_curve(self) -> tuple:
        """All crossings with the cut curves in order along the curve; arc k
        runs from crossing k to crossing k+1 (cyclically)."""
        out = []
        for j in range(1, len(self.system) + 1):
            out.extend(self.arrangement.crossings(0, j))
        out.sort(key=lambda c: (c.ka, c.fa))
        return tuple(out)

    def feet_along_cut(self, cut_index: int) -> list:
        """Crossings on the given cut curve in order along it."""
        return sorted(self.arrangement.crossings(0, 1 + cut_index),
                      key=lambda c: (c.kb, c.fb))


def tighten(a: CurveClass, system: CutSystem) -> TightPosition:
    """Bigon-free (tight) position of the curve against the cut system, with
    arcs, parallelism classes, and cut-open piece bookkeeping."""
    spec = surface_spec(a.genus)
    cx = spec.cx
    reps = minimal_position(
        cx, [representative(a)] + [representative(c) for c in system.curves])
    arr = Arrangement(cx, reps)
    n_cuts = len(system)
    for i in range(1, n_cuts + 1):
        for j in range(i + 1, n_cuts + 1):
            assert arr.crossing_count(i, j) == 0, "cut curves must stay disjoint"
        assert arr.crossing_count(0, i) == \
            intersection_number(a, system.curves[i - 1]), \
            "tight position crossing count must match the intersection number"

    crossings = []
    for j in range(1, n_cuts + 1):
        crossings.extend(arr.crossings(0, j))
    crossings.sort(key=lambda c: (c.ka, c.fa))
    n_arcs = len(crossings)
    cross_rank = {(c.ka, c.fa): r for r, c in enumerate(crossings)}

    # piece (chord, slot) of curve 0 -> containing arc
    per_chord: dict[int, list] = {}
    for c in crossings:
        per_chord.setdefault(c.ka, []).append(c)
    for lst in per_chord.values():
        lst.sort(key=lambda c: c.fa)

    def arc_of_piece(k: int, t: int) -> int:
        lst = per_chord.get(k, [])
        if t > 0:
            return cross_rank[(lst[t - 1].ka, lst[t - 1].fa)]
        prev = None
        for c in reversed(crossings):
            if (c.ka, c.fa) < (k, 0):
                prev = c
                break
        if prev is None:
            prev = crossings[-1]
        return cross_rank[(prev.ka, prev.fa)]

    # cut-open pieces: regions merged across the curve's pieces
    parent = list(range(len(arr.regions)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        parent[find(x)] = find(y)

    sides_of_piece: dict[tuple[int, int], list[int]] = {}
    vertex_regions: dict[tuple[int, int], list[int]] = {}
    curve_pieces_in: dict[tuple[int, int], int] = {}
    for reg in arr.regions:
        for circle in reg.boundary:
            for run in circle:
                _, ci, pieces = run
                if ci == 0:
                    for (k, t, d, f) in pieces:
                        sides_of_piece.setdefault((k, t), []).append(reg.index)
                        curve_pieces_in[(k, t)] = reg.index
                else:
                    side = LEFT if pieces[0][2] == +1 else RIGHT
                    assert all((LEFT if d == +1 else RIGHT) == side
                               for (_, _, d, _) in pieces)
                    vertex_regions.setdefault((ci - 1, side),
                                              []).append(reg.index)
    for (k, t), regs in sides_of_piece.items():
        assert len(regs) == 2, "each curve piece must bound two region sides"
        union(regs[0], regs[1])

    comp_ids: dict[int, int] = {}
    for reg in arr.regions:
        comp_ids.setdefault(find(reg.index), len(comp_ids))
    component_count = len(comp_ids)

    vertex_sides = tuple((i, s) for i in range(n_cuts) for s in (LEFT, RIGHT))
    vertex_component = []
    for i, s in vertex_sides:
        regs = vertex_regions.get((i, s))
        assert regs, "every cut-curve side borders some region"
        comps = {comp_ids[find(r)] for r in regs}
        assert len(comps) == 1, "one cut-curve side cannot touch two pieces"
        vertex_component.append(comps.pop())

    # planarity audit: every cut-open piece has chi + boundary circles == 2
    # (chi of a piece = sum of its regions' chi minus one per glued arc;
    # gluing along a closed circle, the no-crossings case, costs nothing)
    chi_sum = [0] * component_count
    arcs_in = [0] * component_count
    for reg in arr.regions:
        chi_sum[comp_ids[find(reg.index)]] += reg.chi
    seen_arcs = set()
    for (k, t), reg_index in curve_pieces_in.items():
        if n_arcs == 0:
            continue
        arc = arc_of_piece(k, t)
        if arc not in seen_arcs:
            seen_arcs.add(arc)
            arcs_in[comp_ids[find(reg_index)]] += 1
    boundary_circles = [0] * component_count
    for comp in vertex_component:
        boundary_circles[comp] += 1
    for comp in range(component_count):
        chi = chi_sum[comp] - arcs_in[comp]
        assert chi + boundary_circles[comp] == 2, \
            f"cut-open piece {comp} is not planar"

    # arc records
    arcs = []
    for r, c in enumerate(crossings):
        start = (c.cb - 1, 1 - arr.entering_side(c))
        nxt = crossings[(r + 1) % n_arcs]
        end = (nxt.cb - 1, arr.entering_side(nxt))
        arcs.append((start, end))

    # parallelism: transitive closure over rectangle regions
    arc_parent = list(range(n_arcs))

    def afind(x: int) -> int:
        while arc_parent[x] != x:
            arc_parent[x] = arc_parent[arc_parent[x]]
            x = arc_parent[x]
        return x

    arc_piece_count = [0] * n_arcs
    for (k, t) in curve_pieces_in:
        if n_arcs:
            arc_piece_count[arc_of_piece(k, t)] += 1

    for reg in arr.regions:
        if reg.chi != 1 or reg.corner_count != 4 or len(reg.boundary) != 1:
            continue
        circle = reg.boundary[0]
        if len(circle) != 4:
            continue
        kinds = [0 if run[1] == 0 else 1 for run in circle]
        if sorted(kinds) != [0, 0, 1, 1] or kinds[0] == kinds[1]:
            continue
        run_arcs = []
        ok = True
        for run in circle:
            _, ci, pieces = run
            if ci != 0:
                continue
            ids = {arc_of_piece(k, t) for (k, t, d, f) in pieces}
            if len(ids) != 1:
                ok = False
                break
            arc = ids.pop()
            if len(pieces) != arc_piece_count[arc]:
                ok = False
                break
            run_arcs.append(arc)
        if ok and len(run_arcs) == 2:
            arc_parent[afind(run_arcs[0])] = afind(run_arcs[1])

    class_ids: dict[int, int] = {}
    records = []
    for r, (start, end) in enumerate(arcs):
        root = afind(r)
        if root not in class_ids:
            class_ids[root] = len(class_ids)
        records.append(ArcRecord(r, start, end, class_ids[root]))
    for r, rec in enumerate(records):
        mate = records[afind(r)]
        assert {rec.start, rec.end} == {mate.start, mate.end}, \
            "parallel arcs must join the same boundary copies"

    return TightPosition(
        curve=a, system=system, arcs=tuple(records),
        vertex_sides=vertex_sides, vertex_component=tuple(vertex_component),
        component_count=component_count, arrangement=arr, curves=tuple(reps))


# -- Whitehead graph ---------------------------------------------------------------


def whitehead_graph(t: TightPosition) -> WhiteheadGraph:
    vertices = t.vertex_labels
    by_class: dict[int, list[ArcRecord]] = {}
    for rec in t.arcs:
        by_class.setdefault(rec.class_id, []).append(rec)
    edges = []
    for cid in sorted(by_class):
        members = by_class[cid]
        u = side_label(*members[0].start)
        v = side_label(*members[0].end)
        if v < u:
            u, v = v, u
        edges.append(WhiteheadEdge(u, v, len(members)))
    graph = WhiteheadGraph(vertices, tuple(edges))
    for vi, (i, s) in enumerate(t.vertex_sides):
        want = intersection_number(t.curve, t.system.curves[i])
        assert graph.degree(vertices[vi]) == want, \
            "vertex degree must equal the intersection number"
    return graph


# -- Cut analysis ------------------------------------------------------------------


@dataclass(frozen=True)
class CutAnalysis:
    """Exact obstruction sets of a Whitehead graph; edge references are
    indices into graph.edges, bigons are index pairs (i <= j; i == j means
    two copies inside one weighted class)."""

    cut_vertices: tuple[str, ...]
    waves: tuple[int, ...]
    cut_edges: tuple[int, ...]
    bigons: tuple[tuple[int, int], ...]
    component_count: int


def _components(vertices, edges) -> int:
    graph = nx.Graph()
    graph.add_nodes_from(vertices)
    graph.add_edges_from((e.u, e.v) for e in edges)
    return nx.number_connected_components(graph) if vertices else 0


def cut_analysis(graph: WhiteheadGraph) -> CutAnalysis:
    base = _components(graph.vertices, graph.edges)

    cut_vertices = []
    for v in graph.vertices:
        rest_v = [u for u in graph.vertices if u != v]
        rest_e = [e for e in graph.edges if v not in (e.u, e.v)]
        if _components(rest_v, rest_e) > base:
            cut_vertices.append(v)

    waves = tuple(i for i, e in enumerate(graph.edges) if e.loop)

    cut_edges = []
    for i, e in enumerate(graph.edges):
        gone = {e.u, e.v}
        rest_v = [u for u in graph.vertices if u not in gone]
        rest_e = [f for f in graph.edges if not gone & {f.u, f.v}]
        if _components(rest_v, rest_e) > base:
            cut_edges.append(i)

    bigons = []
    for i, e in enumerate(graph.edges):
        if e.loop:
            continue
        if e.weight >= 2:
            bigons.append((i, i))
        for j in range(i + 1, len(graph.edges)):
            f = graph.edges[j]
            if not f.loop and f.endpoints() == e.endpoints():
                bigons.append((i, j))

    return CutAnalysis(tuple(cut_vertices), waves, tuple(cut_edges),
                       tuple(bigons), base)


# -- Full type ---------------------------------------------------------------------


@dataclass(frozen=True)
class FullTypeReport:
    verdict: bool
    graph: WhiteheadGraph
    obstruction: dict | None
    tight: TightPosition = field(repr=False, compare=False)
    analysis: CutAnalysis = field(repr=False, compare=False)


def is_full_type(a: CurveClass, system: CutSystem) -> FullTypeReport:
    """Tight + non-degenerate + no waves + no cut vertices.

    Degenerate: some boundary copy carries no arc ends, or the graph has
    more components than the cut-open surface (then the curve misses a piece
    or splits off from it; such curves cannot be of full type)."""
    t = tighten(a, system)
    graph = whitehead_graph(t)
    analysis = cut_analysis(graph)

    obstruction = None
    isolated = [v for v in graph.vertices if graph.degree(v) == 0]
    if isolated or analysis.component_count != t.component_count:
        obstruction = {"kind": "degenerate",
                       "isolated": isolated,
                       "graph_components": analysis.component_count,
                       "surface_pieces": t.component_count}
    elif analysis.waves:
        e = graph.edges[analysis.waves[0]]
        obstruction = {"kind": "wave", "vertex": e.u,
                       "edge": analysis.waves[0]}
    elif analysis.cut_vertices:
        obstruction = {"kind": "cut-vertex",
                       "vertex": analysis.cut_vertices[0]}
    return FullTypeReport(obstruction is None, graph, obstruction, t, analysis)
