"""Composite traced-curve construction: subpaths, parallel offset tracks,
closed splices, and regular-neighbourhood frontiers.

These builders assemble new embedded curves out of pieces of curves that
already live in a common arrangement: a piece of one curve between two of its
crossings, a parallel copy of another curve pushed into the free gap beside
it, and turns between pieces made inside the face where the relevant crossing
happens.

Claims
------
- An offset copy is placed strictly inside the open gap between its anchor
  passage and the nearest other occupied position on the same edge (never
  past the midpoint towards a neighbour), so offset copies anchored to
  distinct passages can never collide, and an offset track picks up no edge
  crossings besides the ones its anchor run already has.
- `close_tracks` re-validates every assembled curve against the complex, so
  a malformed splice raises instead of producing a silently wrong curve.
- `ribbon_frontier` returns the full boundary of a regular neighbourhood of
  a one-complex (one-sided collars of whole curves plus attached arcs of a
  transversal curve); the walk must consume every collar span and both rails
  of every arc exactly once, and asserts that it does.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cells import CellComplex
from .moves import _positions_by_edge, _side_direction
from .trace import Arrangement, Crossing, TracedCurve, validate_curve

__all__ = [
    "ArcSpec",
    "NodeSpec",
    "Track",
    "close_tracks",
    "occupied_positions",
    "offset_track",
    "ribbon_frontier",
    "subpath_track",
]

LEFT = 1
RIGHT = 0


# -- Tracks ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Track:
    """An open run of passages whose two loose ends sit in known faces.

    `chords` lists the faces between consecutive passages (one fewer entry
    than `passages`); the faces before the first passage and after the last
    are `entry_face` and `exit_face`.  An empty track is a connector that
    stays inside one face, so it must have `entry_face == exit_face`.
    """

    entry_face: int
    passages: tuple[tuple[int, Fraction], ...]
    chords: tuple[int, ...]
    exit_face: int

    def __post_init__(self) -> None:
        if self.passages:
            assert len(self.chords) == len(self.passages) - 1
        else:
            assert not self.chords
            assert self.entry_face == self.exit_face

    def reversed(self) -> "Track":
        return Track(self.exit_face, tuple(reversed(self.passages)),
                     tuple(reversed(self.chords)), self.entry_face)


def close_tracks(cx: CellComplex, tracks: Sequence[Track]) -> TracedCurve | None:
    """Splice tracks into a closed curve, inserting one junction chord in the
    shared face between consecutive (cyclically adjacent) tracks.

    Returns None when the splice contains no passages at all, i.e. the whole
    assembly stays inside a single face and the result is a trivial circle.
    """
    assert tracks
    for cur, nxt in zip(tracks, [*tracks[1:], tracks[0]]):
        assert cur.exit_face == nxt.entry_face, (
            f"track junction face mismatch: {cur.exit_face} vs {nxt.entry_face}")
    live = [t for t in tracks if t.passages]
    if not live:
        return None
    passages: list[tuple[int, Fraction]] = []
    chords: list[int] = []
    for cur, nxt in zip(live, [*live[1:], live[0]]):
        passages.extend(cur.passages)
        chords.extend(cur.chords)
        chords.append(cur.exit_face)
    assert len(passages) >= 2, "splice crosses a single edge once; the complex has no face glued to itself"
    curve = TracedCurve(tuple(passages), tuple(chords))
    validate_curve(cx, curve)
    return curve


# -- Subpaths and offset copies -------------------------------------------------------


def _walk_range(n: int, k_from: int, f_from: Fraction, k_to: int,
                f_to: Fraction, direction: int) -> list[int]:
    """Passage indices visited walking from chord position (k_from, f_from)
    to (k_to, f_to); `direction=+1` walks along the curve's orientation,
    `-1` against it.  Equal positions mean a full wrap, not an empty walk."""
    assert direction in (+1, -1)
    out: list[int] = []
    if direction == +1:
        if k_from == k_to and f_to > f_from:
            return out
        q = (k_from + 1) % n
        out.append(q)
        while q != k_to:
            q = (q + 1) % n
            out.append(q)
    else:
        if k_from == k_to and f_to < f_from:
            return out
        q = k_from
        out.append(q)
        while q != (k_to + 1) % n:
            q = (q - 1) % n
            out.append(q)
    return out


def subpath_track(curve: TracedCurve, frm: tuple[int, Fraction],
                  to: tuple[int, Fraction], direction: int = +1) -> Track:
    """The piece of `curve` strictly between two of its chord positions
    (typically two crossing loci), traversed in the given direction."""
    n = len(curve.passages)
    k0, f0 = frm
    k1, f1 = to
    assert not (k0 == k1 and f0 == f1), "subpath endpoints coincide"
    idxs = _walk_range(n, k0, f0, k1, f1, direction)
    passages = tuple(curve.passages[q] for q in idxs)
    if direction == +1:
        chords = tuple(curve.chords[q] for q in idxs[:-1])
    else:
        chords = tuple(curve.chords[(q - 1) % n] for q in idxs[:-1])
    return Track(curve.chords[k0], passages, chords, curve.chords[k1])


def occupied_positions(curves: Sequence[TracedCurve]) -> dict[int, list[Fraction]]:
    """Sorted passage positions per edge over a family of curves."""
    return _positions_by_edge(curves)


def offset_track(cx: CellComplex, occupied: dict[int, list[Fraction]],
                 curve: TracedCurve, frm: tuple[int, Fraction],
                 to: tuple[int, Fraction], side: int,
                 level: Fraction = Fraction(1, 2), direction: int = +1) -> Track:
    """A parallel copy of the piece of `curve` between two chord positions,
    pushed to `side` (LEFT=1 keeps the copy on the curve's left).

    `level` in (0,1) grades how far into the free half-gap the copy sits, so
    several copies of the same anchor span can nest without touching.  Equal
    `frm`/`to` positions request a full wrap around the curve.
    """
    assert 0 < level < 1
    assert side in (LEFT, RIGHT)
    n = len(curve.passages)
    k0, f0 = frm
    k1, f1 = to
    idxs = _walk_range(n, k0, f0, k1, f1, direction)
    passages = []
    for q in idxs:
        e, y = curve.passages[q]
        d2 = _side_direction(cx, curve.chords[q], e)
        sigma = -d2 if side == LEFT else d2
        pos_list = occupied[e]
        i = pos_list.index(y)
        below = pos_list[i - 1] if i > 0 else Fraction(0)
        above = pos_list[i + 1] if i + 1 < len(pos_list) else Fraction(1)
        g = min(y - below, above - y) / 2
        passages.append((e, y + sigma * g * level))
    if direction == +1:
        chords = tuple(curve.chords[q] for q in idxs[:-1])
    else:
        chords = tuple(curve.chords[(q - 1) % n] for q in idxs[:-1])
    return Track(curve.chords[k0], tuple(passages), chords, curve.chords[k1])


# -- Regular-neighbourhood frontiers --------------------------------------------------


@dataclass(frozen=True)
class NodeSpec:
    """A one-sided collar: the whole of arrangement curve `curve_index`,
    thickened into the surface on `side` (LEFT=1 is the curve's left)."""

    curve_index: int
    side: int


@dataclass(frozen=True)
class ArcSpec:
    """An arc of arrangement curve `curve_index` running (forward) from
    crossing `start` to crossing `end`; both crossings are normalized with
    the arc curve first, and each names the node curve it lands on."""

    curve_index: int
    start: Crossing
    end: Crossing

    def __post_init__(self) -> None:
        assert self.start.ca == self.curve_index
        assert self.end.ca == self.curve_index


@dataclass
class _Foot:
    """One arc endpoint resting on a node."""

    node: int          # index into the node list
    arc: int           # index into the arc list
    at_start: bool     # True when this is the arc's start crossing
    cross: Crossing


@dataclass
class _Walker:
    """Port-following boundary walk over collar spans and arc rails."""

    cx: CellComplex
    arr: Arrangement
    occupied: dict[int, list[Fraction]]
    nodes: Sequence[NodeSpec]
    arcs: Sequence[ArcSpec]
    node_level: Fraction
    arc_level: Fraction
    feet_by_node: list[list[_Foot]] = field(default_factory=list)

    # Ports are ("span", node, foot_rank, end) with end 0 = the span's start
    # (departing the foot forward along the node curve) and end 1 = its end,
    # and ("rail", arc, rail_side, end) with end 0 at the arc's start foot.

    def build(self) -> tuple[list[list[TracedCurve | None]], list[list[tuple]]]:
        self.feet_by_node = [[] for _ in self.nodes]
        node_index = {(n.curve_index, n.side): i for i, n in enumerate(self.nodes)}
        assert len(node_index) == len(self.nodes), "duplicate collar"
        for ai, arc in enumerate(self.arcs):
            for at_start, cross in ((True, arc.start), (False, arc.end)):
                es = self.arr.entering_side(cross)
                side = (1 - es) if at_start else es
                key = (cross.cb, side)
                assert key in node_index, (
                    f"arc foot lands on missing collar {key}")
                self.feet_by_node[node_index[key]].append(
                    _Foot(node_index[key], ai, at_start, cross))
        for feet in self.feet_by_node:
            feet.sort(key=lambda f: (f.cross.kb, f.cross.fb))

        pending: set[tuple] = set()
        for ni, feet in enumerate(self.feet_by_node):
            for rank in range(len(feet)):
                pending.add(("span", ni, rank, 0))
        for ai in range(len(self.arcs)):
            for side in (LEFT, RIGHT):
                pending.add(("rail", ai, side, 0))

        circles: list[TracedCurve | None] = []
        labels: list[list[tuple]] = []
        budget = 2 * len(pending) + 2
        while pending:
            start = min(pending)
            walk_tracks: list[Track] = []
            walk_labels: list[tuple] = []
            port = start
            while True:
                budget -= 1
                assert budget >= 0, "frontier walk failed to close"
                pending.discard((port[0], port[1], port[2], 0))
                track, label, far = self._traverse(port)
                walk_tracks.append(track)
                walk_labels.append(label)
                port = self._jump(far)
                if port == start:
                    break
            circles.append(close_tracks(self.cx, walk_tracks))
            labels.append(walk_labels)
        # lone collars: nodes with no feet become plain offset circles
        for ni, feet in enumerate(self.feet_by_node):
            if not feet:
                circles.append(self._lone_collar(ni))
                labels.append([("collar", ni)])
        return circles, labels

    def _traverse(self, port: tuple) -> tuple[Track, tuple, tuple]:
        """Render the piece entered at `port`; return its track, a label,
        and the far-end port arrived at."""
        kind, idx, which, end = port
        if kind == "span":
            ni, rank = idx, which
            feet = self.feet_by_node[ni]
            node = self.nodes[ni]
            curve = self.arr.curves[node.curve_index]
            a = feet[rank].cross
            b = feet[(rank + 1) % len(feet)].cross
            frm, to = (a.kb, a.fb), (b.kb, b.fb)
            if end == 0:
                track = offset_track(self.cx, self.occupied, curve, frm, to,
                                     node.side, self.node_level, +1)
                return track, ("span", ni, rank), ("span", ni, rank, 1)
            track = offset_track(self.cx, self.occupied, curve, to, frm,
                                 node.side, self.node_level, -1)
            return track, ("span", ni, rank), ("span", ni, rank, 0)
        ai, rail_side = idx, which
        arc = self.arcs[ai]
        curve = self.arr.curves[arc.curve_index]
        frm = (arc.start.ka, arc.start.fa)
        to = (arc.end.ka, arc.end.fa)
        if end == 0:
            track = offset_track(self.cx, self.occupied, curve, frm, to,
                                 rail_side, self.arc_level, +1)
            return track, ("rail", ai, rail_side), ("rail", ai, rail_side, 1)
        track = offset_track(self.cx, self.occupied, curve, to, frm,
                             rail_side, self.arc_level, -1)
        return track, ("rail", ai, rail_side), ("rail", ai, rail_side, 0)

    def _jump(self, port: tuple) -> tuple:
        """Cross the junction at a foot: the collar strand approaching a foot
        from below pairs with the rail on the outgoing arc's right when the
        outgoing crossing sign is positive (and mirrored otherwise)."""
        kind, idx, which, end = port
        if kind == "span":
            ni, rank = idx, which
            feet = self.feet_by_node[ni]
            foot = feet[(rank + 1) % len(feet)] if end == 1 else feet[rank]
            below = (end == 1)  # arrived moving forward along the node
            rail_side = self._paired_rail_side(foot, below)
            rail_end = 0 if foot.at_start else 1
            return ("rail", foot.arc, rail_side, rail_end)
        ai, rail_side = idx, which
        arc = self.arcs[ai]
        foot = self._foot_of(ai, at_start=(end == 0))
        below = (self._paired_rail_side(foot, True) == rail_side)
        ni = foot.node
        feet = self.feet_by_node[ni]
        rank = feet.index(foot)
        if below:
            # continue backward along the node: enter the span ending here
            return ("span", ni, (rank - 1) % len(feet), 1)
        return ("span", ni, rank, 0)

    def _foot_of(self, ai: int, at_start: bool) -> _Foot:
        for feet in self.feet_by_node:
            for f in feet:
                if f.arc == ai and f.at_start == at_start:
                    return f
        raise AssertionError("foot not indexed")

    @staticmethod
    def _paired_rail_side(foot: _Foot, below: bool) -> int:
        # Pairing in the frame of the arc leaving the foot: the collar strand
        # approaching from below meets the outgoing arc's right rail when the
        # outgoing orientation sign is positive.  Expressed in the arc's
        # forward frame the two flips at the far end (reversed direction,
        # reversed side labels) cancel, leaving the stored sign alone.
        base = RIGHT if foot.cross.sign == +1 else LEFT
        return base if below else (LEFT + RIGHT - base)

    def _lone_collar(self, ni: int) -> TracedCurve | None:
        node = self.nodes[ni]
        curve = self.arr.curves[node.curve_index]
        track = offset_track(self.cx, self.occupied, curve,
                             (0, Fraction(1, 2)), (0, Fraction(1, 2)),
                             node.side, self.node_level, +1)
        closer = Track(track.exit_face, (), (), track.entry_face)
        return close_tracks(self.cx, [track, closer])


def ribbon_frontier(cx: CellComplex, arr: Arrangement, nodes: Sequence[NodeSpec],
                    arcs: Sequence[ArcSpec],
                    node_level: Fraction = Fraction(1, 2),
                    arc_level: Fraction = Fraction(1, 2),
                    ) -> list[tuple[TracedCurve | None, list[tuple]]]:
    """Frontier circles of a regular neighbourhood of the union of one-sided
    collars (`nodes`) and arcs of a transversal curve (`arcs`).

    Every arc endpoint must land on one of the listed collars (on its side).
    Returns one entry per frontier circle: the traced curve (None when the
    circle stays inside one face) and the ordered labels of the collar spans
    and arc rails it traverses.
    """
    occupied = occupied_positions(arr.curves)
    walker = _Walker(cx, arr, occupied, list(nodes), list(arcs),
                     node_level, arc_level)
    circles, labels = walker.build()
    return list(zip(circles, labels))
