"""Isotopy moves and constructions on traced curves.

- separate_positions: deterministic tie-breaking so all tracked curves have
  distinct passage positions on every edge (a tangency can be resolved to
  either side; minimal position removes whichever crossings are inessential).
- tighten: removes empty edge-lenses (a chord returning to the same edge
  with nothing inside the cut-off disk), shrinking the passage list without
  changing any crossing counts.
- minimal_position: repeatedly removes innermost bigons found by exact
  region analysis of each curve pair.  Rerouting hugs the other curve's arc
  (new positions are inserted adjacent to it in the gap structure of ALL
  tracked curves), so crossings with third curves never increase and the
  total crossing count strictly drops: termination is guaranteed, and the
  final configuration realizes the geometric intersection number of every
  pair (bigon criterion).
- edge_cycle_pushoff: transverse parallel copy of a closed edge path of the
  complex, offset to a chosen side.
- dehn_twist: annulus shear along one curve.  Every strand of a through the
  annulus around b is replaced by a spiral with n full turns; spiral heights
  (s - s_c)/(nL) all share the same slope along b, so strands from distinct
  crossings never cross each other, and exact Fractions keep every copy in
  its own gap.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cells import CellComplex
from .trace import (
    Arrangement,
    BigonMove,
    Crossing,
    EngineLimitError,
    TracedCurve,
    validate_curve,
)

__all__ = [
    "separate_positions",
    "tighten",
    "minimal_position",
    "reduced_pair",
    "geometric_intersection",
    "algebraic_intersection",
    "is_nullhomotopic",
    "is_separating",
    "is_isotopic",
    "filling_pair",
    "complement_all_disks",
    "edge_cycle_pushoff",
    "dehn_twist",
]


# -- Position management ---------------------------------------------------------


def _positions_by_edge(curves: Iterable[TracedCurve]) -> dict[int, list[Fraction]]:
    by_edge: dict[int, list[Fraction]] = {}
    for c in curves:
        for (e, p) in c.passages:
            by_edge.setdefault(e, []).append(p)
    for lst in by_edge.values():
        lst.sort()
    return by_edge


def separate_positions(cx: CellComplex, curves: Sequence[TracedCurve]) -> list[TracedCurve]:
    """Resolve coincident passage positions across curves by respacing every
    edge's passages at their rank order (ties broken by curve index, so a
    tangency between two curves becomes a definite local perturbation).  Each
    curve's internal order on every edge is preserved exactly."""
    entries: dict[int, list[tuple[Fraction, int, int]]] = {}
    for ci, c in enumerate(curves):
        for pi, (e, p) in enumerate(c.passages):
            entries.setdefault(e, []).append((p, ci, pi))
    new_pos: dict[tuple[int, int], Fraction] = {}
    for e, items in entries.items():
        items.sort(key=lambda it: (it[0], it[1]))
        total = len(items)
        for rank, (_, ci, pi) in enumerate(items):
            new_pos[(ci, pi)] = Fraction(rank + 1, total + 1)
    out = []
    for ci, c in enumerate(curves):
        passages = tuple((e, new_pos[(ci, pi)])
                         for pi, (e, _) in enumerate(c.passages))
        out.append(TracedCurve(passages, c.chords))
    return out


def _gap_midpoint(y: Fraction, direction: int, positions: list[Fraction]) -> Fraction:
    """Midpoint of the gap next to y on the given side, against a sorted
    list of occupied positions on the edge."""
    if direction > 0:
        above = [q for q in positions if q > y]
        hi = min(above) if above else Fraction(1)
        return (y + hi) / 2
    below = [q for q in positions if q < y]
    lo = max(below) if below else Fraction(0)
    return (y + lo) / 2


# -- Tightening ------------------------------------------------------------------


def tighten(cx: CellComplex, curve: TracedCurve,
            context: Sequence[TracedCurve] = ()) -> TracedCurve:
    """Remove empty edge-lenses: consecutive passages through the same edge
    whose cut-off disk contains no tracked passage.  Pure isotopy; leaves
    all crossing counts with context curves unchanged."""
    while True:
        n = len(curve.passages)
        if n < 4:
            return curve
        occupied = _positions_by_edge([curve, *context])
        removed = False
        for k in range(n):
            e1, p1 = curve.passages[k]
            e2, p2 = curve.passages[(k + 1) % n]
            if e1 != e2:
                continue
            lo, hi = min(p1, p2), max(p1, p2)
            if any(lo < q < hi for q in occupied[e1]):
                continue
            f_outer = curve.chords[(k - 1) % n]
            assert curve.chords[(k + 1) % n] == f_outer, "lens neighbours disagree"
            keep = [i for i in range(n) if i not in (k, (k + 1) % n)]
            # the direct chord replacing the detour lives in the outer face,
            # which is exactly chords[k-1]; every kept passage therefore keeps
            # its own outgoing chord
            curve = TracedCurve(tuple(curve.passages[i] for i in keep),
                                tuple(curve.chords[i] for i in keep))
            removed = True
            break
        if not removed:
            return curve


# -- Bigon removal ---------------------------------------------------------------


def _run_info(curve: TracedCurve, pieces: list) -> dict:
    """Decode one boundary-circle run along a curve: constant walk direction,
    boundary passages (in the curve's own ascending orientation), interior
    transition passages with the face entered after each."""
    d = pieces[0][2]
    assert all(p[2] == d for p in pieces), "walk direction changes inside a run"
    n = len(curve.passages)
    interior = []  # (passage index, face entered after it, in walk order)
    for (k1, _, _, _), (k2, _, _, f2) in zip(pieces, pieces[1:]):
        if k2 == k1:
            continue
        pidx = (k1 + 1) % n if d == 1 else k1
        interior.append((pidx, f2))
    k0, kz = pieces[0][0], pieces[-1][0]
    first_face, last_face = pieces[0][3], pieces[-1][3]
    if d == 1:
        walk_pre, walk_post = k0, (kz + 1) % n          # passage before/after walk
    else:
        walk_pre, walk_post = (k0 + 1) % n, kz
    return {
        "dir": d, "walk_pre": walk_pre, "walk_post": walk_post,
        "interior": interior, "first_face": first_face, "last_face": last_face,
    }


def _remove_bigon(cx: CellComplex, curves: list[TracedCurve], move: BigonMove,
                  movable_idx: int, pair: tuple[int, int]) -> list[TracedCurve]:
    """Reroute the movable curve of the pair across the bigon, hugging the
    other curve's arc on the non-bigon side."""
    # map arrangement-local indices (0, 1) to global
    local_of = {pair[0]: 0, pair[1]: 1}
    if local_of[movable_idx] == move.curve_a:
        run_m, run_o = move.arc_a, move.arc_b
        other_idx = pair[1] if movable_idx == pair[0] else pair[0]
    else:
        run_m, run_o = move.arc_b, move.arc_a
        other_idx = pair[0] if movable_idx == pair[1] else pair[1]
    M = curves[movable_idx]
    O = curves[other_idx]
    mi = _run_info(M, run_m)
    oi = _run_info(O, run_o)

    occupied = _positions_by_edge(curves)
    # copies of O's interior passages, offset to the right of the O walk;
    # each new position immediately joins the occupancy structure so that
    # two copies never land in the same gap
    copies = []
    for (pidx, face_after) in oi["interior"]:
        e, y = O.passages[pidx]
        d2 = _side_direction(cx, face_after, e)
        new_pos = _gap_midpoint(y, d2, occupied[e])
        bisect.insort(occupied[e], new_pos)
        copies.append(((e, new_pos), pidx))
    # chord faces between consecutive copies, in O walk order
    between = []
    for (p1, f_after1), (p2, _) in zip(oi["interior"], oi["interior"][1:]):
        between.append(f_after1)

    # assemble the detour in M's ascending orientation
    if mi["dir"] == 1:
        a_begin, a_end = mi["walk_pre"], mi["walk_post"]
        det_passages = [c for c, _ in reversed(copies)]
        det_between = list(reversed(between))
        entry_face = mi["first_face"]
        exit_face = mi["last_face"]
    else:
        a_begin, a_end = mi["walk_post"], mi["walk_pre"]
        det_passages = [c for c, _ in copies]
        det_between = list(between)
        entry_face = mi["last_face"]
        exit_face = mi["first_face"]

    n = len(M.passages)
    if a_begin == a_end and not det_passages:
        raise EngineLimitError("degenerate bigon splice (curve too small)")
    if len(mi["interior"]) == n:
        # The bigon arc traverses EVERY passage of the movable curve, so both
        # corners sit on one chord and the kept part of M is a passage-free
        # fragment of that chord.  The index bookkeeping below cannot express
        # "drop all n passages" (mod-n arithmetic wraps it to "drop none"),
        # so splice the detour directly, closed up through the fragment.
        if not det_passages:
            raise EngineLimitError(
                "bigon removal would leave a passage-free curve")
        assert entry_face == exit_face, "full-wrap corners must share a face"
        new_passages = det_passages
        new_chords = det_between + [entry_face]
    else:
        kept = []
        i = a_end
        while True:
            kept.append(i)
            if i == a_begin:
                break
            i = (i + 1) % n
        new_passages = [M.passages[i] for i in kept] + det_passages
        new_chords = [M.chords[i] for i in kept[:-1]]
        if det_passages:
            new_chords.append(entry_face)
            new_chords.extend(det_between)
            new_chords.append(exit_face)
        else:
            assert entry_face == exit_face
            new_chords.append(entry_face)
    new_M = TracedCurve(tuple(new_passages), tuple(new_chords))
    validate_curve(cx, new_M)
    out = list(curves)
    out[movable_idx] = new_M
    return out


def _side_direction(cx: CellComplex, f: int, edge: int) -> int:
    for side in cx.faces[f]:
        if side.edge == edge:
            return side.direction
    raise ValueError(f"edge {edge} not on face {f}")


# -- Minimal position -------------------------------------------------------------


def minimal_position(cx: CellComplex, curves: Sequence[TracedCurve],
                     movable: set[int] | None = None,
                     pairs: Sequence[tuple[int, int]] | None = None,
                     ) -> list[TracedCurve]:
    """Drive every requested pair to minimal position by bigon removal.
    Only movable curves are rerouted (default: all).  Returns new curves."""
    cur = separate_positions(cx, list(curves))
    if movable is None:
        movable = set(range(len(cur)))
    cur = [tighten(cx, c, [x for j, x in enumerate(cur) if j != i])
           if i in movable else c for i, c in enumerate(cur)]
    if pairs is None:
        pairs = [(i, j) for i in range(len(cur)) for j in range(i + 1, len(cur))]
    pairs = [p for p in pairs if p[0] in movable or p[1] in movable]

    def pair_total() -> int:
        return sum(Arrangement(cx, [cur[i], cur[j]]).total_crossings()
                   for i, j in pairs)

    guard = pair_total()
    while True:
        progressed = False
        for (i, j) in pairs:
            while True:
                arr = Arrangement(cx, [cur[i], cur[j]])
                move = arr.find_bigon()
                if move is None:
                    break
                cand = [i, j] if i in movable else [j]
                if j not in movable:
                    cand = [i]
                m = min(c for c in cand)
                cur = _remove_bigon(cx, cur, move, m, (i, j))
                others = [x for t, x in enumerate(cur) if t != m]
                cur[m] = tighten(cx, cur[m], others)
                progressed = True
        if not progressed:
            break
        new_total = pair_total()
        assert new_total < guard, "bigon removal failed to reduce crossings"
        guard = new_total
    return cur


def reduced_pair(cx: CellComplex, a: TracedCurve, b: TracedCurve,
                 ) -> tuple[TracedCurve, TracedCurve, int]:
    a2, b2 = minimal_position(cx, [a, b])
    return a2, b2, Arrangement(cx, [a2, b2]).crossing_count(0, 1)


def geometric_intersection(cx: CellComplex, a: TracedCurve, b: TracedCurve) -> int:
    return reduced_pair(cx, a, b)[2]


def algebraic_intersection(cx: CellComplex, a: TracedCurve, b: TracedCurve) -> int:
    """Signed crossing sum in the complex's coherent orientation (isotopy
    invariant, so no reduction is needed)."""
    a2, b2 = separate_positions(cx, [a, b])
    return Arrangement(cx, [a2, b2]).signed_count(0, 1)


# -- Exact topological predicates --------------------------------------------------


def is_nullhomotopic(cx: CellComplex, a: TracedCurve) -> bool:
    """True iff the curve bounds a disk: some complementary region is a disk
    whose boundary is the whole curve exactly once."""
    a = tighten(cx, a)
    arr = Arrangement(cx, [a])
    for reg in arr.regions:
        if reg.chi != 1 or reg.corner_count != 0 or len(reg.boundary) != 1:
            continue
        if reg.circle_full_curve(reg.boundary[0], 0, len(a.chords)):
            return True
    return False


def is_separating(cx: CellComplex, a: TracedCurve) -> bool:
    arr = Arrangement(cx, [tighten(cx, a)])
    return len(arr.regions) == 2


def is_isotopic(cx: CellComplex, a: TracedCurve, b: TracedCurve) -> bool:
    """True iff the curves cobound an embedded annulus after reduction."""
    a2, b2, count = reduced_pair(cx, a, b)
    if count:
        return False
    arr = Arrangement(cx, [a2, b2])
    na, nb = len(a2.chords), len(b2.chords)
    for reg in arr.regions:
        if reg.chi != 0 or reg.corner_count != 0 or len(reg.boundary) != 2:
            continue
        c0, c1 = reg.boundary
        if ((reg.circle_full_curve(c0, 0, na) and reg.circle_full_curve(c1, 1, nb)) or
                (reg.circle_full_curve(c1, 0, na) and reg.circle_full_curve(c0, 1, nb))):
            return True
    return False


def complement_all_disks(cx: CellComplex, curves: Sequence[TracedCurve]) -> bool:
    """All complementary regions of the (already reduced) system are disks."""
    arr = Arrangement(cx, list(curves))
    return all(reg.chi == 1 for reg in arr.regions)


def filling_pair(cx: CellComplex, a: TracedCurve, b: TracedCurve) -> bool:
    a2, b2, _ = reduced_pair(cx, a, b)
    return complement_all_disks(cx, [a2, b2])


# -- Pushoffs of cell-edge cycles ---------------------------------------------------


def edge_cycle_pushoff(cx: CellComplex, sides: Sequence, side: int = +1,
                       offset: Fraction = Fraction(1, 8)) -> TracedCurve:
    """Transverse curve parallel to a closed edge path, pushed to one side.

    side=+1 keeps the path on the traveller's left (the pushoff runs through
    the faces that traverse each path edge in the path's direction); side=-1
    is the mirror.  At each vertex the pushoff crosses exactly the edges
    between the incoming and outgoing path edges on the chosen side, at
    position `offset` from the vertex.
    """
    m = len(sides)
    assert 0 < offset < Fraction(1, 2)

    def strip_face(s) -> int:
        want = s.direction if side == +1 else -s.direction
        for fi, si in cx.edge_sides(s.edge):
            if cx.faces[fi][si].direction == want:
                return fi
        raise AssertionError("edge side missing")

    def head_vertex(s) -> int:
        e = cx.edges[s.edge]
        return e.head if s.direction == 1 else e.tail

    passages: list[tuple[int, Fraction]] = []
    chords: list[int] = []
    for k in range(m):
        s_in, s_out = sides[k], sides[(k + 1) % m]
        v = head_vertex(s_in)
        rot = cx.vertex_corner_cycle(v)
        keys = [(e, d) for e, d, _ in rot]
        iR = keys.index((s_in.edge, -s_in.direction))
        iO = keys.index((s_out.edge, s_out.direction))
        f_start = strip_face(s_in)
        f_end = strip_face(s_out)
        nrot = len(rot)
        # walk the rotation from the incoming reversal towards the outgoing
        # edge on whichever side begins with the incoming strip face
        if rot[iR][2] == f_start:
            step = 1

            def face_after(j):
                return rot[j][2]
        else:
            assert rot[(iR - 1) % nrot][2] == f_start
            step = -1

            def face_after(j):
                return rot[(j - 1) % nrot][2]
        j = iR
        local: list[tuple[int, int]] = []  # (edge, direction-out-of-v)
        faces_between: list[int] = []
        while (j + step) % nrot != iO:
            j = (j + step) % nrot
            local.append((rot[j][0], rot[j][1]))
            faces_between.append(face_after(j))
        if local:
            assert faces_between[-1] == f_end, "corner walk does not reach the outgoing strip"
        else:
            assert f_start == f_end, "empty corner walk with mismatched strips"
        # chords: strip face of s_in before the first crossing, then the
        # faces between consecutive crossings (the last equals f_end)
        for t, (e, dout) in enumerate(local):
            pos = offset if dout == 1 else 1 - offset
            passages.append((e, pos))
            chords.append(faces_between[t])
        # close the corner: if nothing was crossed the strips just merge
    # chords[i] currently = face AFTER passage i within its corner; the face
    # BEFORE the first crossing of each corner is the strip face, which equals
    # the face after the previous corner's last crossing -- so the chord list
    # as built already connects consecutive passages cyclically.
    assert len(passages) >= 2, "pushoff crosses fewer than two edges"
    curve = TracedCurve(tuple(passages), tuple(chords))
    validate_curve(cx, curve)
    return curve


# -- Dehn twists --------------------------------------------------------------------


def dehn_twist(cx: CellComplex, a: TracedCurve, b: TracedCurve, n: int,
               handedness: int = +1,
               context: Sequence[TracedCurve] = ()) -> TracedCurve:
    """The image of a under the n-th power of the twist along b (annulus
    shear).  handedness fixes which shear direction is n > 0; the package
    calibrates it once against the homology action."""
    if n == 0:
        return a
    loops = abs(n)
    H = handedness if n > 0 else -handedness
    a2, b2 = minimal_position(cx, [a, b], movable={0})
    arr = Arrangement(cx, [a2, b2])
    cross = arr.crossings(0, 1)
    if not cross:
        return a2
    L = len(b2.passages)
    NL = loops * L

    # spiral heights: collect all t first to steer clear of the core (t=1/2)
    plans = []  # per crossing: (ka, fa, face, [(passage q, chord face, t), ...])
    for c in cross:
        s = arr.entering_side(c)  # 1 iff a's chord starts on b's left
        forward = (s == 0) == (H == +1)
        seq = []
        for mstep in range(NL):
            if forward:
                q = (c.kb + 1 + mstep) % L
                traveled = Fraction(mstep) + 1 - c.fb
                t = traveled / NL if s == 0 else 1 - traveled / NL
                chord_face = b2.chords[q] if mstep < NL - 1 else None
            else:
                q = (c.kb - mstep) % L
                traveled = Fraction(mstep) + c.fb
                t = traveled / NL if s == 0 else 1 - traveled / NL
                chord_face = b2.chords[(q - 1) % L] if mstep < NL - 1 else None
            seq.append((q, chord_face, t))
        plans.append((c.ka, c.fa, c.face, seq))

    all_t = [t for _, _, _, seq in plans for _, _, t in seq]
    half = Fraction(1, 2)
    if any(t == half for t in all_t):
        others = [abs(t - half) for t in all_t if t != half]
        t_min, t_max = min(all_t), max(all_t)
        room = min([t_min, 1 - t_max] + others)
        delta = room / 2
        plans = [(ka, fa, f, [(q, cf, t + delta) for q, cf, t in seq])
                 for ka, fa, f, seq in plans]

    # gap half-widths around each b passage, against every tracked position
    occupied = _positions_by_edge([a2, b2, *context])

    def copy_position(q: int, t: Fraction) -> tuple[int, Fraction]:
        e, y = b2.passages[q]
        d2 = _side_direction(cx, b2.chords[q], e)
        sigma = -d2  # +offset direction == b's left == t-axis
        pos_list = occupied[e]
        idx = pos_list.index(y)
        below = pos_list[idx - 1] if idx > 0 else Fraction(0)
        above = pos_list[idx + 1] if idx + 1 < len(pos_list) else Fraction(1)
        g = min(y - below, above - y) / 2
        return (e, y + sigma * g * (2 * t - 1))

    by_chord: dict[int, list] = {}
    for ka, fa, f, seq in plans:
        by_chord.setdefault(ka, []).append((fa, f, seq))
    for lst in by_chord.values():
        lst.sort(key=lambda x: x[0])

    na = len(a2.passages)
    new_passages: list[tuple[int, Fraction]] = []
    new_chords: list[int] = []
    for k in range(na):
        new_passages.append(a2.passages[k])
        fk = a2.chords[k]
        for (_, f, seq) in by_chord.get(k, ()):
            assert f == fk, "crossing face disagrees with the chord's face"
            new_chords.append(fk)  # chord segment reaching this spiral's entry
            for (q, chord_face, t) in seq:
                new_passages.append(copy_position(q, t))
                if chord_face is not None:
                    new_chords.append(chord_face)
        new_chords.append(fk)  # chord segment onwards to a's next passage
    result = TracedCurve(tuple(new_passages), tuple(new_chords))
    validate_curve(cx, result)
    return tighten(cx, result, [b2, *context])
