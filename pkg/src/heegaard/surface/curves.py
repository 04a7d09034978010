"""Integer pants coordinates for simple closed curves on the doubled surface.

Fixed per genus:
  * the pants decomposition given by the doubled triangulation arcs: one pair
    of pants per doubled triangle (front + back hexagon glued along their
    seams), boundaries the doubled arcs ("pants curves");
  * a window on each pants curve: every transversal crossing of the curve
    happens on the front arc copy, in its middle zone, at canonically spaced
    slots ordered from the lower-hole end to the higher-hole end;
  * a twist convention: the twist coordinate shifts the window attachments of
    the left-hand pants (the one traversing the front copy positively) along
    the pants-curve cycle, winding through the two seams that a parallel
    pushoff of the pants curve crosses.

Coordinates per pants curve e: a crossing count m_e >= 0 and a twist t_e in Z.
Admissibility: the three m's around every pants have even sum; m_e = 0 forces
t_e >= 0 (then t_e counts parallel copies of the pants curve itself).

Supported claims:
  * build_multicurve realizes admissible coordinates as an explicit embedded
    traced multicurve (bijectively, which the tests certify by exhaustive
    pairwise isotopy checks at small bounds);
  * measure_curve inverts the builder exactly: crossing counts by reduced
    intersection with the pants pushoffs, twists by a convex untwisting
    descent followed by a residual scan certified with an exact isotopy check;
  * Dehn twists along pants curves shear the twist coordinate by the crossing
    count; the handedness constant realizing the positive shear is frozen
    here and re-verified against the tracing engine in the tests.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .cells import CellComplex, doubled_surface
from .trace import Arrangement, EngineLimitError, TracedCurve, validate_curve
from .moves import (
    dehn_twist,
    edge_cycle_pushoff,
    filling_pair,
    geometric_intersection,
    algebraic_intersection,
    is_isotopic,
    is_nullhomotopic,
    is_separating,
    minimal_position,
)

# The engine handedness value whose twist along a pants curve adds +m_e to the
# twist coordinate (the package's positive / right-handed twist).  Calibrated
# against the builder once and frozen; tests re-derive it.
POSITIVE_TWIST_HANDEDNESS = -1


class CoordinateError(ValueError):
    """Coordinates violate the admissibility constraints."""


class MulticurveError(ValueError):
    """Coordinates describe a disconnected multicurve where one curve is needed."""


# -- Fixed per-genus scaffolding --------------------------------------------------


@dataclass(frozen=True)
class PantsInfo:
    """One pair of pants: a doubled triangle of the base decomposition."""

    index: int                                 # triangle index
    front: int                                 # front hexagon face id
    back: int                                  # back hexagon face id
    boundaries: tuple[tuple[int, int], ...]    # three pants-curve keys, hexagon order
    window_dirs: tuple[int, int, int]          # +1 iff hexagon ccw ascends edge positions
    seams: tuple[int, int, int]                # seam edge between boundary k and k+1


class SurfaceSpec:
    """A genus-g doubled surface with its pants decomposition, windows,
    twist-generator chain, and handlebody marking."""

    def __init__(self, genus: int):
        if genus < 2:
            raise ValueError("genus must be at least 2")
        self.genus = genus
        cx = doubled_surface(genus)
        self.cx = cx
        self.pants_curves: list[tuple[int, int]] = list(cx.triangulation_edges)
        self.index_of = {te: i for i, te in enumerate(self.pants_curves)}

        self.pants: list[PantsInfo] = []
        for ti in range(len(cx.triangles)):
            front, back = 2 * ti, 2 * ti + 1
            bounds, dirs, seams = [], [], []
            for k in range(3):
                side = cx.faces[front][2 * k]
                info = cx.edges[side.edge]
                assert info.kind == "arc" and info.key[1] == +1
                bounds.append(info.key[0])
                dirs.append(side.direction)
                seams.append(cx.faces[front][2 * k + 1].edge)
            self.pants.append(PantsInfo(ti, front, back, tuple(bounds),
                                        tuple(dirs), tuple(seams)))

        # reduced reference representatives
        self.pushoff = {te: edge_cycle_pushoff(cx, cx.pants_curve_cycle(te))
                        for te in self.pants_curves}
        self.circle = {h: edge_cycle_pushoff(cx, cx.circle_seam_cycle(h))
                       for h in range(genus + 1)}
        # probe curve meeting each pants curve exactly once
        self.dual = {te: self.circle[te[0]] for te in self.pants_curves}

        # twist-generator chain c_1..c_{2g+1}: hole circles interleaved with
        # the consecutive-hole pants curves
        chain: list[tuple[str, object]] = [("circle", 0)]
        for k in range(1, genus + 1):
            chain.append(("pants", (k - 1, k)))
            chain.append(("circle", k))
        self.chain_keys = chain
        self.chain = [self.circle[key] if kind == "circle" else self.pushoff[key]
                      for kind, key in chain]

        # handlebody marking: every pants curve bounds a disk in the inner
        # handlebody; the consecutive-hole ones form the preferred cut system
        self.meridians = list(self.pants_curves)
        self.cut_system = [(k - 1, k) for k in range(1, genus + 1)]

        # window sides: for each pants curve, the pants seeing the front copy
        # positively (left) and negatively (right), with the local boundary slot
        self.window_sides: dict[tuple[int, int], dict[str, tuple[int, int]]] = {}
        for te in self.pants_curves:
            edge = cx.arc_edge(te, +1)
            sides = {}
            for fi, si in cx.edge_sides(edge):
                assert fi % 2 == 0, "front arc copies border front hexagons"
                tag = "L" if cx.faces[fi][si].direction == +1 else "R"
                sides[tag] = (fi // 2, si // 2)
            assert set(sides) == {"L", "R"}
            self.window_sides[te] = sides

        self._homology_setup()

    # -- homology ---------------------------------------------------------

    def _homology_setup(self) -> None:
        g = self.genus
        self.homology_basis = ([("circle", k) for k in range(1, g + 1)] +
                               [("pants", (k - 1, k)) for k in range(1, g + 1)])
        basis = [self.circle[k] for k in range(1, g + 1)] + \
                [self.pushoff[(k - 1, k)] for k in range(1, g + 1)]
        self._basis_curves = basis
        n = 2 * g
        J = [[algebraic_intersection(self.cx, basis[i], basis[j])
              for j in range(n)] for i in range(n)]
        self._pairing_matrix = J
        det = _int_det(J)
        assert abs(det) == 1, f"homology basis pairing must be unimodular, det={det}"

    def homology_of_traced(self, curve: TracedCurve) -> tuple[int, ...]:
        """Class of the curve in the fixed basis (defined up to overall sign,
        since curves are unoriented; the sign is the one induced by the traced
        representative's traversal)."""
        pair = [algebraic_intersection(self.cx, curve, b) for b in self._basis_curves]
        return tuple(_solve_int(self._pairing_matrix, pair))


@lru_cache(maxsize=None)
def surface_spec(genus: int) -> SurfaceSpec:
    return SurfaceSpec(genus)


def _int_det(mat: list[list[int]]) -> int:
    m = [[Fraction(x) for x in row] for row in mat]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for k in range(c, n):
                m[r][k] -= f * m[c][k]
    return int(det)


def _solve_int(mat: list[list[int]], rhs: list[int]) -> list[int]:
    """Solve mat^T . v = rhs exactly (pairings are against the second slot)."""
    n = len(mat)
    a = [[Fraction(mat[j][i]) for j in range(n)] + [Fraction(rhs[i])]
         for i in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c] / a[c][c]
                for k in range(c, n + 1):
                    a[r][k] -= f * a[c][k]
    out = []
    for i in range(n):
        v = a[i][n] / a[i][i]
        assert v.denominator == 1, "homology solve must be integral"
        out.append(int(v))
    return out


# -- Admissibility ---------------------------------------------------------------


def check_admissible(spec: SurfaceSpec, m: Sequence[int], t: Sequence[int]) -> None:
    n = len(spec.pants_curves)
    if len(m) != n or len(t) != n:
        raise CoordinateError(f"expected {n} coordinate pairs")
    for v in m:
        if v < 0:
            raise CoordinateError("crossing counts must be nonnegative")
    for mi, ti in zip(m, t):
        if mi == 0 and ti < 0:
            raise CoordinateError("twist must be nonnegative when the crossing "
                                  "count is zero (parallel-copy convention)")
    for P in spec.pants:
        total = sum(m[spec.index_of[te]] for te in P.boundaries)
        if total % 2:
            raise CoordinateError(
                f"odd crossing total {total} around pants {P.index}")


# -- Pants layouts -----------------------------------------------------------------


@dataclass
class _Piece:
    """A maximal curve piece: passages with internal chords, hanging in the
    entry/exit faces at its two ends."""

    passages: list[tuple[int, Fraction]]
    internal: list[int]
    entry_face: int
    exit_face: int

    def reversed(self) -> "_Piece":
        return _Piece(list(reversed(self.passages)), list(reversed(self.internal)),
                      self.exit_face, self.entry_face)


@dataclass
class _Arc:
    pants: int
    piece: _Piece
    ends: list[tuple[tuple[int, int], int]]  # (pants-curve key, ccw position), 2 entries


def _zone_positions(count: int, ascending: bool) -> list[Fraction]:
    """count distinct positions in the middle zone (1/4, 3/4) of an edge."""
    pts = [Fraction(1, 4) + Fraction(k + 1, 2 * (count + 1)) for k in range(count)]
    return pts if ascending else list(reversed(pts))


def _window_position(slot: int, m: int) -> Fraction:
    return Fraction(1, 4) + Fraction(slot + 1, 2 * (m + 1))


def _layout_pants(spec: SurfaceSpec, P: PantsInfo,
                  m_local: tuple[int, int, int]) -> tuple[list[_Arc], dict[int, list]]:
    """Arcs of the pants in standard position plus, per local boundary, the
    hexagon-ccw ordered list of (arc index, end index) attachments."""
    cx = spec.cx
    m1, m2, m3 = m_local
    if (m1 + m2 + m3) % 2:
        raise CoordinateError("odd crossing total")
    excess = None
    for k in range(3):
        if m_local[k] > m_local[(k + 1) % 3] + m_local[(k + 2) % 3]:
            excess = k
    arcs: list[_Arc] = []
    windows: dict[int, list] = {0: [], 1: [], 2: []}

    def pair_count(i: int, j: int) -> int:
        k = 3 - i - j
        if excess is None:
            return (m_local[i] + m_local[j] - m_local[k]) // 2
        if excess in (i, j):
            other = j if excess == i else i
            return m_local[other]
        return 0

    def add_diff_family(k: int) -> list[int]:
        """Arcs between boundary k and k+1, hugging the seam between them."""
        count = pair_count(k, (k + 1) % 3)
        ids = []
        for idx in range(count):
            arc = _Arc(P.index, _Piece([], [], P.front, P.front),
                       [(P.boundaries[k], -1), (P.boundaries[(k + 1) % 3], -1)])
            arcs.append(arc)
            ids.append(len(arcs) - 1)
        return ids

    fam = {k: add_diff_family(k) for k in range(3)}

    same_ids: list[int] = []
    if excess is not None:
        k = excess
        x = (m_local[k] - m_local[(k + 1) % 3] - m_local[(k + 2) % 3]) // 2
        s_out, s_in = P.seams[k], P.seams[(k + 1) % 3]
        # crossing positions on the seams: arc 0 is innermost (tightest around
        # the cut-off boundary), closest to that boundary's end of each seam
        out_near_head = _seam_end_is_head(cx, s_out, P.boundaries[(k + 1) % 3])
        in_near_head = _seam_end_is_head(cx, s_in, P.boundaries[(k + 1) % 3])
        out_pos = _zone_positions(x, ascending=not out_near_head)
        in_pos = _zone_positions(x, ascending=not in_near_head)
        for idx in range(x):
            piece = _Piece([(s_out, out_pos[idx]), (s_in, in_pos[idx])],
                           [P.back], P.front, P.front)
            arc = _Arc(P.index, piece,
                       [(P.boundaries[k], -1), (P.boundaries[k], -1)])
            arcs.append(arc)
            same_ids.append(len(arcs) - 1)

    # hexagon-ccw attachment order per window
    for k in range(3):
        order: list[tuple[int, int]] = []
        # start block: family (k-1, k), innermost (idx 0) first
        for aid in fam[(k - 1) % 3]:
            order.append((aid, 1))
        if excess == k:
            # returning ends of the same-boundary arcs, outermost first
            for aid in reversed(same_ids):
                order.append((aid, 1))
        # end block: family (k, k+1), innermost (idx 0) last
        for aid in reversed(fam[k]):
            order.append((aid, 0))
        if excess == k:
            # outgoing ends, innermost first, so each cup's two ends flank the
            # deeper cups' ends: the family is parallel (nested), and twisted
            # regluings can join the cups into one component
            for aid in same_ids:
                order.append((aid, 0))
        if len(order) != m_local[k]:
            raise AssertionError(
                f"window {k} of pants {P.index}: {len(order)} ends != {m_local[k]}")
        for pos, (aid, which) in enumerate(order):
            te, _ = arcs[aid].ends[which]
            assert te == P.boundaries[k]
            arcs[aid].ends[which] = (te, pos)
        windows[k] = order
    return arcs, windows


def _seam_end_is_head(cx: CellComplex, seam: int, te: tuple[int, int]) -> bool:
    """Whether the endpoint of the seam lying on the given doubled arc is the
    seam's head vertex."""
    info = cx.edges[seam]
    tails = {cx.edges[cx.arc_edge(te, +1)].tail, cx.edges[cx.arc_edge(te, +1)].head}
    if info.head in tails:
        return True
    assert info.tail in tails, "seam does not touch the arc"
    return False


# -- Annulus connectors ------------------------------------------------------------


def _connectors(spec: SurfaceSpec, te: tuple[int, int], m: int, t: int) -> list[_Piece]:
    """Winding pieces through the annulus of a pants curve, indexed by the
    left attachment order; piece a runs left attachment a -> window slot
    (a + t) mod m -> right attachment."""
    cx = spec.cx
    edge = cx.arc_edge(te, +1)
    pl, _ = spec.window_sides[te]["L"]
    pr, _ = spec.window_sides[te]["R"]
    f_left, b_left = 2 * pl, 2 * pl + 1
    f_right = 2 * pr
    v_tail, v_head = cx.edges[edge].tail, cx.edges[edge].head
    seam_head = cx.seam_edge(pl, te[1])   # left seam at the higher-hole vertex
    seam_tail = cx.seam_edge(pl, te[0])   # left seam at the lower-hole vertex

    out: list[_Piece] = []
    for a in range(m):
        cover = a + t
        c, w = cover % m, cover // m
        alpha = _window_position(a, m)
        beta = _window_position(c, m) + 2 * w
        passages: list[tuple[int, Fraction]] = []
        internal: list[int] = []
        step = 1 if beta > alpha else -1
        n = math.floor(alpha) + 1 if step == 1 else math.ceil(alpha) - 1
        prev_theta = alpha
        while (beta - n) * step > 0:
            h = Fraction(n - alpha, beta - alpha)
            seam = seam_head if n % 2 else seam_tail
            vertex = v_head if n % 2 else v_tail
            dist = (1 - h) / 4
            info = cx.edges[seam]
            if info.tail == vertex:
                pos = dist
            else:
                assert info.head == vertex
                pos = 1 - dist
            if passages:
                mid = Fraction(prev_theta + n, 2) % 2
                internal.append(f_left if 0 < mid < 1 else b_left)
            passages.append((seam, pos))
            prev_theta = n
            n += step
        if passages:
            mid = Fraction(prev_theta + beta, 2) % 2
            internal.append(f_left if 0 < mid < 1 else b_left)
        passages.append((edge, _window_position(c, m)))
        out.append(_Piece(passages, internal, f_left, f_right))
    return out


# -- Building multicurves ----------------------------------------------------------


def build_multicurve(spec: SurfaceSpec, m: Sequence[int],
                     t: Sequence[int]) -> list[TracedCurve]:
    """Explicit embedded traced multicurve realizing the coordinates."""
    check_admissible(spec, m, t)
    cx = spec.cx
    components: list[TracedCurve] = []

    # parallel copies of pants curves
    for te, idx in spec.index_of.items():
        if m[idx] == 0:
            for k in range(t[idx]):
                components.append(edge_cycle_pushoff(
                    cx, cx.pants_curve_cycle(te), side=+1,
                    offset=Fraction(1, 8 + 4 * k)))

    all_arcs: list[_Arc] = []
    attach: dict[tuple, tuple[int, int]] = {}  # (te, side, ccw pos) -> (arc id, end)
    for P in spec.pants:
        m_local = tuple(m[spec.index_of[te]] for te in P.boundaries)
        if sum(m_local) == 0:
            continue
        arcs, windows = _layout_pants(spec, P, m_local)
        base = len(all_arcs)
        all_arcs.extend(arcs)
        for k in range(3):
            te = P.boundaries[k]
            side = "L" if spec.window_sides[te]["L"] == (P.index, k) else "R"
            assert spec.window_sides[te][side] == (P.index, k)
            me = m[spec.index_of[te]]
            for ccw_pos, (aid, which) in enumerate(windows[k]):
                asc = ccw_pos if P.window_dirs[k] == +1 else me - 1 - ccw_pos
                attach[(te, side, asc)] = (base + aid, which)
                all_arcs[base + aid].ends[which] = (te, asc)

    conns: dict[tuple, _Piece] = {}
    left_of: dict[tuple, tuple] = {}   # (te, 'L', a) -> (te, 'R', c)
    for te, idx in spec.index_of.items():
        me, tw = m[idx], t[idx]
        if me == 0:
            continue
        for a, piece in enumerate(_connectors(spec, te, me, tw)):
            c = (a + tw) % me
            conns[(te, "L", a)] = piece
            left_of[(te, "L", a)] = (te, "R", c)
            left_of[(te, "R", c)] = (te, "L", a)

    # walk the strand graph into closed components
    visited: set[int] = set()
    for start in range(len(all_arcs)):
        if start in visited or not all_arcs[start].ends:
            continue
        pieces: list[_Piece] = []
        aid, enter_end = start, 0
        while True:
            visited.add(aid)
            arc = all_arcs[aid]
            piece = arc.piece if enter_end == 0 else arc.piece.reversed()
            pieces.append(piece)
            te, pos = arc.ends[1 - enter_end]
            side = "L" if spec.window_sides[te]["L"][0] == arc.pants else "R"
            key = (te, side, pos)
            if side == "L":
                pieces.append(conns[key])
            else:
                pieces.append(conns[left_of[key]].reversed())
            nxt_key = left_of[key]
            aid, enter_end = attach[nxt_key]
            if aid == start and enter_end == 0:
                break
            assert aid not in visited or (aid, enter_end) == (start, 0), \
                "strand walk revisited an arc without closing"
        components.append(_assemble(pieces))

    for comp in components:
        validate_curve(cx, comp)
    return components


def _assemble(pieces: list[_Piece]) -> TracedCurve:
    passages: list[tuple[int, Fraction]] = []
    chords: list[int] = []
    pend: int | None = None
    first_entry: int | None = None
    for piece in pieces:
        if pend is not None:
            assert piece.entry_face == pend, "junction faces disagree"
        if piece.passages:
            if first_entry is None:
                first_entry = piece.entry_face
            else:
                chords.append(piece.entry_face)
            assert len(piece.internal) == len(piece.passages) - 1
            for k, p in enumerate(piece.passages):
                passages.append(p)
                if k < len(piece.internal):
                    chords.append(piece.internal[k])
        else:
            assert piece.entry_face == piece.exit_face
        pend = piece.exit_face
    assert passages and pend is not None and first_entry is not None
    assert pend == first_entry, "component does not close up"
    chords.append(pend)
    return TracedCurve(tuple(passages), tuple(chords))


def curve_from_coords(spec: SurfaceSpec, m: Sequence[int],
                      t: Sequence[int]) -> TracedCurve:
    comps = build_multicurve(spec, m, t)
    if len(comps) != 1:
        raise MulticurveError(
            f"coordinates give {len(comps)} components, need exactly 1")
    return comps[0]


# -- Measurement (inverse of the builder) -------------------------------------------


def _twisted(spec: SurfaceSpec, curve: TracedCurve, te: tuple[int, int],
             n: int) -> TracedCurve:
    return dehn_twist(spec.cx, curve, spec.pushoff[te], n,
                      handedness=POSITIVE_TWIST_HANDEDNESS)


def _untwist_descent(spec: SurfaceSpec, curve: TracedCurve,
                     te: tuple[int, int]) -> tuple[TracedCurve, int]:
    """Minimize the probe intersection over twist powers along one pants curve
    (the count is convex in the power); returns the untwisted curve and the
    power applied."""
    probe = spec.dual[te]

    cache: dict[int, int] = {}

    def phi(n: int) -> int:
        if n not in cache:
            cache[n] = geometric_intersection(
                spec.cx, _twisted(spec, curve, te, n), probe)
        return cache[n]

    lo, hi = -1, 1
    while phi(lo) < phi(lo + 1):
        lo *= 2
    while phi(hi) < phi(hi - 1):
        hi *= 2
    while hi - lo > 2:
        m1 = lo + (hi - lo) // 3
        m2 = hi - (hi - lo) // 3
        if m1 == m2:
            m2 += 1
        if phi(m1) <= phi(m2):
            hi = m2
        else:
            lo = m1
    best = min(range(lo, hi + 1), key=lambda n: (phi(n), abs(n), n))
    return _twisted(spec, curve, te, best), best


def measure_curve(spec: SurfaceSpec, curve: TracedCurve,
                  ) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Exact coordinates of a traced simple closed curve."""
    cx = spec.cx
    n = len(spec.pants_curves)
    m = [geometric_intersection(cx, curve, spec.pushoff[te])
         for te in spec.pants_curves]

    # pants-curve copies
    if all(v == 0 for v in m):
        for te, idx in spec.index_of.items():
            if is_isotopic(cx, curve, spec.pushoff[te]):
                t = [0] * n
                t[idx] = 1
                return tuple(m), tuple(t)
        raise EngineLimitError("disjoint from all pants curves but parallel "
                               "to none; not an essential simple closed curve?")

    cur = curve
    applied = [0] * n
    for te, idx in spec.index_of.items():
        if m[idx] > 0:
            cur, power = _untwist_descent(spec, cur, te)
            applied[idx] = power

    live = [idx for idx in range(n) if m[idx] > 0]
    for radius in range(3):
        ranges = [sorted(range(-(m[idx] + 1 + radius), m[idx] + 2 + radius),
                         key=lambda v: (abs(v), v)) for idx in live]
        for combo in itertools.product(*ranges):
            t_res = [0] * n
            for idx, v in zip(live, combo):
                t_res[idx] = v
            try:
                cand = curve_from_coords(spec, m, t_res)
            except (CoordinateError, MulticurveError):
                continue
            if is_isotopic(cx, cur, cand):
                t = [t_res[idx] - applied[idx] * m[idx] for idx in range(n)]
                return tuple(m), tuple(t)
    raise EngineLimitError("twist residual scan exhausted")


# -- Canonical classes --------------------------------------------------------------


@dataclass(frozen=True, order=True)
class CurveClass:
    """Canonical isotopy class of an essential simple closed curve, keyed by
    its pants coordinates."""

    genus: int
    m: tuple[int, ...]
    t: tuple[int, ...]

    @property
    def spec(self) -> SurfaceSpec:
        return surface_spec(self.genus)

    def coordinates(self) -> dict:
        return {"genus": self.genus, "m": list(self.m), "t": list(self.t)}


@lru_cache(maxsize=None)
def _representative(cc: CurveClass) -> TracedCurve:
    return curve_from_coords(cc.spec, cc.m, cc.t)


def representative(cc: CurveClass) -> TracedCurve:
    return _representative(cc)


def canonicalize(spec: SurfaceSpec, m: Sequence[int], t: Sequence[int]) -> CurveClass:
    """Validate coordinates, normalize declared symmetries, certify the class
    is a single essential curve."""
    m = list(m)
    t = list(t)
    # parallel copies of a pants curve have no preferred winding direction
    for idx in range(len(m)):
        if m[idx] == 0:
            t[idx] = abs(t[idx])
    check_admissible(spec, m, t)
    comps = build_multicurve(spec, m, t)
    if len(comps) != 1:
        raise MulticurveError(
            f"coordinates give {len(comps)} components, need exactly 1")
    return CurveClass(spec.genus, tuple(m), tuple(t))


def class_of_traced(spec: SurfaceSpec, curve: TracedCurve) -> CurveClass:
    m, t = measure_curve(spec, curve)
    return CurveClass(spec.genus, m, t)


def pants_curve_class(spec: SurfaceSpec, te: tuple[int, int]) -> CurveClass:
    t = [0] * len(spec.pants_curves)
    t[spec.index_of[te]] = 1
    return CurveClass(spec.genus, (0,) * len(spec.pants_curves), tuple(t))


def chain_classes(spec: SurfaceSpec) -> list[CurveClass]:
    return [class_of_traced(spec, c) for c in spec.chain]


def curve_to_json_dict(a: CurveClass) -> dict:
    """Interchange form {genus, coords: [[m_e, t_e], ...]} shared by the
    command-line tools and certificate payloads."""
    return {"genus": a.genus,
            "coords": [[mi, ti] for mi, ti in zip(a.m, a.t)]}


def curve_from_json_dict(data: dict) -> CurveClass:
    """Parse and re-certify a curve from its interchange form (so loading a
    certificate alone re-runs the admissibility and single-component checks)."""
    try:
        genus = int(data["genus"])
        coords = list(data["coords"])
        m = [int(pair[0]) for pair in coords]
        t = [int(pair[1]) for pair in coords]
    except (KeyError, TypeError, IndexError) as exc:
        raise CoordinateError(f"malformed curve payload: {exc}") from exc
    spec = surface_spec(genus)
    if len(coords) != len(spec.pants_curves):
        raise CoordinateError(
            f"genus {genus} needs {len(spec.pants_curves)} coordinate pairs, "
            f"got {len(coords)}")
    return canonicalize(spec, m, t)


# -- Core operations ----------------------------------------------------------------


def _check_same_surface(a: CurveClass, b: CurveClass) -> SurfaceSpec:
    if a.genus != b.genus:
        raise ValueError("curves live on different surfaces")
    return a.spec


def intersection_number(a: CurveClass, b: CurveClass) -> int:
    spec = _check_same_surface(a, b)
    if a == b:
        return 0
    for cc, other in ((a, b), (b, a)):
        te = _as_pants_curve(spec, cc)
        if te is not None:
            return other.m[spec.index_of[te]]
    return geometric_intersection(spec.cx, representative(a), representative(b))


def _as_pants_curve(spec: SurfaceSpec, cc: CurveClass) -> tuple[int, int] | None:
    if any(cc.m):
        return None
    live = [i for i, v in enumerate(cc.t) if v]
    if len(live) == 1 and cc.t[live[0]] == 1:
        return spec.pants_curves[live[0]]
    return None


def are_disjoint(a: CurveClass, b: CurveClass) -> bool:
    return a != b and intersection_number(a, b) == 0


# -- Twist words --------------------------------------------------------------------


@dataclass(frozen=True)
class TwistWord:
    """Word in the chain twist generators; letters act right-to-left, each
    (index, sign) a signed twist about chain curve c_index (1-based)."""

    genus: int
    letters: tuple[tuple[int, int], ...]

    def __post_init__(self):
        n = 2 * self.genus + 1
        for idx, sign in self.letters:
            if not (1 <= idx <= n) or sign not in (-1, 1):
                raise ValueError(f"bad letter ({idx}, {sign})")

    def inverse(self) -> "TwistWord":
        return TwistWord(self.genus,
                         tuple((i, -s) for i, s in reversed(self.letters)))

    def __mul__(self, other: "TwistWord") -> "TwistWord":
        if self.genus != other.genus:
            raise ValueError("words on different surfaces")
        return TwistWord(self.genus, self.letters + other.letters)

    def power(self, n: int) -> "TwistWord":
        base = self if n >= 0 else self.inverse()
        return TwistWord(self.genus, base.letters * abs(n))

    @staticmethod
    def parse(genus: int, text: str) -> "TwistWord":
        """Tokens like 't3' (positive twist about c_3) / 'T3' (negative),
        whitespace separated."""
        letters = []
        for tok in text.split():
            if not tok or tok[0] not in "tT" or not tok[1:].isdigit():
                raise ValueError(f"bad twist token {tok!r}")
            letters.append((int(tok[1:]), +1 if tok[0] == "t" else -1))
        return TwistWord(genus, tuple(letters))

    def __str__(self) -> str:
        return " ".join(f"{'t' if s > 0 else 'T'}{i}" for i, s in self.letters)


def apply_word_traced(spec: SurfaceSpec, word: TwistWord,
                      curve: TracedCurve) -> TracedCurve:
    cur = curve
    for idx, sign in reversed(word.letters):
        gen = spec.chain[idx - 1]
        cur = dehn_twist(spec.cx, cur, gen, sign,
                         handedness=POSITIVE_TWIST_HANDEDNESS)
    return cur


def apply_word(word: TwistWord, a: CurveClass) -> CurveClass:
    spec = a.spec
    if word.genus != spec.genus:
        raise ValueError("word and curve on different surfaces")
    shear = _shear_fast_path(spec, word, a)
    if shear is not None:
        return shear
    out = apply_word_traced(spec, word, representative(a))
    return class_of_traced(spec, out)


def _shear_fast_path(spec: SurfaceSpec, word: TwistWord,
                     a: CurveClass) -> CurveClass | None:
    """Twists about pants curves shear coordinates directly: the twist entry
    gains (sign) * (crossing count) per letter, nothing else moves."""
    t = list(a.t)
    for idx, sign in word.letters:
        kind, key = spec.chain_keys[idx - 1]
        if kind != "pants":
            return None
        e = spec.index_of[key]
        if a.m[e] == 0:
            continue
        t[e] += sign * a.m[e]
    return CurveClass(spec.genus, a.m, tuple(t))


# -- Enumeration --------------------------------------------------------------------


@dataclass
class EnumerationResult:
    curves: list[CurveClass]
    truncated: bool


def enumerate_curves(spec: SurfaceSpec, bound: int,
                     cap: int | None = None) -> EnumerationResult:
    """All canonical classes with every |coordinate| <= bound, in deterministic
    lexicographic order of (m, t)."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    n = len(spec.pants_curves)
    out: list[CurveClass] = []
    for m in itertools.product(range(bound + 1), repeat=n):
        try:
            check_admissible(spec, m, [0] * n)
        except CoordinateError:
            continue
        t_ranges = [range(0, bound + 1) if m[i] == 0 else
                    range(-bound, bound + 1) for i in range(n)]
        for t in itertools.product(*t_ranges):
            comps = build_multicurve(spec, m, t)
            if len(comps) != 1:
                continue
            out.append(CurveClass(spec.genus, tuple(m), tuple(t)))
            if cap is not None and len(out) >= cap:
                return EnumerationResult(out, True)
    return EnumerationResult(out, False)


# -- Derived predicates ---------------------------------------------------------------


def is_filling_pair(a: CurveClass, b: CurveClass) -> bool:
    spec = _check_same_surface(a, b)
    if a == b or intersection_number(a, b) == 0:
        return False
    return filling_pair(spec.cx, representative(a), representative(b))


def homology_class(a: CurveClass) -> tuple[int, ...]:
    return a.spec.homology_of_traced(representative(a))


@dataclass
class GrowthReport:
    counts: list[int]
    growth_rate: float
    reducible_suspect: bool
    notes: str


def pa_growth_check(spec: SurfaceSpec, word: TwistWord, seed: CurveClass,
                    steps: int, min_rate: float = 1.05) -> GrowthReport:
    """Intersection growth i(w^n seed, seed): exponential growth is evidence
    of pseudo-Anosov behaviour, a zero or subexponential tail is flagged."""
    if steps < 3:
        raise ValueError("need at least 3 iterations")
    base = representative(seed)
    cur = base
    counts: list[int] = []
    for _ in range(steps):
        if not word.letters:
            counts.append(0)
            continue
        cur = apply_word_traced(spec, word, cur)
        counts.append(geometric_intersection(spec.cx, cur, base))
    suspect = not word.letters or any(c == 0 for c in counts)
    if counts[0] > 0 and counts[-1] > 0:
        rate = (counts[-1] / counts[0]) ** (1.0 / (steps - 1))
    else:
        rate = 0.0
    if rate < min_rate:
        suspect = True
    notes = "zero intersection in orbit" if any(c == 0 for c in counts) else (
        "subexponential growth" if rate < min_rate else "exponential growth")
    return GrowthReport(counts, rate, suspect, notes)
