"""Certified disk-set membership by wave surgery.

A curve bounds a disk in the handlebody exactly when its boundary word is
trivial (see the model module).  The certificate produced here is stronger
than the bare decision: a binary tree of wave surgeries.  At each internal
node the curve is split at two crossings with one meridian that are adjacent
along that meridian and cross it with opposite signs; the two resolutions
each take one of the curve's arcs and close it up with a parallel copy of
the crossing-free meridian span between the two points.  Leaves are curves
disjoint from every meridian (hence boundary-parallel in a pants piece, i.e.
meridians themselves) or inessential scraps.

Soundness of replay: if both resolutions bound disks, the node curve is the
frontier of a band joining the two disks along the span, so it bounds a disk
too; induction from the leaves certifies the root.  Completeness for true
members: a disk bounded by the curve meets the meridian disks in arcs, and
an outermost arc on a meridian disk yields a valid split whose resolutions
both bound, so the search (guided by the exact word criterion on the two
arcs' subwords) always finds a split while crossings remain; each split
removes exactly two crossings, so the tree is finite.

Certificates are plain JSON dictionaries; `verify_membership_certificate`
replays them from scratch using only the tracing engine and raises
`CertificateError` at the first discrepancy.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction

from ..surface import (
    Arrangement,
    CurveClass,
    TracedCurve,
    class_of_traced,
    curve_from_json_dict,
    curve_to_json_dict,
    intersection_number,
    is_nullhomotopic,
)
from ..surface.splice import close_tracks, occupied_positions, offset_track, \
    subpath_track
from .model import HandlebodyModel, cyclic_reduce, cut_word_letters, \
    meridian_arrangement

# -- Results and errors ------------------------------------------------------------


class CertificateError(ValueError):
    """A certificate failed to replay."""


@dataclass(frozen=True)
class MembershipResult:
    verdict: str                      # "yes" | "no" | "unknown"
    certificate: dict | None
    reason: str | None = None
    diagnostics: dict = field(default_factory=dict)


# -- Wave resolutions ---------------------------------------------------------------


def ranked_crossings(arr: Arrangement, meridian_pos: int) -> list:
    """Crossings of curve 0 with the given meridian, in order along the
    meridian."""
    return sorted(arr.crossings(0, 1 + meridian_pos),
                  key=lambda c: (c.kb, c.fb))


def wave_resolutions(arr: Arrangement, reps: list[TracedCurve],
                     meridian_pos: int, rank: int,
                     ) -> tuple[TracedCurve | None, TracedCurve | None] | None:
    """The two wave resolutions of curve 0 at the split (meridian, rank), or
    None when the pair crosses with equal signs (no wave there).

    The split pair is (P, Q) = crossings of rank and rank+1 (cyclically)
    along the meridian, so the meridian span between them is crossing-free;
    resolution one closes the curve's arc from P to Q with a parallel copy of
    the span run backward on the arc's side, resolution two closes the
    complementary arc with the span run forward on the other side."""
    ranked = ranked_crossings(arr, meridian_pos)
    n = len(ranked)
    if n < 2:
        return None
    P, Q = ranked[rank % n], ranked[(rank + 1) % n]
    cx = arr.cx
    side_p, side_q = arr.entering_side(P), arr.entering_side(Q)
    if side_p == side_q:
        return None
    a, m = reps[0], reps[1 + meridian_pos]
    occ = occupied_positions(reps)
    r1 = close_tracks(cx, [
        subpath_track(a, (P.ka, P.fa), (Q.ka, Q.fa), +1),
        offset_track(cx, occ, m, (Q.kb, Q.fb), (P.kb, P.fb),
                     side=side_q, level=Fraction(1, 2), direction=-1)])
    r2 = close_tracks(cx, [
        subpath_track(a, (Q.ka, Q.fa), (P.ka, P.fa), +1),
        offset_track(cx, occ, m, (P.kb, P.fb), (Q.kb, Q.fb),
                     side=side_p, level=Fraction(1, 2), direction=+1)])
    return r1, r2


def _letters_between(letters: list[tuple[tuple, int, int]],
                     frm: tuple, to: tuple) -> list[tuple[int, int]]:
    """Letters with positions strictly inside the cyclic interval (frm, to)."""
    positions = [pos for pos, _, _ in letters]
    lo, hi = bisect_right(positions, frm), bisect_left(positions, to)
    if frm < to:
        picked = letters[lo:hi]
    else:
        picked = letters[lo:] + letters[:hi]
    return [(ci, s) for _, ci, s in picked]


# -- Membership decision with certificate construction -----------------------------


class _BudgetExhausted(Exception):
    pass


class _TreeBuilder:
    def __init__(self, model: HandlebodyModel, max_nodes: int):
        self.model = model
        self.left = max_nodes
        self.nodes = 0

    def _charge(self) -> None:
        if self.left <= 0:
            raise _BudgetExhausted
        self.left -= 1
        self.nodes += 1

    def grow(self, cls: CurveClass) -> dict:
        self._charge()
        model = self.model
        arr, reps = meridian_arrangement(model, cls)
        if arr.total_crossings() == 0:
            assert cls in model.meridians, \
                "curve disjoint from all meridians must be boundary-parallel"
            return {"curve": curve_to_json_dict(cls), "leaf": "meridian",
                    "split": None}

        letters = []
        for ci, pos in enumerate(model.cut_positions):
            for c in arr.crossings(0, 1 + pos):
                letters.append(((c.ka, c.fa), ci, c.sign))
        letters.sort(key=lambda x: x[0])
        assert not cyclic_reduce([(ci, s) for _, ci, s in letters]), \
            "split children must stay boundary-trivial"

        for mi in range(len(model.meridians)):
            ranked = ranked_crossings(arr, mi)
            if len(ranked) < 2:
                continue
            for rank in range(len(ranked)):
                P, Q = ranked[rank], ranked[(rank + 1) % len(ranked)]
                if arr.entering_side(P) == arr.entering_side(Q):
                    continue
                w1 = _letters_between(letters, (P.ka, P.fa), (Q.ka, Q.fa))
                w2 = _letters_between(letters, (Q.ka, Q.fa), (P.ka, P.fa))
                if cyclic_reduce(w1) or cyclic_reduce(w2):
                    continue
                out = wave_resolutions(arr, reps, mi, rank)
                assert out is not None
                children = [self._child(traced) for traced in out]
                return {"curve": curve_to_json_dict(cls), "leaf": None,
                        "split": {"meridian": list(model.meridian_keys[mi]),
                                  "rank": rank,
                                  "first": children[0],
                                  "second": children[1]}}
        raise AssertionError(
            "no wave split found for a boundary-trivial crossing curve")

    def _child(self, traced: TracedCurve | None) -> dict:
        if traced is None or is_nullhomotopic(self.model.spec.cx, traced):
            self._charge()
            return {"curve": None, "leaf": "inessential", "split": None}
        return self.grow(class_of_traced(self.model.spec, traced))


def disk_membership(a: CurveClass, model: HandlebodyModel,
                    max_nodes: int = 400) -> MembershipResult:
    """Decide disk-set membership with a certificate.

    yes: a replayable wave-surgery tree ending in meridians; no: a nonzero
    first-homology image in the handlebody; unknown: the node budget ran out,
    or the curve is null-homologous in the handlebody yet has a nontrivial
    boundary word (the certificate formats cannot express that case)."""
    if a.genus != model.genus:
        raise ValueError("curve and model genus differ")
    image = model.homology_image(a)
    diagnostics: dict = {"homology_image": list(image)}
    if any(image):
        return MembershipResult(
            "no",
            {"kind": "disk-membership-no", "genus": model.genus,
             "curve": curve_to_json_dict(a), "homology_image": list(image)},
            diagnostics=diagnostics)
    word = model.boundary_word(a)
    diagnostics["word_length"] = len(word)
    if cyclic_reduce(word):
        return MembershipResult(
            "unknown", None,
            reason="boundary word is nontrivial but the homology image "
                   "vanishes", diagnostics=diagnostics)
    builder = _TreeBuilder(model, max_nodes)
    try:
        tree = builder.grow(a)
    except _BudgetExhausted:
        return MembershipResult(
            "unknown", None, reason="node budget exhausted",
            diagnostics=diagnostics | {"max_nodes": max_nodes})
    diagnostics["nodes"] = builder.nodes
    return MembershipResult(
        "yes",
        {"kind": "disk-membership-yes", "genus": model.genus,
         "curve": curve_to_json_dict(a), "tree": tree},
        diagnostics=diagnostics)


# -- Certificate replay -------------------------------------------------------------


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise CertificateError(message)


def _parse_curve(payload, genus: int) -> CurveClass:
    try:
        cls = curve_from_json_dict(payload)
    except Exception as exc:
        raise CertificateError(f"bad curve payload: {exc}") from exc
    _require(cls.genus == genus, "curve genus differs from certificate genus")
    return cls


def _replay_node(model: HandlebodyModel, node, cls: CurveClass) -> None:
    _require(isinstance(node, dict), "tree node must be an object")
    recorded = node.get("curve")
    _require(recorded is not None, "non-leaf node missing its curve")
    _require(_parse_curve(recorded, model.genus) == cls,
             "recorded node curve differs from the replayed curve")
    leaf = node.get("leaf")
    split = node.get("split")
    if leaf == "meridian":
        _require(split is None, "meridian leaf with a split")
        _require(cls in model.meridians, "meridian leaf is not a meridian")
        return
    _require(leaf is None, f"unknown leaf kind {leaf!r}")
    _require(isinstance(split, dict), "internal node missing its split")

    try:
        key = tuple(int(v) for v in split["meridian"])
        rank = int(split["rank"])
        first, second = split["first"], split["second"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateError(f"malformed split: {exc}") from exc
    _require(key in model.meridian_keys, f"unknown meridian {key}")
    mi = model.meridian_keys.index(key)

    arr, reps = meridian_arrangement(model, cls)
    ranked = ranked_crossings(arr, mi)
    _require(len(ranked) >= 2, "split meridian has fewer than two crossings")
    _require(0 <= rank < len(ranked), "split rank out of range")
    out = wave_resolutions(arr, reps, mi, rank)
    _require(out is not None, "split pair crosses with equal signs: no wave")

    total = arr.total_crossings()
    child_total = 0
    for child, traced in zip((first, second), out):
        _require(isinstance(child, dict), "tree node must be an object")
        if traced is None or is_nullhomotopic(model.spec.cx, traced):
            _require(child.get("leaf") == "inessential" and
                     child.get("curve") is None,
                     "resolution is inessential but the child is not an "
                     "inessential leaf")
            continue
        _require(child.get("leaf") != "inessential",
                 "child marked inessential but the resolution is a real curve")
        child_cls = class_of_traced(model.spec, traced)
        child_total += sum(intersection_number(child_cls, c)
                           for c in model.meridians)
        _replay_node(model, child, child_cls)
    _require(child_total <= total - 2,
             "wave split did not decrease the meridian crossing total")


def verify_membership_certificate(model: HandlebodyModel, cert) -> None:
    """Replay a membership certificate from scratch; raise CertificateError
    on any discrepancy."""
    _require(isinstance(cert, dict), "certificate must be an object")
    kind = cert.get("kind")
    _require(cert.get("genus") == model.genus,
             "certificate genus differs from the model")
    cls = _parse_curve(cert.get("curve"), model.genus)
    if kind == "disk-membership-no":
        image = model.homology_image(cls)
        _require(any(image), "homology image is zero: no-certificate invalid")
        recorded = cert.get("homology_image")
        _require(isinstance(recorded, list) and
                 [int(v) for v in recorded] == list(image),
                 "recorded homology image differs from the recomputed one")
        return
    if kind == "disk-membership-yes":
        _replay_node(model, cert.get("tree"), cls)
        return
    raise CertificateError(f"unknown certificate kind {kind!r}")
