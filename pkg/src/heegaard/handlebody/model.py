"""Standard genus-g handlebody bounded by the doubled surface.

The inner handlebody is the one in which every pants curve of the fixed
decomposition bounds a disk.  Fixed data:

  * meridians: all 3g-3 pants curves (each bounds a disk; the full system
    cuts the handlebody into balls, one per pants piece);
  * the preferred cut system: the g consecutive-hole pants curves, whose
    disks cut the handlebody into a single ball;
  * the boundary word: crossings of a curve with the preferred cut system,
    read in order along the curve, as letters of the free group of rank g
    (the fundamental group of the handlebody).

Supported claims:
  * a simple closed curve bounds a disk in the handlebody if and only if its
    boundary word reduces (cyclically, freely) to the empty word: the word is
    the curve's class in the free fundamental group, and a null-homotopic
    simple closed curve on the boundary bounds an embedded disk;
  * the first-homology image of a curve in the handlebody is the hole-circle
    part of its surface homology class; disk-bounding curves have zero image;
  * a curve disjoint from the preferred cut system lies on the boundary of
    the cut-open ball and always bounds a disk; a curve disjoint from ALL
    meridians is boundary-parallel in a pants piece, hence isotopic to a
    meridian.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..surface import (
    Arrangement,
    CurveClass,
    SurfaceSpec,
    TracedCurve,
    homology_class,
    intersection_number,
    minimal_position,
    pants_curve_class,
    representative,
    surface_spec,
)

# -- Model -----------------------------------------------------------------------


class HandlebodyModel:
    """The standard handlebody of the given genus: meridian classes, the
    preferred cut system, and the induced first-homology quotient."""

    def __init__(self, genus: int):
        spec = surface_spec(genus)
        self.genus = genus
        self.spec: SurfaceSpec = spec
        self.meridian_keys: list[tuple[int, int]] = list(spec.meridians)
        self.meridians: list[CurveClass] = [
            pants_curve_class(spec, te) for te in self.meridian_keys]
        self.cut_keys: list[tuple[int, int]] = list(spec.cut_system)
        self.cut_classes: list[CurveClass] = [
            pants_curve_class(spec, te) for te in self.cut_keys]
        # positions of the cut curves inside the meridian list
        self.cut_positions: list[int] = [
            self.meridian_keys.index(te) for te in self.cut_keys]

    def __repr__(self) -> str:
        return f"HandlebodyModel(genus={self.genus})"

    # -- homology ----------------------------------------------------------

    def homology_image(self, a: CurveClass) -> tuple[int, ...]:
        """Image of the curve's class under H1(surface) -> H1(handlebody):
        the hole-circle coordinates (the meridian part dies)."""
        return tuple(homology_class(a)[: self.genus])

    def in_homology_kernel(self, a: CurveClass) -> bool:
        return all(v == 0 for v in self.homology_image(a))

    # -- boundary word -----------------------------------------------------

    def boundary_word(self, a: CurveClass) -> list[tuple[int, int]]:
        """Crossing letters (cut index, sign) with the preferred cut system,
        in order along the curve, from a minimal-position arrangement."""
        arr, _ = meridian_arrangement(self, a)
        return cut_word_letters(self, arr)

    def bounds_disk(self, a: CurveClass) -> bool:
        """Complete membership decision for the disk set (no certificate):
        the boundary word is trivial in the free group."""
        return not cyclic_reduce(self.boundary_word(a))


@lru_cache(maxsize=None)
def standard_model(genus: int) -> HandlebodyModel:
    return HandlebodyModel(genus)


# -- Arrangements and words --------------------------------------------------------


def meridian_arrangement(model: HandlebodyModel, a: CurveClass,
                         ) -> tuple[Arrangement, list[TracedCurve]]:
    """Minimal position of the curve against every meridian: curve 0 is the
    curve, curve 1+i the i-th meridian."""
    reps = minimal_position(
        model.spec.cx,
        [representative(a)] + [representative(c) for c in model.meridians])
    return Arrangement(model.spec.cx, reps), reps


def cut_word_letters(model: HandlebodyModel, arr: Arrangement,
                     curve: int = 0) -> list[tuple[int, int]]:
    """Letters (cut index, sign) read along the given arrangement curve."""
    letters = []
    for ci, pos in enumerate(model.cut_positions):
        for c in arr.crossings(curve, 1 + pos):
            letters.append((c.along(curve), ci, c.sign))
    letters.sort(key=lambda x: x[0])
    return [(ci, s) for _, ci, s in letters]


def cyclic_reduce(word: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Free reduction of the cyclic word (letters are (index, sign))."""
    out: list[tuple[int, int]] = []
    for let in word:
        if out and out[-1][0] == let[0] and out[-1][1] == -let[1]:
            out.pop()
        else:
            out.append(let)
    while len(out) >= 2 and out[0][0] == out[-1][0] and out[0][1] == -out[-1][1]:
        out.pop()
        out.pop(0)
    return out


# -- Cut systems -------------------------------------------------------------------


class CutSystemError(ValueError):
    """The curves do not form a cut system of the claimed kind."""


@dataclass(frozen=True)
class CutSystem:
    """Disjoint, nonparallel disk-boundary curves with a kind flag.

    minimal: g curves cutting the handlebody into one ball (complement of
    the curves in the surface connected); pants: 3g-3 curves (complement a
    union of 2g-2 pants pieces); intermediate: anything in between."""

    curves: tuple[CurveClass, ...]
    kind: str

    def __len__(self) -> int:
        return len(self.curves)


def validate_cut_system(model: HandlebodyModel, system: CutSystem) -> None:
    """Full invariant suite: size per kind, pairwise disjoint and distinct,
    every curve bounds a disk, complement pieces all planar with the piece
    count the kind demands."""
    g = model.genus
    curves = system.curves
    sizes = {"minimal": g, "pants": 3 * g - 3}
    if system.kind not in ("minimal", "intermediate", "pants"):
        raise CutSystemError(f"unknown kind {system.kind!r}")
    if system.kind in sizes and len(curves) != sizes[system.kind]:
        raise CutSystemError(
            f"{system.kind} system needs {sizes[system.kind]} curves, "
            f"got {len(curves)}")
    if not g <= len(curves) <= 3 * g - 3:
        raise CutSystemError(f"cut system size {len(curves)} out of range")
    for i, a in enumerate(curves):
        for b in curves[i + 1:]:
            if a == b:
                raise CutSystemError(f"parallel curves in system: {a}")
            if intersection_number(a, b) != 0:
                raise CutSystemError(f"crossing curves in system: {a}, {b}")
        if not model.bounds_disk(a):
            raise CutSystemError(f"curve does not bound a disk: {a}")

    pieces = complement_pieces(model, curves)
    for chi, boundaries in pieces:
        if chi + boundaries != 2:
            raise CutSystemError(
                f"non-planar complement piece (chi={chi}, b={boundaries})")
        if chi == 0 and boundaries == 2:
            raise CutSystemError("annulus piece: parallel curves in system")
    want = {"minimal": 1, "pants": 2 * g - 2}.get(system.kind)
    if want is not None and len(pieces) != want:
        raise CutSystemError(
            f"{system.kind} system must cut the surface into {want} "
            f"piece(s), got {len(pieces)}")


def complement_pieces(model: HandlebodyModel,
                      curves: tuple[CurveClass, ...]) -> list[tuple[int, int]]:
    """(Euler characteristic, boundary-circle count) of each complement piece
    of the curve system in the surface."""
    cx = model.spec.cx
    reps = minimal_position(cx, [representative(c) for c in curves])
    arr = Arrangement(cx, reps)
    assert arr.total_crossings() == 0, "cut system curves must be disjoint"
    return [(reg.chi, len(reg.boundary)) for reg in arr.regions]


def minimal_cut_system(model: HandlebodyModel) -> CutSystem:
    system = CutSystem(tuple(model.cut_classes), "minimal")
    validate_cut_system(model, system)
    return system


def pants_cut_system(model: HandlebodyModel) -> CutSystem:
    system = CutSystem(tuple(model.meridians), "pants")
    validate_cut_system(model, system)
    return system
