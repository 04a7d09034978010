"""Tracing-engine facts: region Euler counts, exact predicates, pushoffs,
Dehn-twist laws, and intersection growth, all certified at the coordinate
level by the arrangement engine itself."""

from __future__ import annotations

from fractions import Fraction

import pytest

from heegaard.surface.cells import doubled_surface
from heegaard.surface.trace import Arrangement, TracedCurve, validate_curve
from heegaard.surface.moves import (
    algebraic_intersection,
    dehn_twist,
    edge_cycle_pushoff,
    filling_pair,
    geometric_intersection,
    is_isotopic,
    is_nullhomotopic,
    is_separating,
)


def chain_cycles(cx):
    """Alternating hole-circle / pants-curve cycles q_0, p_01, q_1, ..."""
    out = [("circle", 0, cx.circle_seam_cycle(0))]
    for k in range(1, cx.genus + 1):
        out.append(("pants", (k - 1, k), cx.pants_curve_cycle((k - 1, k))))
        out.append(("circle", k, cx.circle_seam_cycle(k)))
    return out


def chain_pushoffs(cx):
    return [edge_cycle_pushoff(cx, cyc) for _, _, cyc in chain_cycles(cx)]


# -- Region bookkeeping ------------------------------------------------------------


@pytest.mark.parametrize("genus", [2, 3])
def test_empty_arrangement_is_one_region_of_full_euler_characteristic(genus):
    cx = doubled_surface(genus)
    arr = Arrangement(cx, [])
    assert len(arr.regions) == 1
    assert arr.regions[0].chi == 2 - 2 * genus


@pytest.mark.parametrize("genus", [2, 3])
def test_single_pushoffs_cut_surface_without_losing_euler_characteristic(genus):
    cx = doubled_surface(genus)
    cycles = ([cx.pants_curve_cycle(te) for te in cx.triangulation_edges]
              + [cx.circle_seam_cycle(h) for h in range(genus + 1)])
    for cyc in cycles:
        for side in (+1, -1):
            c = edge_cycle_pushoff(cx, cyc, side=side)
            validate_curve(cx, c)
            arr = Arrangement(cx, [c])
            assert sum(r.chi for r in arr.regions) == 2 - 2 * genus
            assert not is_nullhomotopic(cx, c)
            assert not is_separating(cx, c)


@pytest.mark.parametrize("genus", [2, 3])
def test_pair_euler_characteristic_counts_crossings(genus):
    cx = doubled_surface(genus)
    curves = chain_pushoffs(cx)
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            arr = Arrangement(cx, [curves[i], curves[j]])
            assert (sum(r.chi for r in arr.regions)
                    == 2 - 2 * genus + arr.total_crossings())


def test_small_lens_curve_is_nullhomotopic_and_separating():
    cx = doubled_surface(2)
    faces = dict(cx.edge_sides(0))
    f1, f2 = sorted(faces.keys())
    lens = TracedCurve(((0, Fraction(1, 3)), (0, Fraction(2, 3))), (f1, f2))
    validate_curve(cx, lens)
    assert is_nullhomotopic(cx, lens)
    assert is_separating(cx, lens)


# -- Chain intersection pattern ------------------------------------------------------


@pytest.mark.parametrize("genus", [2, 3])
def test_chain_pattern_adjacent_one_distant_zero(genus):
    cx = doubled_surface(genus)
    curves = chain_pushoffs(cx)
    n = len(curves)
    for i in range(n):
        for j in range(i, n):
            expect = 1 if j == i + 1 else 0
            assert geometric_intersection(cx, curves[i], curves[j]) == expect


def test_signed_chain_pattern_is_coherently_positive():
    cx = doubled_surface(2)
    curves = chain_pushoffs(cx)
    for i in range(len(curves) - 1):
        assert algebraic_intersection(cx, curves[i], curves[i + 1]) == 1


@pytest.mark.parametrize("genus", [2, 3])
def test_two_sided_pushoffs_are_isotopic_and_distinct_cycles_are_not(genus):
    cx = doubled_surface(genus)
    cycles = [cx.circle_seam_cycle(h) for h in range(genus + 1)]
    for cyc in cycles:
        a = edge_cycle_pushoff(cx, cyc, side=+1)
        b = edge_cycle_pushoff(cx, cyc, side=-1)
        assert is_isotopic(cx, a, b)
    q0 = edge_cycle_pushoff(cx, cycles[0])
    q1 = edge_cycle_pushoff(cx, cycles[1])
    assert not is_isotopic(cx, q0, q1)


def test_chain_neighbours_do_not_fill_genus_two():
    cx = doubled_surface(2)
    curves = chain_pushoffs(cx)
    assert not filling_pair(cx, curves[0], curves[1])


# -- Dehn twist laws -----------------------------------------------------------------


def test_twist_intersection_formula_on_all_adjacent_chain_pairs():
    cx = doubled_surface(2)
    curves = chain_pushoffs(cx)
    pairs = [(i, i + 1) for i in range(len(curves) - 1)]
    pairs += [(j, i) for i, j in pairs]
    for i, j in pairs:
        a, b = curves[i], curves[j]
        iab = geometric_intersection(cx, a, b)
        for n in (1, 2, 3, 4, 5, -1, -3, -5):
            tw = dehn_twist(cx, a, b, n)
            assert geometric_intersection(cx, tw, a) == abs(n) * iab * iab


def test_twist_then_inverse_twist_is_identity():
    cx = doubled_surface(2)
    curves = chain_pushoffs(cx)
    for i, j in [(0, 1), (1, 2), (2, 3), (3, 4)]:
        a, b = curves[i], curves[j]
        for h in (+1, -1):
            tw = dehn_twist(cx, a, b, 1, handedness=h)
            back = dehn_twist(cx, tw, b, -1, handedness=h)
            assert is_isotopic(cx, a, back)


def test_handedness_flip_equals_exponent_flip():
    cx = doubled_surface(2)
    curves = chain_pushoffs(cx)
    a, b = curves[0], curves[1]
    for n in (1, 2):
        assert is_isotopic(cx,
                           dehn_twist(cx, a, b, n, handedness=+1),
                           dehn_twist(cx, a, b, -n, handedness=-1))


def test_twist_along_disjoint_curve_is_identity():
    cx = doubled_surface(2)
    curves = chain_pushoffs(cx)
    a, b = curves[0], curves[3]
    assert geometric_intersection(cx, a, b) == 0
    assert is_isotopic(cx, a, dehn_twist(cx, a, b, 3))


def test_alternating_word_growth_matches_frozen_orbit():
    # (T_b T_c^{-1})^n applied to b's neighbour: the intersection numbers with
    # the seed follow the Fibonacci-square pattern 1, 3, 8, 21, 55.
    cx = doubled_surface(2)
    curves = chain_pushoffs(cx)
    seed = curves[0]
    b, c = curves[1], curves[2]
    cur = seed
    counts = []
    for _ in range(5):
        cur = dehn_twist(cx, cur, b, 1)
        cur = dehn_twist(cx, cur, c, -1)
        counts.append(geometric_intersection(cx, cur, seed))
    assert counts == [1, 3, 8, 21, 55]
