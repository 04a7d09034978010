"""Pants-coordinate layer: builder/measurement round trips, canonical classes,
twist-word action, enumeration, homology, and growth diagnostics, each checked
against the tracing engine as the independent oracle."""

from __future__ import annotations

import itertools
import random

import pytest

from heegaard.surface.moves import (
    algebraic_intersection,
    dehn_twist,
    geometric_intersection,
    is_isotopic,
    is_separating,
)
from heegaard.surface.trace import validate_curve
from heegaard.surface.curves import (
    POSITIVE_TWIST_HANDEDNESS,
    CoordinateError,
    CurveClass,
    MulticurveError,
    TwistWord,
    apply_word,
    apply_word_traced,
    are_disjoint,
    build_multicurve,
    canonicalize,
    check_admissible,
    class_of_traced,
    curve_from_coords,
    enumerate_curves,
    homology_class,
    intersection_number,
    is_filling_pair,
    measure_curve,
    pa_growth_check,
    pants_curve_class,
    representative,
    surface_spec,
)


@pytest.fixture(scope="module")
def g2():
    return surface_spec(2)


def admissible_vectors(spec, bound, twist_bound=None):
    """Deterministic scan of coordinate vectors within the bounds."""
    tb = bound if twist_bound is None else twist_bound
    n = len(spec.pants_curves)
    for m in itertools.product(range(bound + 1), repeat=n):
        try:
            check_admissible(spec, m, [0] * n)
        except CoordinateError:
            continue
        ranges = [range(0, tb + 1) if m[i] == 0 else range(-tb, tb + 1)
                  for i in range(n)]
        for t in itertools.product(*ranges):
            yield list(m), list(t)


# -- Builder ------------------------------------------------------------------------


def test_pants_curve_coordinates_build_the_pants_curves(g2):
    n = len(g2.pants_curves)
    for te, idx in g2.index_of.items():
        t = [0] * n
        t[idx] = 1
        c = curve_from_coords(g2, [0] * n, t)
        assert is_isotopic(g2.cx, c, g2.pushoff[te])


def test_builder_crossing_counts_match_coordinates_everywhere(g2):
    # every admissible genus-2 vector with entries bounded by 2: the built
    # multicurve is embedded and already minimal against each pants curve
    checked = 0
    for m, t in admissible_vectors(g2, 2):
        comps = build_multicurve(g2, m, t)
        for comp in comps:
            validate_curve(g2.cx, comp)
        got = [sum(geometric_intersection(g2.cx, comp, g2.pushoff[te])
                   for comp in comps) for te in g2.pants_curves]
        assert got == m, (m, t, got)
        checked += 1
    assert checked == 1112


def test_cup_families_are_nested_so_twists_connect_them(g2):
    # curves crossing a single pants curve four times: the two cups on each
    # side form a parallel (nested) family, so an odd twist joins them into
    # one component while an even twist keeps two parallel copies
    n = len(g2.pants_curves)
    idx = g2.index_of[(1, 2)]
    m = [0] * n
    m[idx] = 4
    for k in range(-3, 4):
        t = [0] * n
        t[idx] = k
        comps = build_multicurve(g2, m, t)
        assert len(comps) == (1 if k % 2 else 2), (k, len(comps))

    # frozen witness: the image of the pants curve under a positive twist
    # about a clasp-like curve crossing it twice measures to that family
    b = [0] * n
    b[idx] = 2
    clasp = curve_from_coords(g2, b, [0] * n)
    img = dehn_twist(g2.cx, g2.pushoff[(1, 2)], clasp, 1,
                     handedness=POSITIVE_TWIST_HANDEDNESS)
    got_m, got_t = measure_curve(g2, img)
    want_t = [0] * n
    want_t[idx] = -1
    assert list(got_m) == m and list(got_t) == want_t


def test_hole_circles_measure_to_incidence_coordinates(g2):
    for hole in range(3):
        m, t = measure_curve(g2, g2.circle[hole])
        assert list(m) == [1 if hole in te else 0 for te in g2.pants_curves]
        assert all(v == 0 for v in t)


def test_measurement_inverts_builder_including_large_twists(g2):
    corpus = [([1, 1, 0], [3, 0, 0]), ([2, 0, 2], [5, 0, -3]),
              ([1, 1, 0], [0, 0, 0]), ([0, 2, 2], [0, -4, 1]),
              ([2, 2, 2], [1, 1, 1]), ([1, 1, 2], [-2, 1, 3])]
    hit = 0
    for m, t in corpus:
        try:
            c = curve_from_coords(g2, m, t)
        except MulticurveError:
            continue
        got_m, got_t = measure_curve(g2, c)
        assert (list(got_m), list(got_t)) == (m, t)
        hit += 1
    assert hit >= 4


def test_twist_about_pants_curve_shears_twist_coordinate(g2):
    samples = [([1, 1, 0], [0, 0, 0]), ([1, 1, 2], [0, 1, -1]),
               ([2, 2, 2], [1, 1, 1])]
    for m, t in samples:
        try:
            base = curve_from_coords(g2, m, t)
        except MulticurveError:
            continue
        for te, idx in g2.index_of.items():
            if m[idx] == 0:
                continue
            for n in (1, -2):
                tw = dehn_twist(g2.cx, base, g2.pushoff[te], n,
                                handedness=POSITIVE_TWIST_HANDEDNESS)
                t2 = list(t)
                t2[idx] += n * m[idx]
                assert is_isotopic(g2.cx, tw, curve_from_coords(g2, m, t2))


# -- Enumeration and canonical classes -------------------------------------------------


def test_enumeration_bound_one_matches_brute_force_and_is_injective(g2):
    result = enumerate_curves(g2, 1)
    assert not result.truncated
    # frozen census of connected classes with all coordinates bounded by 1
    assert len(result.curves) == 30
    # independent admissibility scan agrees on the candidate pool
    brute = [(m, t) for m, t in admissible_vectors(g2, 1)
             if len(build_multicurve(g2, m, t)) == 1]
    assert [(list(c.m), list(c.t)) for c in result.curves] == brute
    # every pants curve appears
    for te in g2.pants_curves:
        assert pants_curve_class(g2, te) in result.curves
    # pairwise distinct as isotopy classes, certified by the engine
    reps = [representative(c) for c in result.curves]
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            assert not is_isotopic(g2.cx, reps[i], reps[j])


def test_enumeration_cap_truncates(g2):
    result = enumerate_curves(g2, 1, cap=7)
    assert result.truncated and len(result.curves) == 7


def test_canonicalize_validates_normalizes_and_is_idempotent(g2):
    with pytest.raises(CoordinateError):
        canonicalize(g2, [1, 0, 0], [0, 0, 0])        # odd pants total
    with pytest.raises(CoordinateError):
        canonicalize(g2, [-1, 1, 0], [0, 0, 0])       # negative count
    with pytest.raises(MulticurveError):
        canonicalize(g2, [0, 0, 0], [2, 0, 0])        # two parallel copies
    # mirrored twist on an isolated pants-curve copy is the declared symmetry
    a = canonicalize(g2, [0, 0, 0], [0, 0, -1])
    b = canonicalize(g2, [0, 0, 0], [0, 0, 1])
    assert a == b
    c = canonicalize(g2, [1, 1, 0], [2, 0, 0])
    assert canonicalize(g2, list(c.m), list(c.t)) == c


def test_class_of_traced_round_trips_enumerated_classes(g2):
    sample = enumerate_curves(g2, 1).curves[::5]
    for cc in sample:
        assert class_of_traced(g2, representative(cc)) == cc


# -- Intersection numbers ---------------------------------------------------------------


def test_intersection_self_zero_chain_adjacent_one(g2):
    chain = [class_of_traced(g2, c) for c in g2.chain]
    for i, a in enumerate(chain):
        assert intersection_number(a, a) == 0
        for j in range(i, len(chain)):
            expect = 1 if j == i + 1 else 0 if j != i else 0
            assert intersection_number(a, chain[j]) == expect
            assert intersection_number(chain[j], a) == expect


def test_pants_curve_fast_path_matches_engine(g2):
    classes = enumerate_curves(g2, 1).curves[::4]
    for cc in classes:
        for te, idx in g2.index_of.items():
            p = pants_curve_class(g2, te)
            fast = intersection_number(cc, p)
            slow = geometric_intersection(
                g2.cx, representative(cc), g2.pushoff[te])
            assert fast == slow == cc.m[idx]


def test_disjointness_iff_zero_intersection_and_distinct(g2):
    classes = enumerate_curves(g2, 1).curves[::3]
    for a, b in itertools.combinations(classes, 2):
        i = intersection_number(a, b)
        assert are_disjoint(a, b) == (i == 0)
    for a in classes[:3]:
        assert not are_disjoint(a, a)


# -- Twist words --------------------------------------------------------------------


def test_word_parse_inverse_and_power():
    w = TwistWord.parse(2, "t1 T3 t5")
    assert w.letters == ((1, 1), (3, -1), (5, 1))
    assert str(w.inverse()) == "T5 t3 T1"
    assert w.power(2).letters == w.letters * 2
    assert w.power(-1) == w.inverse()
    with pytest.raises(ValueError):
        TwistWord.parse(2, "t6")
    with pytest.raises(ValueError):
        TwistWord.parse(2, "x1")


def test_empty_word_is_identity(g2):
    a = canonicalize(g2, [1, 1, 0], [1, 0, 0])
    assert apply_word(TwistWord(2, ()), a) == a


def test_word_then_inverse_returns_start_on_random_pairs(g2):
    rng = random.Random(20260815)
    seeds = enumerate_curves(g2, 1).curves
    checked = 0
    for _ in range(200):
        letters = tuple((rng.randrange(1, 6), rng.choice((-1, 1)))
                        for _ in range(rng.randrange(1, 4)))
        w = TwistWord(2, letters)
        a = seeds[rng.randrange(len(seeds))]
        b = apply_word(w, a)
        assert apply_word(w.inverse(), b) == a
        checked += 1
    assert checked == 200


def test_twist_fixes_disjoint_curves(g2):
    # c_4 is disjoint from both c_1 and c_2
    chain = [class_of_traced(g2, c) for c in g2.chain]
    w = TwistWord(2, ((4, 1),))
    for a in (chain[0], chain[1]):
        assert intersection_number(a, chain[3]) == 0
        assert apply_word(w, a) == a


def test_word_action_preserves_intersection_numbers(g2):
    rng = random.Random(99)
    classes = enumerate_curves(g2, 1).curves
    for _ in range(12):
        letters = tuple((rng.randrange(1, 6), rng.choice((-1, 1)))
                        for _ in range(rng.randrange(1, 4)))
        w = TwistWord(2, letters)
        a, b = rng.sample(classes, 2)
        assert (intersection_number(apply_word(w, a), apply_word(w, b))
                == intersection_number(a, b))


def test_word_action_is_associative_under_concatenation(g2):
    rng = random.Random(5)
    classes = enumerate_curves(g2, 1).curves
    for _ in range(8):
        w1 = TwistWord(2, tuple((rng.randrange(1, 6), rng.choice((-1, 1)))
                                for _ in range(2)))
        w2 = TwistWord(2, tuple((rng.randrange(1, 6), rng.choice((-1, 1)))
                                for _ in range(2)))
        a = classes[rng.randrange(len(classes))]
        assert apply_word(w1 * w2, a) == apply_word(w1, apply_word(w2, a))


def test_pants_word_fast_path_matches_engine_route(g2):
    # words in the even chain letters only (twists about pants curves) shear
    # coordinates; the engine route must agree
    rng = random.Random(41)
    classes = enumerate_curves(g2, 1).curves
    for _ in range(10):
        letters = tuple((rng.choice((2, 4)), rng.choice((-1, 1)))
                        for _ in range(rng.randrange(1, 4)))
        w = TwistWord(2, letters)
        a = classes[rng.randrange(len(classes))]
        via_coords = apply_word(w, a)
        via_engine = class_of_traced(
            g2, apply_word_traced(g2, w, representative(a)))
        assert via_coords == via_engine


# -- Homology ------------------------------------------------------------------------


def test_homology_basis_curves_are_unit_vectors(g2):
    units = [g2.homology_of_traced(c) for c in g2._basis_curves]
    for i, u in enumerate(units):
        assert list(u) == [1 if j == i else 0 for j in range(4)]


def test_homology_separating_curve_vanishes(g2):
    c = canonicalize(g2, [2, 0, 0], [1, 0, 0])
    assert is_separating(g2.cx, representative(c))
    assert homology_class(c) == (0, 0, 0, 0)


def test_homology_twist_follows_intersection_pairing(g2):
    # class(T_b a) = class(a) + <a,b> class(b) for the positive twist
    pairs = [(g2.circle[0], g2.pushoff[(0, 1)]),
             (g2.pushoff[(0, 1)], g2.circle[1]),
             (g2.circle[1], g2.pushoff[(1, 2)]),
             (g2.circle[0], g2.circle[1])]
    for a, b in pairs:
        ha, hb = g2.homology_of_traced(a), g2.homology_of_traced(b)
        pairing = algebraic_intersection(g2.cx, a, b)
        tw = dehn_twist(g2.cx, a, b, 1, handedness=POSITIVE_TWIST_HANDEDNESS)
        want = tuple(x + pairing * y for x, y in zip(ha, hb))
        assert g2.homology_of_traced(tw) == want


def test_algebraic_bounded_by_geometric_against_basis(g2):
    classes = enumerate_curves(g2, 1).curves[::4]
    for cc in classes:
        rep = representative(cc)
        for b in g2._basis_curves:
            assert abs(algebraic_intersection(g2.cx, rep, b)) \
                <= geometric_intersection(g2.cx, rep, b)


# -- Filling pairs and growth ----------------------------------------------------------


def test_chain_neighbours_do_not_fill(g2):
    chain = [class_of_traced(g2, c) for c in g2.chain]
    assert not is_filling_pair(chain[0], chain[1])
    assert not is_filling_pair(chain[0], chain[0])
    disjoint = (chain[0], chain[3])
    assert not is_filling_pair(*disjoint)


def test_twisted_curve_fills_with_seed(g2):
    # frozen witness: the third power of the staircase word drags the first
    # hole circle to a curve filling genus two together with its origin
    seed = class_of_traced(g2, g2.circle[0])
    w = TwistWord.parse(2, "t2 T3 t4 T5").power(3)
    moved = apply_word(w, seed)
    assert moved.m == (6, 1, 5) and moved.t == (9, 0, 1)
    assert intersection_number(moved, seed) == 9
    assert is_filling_pair(moved, seed)


def test_growth_check_flags_and_rates(g2):
    seed = class_of_traced(g2, g2.circle[0])
    alt = pa_growth_check(g2, TwistWord.parse(2, "t2 T3"), seed, 5)
    assert alt.counts == [1, 3, 8, 21, 55]
    assert not alt.reducible_suspect
    assert 2.4 < alt.growth_rate < 3.0
    assert all(b > a for a, b in zip(alt.counts, alt.counts[1:]))

    own = pa_growth_check(g2, TwistWord.parse(2, "t1"), seed, 4)
    assert own.counts == [0, 0, 0, 0]
    assert own.reducible_suspect

    empty = pa_growth_check(g2, TwistWord(2, ()), seed, 3)
    assert empty.reducible_suspect


# -- Genus three ---------------------------------------------------------------------


def test_genus_three_circles_and_builder():
    spec = surface_spec(3)
    for hole in range(4):
        m, t = measure_curve(spec, spec.circle[hole])
        assert list(m) == [1 if hole in te else 0 for te in spec.pants_curves]
        assert all(v == 0 for v in t)
    n = len(spec.pants_curves)
    checked = 0
    for m in itertools.product(range(2), repeat=n):
        try:
            check_admissible(spec, m, [0] * n)
        except CoordinateError:
            continue
        comps = build_multicurve(spec, m, [0] * n)
        got = [sum(geometric_intersection(spec.cx, comp, spec.pushoff[te])
                   for comp in comps) for te in spec.pants_curves]
        assert got == list(m)
        checked += 1
    assert checked == 8
