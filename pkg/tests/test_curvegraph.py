"""Certified curve-graph distances.

Claims exercised here:

- neighbor enumeration agrees with the exhaustive disjointness filter on the
  whole bound-1 universe, is symmetric, deterministic, sorted, and
  independent of the worker count;
- distance intervals: identical pair [0,0], distinct pants pair [1,1], a
  twist image at [2,2] through a pants-curve middle, a filling pair with
  lower rung 3, all with replayable certificates;
- the brute-force BFS oracle matches interval upper bounds on 100 sampled
  bound-1 pairs, brackets contain it on the frozen corpus (every corpus pair
  pinches exactly), flags unreachability on restricted universes, and
  rejects endpoints outside the universe;
- budgets: lower bounds never move with budget, upper bounds never worsen
  as the node cap or coordinate bound grows, truncation is reported;
- word equivariance: intervals for (a, b) and (w a, w b) overlap;
- the metric-space adapter returns interval distances usable by the
  displacement-profile machinery (subadditive upper bounds, no definite
  Fekete violations), exact Gromov-product brackets, and certified paths;
- interval arithmetic is interval addition and all comparisons are definite.
"""

from __future__ import annotations

import json
import random

import pytest

from heegaard.corpus import (
    CORPUS_BUDGET,
    genus2_distance_pairs,
    genus2_filling_witness,
)
from heegaard.curvegraph import (
    BudgetReport,
    CertificateError,
    CurveGraphAdapter,
    CurveGraphSpace,
    DistanceInterval,
    FractionInterval,
    LO_DISTINCTNESS,
    LO_EQUALITY,
    LO_FILLING_PAIR,
    LO_POSITIVE_INTERSECTION,
    SearchBudget,
    UnknownDistanceError,
    as_metric_space,
    frontier_key,
    gromov_product_interval,
    interval_from_json_dict,
    interval_to_json_dict,
    interval_to_json_line,
    replay_interval_json,
    word_isometry,
)
from heegaard.hypspace.lemmas import displacement_profile
from heegaard.surface import (
    TwistWord,
    apply_word,
    are_disjoint,
    canonicalize,
    chain_classes,
    pants_curve_class,
    surface_spec,
)

AMPLE = 2000


@pytest.fixture(scope="module")
def g2(genus2_graph):
    return genus2_graph.spec


@pytest.fixture(scope="module")
def chain(g2):
    return chain_classes(g2)


@pytest.fixture(scope="module")
def pants(g2):
    return [pants_curve_class(g2, e) for e in g2.pants_curves]


@pytest.fixture(scope="module")
def twist_pair(chain):
    """(c2, image of c2 under the positive twist about c1): crossing number
    one, distance exactly two."""
    moved = apply_word(TwistWord.parse(2, "t1"), chain[1])
    return chain[1], moved


# -- Interval objects ------------------------------------------------------------


def test_interval_rejects_malformed():
    with pytest.raises(ValueError):
        DistanceInterval(-1, None)
    with pytest.raises(ValueError):
        DistanceInterval(3, 2)
    with pytest.raises(ValueError):
        DistanceInterval(1, 1, lo_certificate="vibes")
    with pytest.raises(ValueError):
        DistanceInterval(0, None, hi_certificate=())
    a = canonicalize(surface_spec(2), (0, 0, 0), (1, 0, 0))
    with pytest.raises(ValueError):
        DistanceInterval(0, 2, hi_certificate=(a, a))  # needs length 3


def test_interval_arithmetic_is_interval_addition():
    a = DistanceInterval(1, 2)
    b = DistanceInterval(2, 3)
    c = a + b
    assert (c.lo, c.hi) == (3, 5)
    assert c.lo_certificate is None and c.hi_certificate is None
    unknown = DistanceInterval(2, None)
    d = a + unknown
    assert (d.lo, d.hi) == (3, None)
    assert (a + 4).hi == 6 and (4 + a).lo == 5
    assert sum([a, b], DistanceInterval(0, 0)).hi == 5


def test_interval_comparisons_are_definite():
    assert DistanceInterval(3, 3) > DistanceInterval(1, 2)
    assert not DistanceInterval(1, 4) > DistanceInterval(1, 2)  # undecided
    assert DistanceInterval(1, 2) <= DistanceInterval(2, 5)
    assert not DistanceInterval(1, 3) <= DistanceInterval(2, 5)  # undecided
    assert DistanceInterval(2, None) > DistanceInterval(0, 1)
    assert not DistanceInterval(0, 1) > DistanceInterval(2, None)
    assert not DistanceInterval(2, None) < DistanceInterval(90, 90)
    assert DistanceInterval(0, 1) < DistanceInterval(2, None)
    assert DistanceInterval(2, 2) >= 2 and DistanceInterval(2, 2) <= 2


def test_interval_overlap_and_flags():
    assert DistanceInterval(1, 2).overlaps(DistanceInterval(2, 4))
    assert not DistanceInterval(1, 2).overlaps(DistanceInterval(3, 4))
    assert DistanceInterval(1, None).overlaps(DistanceInterval(30, 31))
    assert not DistanceInterval(5, None).overlaps(DistanceInterval(1, 2))
    assert DistanceInterval(2, 2).exact and DistanceInterval(2, 2).known
    assert not DistanceInterval(2, 3).exact
    assert not DistanceInterval(2, None).known


def test_budget_validation():
    with pytest.raises(ValueError):
        SearchBudget(0)
    with pytest.raises(ValueError):
        SearchBudget(2, 0)
    with pytest.raises(ValueError):
        CurveGraphAdapter(2, bound=0)
    with pytest.raises(ValueError):
        CurveGraphAdapter(2, bound=1, workers=0)


# -- Neighbors ---------------------------------------------------------------------


def test_neighbors_match_exhaustive_filter_on_bound1(genus2_graph):
    members, truncated = genus2_graph.universe(1)
    assert len(members) == 30 and not truncated
    for a in members:
        via_adapter = set(genus2_graph.neighbors(a, 1).curves)
        via_filter = {b for b in members if b != a and are_disjoint(a, b)}
        assert via_adapter == via_filter


def test_pants_curves_are_mutual_neighbors(genus2_graph, pants):
    for a in pants:
        got = genus2_graph.neighbors(a, 1).curves
        assert a not in got
        for b in pants:
            if b != a:
                assert b in got


def test_neighbors_symmetric_on_bound1(genus2_graph):
    members, _ = genus2_graph.universe(1)
    nbhd = {a: set(genus2_graph.neighbors(a, 1).curves) for a in members}
    for a in members:
        for b in nbhd[a]:
            assert a in nbhd[b]


def test_neighbors_sorted_and_repeatable(genus2_graph, chain):
    first = genus2_graph.neighbors(chain[0], 2)
    again = genus2_graph.neighbors(chain[0], 2)
    assert first == again
    keys = [frontier_key(c) for c in first.curves]
    assert keys == sorted(keys)
    assert not first.truncated


def test_neighbors_independent_of_worker_count(pants, chain):
    serial = CurveGraphAdapter(2, bound=1, workers=1)
    pooled = CurveGraphAdapter(2, bound=1, workers=3)
    for c in [pants[0], chain[0], chain[1]]:
        assert serial.neighbors(c, 1) == pooled.neighbors(c, 1)


def test_neighbor_edges_replay_as_disjoint(genus2_graph, pants):
    for b in genus2_graph.neighbors(pants[0], 1).curves:
        assert are_disjoint(pants[0], b)


# -- distance_interval ----------------------------------------------------------------


def test_distance_identical_pair(genus2_graph, chain):
    iv = genus2_graph.distance_interval(chain[0], chain[0])
    assert (iv.lo, iv.hi) == (0, 0)
    assert iv.lo_certificate == LO_EQUALITY
    assert iv.hi_certificate == (chain[0],)
    assert iv.exact


def test_distance_distinct_pants_pair(genus2_graph, pants):
    iv = genus2_graph.distance_interval(pants[0], pants[1])
    assert (iv.lo, iv.hi) == (1, 1)
    assert iv.lo_certificate == LO_DISTINCTNESS
    assert iv.hi_certificate == (pants[0], pants[1])


def test_distance_twist_image_pinches_at_two(genus2_graph, g2, twist_pair):
    a, b = twist_pair
    iv = genus2_graph.distance_interval(a, b, CORPUS_BUDGET)
    assert (iv.lo, iv.hi) == (2, 2)
    assert iv.lo_certificate == LO_POSITIVE_INTERSECTION
    path = iv.hi_certificate
    assert path[0] == a and path[-1] == b and len(path) == 3
    # the (deterministic) middle curve is the third pants class
    assert path[1] == pants_curve_class(g2, (1, 2))
    assert are_disjoint(path[0], path[1]) and are_disjoint(path[1], path[2])


def test_distance_symmetry(genus2_graph, twist_pair):
    a, b = twist_pair
    fwd = genus2_graph.distance_interval(a, b, CORPUS_BUDGET)
    rev = genus2_graph.distance_interval(b, a, CORPUS_BUDGET)
    assert (fwd.lo, fwd.hi) == (rev.lo, rev.hi)
    assert rev.hi_certificate == tuple(reversed(fwd.hi_certificate))


def test_distance_filling_pair_reaches_rung_three(genus2_graph):
    seed, moved = genus2_filling_witness()
    iv = genus2_graph.distance_interval(seed, moved, SearchBudget(2, 4))
    assert iv.lo == 3
    assert iv.lo_certificate == LO_FILLING_PAIR
    # even a 4-node budget finds a certified length-3 path here
    assert iv.hi == 3 and not iv.budget.truncated
    assert len(iv.hi_certificate) == 4


def test_distance_rejects_mismatched_surface(genus2_graph):
    g3 = surface_spec(3)
    alien = pants_curve_class(g3, g3.pants_curves[0])
    local = canonicalize(surface_spec(2), (0, 0, 0), (1, 0, 0))
    with pytest.raises(ValueError):
        genus2_graph.distance_interval(alien, local)
    with pytest.raises(ValueError):
        genus2_graph.neighbors(alien)


# -- Certificates and JSON -------------------------------------------------------------


def test_corpus_certificates_all_replay(genus2_graph):
    for label, a, b in genus2_distance_pairs():
        iv = genus2_graph.distance_interval(a, b, CORPUS_BUDGET)
        ra, rb, replayed = replay_interval_json(interval_to_json_line(a, b, iv))
        assert (ra, rb) == (a, b), label
        assert (replayed.lo, replayed.hi) == (iv.lo, iv.hi), label


def test_replay_rejects_corruption(genus2_graph, g2, twist_pair):
    a, b = twist_pair
    iv = genus2_graph.distance_interval(a, b, CORPUS_BUDGET)
    good = interval_to_json_dict(a, b, iv)
    assert replay_interval_json(json.loads(json.dumps(good)))

    wrong_lo = dict(good, lo=3)
    with pytest.raises(CertificateError):
        replay_interval_json(wrong_lo)

    wrong_kind = dict(good, lo=3, lo_cert="filling-pair")  # predicate false
    with pytest.raises(CertificateError):
        replay_interval_json(wrong_kind)

    short_path = dict(good, path=[good["path"][0], good["path"][-1]])
    with pytest.raises(CertificateError):
        replay_interval_json(short_path)

    crossing = canonicalize(g2, (1, 1, 0), (0, 0, 0))  # crosses both ends
    bad_edge = dict(good)
    bad_edge["path"] = [good["path"][0],
                        {"genus": 2, "coords": [[m, t] for m, t in
                                                zip(crossing.m, crossing.t)]},
                        good["path"][-1]]
    with pytest.raises(CertificateError):
        replay_interval_json(bad_edge)

    with pytest.raises(CertificateError):
        replay_interval_json("this is not json")


def test_unknown_hi_serializes_and_replays(genus2_graph, twist_pair):
    a, b = twist_pair
    iv = genus2_graph.distance_interval(a, b, SearchBudget(2, 1))
    assert iv.hi is None and iv.budget.truncated
    payload = interval_to_json_dict(a, b, iv)
    assert payload["hi"] == "unknown" and payload["path"] is None
    _, _, replayed = replay_interval_json(payload)
    assert replayed.hi is None and replayed.lo == iv.lo


def test_interval_json_structural_roundtrip(genus2_graph, pants):
    iv = genus2_graph.distance_interval(pants[0], pants[1])
    a, b, back = interval_from_json_dict(
        json.loads(interval_to_json_line(pants[0], pants[1], iv)))
    assert (a, b) == (pants[0], pants[1])
    assert back == iv
    assert back.budget == BudgetReport(2, 2000, 0, False)


# -- Brute-force oracle ------------------------------------------------------------------


def test_bruteforce_identical_is_zero(genus2_graph, chain):
    assert genus2_graph.distance_bruteforce(chain[0], chain[0], 2) == 0


def test_bruteforce_matches_interval_hi_on_sampled_pairs(genus2_graph):
    members, _ = genus2_graph.universe(1)
    rng = random.Random(77)
    for _ in range(100):
        a, b = rng.sample(members, 2)
        iv = genus2_graph.distance_interval(a, b, SearchBudget(1, AMPLE))
        assert iv.hi == genus2_graph.distance_bruteforce(a, b, 1)


def test_bruteforce_rejects_endpoint_outside_universe(genus2_graph):
    seed, moved = genus2_filling_witness()  # moved has coordinates up to 9
    with pytest.raises(ValueError):
        genus2_graph.distance_bruteforce(seed, moved, 2)


def test_bruteforce_unreachable_flag_on_restricted_universe(genus2_graph, g2,
                                                            pants):
    big = canonicalize(g2, (1, 1, 2), (1, -2, -1))
    assert genus2_graph.distance_bruteforce(
        pants[0], big, universe=[pants[0], big]) is None
    assert genus2_graph.distance_bruteforce(
        pants[0], pants[1], universe=[pants[0], pants[1]]) == 1


# -- Oracle containment on the frozen corpus ---------------------------------------------


def test_corpus_brackets_contain_bruteforce_and_pinch(genus2_graph):
    results = {}
    exact = 0
    pairs = genus2_distance_pairs()
    for label, a, b in pairs:
        iv = genus2_graph.distance_interval(a, b, CORPUS_BUDGET)
        bf = genus2_graph.distance_bruteforce(a, b, 2)
        assert bf is not None, label
        assert iv.lo <= bf, label
        assert iv.hi is None or bf <= iv.hi, label
        exact += iv.exact
        results[label] = (iv.lo, iv.hi)
    assert exact / len(pairs) >= 0.6
    assert results["identical"] == (0, 0)
    assert results["pants-01"] == (1, 1)
    assert results["pants-02"] == (1, 1)
    assert results["pants-12"] == (1, 1)
    assert results["twist-image"] == (2, 2)
    # frozen: every corpus pair currently pinches exactly
    assert exact == len(pairs)


# -- Equivariance -------------------------------------------------------------------------


def test_intervals_equivariant_under_words(genus2_graph, chain):
    rng = random.Random(11)
    budget = SearchBudget(2, 30)
    for _ in range(6):
        length = rng.randint(1, 2)
        text = " ".join(rng.choice("tT") + str(rng.randint(1, 5))
                        for _ in range(length))
        w = TwistWord.parse(2, text)
        i, j = rng.sample(range(5), 2)
        a, b = chain[i], chain[j]
        iv = genus2_graph.distance_interval(a, b, budget)
        moved = genus2_graph.distance_interval(apply_word(w, a),
                                               apply_word(w, b), budget)
        assert iv.overlaps(moved), (text, i, j)


# -- Budget behaviour ---------------------------------------------------------------------


def test_budget_monotonicity(genus2_graph, twist_pair):
    a, b = twist_pair
    outcomes = {}
    for bound in (1, 2):
        for cap in (1, AMPLE):
            iv = genus2_graph.distance_interval(a, b, SearchBudget(bound, cap))
            outcomes[(bound, cap)] = iv
            assert iv.lo == 2  # the ladder never moves with budget
    for bound in (1, 2):
        tight, ample = outcomes[(bound, 1)], outcomes[(bound, AMPLE)]
        assert tight.hi is None and tight.budget.truncated
        assert ample.hi == 2 and not ample.budget.truncated
    assert outcomes[(2, AMPLE)].hi <= outcomes[(1, AMPLE)].hi


# -- Metric-space adapter ------------------------------------------------------------------


def test_space_handle_basics(genus2_graph, pants):
    space = as_metric_space(genus2_graph, SearchBudget(2, 60))
    assert isinstance(space, CurveGraphSpace)
    assert space.exact_metric is False
    members, _ = genus2_graph.universe(2)
    assert space.points() == list(members)
    rng = random.Random(5)
    assert space.sample(rng) in members
    iv = space.distance(pants[0], pants[1])
    assert (iv.lo, iv.hi) == (1, 1)
    assert space.geodesic(pants[0], pants[1]) == [pants[0], pants[1]]


def test_space_geodesic_raises_when_unknown(genus2_graph, twist_pair):
    a, b = twist_pair
    space = as_metric_space(genus2_graph, SearchBudget(2, 1))
    with pytest.raises(UnknownDistanceError):
        space.geodesic(a, b)


def test_displacement_profile_over_curve_graph(genus2_graph, pants):
    space = as_metric_space(genus2_graph, SearchBudget(2, 60))
    handle = word_isometry(space, TwistWord.parse(2, "t1"))
    profile = displacement_profile(space, handle, pants[0], N=4)
    assert [(iv.lo, iv.hi) for iv in profile.d] == [(2, 2)] * 4
    # interval-safe subadditivity audit: no definite violations
    assert profile.fekete_violations() == []
    for n in range(4):
        for m in range(4 - n - 1):
            assert profile.d[n + m + 1].hi <= profile.d[n].hi + profile.d[m].hi


def test_identity_word_has_zero_profile(genus2_graph, pants):
    space = as_metric_space(genus2_graph, SearchBudget(2, 60))
    handle = word_isometry(space, TwistWord.parse(2, ""))
    assert handle.name == "identity"
    profile = displacement_profile(space, handle, pants[0], N=3)
    assert [(iv.lo, iv.hi) for iv in profile.d] == [(0, 0)] * 3


def test_word_isometry_rejects_wrong_surface(genus2_graph):
    space = as_metric_space(genus2_graph)
    with pytest.raises(ValueError):
        word_isometry(space, TwistWord.parse(3, "t1"))


def test_gromov_product_intervals(genus2_graph, pants, chain):
    from fractions import Fraction
    space = as_metric_space(genus2_graph, SearchBudget(2, 60))
    same = gromov_product_interval(space, pants[0], chain[0], chain[0])
    d = space.distance(pants[0], chain[0])
    assert d.exact
    assert same == FractionInterval(Fraction(d.lo), Fraction(d.lo))
    mixed = gromov_product_interval(space, pants[0], chain[0], chain[2])
    assert mixed.exact and mixed.lo == Fraction(3, 2)
