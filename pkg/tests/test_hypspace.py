"""Tests for the metric testbeds and the instance-wise lemma verifiers.

Frozen facts checked here:

- testbed point counts and diameters (binary tree 31, 10-cycle diameter 5,
  degree-7 tiling ball vs the layer recurrence L1=7, L2=21,
  L_{k+1} = 3 L_k - L_{k-1});
- metric axioms and geodesic validity on sampled triples/pairs;
- Gromov product anchors and exact nearest-point projections;
- triangle thinness: trees are 0-thin, grids need a growing delta;
- the projection triangle/quadrilateral inequalities with measured
  constants, including tree equality cases (slack exactly 0) and a grid
  negative control that must fail;
- displacement profiles: line translation is exactly linear, rotations are
  bounded, free-group profiles match the closed form n|v| + 2|u| for
  w = u v u^-1 with v cyclically reduced;
- axes: recorded constants, parameterization anchor, empirical
  quasi-geodesic checks, degenerate rejection;
- projection diameters, the bounded-projection band report, proximity of
  quasiconvex sets, and the Gromov-product floor along an axis.
"""

from __future__ import annotations

import json
import random

import pytest

from heegaard.hypspace import (
    DegenerateAxisError,
    FreeGroupSpace,
    OrbitTruncationError,
    QuasiConvexSet,
    QuasiGeodesicPath,
    SizeCapError,
    build_axis,
    compute_m0,
    cycle_rotation,
    displacement_profile,
    free_group_left_multiplication,
    free_group_translation_length,
    grid_translation,
    gromov_product,
    make_testbed_space,
    measure_quasiconvexity,
    projection_diameter,
    quasi_project,
    quasiconvex_proximity_check,
    run_quadrilateral_suite,
    run_triangle_suite,
    space_from_adjacency_text,
    space_to_adjacency_text,
    stability_estimate,
    thinness_check,
    tiling_layer_sizes,
    tree_left_multiplication,
    verify_axis_product_floor,
    verify_bounded_implies_linear,
    verify_quadrilateral_lemma,
    verify_triangle_lemma,
)

# -- Helpers -------------------------------------------------------------------


def _vertex_by_label(space, label):
    return space.labels.index(label)


def _grid(n):
    return make_testbed_space("grid", width=n, height=n)


def _gv(space, x, y):
    return _vertex_by_label(space, (x, y))


def _path_from_list(space, pts, lam=3.0, eps=4.0):
    return QuasiGeodesicPath(space=space, lo=0, hi=len(pts) - 1,
                             point_at_fn=lambda t: pts[t], lam=lam, eps=eps)


ALL_TESTBEDS = [
    make_testbed_space("tree", branching=2, depth=4),
    make_testbed_space("cycle", length=10),
    make_testbed_space("grid", width=6, height=5),
    make_testbed_space("tiling_ball", radius=3),
]


# -- Testbed construction ------------------------------------------------------


def test_binary_tree_point_count():
    sp = make_testbed_space("tree", branching=2, depth=4)
    assert len(sp.points()) == 31


def test_cycle_diameter():
    sp = make_testbed_space("cycle", length=10)
    assert max(sp.distance(0, v) for v in sp.points()) == 5


def test_tiling_ball_matches_layer_recurrence():
    # Independent oracle: first two layers counted by hand (7 around the
    # center, then 21 = sum over the 7 of (children minus shared)), and the
    # linear recurrence L_{k+1} = 3 L_k - L_{k-1} for hyperbolic growth.
    radius = 5
    expected = [1, 7, 21]
    while len(expected) < radius + 1:
        expected.append(3 * expected[-1] - expected[-2])
    assert tiling_layer_sizes(radius) == expected
    ball = make_testbed_space("tiling_ball", radius=radius)
    assert len(ball.points()) == sum(expected)
    # interior vertices (anything not in the outer two layers) have degree 7
    dist0 = [ball.distance(0, v) for v in ball.points()]
    for v in ball.points():
        if dist0[v] <= radius - 2:
            assert len(ball.neighbors(v)) == 7


def test_size_cap_enforced():
    with pytest.raises(SizeCapError):
        make_testbed_space("grid", width=1000, height=1000)


def test_metric_axioms_on_sampled_triples():
    rng = random.Random(20260815)
    for sp in ALL_TESTBEDS:
        for _ in range(1000):
            a, b, c = (sp.sample(rng) for _ in range(3))
            assert sp.distance(a, b) == sp.distance(b, a)
            assert (sp.distance(a, b) == 0) == (a == b)
            assert sp.distance(a, c) <= sp.distance(a, b) + sp.distance(b, c)


def test_geodesics_realize_distance_at_unit_steps():
    rng = random.Random(7)
    for sp in ALL_TESTBEDS:
        for _ in range(60):
            a, b = sp.sample(rng), sp.sample(rng)
            path = sp.geodesic(a, b)
            assert len(path) - 1 == sp.distance(a, b)
            assert path[0] == a and path[-1] == b
            for u, v in zip(path, path[1:]):
                assert sp.distance(u, v) == 1


def test_adjacency_text_round_trip():
    for sp in ALL_TESTBEDS:
        text = space_to_adjacency_text(sp)
        back = space_from_adjacency_text(text)
        assert back.adjacency == sp.adjacency


# -- Gromov products -----------------------------------------------------------


def test_gromov_product_of_point_with_itself_is_its_norm():
    rng = random.Random(3)
    for sp in ALL_TESTBEDS:
        base = sp.sample(rng)
        for _ in range(50):
            y = sp.sample(rng)
            assert gromov_product(sp, base, y, y) == sp.distance(base, y)
            assert gromov_product(sp, base, base, y) == 0


def test_gromov_product_shared_prefix_leaves():
    sp = make_testbed_space("tree", branching=2, depth=5)
    # leaves whose root paths share exactly a length-3 prefix
    for prefix in [(0, 0, 0), (1, 0, 1)]:
        y = _vertex_by_label(sp, prefix + (0, 0))
        z = _vertex_by_label(sp, prefix + (1, 1))
        assert gromov_product(sp, 0, y, z) == 3


# -- Projections ---------------------------------------------------------------


def test_projection_contains_self_when_in_target():
    sp = ALL_TESTBEDS[0]
    U = QuasiConvexSet(points=(1, 2, 3), R=0)
    assert quasi_project(sp, U, 2, 0) == (2,)


def test_projection_onto_subtree_is_unique_nearest_point():
    sp = make_testbed_space("tree", branching=2, depth=4)
    subtree = tuple(v for v in sp.points() if sp.labels[v][:1] == (0,))
    U = QuasiConvexSet(points=subtree, R=measure_quasiconvexity(sp, subtree))
    assert U.R == 0
    rng = random.Random(5)
    for _ in range(40):
        y = sp.sample(rng)
        proj = quasi_project(sp, U, y, 0)
        best = min(sp.distance(y, u) for u in subtree)
        exhaustive = tuple(u for u in subtree if sp.distance(y, u) == best)
        assert proj == exhaustive
        assert len(proj) == 1  # subtrees of trees have unique nearest points


def test_projection_onto_grid_line_and_l_shape():
    sp = _grid(9)
    row = tuple(_gv(sp, x, 0) for x in range(9))
    U = QuasiConvexSet(points=row, R=0)
    proj = quasi_project(sp, U, _gv(sp, 3, 4), 0)
    assert proj == (_gv(sp, 3, 0),)  # diameter 0 here

    def l_shape_diameter(n):
        legs = {_gv(sp, x, 0) for x in range(n + 1)} | {_gv(sp, 0, y) for y in range(n + 1)}
        L = QuasiConvexSet(points=tuple(sorted(legs)), R=0)
        pts = quasi_project(sp, L, _gv(sp, n, n), 0)
        return max(sp.distance(a, b) for a in pts for b in pts)

    diam = [l_shape_diameter(n) for n in (2, 4, 6, 8)]
    assert diam == sorted(diam) and diam[0] < diam[-1]  # grows with n
    assert diam[-1] == 16  # the two leg tips (8,0) and (0,8)


# -- Thinness ------------------------------------------------------------------


def test_tree_triangles_are_zero_thin():
    sp = make_testbed_space("tree", branching=3, depth=4)
    rng = random.Random(11)
    for _ in range(200):
        x, y, z = (sp.sample(rng) for _ in range(3))
        rep = thinness_check(sp, x, y, z, 0)
        assert rep.passed and rep.extra["minimal_delta"] == 0


def test_degenerate_triangle_is_zero_thin():
    sp = ALL_TESTBEDS[2]
    rep = thinness_check(sp, 7, 7, 7, 0)
    assert rep.passed and rep.extra["minimal_delta"] == 0


def _brute_minimal_delta(sp, x, y, z):
    # Independent recomputation: canonical geodesics, exhaustive point scan.
    sides = [sp.geodesic(x, y), sp.geodesic(y, z), sp.geodesic(z, x)]
    worst = 0
    for i in range(3):
        others = sides[(i + 1) % 3] + sides[(i + 2) % 3]
        for p in sides[i]:
            worst = max(worst, min(sp.distance(p, q) for q in others))
    return worst


def test_grid_corner_triangle_matches_brute_force():
    sp = _grid(9)
    x, y, z = _gv(sp, 0, 0), _gv(sp, 8, 0), _gv(sp, 0, 8)
    rep = thinness_check(sp, x, y, z, 99)
    assert rep.extra["minimal_delta"] == _brute_minimal_delta(sp, x, y, z)


def test_grid_thinness_grows_with_triangle_size():
    sp = _grid(17)
    values = []
    for n in (4, 8, 12, 16):
        x, y, z = _gv(sp, 0, n), _gv(sp, n, n), _gv(sp, n // 2, 0)
        values.append(thinness_check(sp, x, y, z, 0).extra["minimal_delta"])
    assert values == sorted(values) and values[0] > 0 and values[-1] > values[0]


# -- Stability -----------------------------------------------------------------


def test_stability_of_a_geodesic_is_zero():
    sp = _grid(9)
    pts = sp.geodesic(_gv(sp, 0, 0), _gv(sp, 8, 6))
    path = _path_from_list(sp, pts, lam=1.0, eps=0.0)
    assert stability_estimate(sp, path, (0, len(pts) - 1)) == 0


def test_stability_on_tree_bounded_by_hausdorff():
    sp = make_testbed_space("tree", branching=2, depth=5)
    a = _vertex_by_label(sp, (0, 0, 0, 0, 0))
    b = _vertex_by_label(sp, (1, 1, 1))
    detour = _vertex_by_label(sp, (0, 1, 1))
    pts = (sp.geodesic(a, detour) + sp.geodesic(detour, a)[1:-1] + sp.geodesic(a, b)[1:])
    path = _path_from_list(sp, pts)
    est = stability_estimate(sp, path, (0, len(pts) - 1))
    geo = sp.geodesic(a, b)
    hausdorff = max(
        max(min(sp.distance(p, q) for q in geo) for p in pts),
        max(min(sp.distance(p, q) for p in pts) for q in geo),
    )
    assert est <= hausdorff


def test_stability_of_staircase_grows():
    sp = _grid(17)

    def staircase_deviation(n):
        pts = []
        for t in range(2 * n + 1):
            pts.append(_gv(sp, (t + 1) // 2, t // 2))
        path = _path_from_list(sp, pts)
        return stability_estimate(sp, path, (0, 2 * n))

    vals = [staircase_deviation(n) for n in (4, 8, 16)]
    assert vals == sorted(vals) and vals[-1] > vals[0]  # negative control


# -- Projection triangle / quadrilateral ---------------------------------------


def test_triangle_lemma_tree_equality():
    sp = make_testbed_space("tree", branching=2, depth=5)
    rng = random.Random(17)
    for _ in range(100):
        center = sp.sample(rng)
        radius = rng.randrange(0, 3)
        pts = tuple(v for v in sp.points() if sp.distance(center, v) <= radius)
        U = QuasiConvexSet(points=pts, R=measure_quasiconvexity(sp, pts))
        assert U.R == 0
        y = sp.sample(rng)
        u = pts[rng.randrange(len(pts))]
        rep = verify_triangle_lemma(sp, U, y, u, eps=0, delta=0)
        assert rep.passed and rep.slack == 0


def test_triangle_lemma_tiling_suite():
    tb = make_testbed_space("tiling_ball", radius=5)
    res = run_triangle_suite(count=200, seed=99, spaces=[tb])
    assert res.failures() == []
    assert all(r.status == "pass" for r in res.reports)


def test_triangle_lemma_negative_control_fails_with_witness():
    sp = _grid(9)
    staircase = tuple(_gv(sp, i, i) for i in range(9))
    lying = QuasiConvexSet(points=staircase, R=0)  # true R is much larger
    y = _gv(sp, 0, 8)
    rep = verify_triangle_lemma(sp, lying, y, _gv(sp, 0, 0), eps=0, delta=0)
    assert rep.passed is False
    assert rep.witness is not None


def test_quadrilateral_lemma_not_applicable_when_unseparated():
    sp = make_testbed_space("tree", branching=2, depth=4)
    U = QuasiConvexSet(points=(0,), R=0)
    rep = verify_quadrilateral_lemma(sp, U, 5, 9, eps=0, delta=0)
    assert rep.status == "not-applicable" and rep.passed is None and rep.slack is None


def test_quadrilateral_lemma_tree_equality():
    sp = make_testbed_space("tree", branching=2, depth=5)
    pts = tuple(v for v in sp.points() if sp.distance(0, v) <= 2)
    U = QuasiConvexSet(points=pts, R=measure_quasiconvexity(sp, pts))
    y = _vertex_by_label(sp, (0, 0, 0, 0, 0))
    z = _vertex_by_label(sp, (1, 1, 1, 1, 1))
    rep = verify_quadrilateral_lemma(sp, U, y, z, eps=0, delta=0)
    assert rep.status == "pass" and rep.slack == 0


def test_quadrilateral_lemma_tiling_suite():
    tb = make_testbed_space("tiling_ball", radius=5)
    res = run_quadrilateral_suite(count=200, seed=99, spaces=[tb])
    assert res.failures() == []  # instances meeting the precondition all pass


def test_mixed_suites_meet_gate_and_pass():
    res = run_triangle_suite(count=300, seed=5)
    assert res.failures() == []
    tree_reports = [r for r in res.reports if r.extra["space"].startswith("tree(")]
    assert all(r.slack == 0 for r in tree_reports)
    resq = run_quadrilateral_suite(count=300, seed=5)
    assert resq.failures() == []
    assert resq.stats["met_fraction"] >= 0.30


# -- Displacement profiles ------------------------------------------------------


def test_line_translation_profile_is_exactly_linear():
    sp = make_testbed_space("grid", width=40, height=1)
    h = grid_translation(sp, 2, 0)
    prof = displacement_profile(sp, h, 3, 10)
    assert prof.d == [2 * n for n in range(1, 11)]
    assert prof.alpha_upper == 2
    assert prof.fekete_violations() == []


def test_line_translation_truncation_names_largest_valid_power():
    sp = make_testbed_space("grid", width=20, height=1)
    h = grid_translation(sp, 3, 0)
    with pytest.raises(OrbitTruncationError) as err:
        displacement_profile(sp, h, 1, 10)
    assert err.value.largest_valid == 6  # 1 + 3*6 = 19 is the last point
    prof = displacement_profile(sp, h, 1, 10, allow_truncation=True)
    assert prof.truncated_at == 6 and prof.d == [3 * n for n in range(1, 7)]


def test_cycle_rotation_profile_is_bounded():
    sp = make_testbed_space("cycle", length=12)
    h = cycle_rotation(sp, 5)
    prof = displacement_profile(sp, h, 0, 24)
    assert max(prof.d) <= 6
    assert prof.alpha_upper <= 0.25


def test_tree_profile_matches_brute_force_distances():
    sp = make_testbed_space("tree", branching=3, depth=7, root_branching=4)
    h = tree_left_multiplication(sp, (1, 2))
    prof = displacement_profile(sp, h, 0, 3)
    for n in range(1, 4):
        assert prof.d[n - 1] == sp.distance(0, h.apply(0, n))
    assert prof.d == [2, 4, 6]


def test_free_group_profile_matches_closed_form():
    sp = FreeGroupSpace(rank=2)
    # w = u v u^-1 with u = (1,), v = (2,): d_n = n|v| + 2|u| = n + 2
    w = (1, 2, -1)
    h = free_group_left_multiplication(sp, w)
    prof = displacement_profile(sp, h, (), 50)
    assert prof.d == [n + 2 for n in range(1, 51)]
    assert prof.fekete_violations() == []
    assert free_group_translation_length(w) == 1


def test_iterated_subadditivity():
    sp = FreeGroupSpace(rank=2)
    h = free_group_left_multiplication(sp, (1, 2, 2, -1))
    prof = displacement_profile(sp, h, (2, 1), 30)
    assert prof.fekete_violations() == []
    for k in range(1, 6):
        for n in range(1, 31 // k + 1):
            if k * n <= 30:
                assert prof.d[k * n - 1] <= k * prof.d[n - 1]


# -- Axes ------------------------------------------------------------------------


def test_axis_on_line_is_the_line_with_recorded_constants():
    sp = make_testbed_space("grid", width=40, height=1)
    h = grid_translation(sp, 1, 0)
    prof = displacement_profile(sp, h, 5, 10)
    axis = build_axis(sp, h, 5, (0, 8), profile=prof)
    assert axis.point_at(0) == 5  # parameterization anchor
    assert axis.point_set() == list(range(5, 15))  # the line itself
    # recorded constants follow the claimed formulas
    assert axis.lam == 2.0  # 2 d_1 / alpha_upper with d_1 = alpha = 1
    assert compute_m0(prof) == 3
    assert axis.eps == 3.0  # M0 * d_1
    # and the axis is empirically a (1, 0) quasi-geodesic here
    strict = QuasiGeodesicPath(space=sp, lo=axis.lo, hi=axis.hi,
                               point_at_fn=axis.point_at_fn, lam=1.0, eps=0.0)
    pairs = [(a, b) for a in strict.parameters() for b in strict.parameters() if a < b]
    assert strict.check_quasi_geodesic(pairs) == []


def test_axis_quasi_geodesic_on_free_group():
    sp = FreeGroupSpace(rank=2)
    h = free_group_left_multiplication(sp, (1, 2, -1, -2, 1))
    prof = displacement_profile(sp, h, (), 12)
    axis = build_axis(sp, h, (), (0, 6), profile=prof)
    rng = random.Random(23)
    pairs = [tuple(sorted((rng.randrange(axis.lo, axis.hi + 1),
                           rng.randrange(axis.lo, axis.hi + 1)))) for _ in range(300)]
    assert axis.check_quasi_geodesic(pairs) == []


def test_axis_rejects_zero_drift_isometry():
    sp = make_testbed_space("cycle", length=12)
    with pytest.raises(DegenerateAxisError):
        build_axis(sp, cycle_rotation(sp, 0), 0, (0, 4))


# -- Projection diameter and band reports ---------------------------------------


def _line_axis():
    sp = make_testbed_space("grid", width=40, height=1)
    h = grid_translation(sp, 1, 0)
    prof = displacement_profile(sp, h, 5, 10)
    return sp, h, build_axis(sp, h, 5, (0, 8), profile=prof)


def test_projection_diameter_anchors():
    sp, _, axis = _line_axis()
    assert projection_diameter(sp, [axis.point_at(0)], axis, 0) == 0
    pts = axis.point_set()
    assert projection_diameter(sp, pts, axis, 0) == sp.distance(pts[0], pts[-1])


def test_projection_diameter_tree_matches_exhaustive_scan():
    sp = make_testbed_space("tree", branching=3, depth=7, root_branching=4)
    h = tree_left_multiplication(sp, (1, 2))
    prof = displacement_profile(sp, h, 0, 3)
    axis = build_axis(sp, h, 0, (0, 2), profile=prof)
    axis_pts = axis.point_set()
    Y = [v for v in sp.points() if sp.labels[v][:2] == (2, 2)][:25]
    got = projection_diameter(sp, Y, axis, 0)
    pool = set()
    for y in Y:
        best = min(sp.distance(y, p) for p in axis_pts)
        pool |= {p for p in axis_pts if sp.distance(y, p) == best}
    assert got == max(sp.distance(a, b) for a in pool for b in pool)


def test_bounded_projection_band_on_line():
    sp = make_testbed_space("grid", width=60, height=1)
    h = grid_translation(sp, 2, 0)
    reports = verify_bounded_implies_linear(sp, [4], h, eps=0, N=10)
    assert all(r.passed for r in reports)
    assert reports[-1].extra["K_hat_so_far"] == 0
    assert [r.lhs for r in reports] == [2 * n for n in range(1, 11)]


def test_bounded_projection_band_stable_as_window_doubles():
    sp = FreeGroupSpace(rank=2)
    h = free_group_left_multiplication(sp, (1, 1))
    Y = [(), (2,)]
    k10 = verify_bounded_implies_linear(sp, Y, h, eps=0, N=10)[-1].extra["K_hat_so_far"]
    k20 = verify_bounded_implies_linear(sp, Y, h, eps=0, N=20)[-1].extra["K_hat_so_far"]
    assert all(r.passed for r in verify_bounded_implies_linear(sp, Y, h, eps=0, N=20))
    assert k10 == k20 == 0


def test_unbounded_projection_band_grows():
    sp = FreeGroupSpace(rank=2)
    h = free_group_left_multiplication(sp, (1,))
    Y = [tuple([1] * k) for k in range(0, 12)]  # a chunk of the axis itself
    reports = verify_bounded_implies_linear(sp, Y, h, eps=0, N=10)
    devs = [r.extra["deviation"] for r in reports]
    assert devs == sorted(devs) and devs[-1] > devs[0]  # negative control
    assert all(r.passed for r in reports)  # the asserted upper bound still holds


# -- Proximity and the product floor --------------------------------------------


def test_proximity_of_identical_sets_passes():
    sp = make_testbed_space("tree", branching=2, depth=5)
    pts = tuple(v for v in sp.points() if sp.distance(0, v) <= 2)
    U = QuasiConvexSet(points=pts, R=measure_quasiconvexity(sp, pts))
    rep = quasiconvex_proximity_check(sp, U, U, threshold=1, basepoint=0)
    assert rep.passed and rep.lhs == 0


def test_proximity_of_rays_sharing_a_tail():
    sp = make_testbed_space("tree", branching=2, depth=7)
    ray1 = [0]
    for k in range(1, 8):
        ray1.append(_vertex_by_label(sp, (0,) * k))
    start = _vertex_by_label(sp, (0, 1))
    ray2 = sp.geodesic(start, ray1[-1])
    Y = QuasiConvexSet(points=tuple(ray1), R=measure_quasiconvexity(sp, ray1))
    Z = QuasiConvexSet(points=tuple(ray2), R=measure_quasiconvexity(sp, ray2))
    assert Y.R == 0 and Z.R == 0
    rep = quasiconvex_proximity_check(sp, Y, Z, threshold=4, basepoint=0)
    assert rep.passed and rep.lhs == 0 and rep.rhs == 0  # shared tail, d = 0


def test_proximity_of_diverging_rays_is_not_applicable():
    sp = make_testbed_space("tree", branching=2, depth=7)
    ray1 = tuple(_vertex_by_label(sp, (0,) * k) for k in range(8))
    ray2 = tuple(_vertex_by_label(sp, (1,) * k) if k else 0 for k in range(8))
    Y = QuasiConvexSet(points=ray1, R=0)
    Z = QuasiConvexSet(points=ray2, R=0)
    rep = quasiconvex_proximity_check(sp, Y, Z, threshold=3, basepoint=0)
    assert rep.status == "not-applicable"
    assert rep.extra["best_product"] == 0  # rays diverge at the root


def test_axis_product_floor_zero_violations_on_tree():
    sp = make_testbed_space("tree", branching=3, depth=7, root_branching=4)
    h = tree_left_multiplication(sp, (1, 2))
    prof = displacement_profile(sp, h, 0, 3)
    axis = build_axis(sp, h, 0, (0, 2), profile=prof)
    R = measure_quasiconvexity(sp, axis.point_set())
    assert R == 0  # the axis here is a geodesic segment
    rng = random.Random(31)
    applicable = 0
    for _ in range(600):
        y, z = sp.sample(rng), sp.sample(rng)
        rep = verify_axis_product_floor(sp, axis, y, z, eps=0, delta=0, R=R)
        if rep.status == "not-applicable":
            continue
        applicable += 1
        assert rep.passed, rep.to_json_dict()
    assert applicable >= 30


# -- Report serialization --------------------------------------------------------


def test_lemma_report_json_lines_have_contract_fields():
    sp = make_testbed_space("tree", branching=2, depth=4)
    rep = thinness_check(sp, 1, 9, 17, 0)
    row = json.loads(rep.to_json_line())
    for key in ("lemma", "instance", "lhs", "rhs", "slack", "pass", "witness"):
        assert key in row
    assert row["pass"] is True and row["witness"] is None
