"""Randomized verification suites for the projection lemmas.

An instance is (space, quasiconvex set U, probe points); constants are
measured, never assumed:

- R per instance: exact quasiconvexity constant of U over all geodesics;
- delta per space: two-pass protocol - first measure the minimal sufficient
  thinness of every geodesic triangle the lemma's proof touches across the
  whole sample, then re-evaluate every instance against the sample maximum.
  Tree instances therefore run with delta = 0 exactly.

Suites are fully determined by (space kinds, count, seed) and emit
LemmaReport JSON-lines via the CLI.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .lemmas import (
    LemmaReport,
    quasi_project,
    thinness_check,
    verify_quadrilateral_lemma,
    verify_triangle_lemma,
)
from .spaces import GraphSpace, QuasiConvexSet, make_testbed_space, measure_quasiconvexity

__all__ = [
    "SuiteResult",
    "default_suite_spaces",
    "random_quasiconvex_set",
    "run_triangle_suite",
    "run_quadrilateral_suite",
]


def default_suite_spaces() -> list[GraphSpace]:
    """The hyperbolic testbeds the acceptance suites run on."""
    return [
        make_testbed_space("tree", branching=2, depth=7),
        make_testbed_space("tiling_ball", radius=5),
    ]


def _is_tree(space: GraphSpace) -> bool:
    return space.name.startswith("tree(")


def random_quasiconvex_set(space: GraphSpace, rng: random.Random) -> QuasiConvexSet:
    """Tree: a metric ball (convex, R = 0).  Other spaces: a canonical
    geodesic between two random points, optionally thickened by a unit
    ball.  R is always measured exactly afterwards."""
    if _is_tree(space):
        center = space.sample(rng)
        radius = rng.randrange(0, 4)
        dist = space.distance_matrix()
        pts = tuple(int(v) for v in space.points() if dist[center, v] <= radius)
    else:
        a = space.sample(rng)
        b = space.sample(rng)
        core = space.geodesic(a, b)
        if rng.random() < 0.3:
            dist = space.distance_matrix()
            pts = tuple(sorted({int(v) for v in space.points()
                                if min(int(dist[v, c]) for c in core) <= 1}))
        else:
            pts = tuple(sorted(set(core)))
    return QuasiConvexSet(points=pts, R=measure_quasiconvexity(space, pts))


@dataclass
class SuiteResult:
    lemma: str
    reports: list[LemmaReport]
    delta_by_space: dict[str, int]
    eps_used: int
    stats: dict = field(default_factory=dict)

    def failures(self) -> list[LemmaReport]:
        return [r for r in self.reports if r.passed is False]

    def applicable(self) -> list[LemmaReport]:
        return [r for r in self.reports if r.status != "not-applicable"]


def _measure_suite_delta(space: GraphSpace, triangles) -> int:
    worst = 0
    for (x, y, z) in triangles:
        rep = thinness_check(space, x, y, z, 0)
        worst = max(worst, rep.extra["minimal_delta"])
    return worst


def run_triangle_suite(count: int, seed: int, spaces: list[GraphSpace] | None = None,
                       eps: int = 0) -> SuiteResult:
    """Two-pass projection-triangle suite: measure delta over every sampled
    instance triangle (y, y', u), then check
    d(y,y') + d(y',u) <= d(y,u) + 2 eps + 4 delta + 2 R on each instance."""
    spaces = spaces if spaces is not None else default_suite_spaces()
    rng = random.Random(seed)
    instances = []
    for i in range(count):
        space = spaces[i % len(spaces)]
        U = random_quasiconvex_set(space, rng)
        y = space.sample(rng)
        u = U.points[rng.randrange(len(U.points))]
        instances.append((space, U, y, u))

    # pass 1: measured delta per space over the triangles the lemma touches
    tris: dict[str, list] = {s.name: [] for s in spaces}
    for space, U, y, u in instances:
        inst_eps = 0 if _is_tree(space) else eps
        for yp in quasi_project(space, U, y, inst_eps):
            tris[space.name].append((y, yp, u))
    delta_by_space = {name: _measure_suite_delta(next(s for s in spaces if s.name == name), t)
                      for name, t in tris.items()}

    # pass 2: evaluate with the suite-maximum delta for that space
    reports = []
    for space, U, y, u in instances:
        inst_eps = 0 if _is_tree(space) else eps
        delta = 0 if _is_tree(space) else delta_by_space[space.name]
        rep = verify_triangle_lemma(space, U, y, u, eps=inst_eps, delta=delta)
        rep.extra["space"] = space.name
        reports.append(rep)
    return SuiteResult(
        lemma="projection-triangle",
        reports=reports,
        delta_by_space=delta_by_space,
        eps_used=eps,
        stats={"count": count, "seed": seed},
    )


def run_quadrilateral_suite(count: int, seed: int, spaces: list[GraphSpace] | None = None,
                            eps: int = 0) -> SuiteResult:
    """Two-pass projection-quadrilateral suite.  The separation precondition
    2 eps + 8 delta + 2 R < d(y', z') is evaluated with the measured
    constants; instances failing it report not-applicable.  Probe points are
    pushed toward opposite ends of the set's diameter so a healthy fraction
    of instances meets the precondition."""
    spaces = spaces if spaces is not None else default_suite_spaces()
    rng = random.Random(seed)
    instances = []
    for i in range(count):
        space = spaces[i % len(spaces)]
        U = _separable_quasiconvex_set(space, rng)
        # aim y and z at distinct projections: sample near opposite ends of U
        dist = space.distance_matrix()
        a = U.points[rng.randrange(len(U.points))]
        b = max(U.points, key=lambda p: dist[a, p])
        y = _near(space, rng, a, spread=2)
        z = _near(space, rng, b, spread=2)
        instances.append((space, U, y, z))

    tris: dict[str, list] = {s.name: [] for s in spaces}
    for space, U, y, z in instances:
        inst_eps = 0 if _is_tree(space) else eps
        for yp in quasi_project(space, U, y, inst_eps):
            for zp in quasi_project(space, U, z, inst_eps):
                tris[space.name].append((y, yp, zp))
                tris[space.name].append((yp, zp, z))
    delta_by_space = {name: _measure_suite_delta(next(s for s in spaces if s.name == name), t)
                      for name, t in tris.items()}

    reports = []
    met = 0
    for space, U, y, z in instances:
        inst_eps = 0 if _is_tree(space) else eps
        delta = 0 if _is_tree(space) else delta_by_space[space.name]
        rep = verify_quadrilateral_lemma(space, U, y, z, eps=inst_eps, delta=delta)
        rep.extra["space"] = space.name
        if rep.status != "not-applicable":
            met += 1
        reports.append(rep)
    return SuiteResult(
        lemma="projection-quadrilateral",
        reports=reports,
        delta_by_space=delta_by_space,
        eps_used=eps,
        stats={"count": count, "seed": seed, "met_precondition": met,
               "met_fraction": met / count if count else 0.0},
    )


def _separable_quasiconvex_set(space: GraphSpace, rng: random.Random) -> QuasiConvexSet:
    """Variant generator for the quadrilateral suite: favors sets whose ends
    are far enough apart that the separation precondition is satisfiable
    (tree balls of radius >= 2; long geodesic cores elsewhere)."""
    if _is_tree(space):
        center = space.sample(rng)
        radius = rng.randrange(2, 5)
        dist = space.distance_matrix()
        pts = tuple(int(v) for v in space.points() if dist[center, v] <= radius)
    else:
        dist = space.distance_matrix()
        a, b = space.sample(rng), space.sample(rng)
        for _ in range(4):  # keep the farthest of a few candidate pairs
            c, d = space.sample(rng), space.sample(rng)
            if dist[c, d] > dist[a, b]:
                a, b = c, d
        pts = tuple(sorted(set(space.geodesic(a, b))))
    return QuasiConvexSet(points=pts, R=measure_quasiconvexity(space, pts))


def _near(space: GraphSpace, rng: random.Random, anchor: int, spread: int) -> int:
    dist = space.distance_matrix()
    candidates = [int(v) for v in space.points() if dist[anchor, v] <= spread]
    return candidates[rng.randrange(len(candidates))]
