"""The curve graph of a closed surface as a lazily explored metric space.

Vertices are canonical curve classes; two distinct classes span an edge when
they have disjoint representatives.  Exact distances are out of reach at
scale, so the contract here is *certified intervals*:

- ``distance_interval`` returns a bracket [lo, hi] on the true graph
  distance.  ``lo`` comes from a budget-independent certificate ladder
  (equality 0 / distinctness 1 / positive intersection 2 / filling pair 3);
  ``hi`` comes from a deterministic bidirectional breadth-first search
  through the universe of curves with coordinates bounded by B, and is the
  length of an explicit curve path whose consecutive pairs are certified
  disjoint.  ``hi`` may be unknown when the budget runs out.
- ``distance_bruteforce`` is the oracle: exact BFS distance inside the
  induced graph on the bounded universe (an upper bound on the true
  distance; ``None`` flags unreachable-within-universe).
- ``as_metric_space`` wraps the adapter in the ``SpaceHandle`` interface so
  the hyperbolic-space machinery (displacement profiles, Gromov products)
  runs on the curve graph with interval-valued distances.

Interval semantics for downstream consumers: arithmetic on intervals is
interval arithmetic, and comparisons are DEFINITE — ``x > y`` is True only
when the brackets certify it, False when they cannot decide.  A verifier
that needs a comparison the brackets cannot decide must report
not-applicable rather than pass/fail.  Intervals produced by arithmetic
carry no certificates; only intervals emitted by distance queries do, and
those replay: see ``replay_interval_json``.

Adjacency tests are engine-certified (exact geometric intersection zero)
behind two sound prefilters: the pants-curve crossing readoff and a nonzero
homological intersection pairing (either one already forces crossings).
Searches are deterministic: frontiers and neighbor sets are ordered by
(coordinate norm, lexicographic coordinates), and the optional worker pool
only parallelizes independent adjacency tests, merged back in canonical
order, so results are independent of thread count.
"""

from __future__ import annotations

import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .hypspace.spaces import IsometryHandle, SpaceHandle
from .surface import (
    CurveClass,
    SurfaceSpec,
    TwistWord,
    apply_word,
    are_disjoint,
    curve_from_json_dict,
    curve_to_json_dict,
    enumerate_curves,
    homology_class,
    intersection_number,
    is_filling_pair,
    surface_spec,
)

__all__ = [
    "BudgetReport",
    "CertificateError",
    "CurveGraphAdapter",
    "CurveGraphSpace",
    "DistanceInterval",
    "FractionInterval",
    "NeighborSet",
    "SearchBudget",
    "UnknownDistanceError",
    "LO_EQUALITY",
    "LO_DISTINCTNESS",
    "LO_POSITIVE_INTERSECTION",
    "LO_FILLING_PAIR",
    "as_metric_space",
    "distance_bruteforce",
    "distance_interval",
    "frontier_key",
    "gromov_product_interval",
    "interval_from_json_dict",
    "interval_to_json_dict",
    "interval_to_json_line",
    "neighbors",
    "replay_interval_json",
    "word_isometry",
]

DEFAULT_NODE_CAP = 2000

LO_EQUALITY = "equality"
LO_DISTINCTNESS = "distinctness"
LO_POSITIVE_INTERSECTION = "positive-intersection"
LO_FILLING_PAIR = "filling-pair"
_LO_KINDS = (LO_EQUALITY, LO_DISTINCTNESS, LO_POSITIVE_INTERSECTION,
             LO_FILLING_PAIR)


class CertificateError(ValueError):
    """A distance certificate failed to replay."""


class UnknownDistanceError(RuntimeError):
    """A path/geodesic was requested but the search budget left hi unknown."""


# -- Budgets ------------------------------------------------------------------


@dataclass(frozen=True)
class SearchBudget:
    """Resources granted to one distance query: the coordinate bound of the
    search universe and a cap on the number of nodes expanded."""

    bound: int
    node_cap: int = DEFAULT_NODE_CAP

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError("search bound must be >= 1")
        if self.node_cap < 1:
            raise ValueError("node cap must be >= 1")


@dataclass(frozen=True)
class BudgetReport:
    """What one query actually consumed; ``truncated`` means the node cap
    stopped the search before it exhausted its universe."""

    bound: int
    node_cap: int
    nodes_expanded: int
    truncated: bool

    def to_json_dict(self) -> dict:
        return {"bound": self.bound, "node_cap": self.node_cap,
                "nodes_expanded": self.nodes_expanded,
                "truncated": self.truncated}


# -- Distance intervals --------------------------------------------------------


def _interval_bounds(x) -> tuple[int, int | None] | None:
    if isinstance(x, DistanceInterval):
        return x.lo, x.hi
    if isinstance(x, int) and not isinstance(x, bool):
        return x, x
    return None


@dataclass(frozen=True)
class DistanceInterval:
    """Certified bracket lo <= d <= hi on a curve-graph distance.

    ``hi`` is None when unknown.  ``lo_certificate`` names the rung of the
    lower-bound ladder; ``hi_certificate`` is the explicit curve path whose
    consecutive disjointness realizes ``hi``.  Intervals built by arithmetic
    carry no certificates (both None).

    Comparisons are definite: they answer True only when the brackets decide
    the question, False otherwise (so ``not (x > y)`` does NOT mean
    ``x <= y`` — it may merely be undecided).  Equality is plain field
    equality of the two interval objects.
    """

    lo: int
    hi: int | None
    lo_certificate: str | None = None
    hi_certificate: tuple[CurveClass, ...] | None = None
    budget: BudgetReport | None = None

    def __post_init__(self):
        if self.lo < 0:
            raise ValueError("lo must be a natural number")
        if self.hi is not None and self.hi < self.lo:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")
        if self.lo_certificate is not None and \
                self.lo_certificate not in _LO_KINDS:
            raise ValueError(f"unknown lo certificate {self.lo_certificate!r}")
        if self.hi_certificate is not None:
            if self.hi is None:
                raise ValueError("path certificate with unknown hi")
            if len(self.hi_certificate) != self.hi + 1:
                raise ValueError("path length does not match hi")

    # -- classification --

    @property
    def known(self) -> bool:
        return self.hi is not None

    @property
    def exact(self) -> bool:
        return self.hi is not None and self.hi == self.lo

    def overlaps(self, other: "DistanceInterval") -> bool:
        """Whether some integer lies in both brackets (unknown hi = +inf)."""
        lo = max(self.lo, other.lo)
        his = [h for h in (self.hi, other.hi) if h is not None]
        return all(lo <= h for h in his)

    # -- interval arithmetic (certificates do not survive arithmetic) --

    def __add__(self, other):
        bounds = _interval_bounds(other)
        if bounds is None:
            return NotImplemented
        olo, ohi = bounds
        hi = None if self.hi is None or ohi is None else self.hi + ohi
        return DistanceInterval(self.lo + olo, hi)

    __radd__ = __add__

    # -- definite comparisons --

    def __gt__(self, other):
        bounds = _interval_bounds(other)
        if bounds is None:
            return NotImplemented
        _, ohi = bounds
        return ohi is not None and self.lo > ohi

    def __ge__(self, other):
        bounds = _interval_bounds(other)
        if bounds is None:
            return NotImplemented
        _, ohi = bounds
        return ohi is not None and self.lo >= ohi

    def __lt__(self, other):
        bounds = _interval_bounds(other)
        if bounds is None:
            return NotImplemented
        olo, _ = bounds
        return self.hi is not None and self.hi < olo

    def __le__(self, other):
        bounds = _interval_bounds(other)
        if bounds is None:
            return NotImplemented
        olo, _ = bounds
        return self.hi is not None and self.hi <= olo


@dataclass(frozen=True)
class FractionInterval:
    """Exact rational bracket, used for derived quantities (Gromov products)
    whose endpoints are half-integers."""

    lo: Fraction
    hi: Fraction | None

    def __post_init__(self):
        if self.hi is not None and self.hi < self.lo:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def exact(self) -> bool:
        return self.hi is not None and self.hi == self.lo


@dataclass(frozen=True)
class NeighborSet:
    """Curves adjacent to a vertex within the bounded universe; ``truncated``
    reports that the universe enumeration itself was capped (so the set is
    complete only within what was enumerated)."""

    curves: tuple[CurveClass, ...]
    truncated: bool


def frontier_key(c: CurveClass) -> tuple:
    """Deterministic exploration order: coordinate norm, then lexicographic."""
    return (sum(c.m) + sum(abs(v) for v in c.t), c.m, c.t)


# -- The adapter ----------------------------------------------------------------


class CurveGraphAdapter:
    """Memoizing gateway to the curve graph of one surface.

    ``bound`` is the default coordinate bound B of the search universe;
    ``node_cap`` the default per-query expansion cap; ``universe_cap``
    optionally truncates the universe enumeration itself (flagged through
    ``NeighborSet.truncated``); ``workers`` > 1 runs independent adjacency
    tests in a thread pool (results are merged in canonical order and are
    identical for any worker count).

    All memo tables are written under one lock and only grow; every cached
    value is a pure function of its key, so concurrent readers are safe.
    """

    def __init__(self, spec: SurfaceSpec | int, bound: int,
                 node_cap: int = DEFAULT_NODE_CAP,
                 universe_cap: int | None = None, workers: int = 1):
        self.spec = surface_spec(spec) if isinstance(spec, int) else spec
        if bound < 1:
            raise ValueError("universe bound must be >= 1")
        if workers < 1:
            raise ValueError("workers must be >= 1")
        self.bound = bound
        self.node_cap = node_cap
        self.universe_cap = universe_cap
        self.workers = workers
        self._lock = threading.Lock()
        self._universe: dict[int, tuple[tuple[CurveClass, ...], bool]] = {}
        self._neighbor_memo: dict[tuple[CurveClass, int], NeighborSet] = {}
        self._disjoint_memo: dict[tuple[CurveClass, CurveClass], bool] = {}
        self._homology_memo: dict[CurveClass, tuple[int, ...]] = {}
        self._ladder_memo: dict[tuple[CurveClass, CurveClass],
                                tuple[int, str]] = {}
        self._interval_memo: dict[tuple[CurveClass, CurveClass, SearchBudget],
                                  DistanceInterval] = {}

    # -- bookkeeping --

    def default_budget(self) -> SearchBudget:
        return SearchBudget(self.bound, self.node_cap)

    def _check_curve(self, a: CurveClass) -> None:
        if a.genus != self.spec.genus:
            raise ValueError(
                f"curve lives on genus {a.genus}, adapter on genus "
                f"{self.spec.genus}")

    def universe(self, bound: int | None = None) \
            -> tuple[tuple[CurveClass, ...], bool]:
        """All canonical classes with coordinates bounded by ``bound``, in
        enumeration order, plus the enumeration-truncation flag."""
        bound = self.bound if bound is None else bound
        got = self._universe.get(bound)
        if got is None:
            res = enumerate_curves(self.spec, bound, cap=self.universe_cap)
            got = (tuple(res.curves), res.truncated)
            with self._lock:
                self._universe.setdefault(bound, got)
        return got

    # -- adjacency --

    def _homology(self, a: CurveClass) -> tuple[int, ...]:
        got = self._homology_memo.get(a)
        if got is None:
            got = homology_class(a)
            with self._lock:
                self._homology_memo.setdefault(a, got)
        return got

    def _pairing(self, a: CurveClass, b: CurveClass) -> int:
        """Algebraic intersection pairing through homology classes: a nonzero
        value forces geometric crossings, so it is a sound disjointness
        prefilter (zero decides nothing)."""
        u = self._homology(a)
        v = self._homology(b)
        J = self.spec._pairing_matrix
        return sum(u[i] * J[i][j] * v[j]
                   for i in range(len(u)) for j in range(len(v))
                   if u[i] and J[i][j])

    def disjoint(self, a: CurveClass, b: CurveClass) -> bool:
        """Engine-certified edge test (with sound prefilters)."""
        self._check_curve(a)
        self._check_curve(b)
        if a == b:
            return False
        key = (a, b) if a < b else (b, a)
        got = self._disjoint_memo.get(key)
        if got is None:
            if not any(a.m) or not any(b.m):
                # pants-curve fast path inside intersection_number
                got = intersection_number(a, b) == 0
            elif self._pairing(a, b) != 0:
                got = False
            else:
                got = are_disjoint(a, b)
            with self._lock:
                self._disjoint_memo.setdefault(key, got)
        return got

    def neighbors(self, a: CurveClass, bound: int | None = None) -> NeighborSet:
        """All universe members adjacent to ``a`` (``a`` itself need not lie
        in the universe), in deterministic (norm, lex) order."""
        self._check_curve(a)
        bound = self.bound if bound is None else bound
        if bound < 1:
            raise ValueError("universe bound must be >= 1")
        key = (a, bound)
        got = self._neighbor_memo.get(key)
        if got is None:
            members, truncated = self.universe(bound)
            candidates = [b for b in members if b != a]
            if self.workers > 1:
                with ThreadPoolExecutor(max_workers=self.workers) as pool:
                    flags = list(pool.map(lambda b: self.disjoint(a, b),
                                          candidates))
            else:
                flags = [self.disjoint(a, b) for b in candidates]
            curves = tuple(sorted(
                (b for b, flag in zip(candidates, flags) if flag),
                key=frontier_key))
            got = NeighborSet(curves, truncated)
            with self._lock:
                self._neighbor_memo.setdefault(key, got)
        return got

    # -- lower-bound ladder (budget-independent) --

    def lower_bound(self, a: CurveClass, b: CurveClass) -> tuple[int, str]:
        """(lo, certificate kind): equality 0, distinctness 1, positive
        intersection 2, filling pair 3."""
        self._check_curve(a)
        self._check_curve(b)
        if a == b:
            return 0, LO_EQUALITY
        key = (a, b) if a < b else (b, a)
        got = self._ladder_memo.get(key)
        if got is None:
            if self.disjoint(a, b):
                got = (1, LO_DISTINCTNESS)
            elif is_filling_pair(a, b):
                got = (3, LO_FILLING_PAIR)
            else:
                got = (2, LO_POSITIVE_INTERSECTION)
            with self._lock:
                self._ladder_memo.setdefault(key, got)
        return got

    # -- upper bound: bidirectional level-synchronized BFS --

    def _search_hi(self, a: CurveClass, b: CurveClass, budget: SearchBudget):
        """Shortest path from a to b through the bounded universe.

        Returns (hi, path, nodes_expanded, truncated):
        - complete search: hi = exact distance within the induced graph on
          universe(B) + {a, b}, or hi = None when no path exists there;
        - truncated search (node cap): hi = best path found so far (sound
          upper bound, possibly not optimal) or None.
        """
        if a == b:
            return 0, (a,), 0, False
        if self.disjoint(a, b):
            return 1, (a, b), 0, False

        dist_a: dict[CurveClass, int] = {a: 0}
        dist_b: dict[CurveClass, int] = {b: 0}
        parent_a: dict[CurveClass, CurveClass | None] = {a: None}
        parent_b: dict[CurveClass, CurveClass | None] = {b: None}
        frontier_a: list[CurveClass] = [a]
        frontier_b: list[CurveClass] = [b]
        radius = {"a": 0, "b": 0}
        best: int | None = None
        meet: CurveClass | None = None
        expanded = 0
        truncated = False

        def consider(node: CurveClass) -> None:
            nonlocal best, meet
            da = dist_a.get(node)
            db = dist_b.get(node)
            if da is not None and db is not None:
                cand = da + db
                if best is None or cand < best:
                    best, meet = cand, node

        while frontier_a and frontier_b and not truncated:
            if best is not None and radius["a"] + radius["b"] >= best:
                break
            # expand the smaller frontier one full level
            if len(frontier_a) <= len(frontier_b):
                side, frontier, dist, parent = "a", frontier_a, dist_a, parent_a
            else:
                side, frontier, dist, parent = "b", frontier_b, dist_b, parent_b
            next_frontier: list[CurveClass] = []
            for node in sorted(frontier, key=frontier_key):
                if expanded >= budget.node_cap:
                    truncated = True
                    break
                expanded += 1
                for nb in self.neighbors(node, budget.bound).curves:
                    if nb not in dist:
                        dist[nb] = dist[node] + 1
                        parent[nb] = node
                        next_frontier.append(nb)
                        consider(nb)
            if not truncated:
                radius[side] += 1
                if side == "a":
                    frontier_a = next_frontier
                else:
                    frontier_b = next_frontier

        if best is None:
            return None, None, expanded, truncated
        path_front: list[CurveClass] = []
        cur: CurveClass | None = meet
        while cur is not None:
            path_front.append(cur)
            cur = parent_a[cur]
        path_front.reverse()
        cur = parent_b[meet]
        while cur is not None:
            path_front.append(cur)
            cur = parent_b[cur]
        path = tuple(path_front)
        assert len(path) == best + 1
        assert path[0] == a and path[-1] == b
        assert all(self.disjoint(u, v) for u, v in zip(path, path[1:]))
        return best, path, expanded, truncated

    # -- the public queries --

    def distance_interval(self, a: CurveClass, b: CurveClass,
                          budget: SearchBudget | None = None) -> DistanceInterval:
        """Certified bracket on d(a, b); symmetric and memoized per budget."""
        self._check_curve(a)
        self._check_curve(b)
        if budget is None:
            budget = self.default_budget()
        key = (a, b) if a <= b else (b, a)
        memo_key = (key[0], key[1], budget)
        got = self._interval_memo.get(memo_key)
        if got is None:
            lo, lo_cert = self.lower_bound(a, b)
            hi, path, expanded, truncated = self._search_hi(key[0], key[1],
                                                            budget)
            if hi is not None and hi < lo:
                raise AssertionError(
                    f"oracle inconsistency: lo {lo} > hi {hi} for {a} vs {b}")
            got = DistanceInterval(
                lo=lo, hi=hi, lo_certificate=lo_cert, hi_certificate=path,
                budget=BudgetReport(budget.bound, budget.node_cap, expanded,
                                    truncated))
            with self._lock:
                self._interval_memo.setdefault(memo_key, got)
        if (a, b) != key and got.hi_certificate is not None:
            return DistanceInterval(got.lo, got.hi, got.lo_certificate,
                                    tuple(reversed(got.hi_certificate)),
                                    got.budget)
        return got

    def distance_bruteforce(self, a: CurveClass, b: CurveClass,
                            bound: int | None = None,
                            universe: Sequence[CurveClass] | None = None) \
            -> int | None:
        """Exact BFS distance in the induced graph on the bounded universe;
        None means unreachable within that universe.  Endpoints must lie in
        the universe.

        ``universe`` replaces the enumerated curve universe with an explicit
        one (the bounded genus-2/-3 universes are measured connected at desk
        scale, so the unreachable flag only ever fires on restricted
        universes; restricted universes also serve consumers that search
        inside special curve families)."""
        self._check_curve(a)
        self._check_curve(b)
        if universe is None:
            members, _ = self.universe(bound)
        else:
            members = tuple(universe)
            for c in members:
                self._check_curve(c)
        member_set = set(members)
        for c in (a, b):
            if c not in member_set:
                raise ValueError(
                    f"endpoint {c.m}/{c.t} lies outside the search universe")

        def adjacent(node: CurveClass) -> Iterable[CurveClass]:
            if universe is None:
                return self.neighbors(node, bound).curves
            return tuple(c for c in sorted(member_set, key=frontier_key)
                         if self.disjoint(node, c))

        if a == b:
            return 0
        dist = {a: 0}
        frontier = [a]
        while frontier:
            next_frontier: list[CurveClass] = []
            for node in sorted(frontier, key=frontier_key):
                for nb in adjacent(node):
                    if nb == b:
                        return dist[node] + 1
                    if nb not in dist:
                        dist[nb] = dist[node] + 1
                        next_frontier.append(nb)
            frontier = next_frontier
        return None


# -- Spec-level convenience functions -------------------------------------------


def neighbors(adapter: CurveGraphAdapter, a: CurveClass,
              bound: int | None = None) -> NeighborSet:
    return adapter.neighbors(a, bound)


def distance_interval(adapter: CurveGraphAdapter, a: CurveClass, b: CurveClass,
                      budget: SearchBudget | None = None) -> DistanceInterval:
    return adapter.distance_interval(a, b, budget)


def distance_bruteforce(adapter: CurveGraphAdapter, a: CurveClass,
                        b: CurveClass, bound: int | None = None,
                        universe: Sequence[CurveClass] | None = None) \
        -> int | None:
    return adapter.distance_bruteforce(a, b, bound, universe)


# -- SpaceHandle adapter ----------------------------------------------------------


class CurveGraphSpace(SpaceHandle):
    """Interval-valued metric-space view of the curve graph.

    ``distance`` returns DistanceInterval objects (the ``exact`` property is
    the per-query exactness flag; the space-level ``exact_metric`` flag is
    False, unlike the synthetic testbeds).  ``geodesic`` returns the
    certified path realizing hi — a true geodesic exactly when the interval
    is exact — and raises UnknownDistanceError when the budget left hi
    unknown.
    """

    exact_metric = False

    def __init__(self, adapter: CurveGraphAdapter,
                 budget: SearchBudget | None = None):
        self.adapter = adapter
        self.budget = budget if budget is not None else adapter.default_budget()

    def distance(self, u: CurveClass, v: CurveClass) -> DistanceInterval:
        return self.adapter.distance_interval(u, v, self.budget)

    def geodesic(self, u: CurveClass, v: CurveClass) -> list[CurveClass]:
        interval = self.distance(u, v)
        if interval.hi_certificate is None:
            raise UnknownDistanceError(
                f"no path within budget {self.budget} for {u} vs {v}")
        return list(interval.hi_certificate)

    def points(self) -> list[CurveClass]:
        members, _ = self.adapter.universe(self.budget.bound)
        return list(members)

    def sample(self, rng) -> CurveClass:
        return rng.choice(self.points())


def as_metric_space(adapter: CurveGraphAdapter,
                    budget: SearchBudget | None = None) -> CurveGraphSpace:
    return CurveGraphSpace(adapter, budget)


def word_isometry(space: CurveGraphSpace, word: TwistWord) -> IsometryHandle:
    """The curve-graph isometry induced by a twist word (total: never
    truncates, unlike the finite testbeds)."""
    if word.genus != space.adapter.spec.genus:
        raise ValueError("word and space live on different surfaces")
    inverse = word.inverse()
    return IsometryHandle(
        name=str(word) or "identity",
        space=space,
        fwd=lambda c: apply_word(word, c),
        inv=lambda c: apply_word(inverse, c),
    )


def gromov_product_interval(space: CurveGraphSpace, basepoint: CurveClass,
                            y: CurveClass, z: CurveClass) -> FractionInterval:
    """Bracket on the Gromov product (y . z) at the basepoint, from the three
    distance brackets; collapses to a point when all three are exact."""
    d_by = space.distance(basepoint, y)
    d_bz = space.distance(basepoint, z)
    d_yz = space.distance(y, z)
    lo = Fraction(0)
    if d_yz.hi is not None:
        lo = max(lo, Fraction(d_by.lo + d_bz.lo - d_yz.hi, 2))
    hi = None
    if d_by.hi is not None and d_bz.hi is not None:
        hi = Fraction(d_by.hi + d_bz.hi - d_yz.lo, 2)
    return FractionInterval(lo, hi)


# -- JSON emission and replay -----------------------------------------------------


def interval_to_json_dict(a: CurveClass, b: CurveClass,
                          interval: DistanceInterval) -> dict:
    """Self-contained certificate payload: replayable from the JSON alone
    (the endpoints ride along for exactly that purpose)."""
    return {
        "endpoints": [curve_to_json_dict(a), curve_to_json_dict(b)],
        "lo": interval.lo,
        "hi": interval.hi if interval.hi is not None else "unknown",
        "lo_cert": interval.lo_certificate,
        "path": (None if interval.hi_certificate is None else
                 [curve_to_json_dict(c) for c in interval.hi_certificate]),
        "budget": (None if interval.budget is None else
                   interval.budget.to_json_dict()),
    }


def interval_to_json_line(a: CurveClass, b: CurveClass,
                          interval: DistanceInterval) -> str:
    return json.dumps(interval_to_json_dict(a, b, interval), sort_keys=True)


def interval_from_json_dict(payload: dict) \
        -> tuple[CurveClass, CurveClass, DistanceInterval]:
    """Parse a certificate payload back into endpoint classes + interval
    (structural checks only; ``replay_interval_json`` re-proves it)."""
    try:
        a = curve_from_json_dict(payload["endpoints"][0])
        b = curve_from_json_dict(payload["endpoints"][1])
        lo = int(payload["lo"])
        hi = payload["hi"]
        hi = None if hi == "unknown" or hi is None else int(hi)
        lo_cert = payload["lo_cert"]
        raw_path = payload.get("path")
        budget = payload.get("budget")
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise CertificateError(f"malformed interval payload: {exc}") from exc
    path = None
    if raw_path is not None:
        path = tuple(curve_from_json_dict(c) for c in raw_path)
    report = None
    if budget is not None:
        try:
            report = BudgetReport(int(budget["bound"]), int(budget["node_cap"]),
                                  int(budget["nodes_expanded"]),
                                  bool(budget["truncated"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise CertificateError(f"malformed budget payload: {exc}") from exc
    try:
        interval = DistanceInterval(lo, hi, lo_cert, path, report)
    except ValueError as exc:
        raise CertificateError(str(exc)) from exc
    return a, b, interval


def replay_interval_json(payload: dict | str) \
        -> tuple[CurveClass, CurveClass, DistanceInterval]:
    """Re-validate every certificate in a payload from scratch.

    Re-runs the lower-bound predicate and every consecutive-disjointness test
    on the path against the geometry engine; raises CertificateError on the
    first failure, returns the re-certified triple on success.
    """
    if isinstance(payload, str):
        try:
            payload = json.loads(payload)
        except json.JSONDecodeError as exc:
            raise CertificateError(f"payload is not JSON: {exc}") from exc
    a, b, interval = interval_from_json_dict(payload)

    kind = interval.lo_certificate
    checks: dict[str, tuple[int, Callable[[], bool]]] = {
        LO_EQUALITY: (0, lambda: a == b),
        LO_DISTINCTNESS: (1, lambda: a != b),
        LO_POSITIVE_INTERSECTION: (2, lambda: intersection_number(a, b) > 0),
        LO_FILLING_PAIR: (3, lambda: is_filling_pair(a, b)),
    }
    if kind not in checks:
        raise CertificateError(f"unknown lo certificate kind {kind!r}")
    rung, predicate = checks[kind]
    if interval.lo != rung:
        raise CertificateError(
            f"lo = {interval.lo} does not match certificate {kind!r} "
            f"(expected {rung})")
    if not predicate():
        raise CertificateError(f"lo certificate {kind!r} failed to replay")

    if interval.hi is not None:
        path = interval.hi_certificate
        if path is None:
            raise CertificateError("hi known but no path certificate")
        if path[0] != a or path[-1] != b:
            raise CertificateError("path endpoints do not match the pair")
        if len(path) != interval.hi + 1:
            raise CertificateError("path length does not realize hi")
        for u, v in zip(path, path[1:]):
            if not are_disjoint(u, v):
                raise CertificateError(
                    f"path step {u.m}/{u.t} -> {v.m}/{v.t} is not an edge")
        if interval.lo > interval.hi:
            raise CertificateError("certified lo exceeds certified hi")
    return a, b, interval
