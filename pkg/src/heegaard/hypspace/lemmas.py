"""Metric-space constructions and instance-wise lemma verification.

Every verifier evaluates a concrete inequality on a finite instance and
emits a LemmaReport with both sides, the slack, and a witness on failure.
Constants (delta, R, eps) are always explicit inputs so reports are
reproducible; ``thinness_check`` and ``measure_quasiconvexity`` provide the
measured values.

Implemented checks:

- Gromov products and exact nearest-point projections (with eps slack);
- triangle thinness with the minimal sufficient delta per triangle;
- stability estimate of a quasi-geodesic over a window;
- projection triangle inequality with slack 2*eps + 4*delta + 2*R;
- projection quadrilateral inequality with slack 4*eps + 12*delta + 4*R,
  guarded by the separation precondition 2*eps + 8*delta + 2*R < d(y', z')
  (unmet precondition reports status "not-applicable", never a failure);
- displacement profiles d_n = d(x, h^n x) with subadditivity audit and the
  upper estimate alpha_upper = min d_n / n;
- invariant axes assembled from translates of [x, h(x)] with recorded
  quasi-geodesic constants;
- projection diameters of finite sets onto axes;
- the bounded-projection-implies-linear-growth band report;
- proximity of quasiconvex sets under a Gromov-product hypothesis
  (bound 2*delta + 2*R);
- the Gromov-product floor min(|x_n|, |x_m|) - (2*eps + 4*delta + 3*R) for
  points projecting far along an axis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .spaces import (
    GraphSpace,
    IsometryHandle,
    OrbitTruncationError,
    QuasiConvexSet,
    QuasiGeodesicPath,
    SpaceHandle,
    measure_quasiconvexity,
)

__all__ = [
    "LemmaReport",
    "DisplacementProfile",
    "DegenerateAxisError",
    "gromov_product",
    "quasi_project",
    "thinness_check",
    "stability_estimate",
    "verify_triangle_lemma",
    "verify_quadrilateral_lemma",
    "displacement_profile",
    "build_axis",
    "projection_diameter",
    "verify_bounded_implies_linear",
    "quasiconvex_proximity_check",
    "verify_axis_product_floor",
]


class DegenerateAxisError(RuntimeError):
    """Axis construction rejected: the isometry shows no positive drift."""


def _num(x):
    """Render Fractions as exact floats/ints for JSON reports."""
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    return x


@dataclass
class LemmaReport:
    """Outcome of one inequality check on one instance.

    status is "pass", "fail", or "not-applicable"; passed is None exactly
    when the instance did not meet the lemma's precondition.
    """

    lemma: str
    instance: str
    lhs: float | None
    rhs: float | None
    status: str
    witness: object = None
    extra: dict = field(default_factory=dict)

    @property
    def slack(self):
        if self.lhs is None or self.rhs is None:
            return None
        return self.rhs - self.lhs

    @property
    def passed(self):
        if self.status == "not-applicable":
            return None
        return self.status == "pass"

    def to_json_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "instance": self.instance,
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "slack": _num(self.slack),
            "pass": self.passed,
            "witness": self.witness if self.witness is None else repr(self.witness),
            **({"extra": {k: _num(v) for k, v in self.extra.items()}} if self.extra else {}),
        }

    def to_json_line(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def _report(lemma, instance, lhs, rhs, witness=None, extra=None) -> LemmaReport:
    status = "pass" if lhs <= rhs else "fail"
    return LemmaReport(
        lemma=lemma,
        instance=instance,
        lhs=lhs,
        rhs=rhs,
        status=status,
        witness=witness if status == "fail" else None,
        extra=extra or {},
    )


# -- Products and projections -------------------------------------------------


def gromov_product(space: SpaceHandle, basepoint, y, z) -> Fraction:
    """(y . z) at the basepoint: half the distance-sum defect."""
    return Fraction(
        space.distance(basepoint, y) + space.distance(basepoint, z) - space.distance(y, z),
        2,
    )


def quasi_project(space: SpaceHandle, target: QuasiConvexSet, y, eps=0):
    """The exact eps-near projection set {y' in U : d(y,y') <= d(y,U)+eps}."""
    dists = [(space.distance(y, u), u) for u in target.points]
    best = min(d for d, _ in dists)
    return tuple(u for d, u in dists if d <= best + eps)


# -- Thin triangles -----------------------------------------------------------


def thinness_check(space: SpaceHandle, x, y, z, delta) -> LemmaReport:
    """Check each side of the geodesic triangle xyz lies in the closed
    delta-neighborhood of the other two sides; also record the minimal
    sufficient delta for this triangle (canonical geodesics)."""
    sides = [space.geodesic(x, y), space.geodesic(y, z), space.geodesic(z, x)]
    minimal = 0
    worst_point = None
    for i, side in enumerate(sides):
        others = sides[(i + 1) % 3] + sides[(i + 2) % 3]
        for p in side:
            d = min(space.distance(p, q) for q in others)
            if d > minimal:
                minimal = d
                worst_point = p
    rep = _report(
        "thin-triangle",
        f"x={x} y={y} z={z} delta={delta}",
        minimal,
        delta,
        witness=worst_point,
        extra={"minimal_delta": minimal},
    )
    return rep


# -- Quasi-geodesic stability --------------------------------------------------


def stability_estimate(space: SpaceHandle, path: QuasiGeodesicPath, window: tuple[int, int]):
    """Max distance from path points in the window to the canonical geodesic
    joining the window endpoints' images (empirical stability constant)."""
    a, b = window
    if a > b:
        raise ValueError("empty window")
    lo = max(a, path.lo)
    hi = min(b, path.hi)
    if lo > hi:
        raise ValueError("window misses the path's parameter range")
    geo = space.geodesic(path.point_at(lo), path.point_at(hi))
    worst = 0
    for t in range(lo, hi + 1):
        p = path.point_at(t)
        worst = max(worst, min(space.distance(p, q) for q in geo))
    return worst


# -- Projection lemmas ---------------------------------------------------------


def verify_triangle_lemma(space, target: QuasiConvexSet, y, u, eps=0, delta=0) -> LemmaReport:
    """d(y,y') + d(y',u) <= d(y,u) + (2 eps + 4 delta + 2 R) for every
    near-projection y' of y; reports the worst case over y'."""
    if u not in target.points:
        raise ValueError("u must lie in the target set")
    bound = 2 * eps + 4 * delta + 2 * target.R
    worst_lhs, worst_wit = None, None
    for yp in quasi_project(space, target, y, eps):
        lhs = space.distance(y, yp) + space.distance(yp, u)
        if worst_lhs is None or lhs > worst_lhs:
            worst_lhs, worst_wit = lhs, yp
    rhs = space.distance(y, u) + bound
    return _report(
        "projection-triangle",
        f"y={y} u={u} eps={eps} delta={delta} R={target.R}",
        worst_lhs,
        rhs,
        witness=(y, worst_wit, u),
    )


def verify_quadrilateral_lemma(space, target: QuasiConvexSet, y, z, eps=0, delta=0) -> LemmaReport:
    """d(y,y') + d(y',z') + d(z',z) <= d(y,z) + (4 eps + 12 delta + 4 R),
    checked over projection pairs meeting the separation precondition
    2 eps + 8 delta + 2 R < d(y',z'); not-applicable when no pair does."""
    sep = 2 * eps + 8 * delta + 2 * target.R
    bound = 4 * eps + 12 * delta + 4 * target.R
    proj_y = quasi_project(space, target, y, eps)
    proj_z = quasi_project(space, target, z, eps)
    worst = None
    for yp in proj_y:
        for zp in proj_z:
            if space.distance(yp, zp) <= sep:
                continue
            lhs = space.distance(y, yp) + space.distance(yp, zp) + space.distance(zp, z)
            if worst is None or lhs > worst[0]:
                worst = (lhs, yp, zp)
    instance = f"y={y} z={z} eps={eps} delta={delta} R={target.R}"
    if worst is None:
        return LemmaReport(
            lemma="projection-quadrilateral",
            instance=instance,
            lhs=None,
            rhs=None,
            status="not-applicable",
            extra={"separation_needed": sep},
        )
    lhs, yp, zp = worst
    rhs = space.distance(y, z) + bound
    rep = _report("projection-quadrilateral", instance, lhs, rhs, witness=(y, yp, zp, z))
    rep.extra["separation"] = space.distance(yp, zp)
    return rep


# -- Displacement and axes -----------------------------------------------------


@dataclass
class DisplacementProfile:
    """d_n = d(x, h^n(x)) for 1 <= n <= N, with the subadditivity audit."""

    basepoint: object
    d: list[int]
    truncated_at: int | None = None

    @property
    def N(self) -> int:
        return len(self.d)

    @property
    def alpha_upper(self) -> Fraction:
        if not self.d:
            raise ValueError("empty profile")
        return min(Fraction(dn, n + 1) for n, dn in enumerate(self.d))

    def fekete_violations(self) -> list[tuple[int, int]]:
        bad = []
        for n in range(1, self.N + 1):
            for m in range(1, self.N + 1 - n):
                if self.d[n + m - 1] > self.d[n - 1] + self.d[m - 1]:
                    bad.append((n, m))
        return bad

    def to_json_dict(self) -> dict:
        return {
            "basepoint": repr(self.basepoint),
            "d": self.d,
            "alpha_upper": _num(self.alpha_upper),
            "fekete_violations": self.fekete_violations(),
            "truncated_at": self.truncated_at,
        }


def displacement_profile(space: SpaceHandle, h: IsometryHandle, x, N: int, allow_truncation: bool = False) -> DisplacementProfile:
    """Exact orbit displacements.  If the orbit leaves a finite testbed the
    error names the largest valid n; with allow_truncation=True a truncated
    profile is returned instead."""
    if N < 1:
        raise ValueError("N must be >= 1")
    d: list[int] = []
    cur = x
    for n in range(1, N + 1):
        try:
            cur = h.apply(cur, 1)
        except OrbitTruncationError:
            if allow_truncation and d:
                return DisplacementProfile(basepoint=x, d=d, truncated_at=n - 1)
            raise OrbitTruncationError(n - 1, f"orbit of {x} leaves the testbed at power {n}",
                                       partial=DisplacementProfile(basepoint=x, d=d, truncated_at=n - 1))
        d.append(space.distance(x, cur))
    return DisplacementProfile(basepoint=x, d=d)


def compute_m0(profile: DisplacementProfile) -> int:
    """Least m + 1 >= 3 such that |d_m / m - alpha| < alpha / 2, using the
    profile's alpha_upper as the stand-in for the limit."""
    alpha = profile.alpha_upper
    if alpha == 0:
        raise DegenerateAxisError("alpha estimate is zero")
    for m in range(2, profile.N + 1):
        if abs(Fraction(profile.d[m - 1], m) - alpha) < alpha / 2:
            return m + 1
    return profile.N + 1


def build_axis(space: SpaceHandle, h: IsometryHandle, x, window: tuple[int, int],
               profile: DisplacementProfile | None = None) -> QuasiGeodesicPath:
    """Concatenate the translates h^k([x, h(x)]) over the window into one
    path parameterized by arc length, with the recorded constants
    lam = 2 d_1 / alpha_upper and eps = M0 * d_1."""
    k_lo, k_hi = window
    if k_lo > k_hi:
        raise ValueError("empty window")
    if profile is None:
        profile = displacement_profile(space, h, x, max(3, k_hi - k_lo + 1), allow_truncation=False)
    alpha = profile.alpha_upper
    if alpha == 0:
        raise DegenerateAxisError("cannot build an axis for a zero-drift isometry")
    d1 = profile.d[0]
    m0 = compute_m0(profile)

    segment = space.geodesic(x, h.apply(x, 1))
    seg_len = len(segment) - 1
    if seg_len == 0:
        raise DegenerateAxisError("h fixes the basepoint")

    translates: dict[int, list] = {}

    def point_at(t: int):
        k, r = divmod(t, seg_len)
        if k > k_hi:  # only t = hi exactly: the far endpoint of the last segment
            k, r = k_hi, seg_len
        if k not in translates:
            translates[k] = [h.apply(p, k) for p in segment]
        return translates[k][r]

    lam = Fraction(2 * d1) / alpha
    eps = m0 * d1
    return QuasiGeodesicPath(
        space=space,
        lo=k_lo * seg_len,
        hi=(k_hi + 1) * seg_len,
        point_at_fn=point_at,
        lam=float(lam) if lam > 1 else 1.0,
        eps=float(eps),
        meta={"M0": m0, "alpha_upper": alpha, "d1": d1, "window": window},
    )


def projection_diameter(space: SpaceHandle, Y: Iterable, axis: QuasiGeodesicPath, eps=0):
    """Diameter of the union of near-projections of Y onto the axis points."""
    pts = tuple(axis.point_set())
    target = QuasiConvexSet(points=pts, R=0)
    pool = []
    Y = list(Y)
    if not Y:
        raise ValueError("empty set Y")
    for y in Y:
        pool.extend(quasi_project(space, target, y, eps))
    pool = list(dict.fromkeys(pool))
    return max(space.distance(a, b) for a in pool for b in pool)


def verify_bounded_implies_linear(space: SpaceHandle, Y: Sequence, h: IsometryHandle,
                                  eps, N: int, alpha=None) -> list[LemmaReport]:
    """Band report for D_n = d(Y, h^n(Y)): asserts the upper-bound direction
    D_n <= d(y, h^n y) for all y, and records the empirical deviation
    K-hat = max |D_n - n*alpha| (alpha defaults to the basepoint orbit's
    alpha_upper)."""
    Y = list(Y)
    if not Y:
        raise ValueError("empty set Y")
    if alpha is None:
        alpha = displacement_profile(space, h, Y[0], N).alpha_upper
    reports = []
    khat = 0
    for n in range(1, N + 1):
        images = [h.apply(y, n) for y in Y]
        D_n = min(space.distance(a, b) for a in Y for b in images)
        singles = min(space.distance(y, h.apply(y, n)) for y in Y)
        dev = abs(D_n - n * alpha)
        khat = max(khat, dev)
        rep = _report(
            "set-displacement-upper",
            f"n={n} |Y|={len(Y)} eps={eps}",
            D_n,
            singles,
            extra={"deviation": dev, "alpha": alpha, "K_hat_so_far": khat},
        )
        reports.append(rep)
    return reports


def quasiconvex_proximity_check(space: SpaceHandle, Y: QuasiConvexSet, Z: QuasiConvexSet,
                                threshold, basepoint, delta=0) -> LemmaReport:
    """If Y and Z contain points whose Gromov product at the basepoint
    exceeds the threshold (finite stand-in for converging to a common
    boundary point), check d(Y, Z) < 2 delta + 2 R with R = max of the two
    constants; otherwise not-applicable."""
    best = max(gromov_product(space, basepoint, y, z) for y in Y.points for z in Z.points)
    instance = f"|Y|={len(Y.points)} |Z|={len(Z.points)} threshold={threshold}"
    if best < threshold:
        return LemmaReport(
            lemma="quasiconvex-proximity",
            instance=instance,
            lhs=None,
            rhs=None,
            status="not-applicable",
            extra={"best_product": best},
        )
    dYZ = min(space.distance(y, z) for y in Y.points for z in Z.points)
    R = max(Y.R, Z.R)
    # Closed bound: the degenerate d = 0 = bound case (shared tails in a
    # tree with R = delta = 0) counts as proximate.
    rep = _report("quasiconvex-proximity", instance, dYZ, 2 * delta + 2 * R)
    rep.extra["best_product"] = best
    return rep


def verify_axis_product_floor(space: SpaceHandle, axis: QuasiGeodesicPath,
                              y, z, eps=0, delta=0, R=0) -> LemmaReport:
    """Gromov-product floor for points projecting forward along an axis:
    (y . z) >= min(|x_n|, |x_m|) - (2 eps + 4 delta + 3 R), where x_n, x_m
    are near-projections of y, z onto the axis, |.| is distance from the
    axis origin point_at(0), and the product is based there too.
    Not-applicable unless both projections sit at positive parameters."""
    basepoint = axis.point_at(0)
    by_param = [(t, axis.point_at(t)) for t in axis.parameters()]
    pts = tuple(p for _, p in by_param)
    target = QuasiConvexSet(points=pts, R=R)

    def far_projection(w):
        proj = set(quasi_project(space, target, w, eps))
        # deterministic choice: the near-projection with the largest parameter
        return max((t, p) for t, p in by_param if p in proj)

    tn, xn = far_projection(y)
    tm, xm = far_projection(z)
    instance = f"y={y} z={z} eps={eps} delta={delta} R={R}"
    if tn <= 0 or tm <= 0:
        return LemmaReport("axis-product-floor", instance, None, None, "not-applicable")
    floor = min(space.distance(basepoint, xn), space.distance(basepoint, xm)) - (2 * eps + 4 * delta + 3 * R)
    product = gromov_product(space, basepoint, y, z)
    # lhs <= rhs orientation: floor <= product
    return _report("axis-product-floor", instance, floor, product, witness=(xn, xm))
