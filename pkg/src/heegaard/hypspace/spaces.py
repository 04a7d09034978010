"""Finite graph testbeds used as exact geodesic metric spaces.

Core claims implemented here:

- every testbed is a finite unit-edge graph; the metric is the exact BFS
  metric (integers), and geodesics are reconstructed deterministically
  (lexicographically smallest next vertex among those that make progress);
- ``tree`` and ``tiling_ball`` are the hyperbolic testbeds, ``grid`` and
  ``cycle`` the negative controls;
- isometries are partial maps with explicit truncation reporting: applying
  one outside its domain raises ``OrbitTruncationError`` naming the largest
  valid power;
- a symbolic free-group space provides exact distances for arbitrarily deep
  orbits without materializing a ball (used for long displacement profiles).

Everything is deterministic; samplers take an explicit ``random.Random``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "SpaceHandle",
    "GraphSpace",
    "FreeGroupSpace",
    "IsometryHandle",
    "QuasiConvexSet",
    "QuasiGeodesicPath",
    "SizeCapError",
    "OrbitTruncationError",
    "make_testbed_space",
    "tiling_layer_sizes",
    "grid_translation",
    "cycle_rotation",
    "tree_left_multiplication",
    "free_group_left_multiplication",
    "measure_quasiconvexity",
    "space_to_adjacency_text",
    "space_from_adjacency_text",
]

POINT_CAP = 200_000


class SizeCapError(ValueError):
    """Requested testbed would exceed the configured point cap."""


class OrbitTruncationError(RuntimeError):
    """An isometry power left the finite testbed.

    ``largest_valid`` is the largest n for which h^n(x) is still defined;
    ``partial`` optionally carries whatever profile was computed so far.
    """

    def __init__(self, largest_valid: int, message: str = "", partial=None):
        super().__init__(message or f"orbit leaves the testbed after n = {largest_valid}")
        self.largest_valid = largest_valid
        self.partial = partial


# -- Space handles -----------------------------------------------------------


class SpaceHandle:
    """Interface shared by the graph testbeds and the symbolic spaces.

    distance(u, v) -> int, geodesic(u, v) -> list of points realizing it at
    unit steps, points() -> iterable universe (may raise for symbolic
    spaces), sample(rng) -> point.
    """

    def distance(self, u, v) -> int:
        raise NotImplementedError

    def geodesic(self, u, v) -> list:
        raise NotImplementedError

    def points(self) -> Sequence:
        raise NotImplementedError

    def sample(self, rng: random.Random):
        raise NotImplementedError


@dataclass(frozen=True)
class GraphSpace(SpaceHandle):
    """Finite unit-edge graph with the exact shortest-path metric."""

    name: str
    adjacency: tuple[tuple[int, ...], ...]
    labels: tuple = ()

    @property
    def n(self) -> int:
        return len(self.adjacency)

    def points(self) -> range:
        return range(self.n)

    def sample(self, rng: random.Random) -> int:
        return rng.randrange(self.n)

    def distance_matrix(self) -> np.ndarray:
        cached = _DIST_CACHE.get(id(self))
        if cached is None:
            cached = _all_pairs_bfs(self.adjacency)
            _DIST_CACHE[id(self)] = cached
            _DIST_KEEPALIVE.append(self)
        return cached

    def distance(self, u: int, v: int) -> int:
        return int(self.distance_matrix()[u, v])

    def geodesic(self, u: int, v: int) -> list[int]:
        # Deterministic: always step to the smallest-index neighbor that
        # decreases the remaining distance.
        dist = self.distance_matrix()
        path = [u]
        cur = u
        while cur != v:
            remaining = dist[cur, v]
            cur = min(w for w in self.adjacency[cur] if dist[w, v] == remaining - 1)
            path.append(cur)
        return path

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]


_DIST_CACHE: dict[int, np.ndarray] = {}
_DIST_KEEPALIVE: list = []


def _all_pairs_bfs(adjacency: Sequence[Sequence[int]]) -> np.ndarray:
    n = len(adjacency)
    dist = np.full((n, n), -1, dtype=np.int32)
    for src in range(n):
        row = dist[src]
        row[src] = 0
        frontier = [src]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for u in frontier:
                for w in adjacency[u]:
                    if row[w] < 0:
                        row[w] = d
                        nxt.append(w)
            frontier = nxt
    if (dist < 0).any():
        raise ValueError("testbed graph is not connected")
    return dist


# -- Testbed constructions ---------------------------------------------------


def make_testbed_space(kind: str, **params) -> GraphSpace:
    """Build one of the synthetic testbeds.

    kinds: ``tree`` (branching, depth, optional root_branching),
    ``cycle`` (length), ``grid`` (width, height), ``tiling_ball`` (radius,
    fixed degree-7 triangulation).
    """
    if kind == "tree":
        return _make_tree(**params)
    if kind == "cycle":
        return _make_cycle(**params)
    if kind == "grid":
        return _make_grid(**params)
    if kind == "tiling_ball":
        return _make_tiling_ball(**params)
    raise ValueError(f"unknown testbed kind: {kind!r}")


def _check_cap(count: int) -> None:
    if count > POINT_CAP:
        raise SizeCapError(f"testbed would have {count} points (cap {POINT_CAP})")


def _make_tree(branching: int, depth: int, root_branching: int | None = None) -> GraphSpace:
    """Rooted tree: the root has ``root_branching`` children (default
    ``branching``), every other internal vertex has ``branching`` children."""
    if branching < 1 or depth < 0:
        raise ValueError("branching must be >= 1 and depth >= 0")
    rb = branching if root_branching is None else root_branching
    adjacency: list[list[int]] = [[]]
    layer = [0]
    labels: list[tuple[int, ...]] = [()]
    for level in range(depth):
        nxt = []
        for parent in layer:
            k = rb if level == 0 else branching
            for i in range(k):
                child = len(adjacency)
                _check_cap(child + 1)
                adjacency.append([parent])
                adjacency[parent].append(child)
                labels.append(labels[parent] + (i,))
                nxt.append(child)
        layer = nxt
    adj = tuple(tuple(sorted(ns)) for ns in adjacency)
    return GraphSpace(name=f"tree(b={branching},d={depth},rb={rb})", adjacency=adj, labels=tuple(labels))


def _make_cycle(length: int) -> GraphSpace:
    if length < 3:
        raise ValueError("cycle length must be >= 3")
    _check_cap(length)
    adj = tuple(tuple(sorted(((i - 1) % length, (i + 1) % length))) for i in range(length))
    return GraphSpace(name=f"cycle({length})", adjacency=adj)


def _make_grid(width: int, height: int) -> GraphSpace:
    if width < 1 or height < 1:
        raise ValueError("grid dimensions must be positive")
    _check_cap(width * height)
    def vid(x, y):
        return y * width + x
    adjacency = []
    labels = []
    for y in range(height):
        for x in range(width):
            ns = []
            if x > 0:
                ns.append(vid(x - 1, y))
            if x < width - 1:
                ns.append(vid(x + 1, y))
            if y > 0:
                ns.append(vid(x, y - 1))
            if y < height - 1:
                ns.append(vid(x, y + 1))
            adjacency.append(tuple(sorted(ns)))
            labels.append((x, y))
    return GraphSpace(name=f"grid({width}x{height})", adjacency=tuple(adjacency), labels=tuple(labels))


def tiling_layer_sizes(radius: int) -> list[int]:
    """Layer sizes produced by the constructive build (for cross-checks)."""
    ball = _make_tiling_ball(radius)
    dist0 = ball.distance_matrix()[0]
    return [int((dist0 == k).sum()) for k in range(radius + 1)]


def _make_tiling_ball(radius: int) -> GraphSpace:
    """Ball in the triangular tiling with vertex degree 7.

    Layered construction: layer k+1 is laid out around layer k; every
    interior vertex ends with degree exactly 7; consecutive children of one
    parent are adjacent (triangles), and each edge of the layer-k cycle
    contributes one shared child closing its triangle.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    DEG = 7
    adjacency: list[set[int]] = [set()]

    def new_vertex() -> int:
        adjacency.append(set())
        _check_cap(len(adjacency))
        return len(adjacency) - 1

    def connect(a: int, b: int) -> None:
        adjacency[a].add(b)
        adjacency[b].add(a)

    # layer 1: a 7-cycle around the center
    layer = [new_vertex() for _ in range(DEG)]
    parents: dict[int, int] = {}
    for i, v in enumerate(layer):
        connect(v, 0)
        connect(v, layer[(i + 1) % DEG])
        parents[v] = 1

    for _ in range(2, radius + 1):
        nxt: list[int] = []
        # Children laid out vertex by vertex around the layer; each child
        # block's last member is shared with the next layer vertex, closing
        # the triangle over that cycle edge.  A vertex with p parents gets
        # 5 - p children total: one inherited as the previous block's shared
        # child, 4 - p created here.
        for idx, u in enumerate(layer):
            block = [new_vertex() for _ in range(4 - parents[u])]
            for c in block:
                connect(c, u)
                parents[c] = parents.get(c, 0) + 1
            shared = block[-1]
            v = layer[(idx + 1) % len(layer)]
            connect(shared, v)
            parents[shared] += 1
            nxt.extend(block)
        # close the new cycle
        for i, c in enumerate(nxt):
            connect(c, nxt[(i + 1) % len(nxt)])
        layer = nxt

    adj = tuple(tuple(sorted(ns)) for ns in adjacency)
    return GraphSpace(name=f"tiling_ball(deg7,r={radius})", adjacency=adj)


# -- Symbolic free-group space ----------------------------------------------


def _reduce_word(word: tuple[int, ...]) -> tuple[int, ...]:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _cyclic_reduce(word: tuple[int, ...]) -> tuple[int, ...]:
    w = _reduce_word(word)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


@dataclass(frozen=True)
class FreeGroupSpace(SpaceHandle):
    """Cayley graph of the free group of the given rank, represented
    symbolically: points are reduced words (tuples of nonzero ints, letter
    -i is the inverse of i).  Distances are exact for arbitrarily long
    words, which is what long displacement profiles need."""

    rank: int
    sample_radius: int = 8

    @property
    def name(self) -> str:  # type: ignore[override]
        return f"free_group(rank={self.rank})"

    def distance(self, u: tuple[int, ...], v: tuple[int, ...]) -> int:
        return len(_reduce_word(tuple(-x for x in reversed(u)) + v))

    def geodesic(self, u, v) -> list[tuple[int, ...]]:
        delta = _reduce_word(tuple(-x for x in reversed(u)) + v)
        path = [u]
        cur = u
        for letter in delta:
            cur = _reduce_word(cur + (letter,))
            path.append(cur)
        return path

    def points(self):
        raise NotImplementedError("symbolic space has no finite universe")

    def sample(self, rng: random.Random) -> tuple[int, ...]:
        length = rng.randrange(self.sample_radius + 1)
        word: list[int] = []
        while len(word) < length:
            letter = rng.choice([s * i for i in range(1, self.rank + 1) for s in (1, -1)])
            if word and word[-1] == -letter:
                continue
            word.append(letter)
        return tuple(word)


# -- Isometries --------------------------------------------------------------


@dataclass
class IsometryHandle:
    """Partial isometry of a testbed.

    ``fwd``/``inv`` are callables returning a point or None when the image
    leaves the testbed.  ``power(n)`` composes; applying the handle where the
    orbit leaves the space raises OrbitTruncationError naming the largest
    valid exponent (in units of this handle).
    """

    name: str
    space: SpaceHandle
    fwd: Callable
    inv: Callable
    steps: int = 1  # base-map steps per unit exponent, always >= 0

    def apply(self, x, n: int = 1):
        total = n * self.steps
        step = self.fwd if total >= 0 else self.inv
        cur = x
        for k in range(abs(total)):
            nxt = step(cur)
            if nxt is None:
                largest = k // self.steps if self.steps else 0
                raise OrbitTruncationError(largest, f"{self.name}: orbit of {x} truncated")
            cur = nxt
        return cur

    def power(self, n: int) -> "IsometryHandle":
        if n >= 0:
            return IsometryHandle(f"{self.name}^{n}", self.space, self.fwd, self.inv, steps=n * self.steps)
        return IsometryHandle(f"{self.name}^{n}", self.space, self.inv, self.fwd, steps=-n * self.steps)

    def inverse(self) -> "IsometryHandle":
        return self.power(-1)


def grid_translation(space: GraphSpace, dx: int, dy: int) -> IsometryHandle:
    """Partial translation of a grid testbed (None outside the window)."""
    if not space.name.startswith("grid("):
        raise ValueError("grid_translation expects a grid space")
    coords = {i: space.labels[i] for i in space.points()}
    lookup = {xy: i for i, xy in coords.items()}

    def fwd(p):
        x, y = coords[p]
        return lookup.get((x + dx, y + dy))

    def inv(p):
        x, y = coords[p]
        return lookup.get((x - dx, y - dy))

    return IsometryHandle(f"translate({dx},{dy})", space, fwd, inv)


def cycle_rotation(space: GraphSpace, shift: int) -> IsometryHandle:
    n = space.n

    def fwd(p):
        return (p + shift) % n

    def inv(p):
        return (p - shift) % n

    return IsometryHandle(f"rotate({shift})", space, fwd, inv)


def tree_left_multiplication(space: GraphSpace, word: Sequence[int]) -> IsometryHandle:
    """Left multiplication by a free-group word on a Cayley-ball tree.

    The tree must have been built with root_branching = 2 * rank and
    branching = 2 * rank - 1 so vertex labels encode reduced words.  The map
    is partial: images outside the ball return None.
    """
    root_degree = len(space.adjacency[0])
    if root_degree % 2 or root_degree < 2:
        raise ValueError("tree is not a free-group Cayley ball (odd root degree)")
    rank = root_degree // 2
    if max(abs(x) for x in word) > rank:
        raise ValueError("word uses letters beyond the tree's rank")
    label_words = [_label_to_word(lbl, rank) for lbl in space.labels]
    lookup = {w: i for i, w in enumerate(label_words)}
    if len(lookup) != space.n:
        raise ValueError("tree labels do not encode distinct reduced words")
    w = _reduce_word(tuple(word))
    w_inv = tuple(-x for x in reversed(w))

    def fwd(p):
        return lookup.get(_reduce_word(w + label_words[p]))

    def inv(p):
        return lookup.get(_reduce_word(w_inv + label_words[p]))

    return IsometryHandle(f"leftmul{tuple(w)}", space, fwd, inv)


def _label_to_word(label: tuple[int, ...], rank: int) -> tuple[int, ...]:
    """Decode a tree path label (child indices) into a reduced word.

    At the root every one of the 2*rank signed letters is available in the
    fixed order (1, -1, 2, -2, ...); below, the letter cancelling the parent
    edge is removed from that order.
    """
    alphabet = [s * i for i in range(1, rank + 1) for s in (1, -1)]
    word: list[int] = []
    for idx in label:
        options = alphabet if not word else [a for a in alphabet if a != -word[-1]]
        word.append(options[idx])
    return tuple(word)


def free_group_left_multiplication(space: FreeGroupSpace, word: Sequence[int]) -> IsometryHandle:
    w = _reduce_word(tuple(word))
    w_inv = tuple(-x for x in reversed(w))

    def fwd(p):
        return _reduce_word(w + p)

    def inv(p):
        return _reduce_word(w_inv + p)

    return IsometryHandle(f"leftmul{tuple(w)}", space, fwd, inv)


def free_group_translation_length(word: Sequence[int]) -> int:
    """Exact translation length of left multiplication: the cyclically
    reduced length (independent hand-derivable anchor for profiles)."""
    return len(_cyclic_reduce(_reduce_word(tuple(word))))


# -- Quasi-convex sets and quasi-geodesics -----------------------------------


@dataclass(frozen=True)
class QuasiConvexSet:
    """Finite point set with its claimed quasiconvexity constant R."""

    points: tuple
    R: float

    def __post_init__(self):
        if not self.points:
            raise ValueError("quasiconvex set must be nonempty")


def measure_quasiconvexity(space: GraphSpace, points: Iterable[int]) -> int:
    """Exact quasiconvexity constant over ALL geodesics: the largest
    distance to the set from any vertex lying on any geodesic between two
    set members (x is on a geodesic u-v iff d(u,x)+d(x,v) = d(u,v))."""
    pts = sorted(set(points))
    dist = space.distance_matrix()
    to_set = np.min(dist[np.array(pts)], axis=0)
    worst = 0
    for i, u in enumerate(pts):
        du = dist[u]
        for v in pts[i + 1:]:
            on_geo = (du + dist[v]) == du[v]
            worst = max(worst, int(to_set[on_geo].max()))
    return worst


@dataclass
class QuasiGeodesicPath:
    """Discrete path with quasi-geodesic constants, defined on an integer
    parameter window [lo, hi]."""

    space: SpaceHandle
    lo: int
    hi: int
    point_at_fn: Callable[[int], object]
    lam: float
    eps: float
    meta: dict = field(default_factory=dict)

    def point_at(self, t: int):
        if not (self.lo <= t <= self.hi):
            raise ValueError(f"parameter {t} outside window [{self.lo}, {self.hi}]")
        return self.point_at_fn(t)

    def parameters(self) -> range:
        return range(self.lo, self.hi + 1)

    def point_set(self) -> list:
        seen = []
        seen_set = set()
        for t in self.parameters():
            p = self.point_at(t)
            if p not in seen_set:
                seen_set.add(p)
                seen.append(p)
        return seen

    def check_quasi_geodesic(self, sample_pairs: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
        """Return the sampled parameter pairs violating the defining
        two-sided comparison (empty list = all sampled pairs pass)."""
        bad = []
        for a, b in sample_pairs:
            d = self.space.distance(self.point_at(a), self.point_at(b))
            gap = abs(b - a)
            if not (gap / self.lam - self.eps <= d <= self.lam * gap + self.eps):
                bad.append((a, b))
        return bad


# -- Serialization ------------------------------------------------------------


def space_to_adjacency_text(space: GraphSpace) -> str:
    lines = [f"{i}: {','.join(str(w) for w in space.adjacency[i])}" for i in space.points()]
    return "\n".join(lines) + "\n"


def space_from_adjacency_text(text: str, name: str = "loaded") -> GraphSpace:
    rows: dict[int, tuple[int, ...]] = {}
    for line in text.strip().splitlines():
        head, _, tail = line.partition(":")
        vid = int(head.strip())
        ns = tuple(int(t) for t in tail.strip().split(",") if t.strip())
        rows[vid] = ns
    adjacency = tuple(tuple(sorted(rows[i])) for i in range(len(rows)))
    return GraphSpace(name=name, adjacency=adjacency)
