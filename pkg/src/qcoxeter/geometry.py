"""Alcove geometry: hyperplanes, alcoves, marked alcoves, galleries and regions.

An alcove is stored by its integer coordinate vector ``k`` indexed like
``rs.positive_roots``: the alcove is ``{x : k_a < <x, a> < k_a + 1}``.  The
base alcove has all coordinates zero.  Everything is exact.

The affine Coxeter generators are numbered ``0..r``: ``0`` is the reflection
in ``{<x, theta> = 1}`` and ``i >= 1`` is the simple reflection ``s_i``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from math import floor
from typing import Iterable, Iterator, Sequence, Union

from .rootsys import (
    Covector,
    FiniteWeylElement,
    Point,
    RootSystem,
    base_point,
    fundamental_coweights,
    highest_root,
    identity_element,
    pairing,
    rho_check,
    root_reflection,
    simple_reflection,
)

__all__ = [
    "Hyperplane",
    "AffineMap",
    "Alcove",
    "MarkedAlcove",
    "Gallery",
    "HalfSpace",
    "WeylChamber",
    "Region",
    "hyperplane",
    "base_alcove",
    "base_walls",
    "base_vertices",
    "affine_generators",
    "alcove_of_point",
    "side_of",
    "distance",
    "walls",
    "neighbors",
    "alcove_word",
    "alcove_map",
    "interior_point",
    "vertices",
    "closure_contains",
    "is_special",
    "marked_alcove_of",
    "base_marking",
    "reflect_marked",
    "chamber_of",
    "dominant_chamber",
    "antidominant_chamber",
    "region_contains_alcove",
    "region_contains_point",
    "region_within_halfspace",
    "project_to_region",
    "dist_alcove_region",
    "dist_alcove_region_bfs",
    "alcoves_at_vertex",
    "dist_vertex_region",
    "minimal_gallery",
    "is_umbrella",
    "infinite_gallery_word",
    "marked_gallery",
    "alcoves_in_box",
    "alcove_ball",
]


def _norm(x) -> int | Fraction:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


# --------------------------------------------------------------------------
# Hyperplanes and affine maps


@dataclass(frozen=True)
class Hyperplane:
    """``{x : <x, alpha> = level}`` with ``alpha`` a positive root covector."""

    alpha: Covector
    level: int | Fraction

    def value(self, x: Sequence) -> Fraction:
        return pairing(x, self.alpha) - self.level

    def contains(self, x: Sequence) -> bool:
        return self.value(x) == 0

    def __str__(self):
        return f"H[{','.join(map(str, self.alpha))}; {self.level}]"


def hyperplane(rs: RootSystem, alpha: Covector, level) -> Hyperplane:
    """Normalise ``{<x, alpha> = level}`` so that the root is positive."""
    sign, i = rs.signed_index(tuple(alpha))
    return Hyperplane(rs.positive_roots[i], _norm(sign * Fraction(level)))


@cache
def _permutation(rs: RootSystem, matrix) -> tuple[tuple[int, int], ...]:
    """For each positive root ``a``: ``(sign, j)`` with ``u^{-1} a = sign * root_j``."""
    u = FiniteWeylElement(matrix)
    return tuple(rs.signed_index(u.pull_back_root(a)) for a in rs.positive_roots)


@dataclass(frozen=True)
class AffineMap:
    """``x -> linear(x) + shift`` with ``linear`` in the finite Weyl group."""

    linear: FiniteWeylElement
    shift: Point
    rs: RootSystem = field(compare=False, repr=False)

    def __call__(self, x: Sequence) -> Point:
        return tuple(_norm(a + b) for a, b in zip(self.linear(x), self.shift))

    def __mul__(self, other: AffineMap) -> AffineMap:
        return AffineMap(self.linear * other.linear, self(other.shift), self.rs)

    def inverse(self) -> AffineMap:
        inv = self.linear.inverse()
        return AffineMap(inv, tuple(_norm(-c) for c in inv(self.shift)), self.rs)

    def image(self, h: Hyperplane) -> Hyperplane:
        """The hyperplane ``g(h)``."""
        beta = self.linear.act_on_root(h.alpha)
        return hyperplane(self.rs, beta, h.level + pairing(self.shift, beta))

    def alcove_image(self, a: Alcove) -> Alcove:
        """``g(a)``, computed from coordinates when the shift pairs integrally."""
        rs = self.rs
        shifts = [pairing(self.shift, r) for r in rs.positive_roots]
        if any(m.denominator != 1 for m in shifts):
            return alcove_of_point(rs, self(interior_point(a)))
        perm = _permutation(rs, self.linear.matrix)
        k = a.coords
        return Alcove(tuple(
            (k[j] if sign > 0 else -k[j] - 1) + int(m)
            for (sign, j), m in zip(perm, shifts)), rs)


def reflection_map(rs: RootSystem, h: Hyperplane) -> AffineMap:
    """``x -> x - (<x, alpha> - k) alpha^vee``."""
    cor = rs.coroot(h.alpha)
    return AffineMap(root_reflection(rs, h.alpha), tuple(_norm(h.level * c) for c in cor), rs)


@cache
def base_walls(rs: RootSystem) -> tuple[Hyperplane, ...]:
    """The wall of the base alcove fixed by each affine generator, indexed ``0..r``."""
    theta = highest_root(rs)
    return (Hyperplane(theta, 1),) + tuple(Hyperplane(a, 0) for a in rs.simple_roots)


@cache
def affine_generators(rs: RootSystem) -> tuple[AffineMap, ...]:
    return tuple(reflection_map(rs, h) for h in base_walls(rs))


@cache
def base_vertices(rs: RootSystem) -> tuple[Point, ...]:
    """Vertices of the base alcove; entry ``s`` is the vertex off the wall of ``s``."""
    theta_coords = rs.root_coords[rs.root_index[highest_root(rs)]]
    om = fundamental_coweights(rs)
    zero = tuple(0 for _ in range(rs.rank))
    return (zero,) + tuple(tuple(_norm(c / m) for c in om[i])
                           for i, m in enumerate(theta_coords))


# --------------------------------------------------------------------------
# Alcoves


@dataclass(frozen=True)
class Alcove:
    coords: tuple[int, ...]
    rs: RootSystem = field(compare=False, repr=False)

    def __str__(self):
        return "A(" + ",".join(map(str, self.coords)) + ")"


def base_alcove(rs: RootSystem) -> Alcove:
    return Alcove(tuple(0 for _ in rs.positive_roots), rs)


def alcove_of_point(rs: RootSystem, x: Sequence) -> Alcove:
    """The alcove containing ``x``; raises if ``x`` lies on a hyperplane."""
    coords = []
    for a in rs.positive_roots:
        v = pairing(x, a)
        if v.denominator == 1:
            raise ValueError(f"{x} lies on a hyperplane")
        coords.append(floor(v))
    return Alcove(tuple(coords), rs)


def _as_int_level(h: Hyperplane) -> int:
    if Fraction(h.level).denominator != 1:
        raise ValueError(f"{h} is not a hyperplane of the affine arrangement")
    return int(h.level)


def side_of(a: Alcove, h: Hyperplane) -> int:
    """+1 if ``<x, alpha> > level`` on the interior of ``a``, else -1.

    >>> from qcoxeter.rootsys import CartanDatum, build_root_system
    >>> rs = build_root_system(CartanDatum("A", 2))
    >>> [side_of(base_alcove(rs), h) for h in base_walls(rs)]
    [-1, 1, 1]
    """
    j = a.rs.root_index[h.alpha]
    return 1 if a.coords[j] >= _as_int_level(h) else -1


def distance(a: Alcove, b: Alcove) -> int:
    """Number of hyperplanes separating two alcoves."""
    return sum(abs(x - y) for x, y in zip(a.coords, b.coords))


def _crossing(rs: RootSystem, k: Sequence[int]) -> int | None:
    """Least generator whose base wall separates the base alcove from ``k``."""
    if k[rs.root_index[highest_root(rs)]] >= 1:
        return 0
    for i in range(rs.rank):
        if k[i] < 0:
            return i + 1
    return None


def alcove_word(a: Alcove) -> tuple[int, ...]:
    """A reduced word ``(s_1, ..., s_m)`` with ``a = s_1 ... s_m (A°)``."""
    rs = a.rs
    gens = affine_generators(rs)
    word = []
    cur = a
    while (s := _crossing(rs, cur.coords)) is not None:
        word.append(s)
        cur = gens[s].alcove_image(cur)
    return tuple(word)


def alcove_map(a: Alcove) -> AffineMap:
    """The unique affine Weyl group element sending the base alcove to ``a``."""
    rs = a.rs
    gens = affine_generators(rs)
    g = AffineMap(identity_element(rs), tuple(0 for _ in range(rs.rank)), rs)
    for s in alcove_word(a):
        g = g * gens[s]
    return g


def interior_point(a: Alcove) -> Point:
    return alcove_map(a)(base_point(a.rs))


def walls(a: Alcove) -> tuple[Hyperplane, ...]:
    """Walls of ``a`` labelled by the affine generators (the labelling ``w ∘ t°``)."""
    g = alcove_map(a)
    return tuple(g.image(h) for h in base_walls(a.rs))


def reflect_alcove(a: Alcove, h: Hyperplane) -> Alcove:
    return reflection_map(a.rs, h).alcove_image(a)


def neighbors(a: Alcove) -> tuple[Alcove, ...]:
    return tuple(reflect_alcove(a, h) for h in walls(a))


def vertices(a: Alcove) -> tuple[Point, ...]:
    g = alcove_map(a)
    return tuple(g(v) for v in base_vertices(a.rs))


def closure_contains(a: Alcove, v: Sequence) -> bool:
    for k, r in zip(a.coords, a.rs.positive_roots):
        p = pairing(v, r)
        if not k <= p <= k + 1:
            return False
    return True


def is_special(rs: RootSystem, v: Sequence) -> bool:
    """All root pairings integral."""
    return all(pairing(v, r).denominator == 1 for r in rs.positive_roots)


def alcoves_in_box(rs: RootSystem, radius: int) -> list[Alcove]:
    """Alcoves with every coordinate in ``[-radius, radius - 1]``, in BFS order."""
    start = base_alcove(rs)
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        a = queue.popleft()
        for b in neighbors(a):
            if b not in seen and all(-radius <= k < radius for k in b.coords):
                seen.add(b)
                order.append(b)
                queue.append(b)
    return order


def alcove_ball(center: Alcove, radius: int) -> dict[Alcove, int]:
    """Alcoves within gallery distance ``radius`` of ``center``, with distances."""
    dist = {center: 0}
    queue = deque([center])
    while queue:
        a = queue.popleft()
        if dist[a] == radius:
            continue
        for b in neighbors(a):
            if b not in dist:
                dist[b] = dist[a] + 1
                queue.append(b)
    return dist


# --------------------------------------------------------------------------
# Marked alcoves


@dataclass(frozen=True)
class MarkedAlcove:
    """An alcove, a special vertex in its closure and a labelling of its walls."""

    alcove: Alcove
    vertex: Point
    labeling: tuple[Hyperplane, ...]

    def __post_init__(self):
        if not closure_contains(self.alcove, self.vertex):
            raise ValueError("marked vertex is not in the closure of the alcove")


def _affine(w) -> AffineMap:
    return w if isinstance(w, AffineMap) else w.affine


def marked_alcove_of(w) -> MarkedAlcove:
    """The triple ``(w(A°), w(0), w ∘ t°)`` for a group element or affine map."""
    g = _affine(w)
    rs = g.rs
    return MarkedAlcove(
        g.alcove_image(base_alcove(rs)),
        g(tuple(0 for _ in range(rs.rank))),
        tuple(g.image(h) for h in base_walls(rs)),
    )


def base_marking(rs: RootSystem) -> MarkedAlcove:
    return MarkedAlcove(base_alcove(rs), tuple(0 for _ in range(rs.rank)), base_walls(rs))


def reflect_marked(m: MarkedAlcove, s: int) -> MarkedAlcove:
    """Reflect the whole triple in the wall labelled ``s``."""
    rs = m.alcove.rs
    r = reflection_map(rs, m.labeling[s])
    return MarkedAlcove(r.alcove_image(m.alcove), r(m.vertex),
                        tuple(r.image(h) for h in m.labeling))


# --------------------------------------------------------------------------
# Regions


@dataclass(frozen=True)
class HalfSpace:
    """``{x : sign * (<x, alpha> - level) > 0}``."""

    hyperplane: Hyperplane
    sign: int


@dataclass(frozen=True)
class WeylChamber:
    """``vertex + sign * orientation(C°)`` for a special vertex."""

    vertex: Point
    orientation: FiniteWeylElement
    sign: int = 1

    def opposite(self) -> WeylChamber:
        return WeylChamber(self.vertex, self.orientation, -self.sign)

    def inequalities(self, rs: RootSystem) -> list[Covector]:
        """Covectors ``g`` with the chamber equal to ``{<x - vertex, g> > 0}``."""
        return [tuple(self.sign * c for c in self.orientation.act_on_root(a))
                for a in rs.simple_roots]


Region = Union[HalfSpace, WeylChamber]


def dominant_chamber(rs: RootSystem) -> WeylChamber:
    return WeylChamber(tuple(0 for _ in range(rs.rank)), identity_element(rs), 1)


def antidominant_chamber(rs: RootSystem) -> WeylChamber:
    return dominant_chamber(rs).opposite()


def chamber_of(m: MarkedAlcove) -> WeylChamber:
    """The Weyl chamber with apex ``m.vertex`` that contains ``m.alcove``."""
    rs = m.alcove.rs
    if not is_special(rs, m.vertex):
        raise ValueError(f"vertex {m.vertex} is not special")
    y = [a - b for a, b in zip(interior_point(m.alcove), m.vertex)]
    u = identity_element(rs)
    while True:
        i = next((i for i, a in enumerate(rs.simple_roots) if pairing(y, a) < 0), None)
        if i is None:
            return WeylChamber(tuple(m.vertex), u, 1)
        s = simple_reflection(rs, i + 1)
        y = list(s(y))
        u = u * s


def region_contains_point(rs: RootSystem, region: Region, x: Sequence) -> bool:
    """Strict membership of a point in the (open) region."""
    if isinstance(region, HalfSpace):
        return region.sign * region.hyperplane.value(x) > 0
    d = [a - b for a, b in zip(x, region.vertex)]
    return all(pairing(d, g) > 0 for g in region.inequalities(rs))


def region_contains_alcove(region: Region, a: Alcove) -> bool:
    rs = a.rs
    if isinstance(region, HalfSpace):
        return side_of(a, region.hyperplane) == region.sign
    if not is_special(rs, region.vertex):
        raise ValueError("chamber apex is not special")
    for g in region.inequalities(rs):
        m = int(pairing(region.vertex, g))
        sign, j = rs.signed_index(g)
        if sign > 0 and not a.coords[j] >= m:
            return False
        if sign < 0 and not a.coords[j] + 1 <= -m:
            return False
    return True


def region_within_halfspace(rs: RootSystem, region: Region, h: Hyperplane, sign: int) -> bool:
    """Whether the whole region lies in ``{sign * (<x, alpha> - level) > 0}``."""
    if isinstance(region, HalfSpace):
        return region.hyperplane.alpha == h.alpha and region.sign == sign and (
            region.hyperplane.level >= h.level if sign > 0 else region.hyperplane.level <= h.level)
    beta = tuple(sign * c for c in h.alpha)
    back = region.orientation.pull_back_root(beta)
    if region.sign < 0:
        back = tuple(-c for c in back)
    if rs.signed_index(back)[0] < 0:
        return False
    return pairing(region.vertex, beta) >= sign * h.level


def _search_region(starts: Sequence[AffineMap], region: Region,
                   radius: int | None = None) -> Gallery | None:
    """Breadth-first search over affine Weyl group elements for the region.

    Nodes are the maps ``x`` with alcove ``x(A°)``; neighbours are ``x s``.
    Returns a shortest gallery from the nearest start, or ``None`` when the
    region is not reached within ``radius`` steps.
    """
    rs = starts[0].rs
    gens = affine_generators(rs)
    base = base_alcove(rs)
    parent: dict[Alcove, Alcove | None] = {}
    dist: dict[Alcove, int] = {}
    queue = deque()
    for x in starts:
        a = x.alcove_image(base)
        if a not in dist:
            parent[a], dist[a] = None, 0
            queue.append((x, a))
    while queue:
        x, a = queue.popleft()
        if region_contains_alcove(region, a):
            path = [a]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return Gallery(tuple(reversed(path)))
        if radius is not None and dist[a] >= radius:
            continue
        for g in gens:
            y = x * g
            b = y.alcove_image(base)
            if b not in dist:
                parent[b], dist[b] = a, dist[a] + 1
                queue.append((y, b))
    return None


def project_to_region(a: Alcove, region: Region) -> Gallery:
    """A shortest gallery from ``a`` to some alcove of ``region``.

    Chambers have no gate in general (an alcove can have two nearest alcoves
    in a chamber and no wall separating it from the whole chamber), so this
    is an exact breadth-first search rather than a greedy walk.
    """
    found = _search_region([alcove_map(a)], region)
    assert found is not None  # regions are nonempty, so the search ends
    return found


def dist_alcove_region(a: Alcove, region: Region) -> int:
    return len(project_to_region(a, region))


def dist_alcove_region_bfs(a: Alcove, region: Region, radius: int) -> int | None:
    """Breadth-first oracle; ``None`` if the region is not reached within ``radius``."""
    dist = {a: 0}
    queue = deque([a])
    while queue:
        b = queue.popleft()
        if region_contains_alcove(region, b):
            return dist[b]
        if dist[b] == radius:
            continue
        for c in neighbors(b):
            if c not in dist:
                dist[c] = dist[b] + 1
                queue.append(c)
    return None


def alcoves_at_vertex(rs: RootSystem, v: Sequence) -> list[Alcove]:
    """All alcoves whose closure contains ``v``."""
    start = Alcove(tuple(floor(pairing(v, r)) for r in rs.positive_roots), rs)
    if not closure_contains(start, v):
        raise ValueError(f"{v} is not in the closure of any alcove")
    seen = {start}
    queue = deque([start])
    while queue:
        a = queue.popleft()
        for b in neighbors(a):
            if b not in seen and closure_contains(b, v):
                seen.add(b)
                queue.append(b)
    return sorted(seen, key=lambda b: b.coords)


def dist_vertex_region(rs: RootSystem, v: Sequence, region: Region) -> int:
    """Least distance to the region from an alcove whose closure contains ``v``."""
    found = _search_region([alcove_map(a) for a in alcoves_at_vertex(rs, v)], region)
    assert found is not None
    return len(found)


# --------------------------------------------------------------------------
# Galleries


@dataclass(frozen=True)
class Gallery:
    alcoves: tuple[Alcove, ...]

    def __post_init__(self):
        if not self.alcoves:
            raise ValueError("a gallery has at least one alcove")
        for a, b in zip(self.alcoves, self.alcoves[1:]):
            if distance(a, b) != 1:
                raise ValueError(f"{a} and {b} are not adjacent")

    def __len__(self):
        return len(self.alcoves) - 1

    @property
    def walls(self) -> tuple[Hyperplane, ...]:
        """The wall crossed at each step."""
        out = []
        for a, b in zip(self.alcoves, self.alcoves[1:]):
            j = next(j for j, (x, y) in enumerate(zip(a.coords, b.coords)) if x != y)
            out.append(Hyperplane(a.rs.positive_roots[j], max(a.coords[j], b.coords[j])))
        return tuple(out)

    def is_minimal(self) -> bool:
        return distance(self.alcoves[0], self.alcoves[-1]) == len(self)


def minimal_gallery(a: Alcove, b: Alcove) -> Gallery:
    """Greedy shortest gallery: always cross the first wall separating from ``b``."""
    path = [a]
    cur = a
    while cur != b:
        for h in walls(cur):
            if side_of(cur, h) != side_of(b, h):
                cur = reflect_alcove(cur, h)
                path.append(cur)
                break
    return Gallery(tuple(path))


def is_umbrella(g: Gallery, a: Alcove, h: Hyperplane) -> bool:
    """Gallery stays on ``a``'s side of its wall ``h`` and extends minimally to ``a``."""
    if h not in walls(a):
        raise ValueError(f"{h} is not a wall of {a}")
    side = side_of(a, h)
    if any(side_of(b, h) != side for b in g.alcoves):
        return False
    return all(side_of(b, w) != side_of(a, w) for b, w in zip(g.alcoves, g.walls))


def infinite_gallery_word(rs: RootSystem) -> tuple[int, ...]:
    """A reduced word for the translation by ``2 rho^vee``.

    Cycling this word from the base marking walks a minimal gallery deep into
    the dominant chamber.

    >>> from qcoxeter.rootsys import CartanDatum, build_root_system
    >>> infinite_gallery_word(build_root_system(CartanDatum("A", 1)))
    (0, 1)
    """
    t = AffineMap(identity_element(rs), tuple(_norm(2 * c) for c in rho_check(rs)), rs)
    return alcove_word(t.alcove_image(base_alcove(rs)))


def marked_gallery(start: MarkedAlcove, word: Iterable[int]) -> Iterator[MarkedAlcove]:
    """Yield ``start`` and then its successive reflections along ``word``."""
    m = start
    yield m
    for s in word:
        m = reflect_marked(m, s)
        yield m
