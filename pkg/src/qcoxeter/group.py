"""Quasi-Coxeter groups ``Λ ⋊ W°`` with an optional trivially acting torsion factor.

A group is built from a root system and a :class:`LatticeSpec`.  Elements
are :class:`GroupElement` values ``t_λ u`` acting on the apartment by
``x -> u(x) + λ``; torsion components ride along without acting.

>>> G = QuasiCoxeterGroup.adjoint("A", 1)
>>> s0, s1 = G.generators
>>> t = s0 * s1
>>> t.is_translation(), t.lambda_free, t.length
(True, (1,), 2)
"""

from __future__ import annotations

import itertools
import os
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import floor, gcd, prod
from typing import Iterable, Sequence

from . import linalg
from .geometry import AffineMap, affine_generators, base_vertices
from .rootsys import (
    CartanDatum,
    FiniteWeylElement,
    Point,
    RootSystem,
    base_point,
    build_root_system,
    enumerate_finite_weyl,
    fundamental_coweights,
    identity_element,
    pairing,
    simple_reflection,
)

__all__ = [
    "LatticeSpec",
    "LatticeError",
    "GroupElement",
    "OmegaElement",
    "QuasiCoxeterGroup",
    "CheckResult",
    "ValidationReport",
    "validate_qcg",
    "EnumerationCapExceeded",
]

DEFAULT_ELEMENT_CAP = int(os.environ.get("QCOXETER_ELEMENT_CAP", "200000"))


def _norm(x) -> int | Fraction:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def _point(x: Iterable) -> Point:
    return tuple(_norm(c) for c in x)


class LatticeError(ValueError):
    """Structural failure of the lattice data; ``witness`` names the culprit."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class EnumerationCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class LatticeSpec:
    """Generators of ``Λ_free`` (coroot coordinates) and torsion orders."""

    free_generators: tuple[Point, ...]
    torsion_orders: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "free_generators",
                           tuple(_point(g) for g in self.free_generators))
        object.__setattr__(self, "torsion_orders", tuple(int(t) for t in self.torsion_orders))
        if any(t < 1 for t in self.torsion_orders):
            raise LatticeError("torsion orders must be positive", self.torsion_orders)

    @classmethod
    def adjoint(cls, rs: RootSystem, torsion: Sequence[int] = ()) -> LatticeSpec:
        """``Λ_free = Q^vee``."""
        return cls(tuple(tuple(r) for r in linalg.identity(rs.rank)), tuple(torsion))

    @classmethod
    def coweight(cls, rs: RootSystem, torsion: Sequence[int] = ()) -> LatticeSpec:
        """``Λ_free = P^vee``, spanned by the fundamental coweights."""
        return cls(fundamental_coweights(rs), tuple(torsion))


@dataclass(frozen=True)
class OmegaElement:
    """A class in ``Ω = Λ_free / Q^vee × T``."""

    free_class: tuple[int, ...]
    torsion_class: tuple[int, ...]
    free_moduli: tuple[int, ...] = field(compare=False, repr=False, default=())
    torsion_orders: tuple[int, ...] = field(compare=False, repr=False, default=())

    def _make(self, f, t) -> OmegaElement:
        return OmegaElement(
            tuple(x % m for x, m in zip(f, self.free_moduli)),
            tuple(x % m for x, m in zip(t, self.torsion_orders)),
            self.free_moduli, self.torsion_orders)

    def __add__(self, other: OmegaElement) -> OmegaElement:
        return self._make([a + b for a, b in zip(self.free_class, other.free_class)],
                          [a + b for a, b in zip(self.torsion_class, other.torsion_class)])

    def __neg__(self) -> OmegaElement:
        return self._make([-a for a in self.free_class], [-a for a in self.torsion_class])

    @property
    def is_trivial(self) -> bool:
        return not any(self.free_class) and not any(self.torsion_class)

    @property
    def components(self) -> tuple[int, ...]:
        return self.free_class + self.torsion_class

    def __str__(self):
        return "omega(" + ",".join(map(str, self.components)) + ")"


@dataclass(frozen=True)
class GroupElement:
    """``t_λ u``: translation part ``(lambda_free, lambda_torsion)``, finite part ``u``."""

    lambda_free: Point
    lambda_torsion: tuple[int, ...]
    finite_part: FiniteWeylElement
    group: QuasiCoxeterGroup = field(compare=False, repr=False)

    def __mul__(self, other: GroupElement) -> GroupElement:
        return self.group.compose(self, other)

    def __call__(self, x: Sequence) -> Point:
        return self.group.act_on_point(self, x)

    def inverse(self) -> GroupElement:
        return self.group.inverse(self)

    def is_translation(self) -> bool:
        return self.finite_part.is_identity

    @property
    def length(self) -> int:
        return self.group.length(self)

    @property
    def affine(self) -> AffineMap:
        return AffineMap(self.finite_part, self.lambda_free, self.group.root_system)

    def __str__(self):
        lam = ",".join(str(c) for c in self.lambda_free)
        tor = ("; " + ",".join(map(str, self.lambda_torsion))) if self.lambda_torsion else ""
        u = self.finite_part.matrix
        return f"t({lam}{tor})*u{[list(r) for r in u]}"


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        return next(c for c in self.checks if c.name == name)

    def __str__(self):
        return "\n".join(f"{c.name}: {'pass' if c.passed else 'FAIL'}"
                         + (f" ({c.detail})" if c.detail else "") for c in self.checks)


class QuasiCoxeterGroup:
    """The group ``Λ ⋊ W°`` with its affine Coxeter generators and ``Ω``."""

    def __init__(self, rs: RootSystem, lattice: LatticeSpec | None = None):
        self.root_system = rs
        self.lattice = lattice if lattice is not None else LatticeSpec.adjoint(rs)
        r = rs.rank
        self._zero = tuple(0 for _ in range(r))
        self._id_finite = identity_element(rs)
        self._length_cache: dict[GroupElement, int] = {}
        self._ball_cache: dict[int, dict[GroupElement, int]] = {}
        self._section_cache: dict[OmegaElement, GroupElement] = {}
        self.element_cap = DEFAULT_ELEMENT_CAP
        self.weyl_cap: int | None = None

        gens = self.lattice.free_generators
        if any(len(g) != r for g in gens):
            raise LatticeError(f"lattice generators must have {r} coordinates", gens)
        den = reduce(lambda a, b: a * b // gcd(a, b),
                     (Fraction(c).denominator for g in gens for c in g), 1)
        hnf = linalg.hermite_normal_form([[int(c * den) for c in g] for g in gens])
        if len(hnf) != r:
            raise LatticeError("lattice generators do not span a full-rank lattice", gens)
        self.basis: tuple[Point, ...] = tuple(_point(Fraction(c, den) for c in row) for row in hnf)
        self._basis_inv = linalg.inverse(self.basis)

        for i in range(r):
            coroot = self._zero[:i] + (1,) + self._zero[i + 1:]
            if not self.contains(coroot):
                raise LatticeError(f"coroot alpha_{i + 1}^vee is not in the lattice", coroot)
        for g in gens:
            for i in range(1, r + 1):
                img = simple_reflection(rs, i)(g)
                if not self.contains(img):
                    raise LatticeError(f"lattice is not W-stable: s_{i} moves {g} outside", g)

        coroot_coords = [[int(x) for x in row] for row in self._basis_inv]
        d, _, v = linalg.smith_normal_form(coroot_coords)
        self._snf_v = v
        self._snf_v_inv = linalg.inverse(v)
        self._free_positions = tuple(i for i in range(r) if d[i][i] > 1)
        self.free_moduli = tuple(d[i][i] for i in self._free_positions)
        self.torsion_orders = self.lattice.torsion_orders

        self.generators: tuple[GroupElement, ...] = tuple(
            self._from_affine(g) for g in affine_generators(rs))
        self.identity = self.element(self._zero)

    # -- construction helpers -----------------------------------------------

    @classmethod
    def adjoint(cls, family: str, rank: int, torsion: Sequence[int] = ()) -> QuasiCoxeterGroup:
        rs = build_root_system(CartanDatum(family, rank))
        return cls(rs, LatticeSpec.adjoint(rs, torsion))

    @classmethod
    def coweight(cls, family: str, rank: int, torsion: Sequence[int] = ()) -> QuasiCoxeterGroup:
        rs = build_root_system(CartanDatum(family, rank))
        return cls(rs, LatticeSpec.coweight(rs, torsion))

    def __repr__(self):
        kind = "free rank" if not self.free_moduli else f"Λ/Q^vee={self.free_moduli}"
        return f"QuasiCoxeterGroup({self.root_system.cartan}, {kind}, T={self.torsion_orders})"

    @property
    def rank(self) -> int:
        return self.root_system.rank

    def contains(self, lam: Sequence) -> bool:
        """Membership of a point in ``Λ_free``."""
        n = linalg.vec_mat([Fraction(c) for c in lam], self._basis_inv)
        return all(x.denominator == 1 for x in n)

    def lattice_coordinates(self, lam: Sequence) -> tuple[int, ...]:
        n = linalg.vec_mat([Fraction(c) for c in lam], self._basis_inv)
        if any(x.denominator != 1 for x in n):
            raise ValueError(f"{lam} is not in the lattice")
        return tuple(int(x) for x in n)

    def from_lattice_coordinates(self, n: Sequence[int]) -> Point:
        return _point(linalg.vec_mat(list(n), self.basis))

    def element(self, lam: Sequence, torsion: Sequence[int] | None = None,
                finite: FiniteWeylElement | None = None) -> GroupElement:
        lam = _point(lam)
        if not self.contains(lam):
            raise ValueError(f"{lam} is not in the lattice")
        tor = tuple(0 for _ in self.torsion_orders) if torsion is None else tuple(
            int(t) % m for t, m in zip(torsion, self.torsion_orders))
        if len(tor) != len(self.torsion_orders):
            raise ValueError("wrong number of torsion components")
        return GroupElement(lam, tor, finite if finite is not None else self._id_finite, self)

    def translation(self, lam: Sequence, torsion: Sequence[int] | None = None) -> GroupElement:
        return self.element(lam, torsion)

    def finite(self, u: FiniteWeylElement) -> GroupElement:
        return self.element(self._zero, None, u)

    def _from_affine(self, g: AffineMap) -> GroupElement:
        return self.element(g.shift, None, g.linear)

    def word(self, letters: Iterable[int]) -> GroupElement:
        """Product of affine generators, e.g. ``word([0, 1]) = s0 * s1``."""
        w = self.identity
        for s in letters:
            w = w * self.generators[s]
        return w

    # -- group law ----------------------------------------------------------

    def _check(self, *elements: GroupElement):
        for e in elements:
            if e.group is not self:
                raise ValueError("elements belong to different groups")

    def compose(self, a: GroupElement, b: GroupElement) -> GroupElement:
        self._check(a, b)
        lam = tuple(_norm(x + y) for x, y in zip(a.lambda_free, a.finite_part(b.lambda_free)))
        tor = tuple((x + y) % m for x, y, m in
                    zip(a.lambda_torsion, b.lambda_torsion, self.torsion_orders))
        return GroupElement(lam, tor, a.finite_part * b.finite_part, self)

    def inverse(self, a: GroupElement) -> GroupElement:
        self._check(a)
        u = a.finite_part.inverse()
        lam = tuple(_norm(-c) for c in u(a.lambda_free))
        tor = tuple((-t) % m for t, m in zip(a.lambda_torsion, self.torsion_orders))
        return GroupElement(lam, tor, u, self)

    def conjugate(self, g: GroupElement, w: GroupElement) -> GroupElement:
        """``g w g^{-1}``."""
        return g * w * g.inverse()

    def act_on_point(self, w: GroupElement, x: Sequence) -> Point:
        return tuple(_norm(a + b) for a, b in zip(w.finite_part(x), w.lambda_free))

    # -- length -------------------------------------------------------------

    def length(self, w: GroupElement) -> int:
        """Number of hyperplanes separating ``A°`` from ``w(A°)``.

        Counted from the image of the interior point ``p°``: the hyperplanes
        ``<x, a> = k`` crossed are those with ``k`` between 0 (exclusive of the
        far side) and ``floor <w(p°), a>``.
        """
        cached = self._length_cache.get(w)
        if cached is not None:
            return cached
        x = self.act_on_point(w, base_point(self.root_system))
        total = 0
        for a in self.root_system.positive_roots:
            total += abs(floor(pairing(x, a)))
        self._length_cache[w] = total
        return total

    def length_formula(self, w: GroupElement) -> int:
        """Closed formula over positive roots, sorted by the sign of ``u^{-1} a``."""
        rs = self.root_system
        total = 0
        for a in rs.positive_roots:
            m = pairing(w.lambda_free, a)
            back = w.finite_part.pull_back_root(a)
            if rs.signed_index(back)[0] > 0:
                total += abs(m)
            else:
                total += abs(m - 1)
        return int(total)

    def is_translation(self, w: GroupElement) -> bool:
        return w.finite_part.is_identity

    # -- Ω ------------------------------------------------------------------

    def _omega(self, free, torsion) -> OmegaElement:
        return OmegaElement(tuple(int(x) % m for x, m in zip(free, self.free_moduli)),
                            tuple(int(t) % m for t, m in zip(torsion, self.torsion_orders)),
                            self.free_moduli, self.torsion_orders)

    def omega_of_lattice_point(self, lam: Sequence) -> OmegaElement:
        n = self.lattice_coordinates(lam)
        y = linalg.vec_mat(list(n), self._snf_v)
        return self._omega([y[i] for i in self._free_positions], [0] * len(self.torsion_orders))

    def omega_projection(self, w: GroupElement) -> OmegaElement:
        base = self.omega_of_lattice_point(w.lambda_free)
        return self._omega(base.free_class, w.lambda_torsion)

    def omega_class(self, components: Sequence[int]) -> OmegaElement:
        k = len(self.free_moduli)
        if len(components) != k + len(self.torsion_orders):
            raise ValueError(f"Ω has {k + len(self.torsion_orders)} components")
        return self._omega(components[:k], components[k:])

    def omega_identity(self) -> OmegaElement:
        return self.omega_class([0] * (len(self.free_moduli) + len(self.torsion_orders)))

    def omega_elements(self) -> list[OmegaElement]:
        ranges = [range(m) for m in self.free_moduli + self.torsion_orders]
        return [self.omega_class(c) for c in itertools.product(*ranges)]

    def omega_generators(self) -> list[OmegaElement]:
        n = len(self.free_moduli) + len(self.torsion_orders)
        return [self.omega_class([int(i == j) for j in range(n)]) for i in range(n)]

    @property
    def omega_order(self) -> int:
        return prod(self.free_moduli) * prod(self.torsion_orders)

    def omega_representative(self, c: OmegaElement) -> GroupElement:
        """A translation in the class ``c``."""
        y = [0] * self.rank
        for pos, val in zip(self._free_positions, c.free_class):
            y[pos] = val
        n = linalg.vec_mat(y, self._snf_v_inv)
        lam = self.from_lattice_coordinates([int(x) for x in n])
        return self.element(lam, c.torsion_class)

    def omega_section(self, c: OmegaElement) -> GroupElement:
        """The length-0 element of the class, by greedy left descent."""
        hit = self._section_cache.get(c)
        if hit is not None:
            return hit
        g = self.omega_representative(c)
        while True:
            ell = g.length
            s = next((s for s in self.generators if (s * g).length < ell), None)
            if s is None:
                break
            g = s * g
        self._section_cache[c] = g
        return g

    def decompose(self, w: GroupElement) -> tuple[tuple[int, ...], GroupElement]:
        """``w = s_{a1} ... s_{ak} τ`` with ``k = ℓ(w)`` and ``τ`` of length 0."""
        letters = []
        g = w
        while g.length > 0:
            ell = g.length
            i = next(i for i, s in enumerate(self.generators) if (s * g).length < ell)
            letters.append(i)
            g = self.generators[i] * g
        return tuple(letters), g

    # -- enumeration --------------------------------------------------------

    def ball(self, radius: int, cap: int | None = None) -> dict[GroupElement, int]:
        """Cayley-graph ball: every element with its word length, up to ``radius``.

        The search starts from the length-0 sections of Ω and multiplies by
        affine generators on the right; the BFS depth is the Coxeter length,
        obtained without calling :meth:`length`.
        """
        if radius in self._ball_cache:
            return self._ball_cache[radius]
        cap = self.element_cap if cap is None else cap
        dist: dict[GroupElement, int] = {}
        queue = deque()
        for c in self.omega_elements():
            tau = self.omega_section(c)
            dist[tau] = 0
            queue.append(tau)
        while queue:
            w = queue.popleft()
            d = dist[w]
            if d == radius:
                continue
            for s in self.generators:
                x = w * s
                if x not in dist:
                    if len(dist) >= cap:
                        raise EnumerationCapExceeded(
                            f"more than {cap} elements within length {radius};"
                            " raise QCOXETER_ELEMENT_CAP")
                    dist[x] = d + 1
                    queue.append(x)
        self._ball_cache[radius] = dist
        return dist

    def elements_up_to(self, max_length: int) -> list[GroupElement]:
        return list(self.ball(max_length))

    def random_element(self, word_length: int, seed=None) -> GroupElement:
        rng = random.Random(seed)
        w = self.identity
        for _ in range(word_length):
            w = w * self.generators[rng.randrange(len(self.generators))]
        return w * self.omega_section(rng.choice(self.omega_elements()))

    def finite_weyl(self) -> tuple[FiniteWeylElement, ...]:
        return enumerate_finite_weyl(self.root_system, self.weyl_cap)


# --------------------------------------------------------------------------
# validation


def _translations_in_box(G: QuasiCoxeterGroup, bound: int):
    """Translations of ``Λ_free`` whose simple-root pairings are at most ``bound``."""
    rs = G.root_system
    a_inv = fundamental_coweights(rs)  # rows: omega_i
    # Λ-coordinates of omega_i; |n_j| <= bound * sum_i |coord_ij|
    om = [linalg.vec_mat(list(w), G._basis_inv) for w in a_inv]
    lim = [int(bound * sum(abs(om[i][j]) for i in range(rs.rank))) + 1 for j in range(rs.rank)]
    for n in itertools.product(*(range(-m, m + 1) for m in lim)):
        lam = G.from_lattice_coordinates(n)
        if all(abs(pairing(lam, a)) <= bound for a in rs.simple_roots):
            yield G.translation(lam)


def validate_qcg(G: QuasiCoxeterGroup, bound: int = 8, samples: int = 40,
                 seed: int = 0) -> ValidationReport:
    """Check the quasi-Coxeter hypotheses for the group's lattice data.

    Structural problems (lattice not W-stable, coroots missing) are raised by
    the constructor already.  The report covers:

    * ``N``: Λ_free pairs integrally with roots, so Ω normalises the
      affine Weyl group;
    * ``QCG1``: each length-0 section fixes the base alcove and permutes the
      affine generators by conjugation;
    * ``QCG2``: sampled elements factor as translation times finite part;
    * ``QCG3``: translation length is constant on W-orbits, exhaustively for
      length at most ``bound`` and on random samples beyond;
    * ``QCG4``: Λ is finitely generated abelian (true by construction).
    """
    rs = G.root_system
    checks = []

    bad = next((b for b in G.basis for a in rs.simple_roots
                if pairing(b, a).denominator != 1), None)
    checks.append(CheckResult("N", bad is None,
                              "" if bad is None else f"<{bad}, alpha> is not an integer"))

    base_verts = set(base_vertices(rs))
    gens = set(G.generators)
    failure = ""
    for c in G.omega_elements():
        tau = G.omega_section(c)
        if tau.length != 0 or {tau(v) for v in base_verts} != base_verts:
            failure = f"section of {c} does not fix the base alcove"
            break
        if any(G.conjugate(tau, s) not in gens for s in G.generators):
            failure = f"section of {c} does not permute the affine generators"
            break
    checks.append(CheckResult("QCG1", not failure, failure))

    rng = random.Random(seed)
    sample = [G.random_element(rng.randrange(12), rng.random()) for _ in range(samples)]
    weyl = set(G.finite_weyl())
    failure = ""
    for w in sample:
        t = G.translation(w.lambda_free, w.lambda_torsion)
        u = G.finite(w.finite_part)
        if t * u != w or w.finite_part not in weyl or not G.contains(w.lambda_free):
            failure = f"{w} does not factor"
            break
    checks.append(CheckResult("QCG2", not failure, failure))

    failure = ""
    weyl_elems = [G.finite(u) for u in G.finite_weyl()]
    candidates = [t for t in _translations_in_box(G, bound + len(rs.positive_roots))
                  if t.length <= bound]
    box = [t for t in _translations_in_box(G, 3 * bound)]
    candidates += rng.sample(box, min(samples, len(box)))
    for t in candidates:
        ell = t.length
        for u in weyl_elems:
            if G.conjugate(u, t).length != ell:
                failure = f"length of {t} changes under conjugation"
                break
        if failure:
            break
    checks.append(CheckResult("QCG3", not failure, failure))
    checks.append(CheckResult("QCG4", True, "finitely generated by construction"))
    return ValidationReport(checks)

