"""Reduced irreducible root systems in exact coordinates.

Conventions
-----------
* The ambient space is spanned by the simple coroots; a point ``x`` is a
  tuple of rationals ``(x_1, ..., x_r)`` meaning ``sum x_j alpha_j^vee``.
* A root is stored as an integer *covector* ``(<alpha_1^vee, a>, ...,
  <alpha_r^vee, a>)``, so the pairing with a point is a dot product.
* ``cartan[i][j] = <alpha_i^vee, alpha_j>``.  Simple roots are numbered
  following Bourbaki's plates:

  ====  =========================================================
  A_n   chain 1 - 2 - ... - n
  B_n   chain, alpha_n short
  C_n   chain, alpha_n long
  D_n   chain 1 - ... - (n-2), with n-1 and n both attached to n-2
  G_2   alpha_1 short, alpha_2 long
  F_4   alpha_1, alpha_2 long; alpha_3, alpha_4 short
  ====  =========================================================
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from typing import Sequence

from . import linalg

__all__ = [
    "CartanDatum",
    "RootSystem",
    "FiniteWeylElement",
    "WeylGroupTooLarge",
    "build_root_system",
    "cartan_matrix",
    "pairing",
    "simple_reflection",
    "highest_root",
    "fundamental_coweights",
    "enumerate_finite_weyl",
]

FAMILIES = ("A", "B", "C", "D", "G", "F")
DEFAULT_WEYL_CAP = int(os.environ.get("QCOXETER_WEYL_CAP", "2000"))

Point = tuple[Fraction, ...]
Covector = tuple[int, ...]


class WeylGroupTooLarge(RuntimeError):
    """The finite Weyl group is bigger than the configured enumeration cap."""


@dataclass(frozen=True)
class CartanDatum:
    family: str
    rank: int

    def __post_init__(self):
        fam, n = self.family, self.rank
        ok = {
            "A": n >= 1,
            "B": n >= 2,
            "C": n >= 2,
            "D": n >= 3,
            "G": n == 2,
            "F": n == 4,
        }.get(fam, False)
        if not ok:
            raise ValueError(f"no reduced irreducible root system of type {fam}{n}")

    def __str__(self):
        return f"{self.family}{self.rank}"


def cartan_matrix(c: CartanDatum) -> tuple[tuple[int, ...], ...]:
    n = c.rank
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    if c.family == "D":
        chain = range(n - 2)
    else:
        chain = range(n - 1)
    for i in chain:
        a[i][i + 1] = a[i + 1][i] = -1
    if c.family == "B":
        a[n - 1][n - 2] = -2
    elif c.family == "C":
        a[n - 2][n - 1] = -2
    elif c.family == "D":
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
        a[n - 2][n - 1] = a[n - 1][n - 2] = 0
    elif c.family == "G":
        a[0][1] = -3
    elif c.family == "F":
        a[2][1] = -2
    return tuple(tuple(row) for row in a)


@dataclass(frozen=True, eq=False)
class FiniteWeylElement:
    """An element of the finite Weyl group, as its matrix on coroot coordinates."""

    matrix: tuple[tuple[int, ...], ...]
    word: tuple[int, ...] | None = field(default=None, compare=False)

    def __eq__(self, other):
        return isinstance(other, FiniteWeylElement) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __mul__(self, other: FiniteWeylElement) -> FiniteWeylElement:
        word = None
        if self.word is not None and other.word is not None:
            word = self.word + other.word
        return FiniteWeylElement(_matmul(self.matrix, other.matrix), word)

    def __call__(self, x: Sequence) -> tuple:
        return tuple(sum(a * b for a, b in zip(row, x)) for row in self.matrix)

    def inverse(self) -> FiniteWeylElement:
        word = None if self.word is None else tuple(reversed(self.word))
        return FiniteWeylElement(_inverse(self.matrix), word)

    def act_on_root(self, alpha: Covector) -> Covector:
        """The covector ``u(alpha)``, i.e. ``x -> <u^{-1} x, alpha>``."""
        return tuple(linalg.vec_mat(alpha, _inverse(self.matrix)))

    def pull_back_root(self, alpha: Covector) -> Covector:
        """The covector ``u^{-1}(alpha)``, i.e. ``x -> <u x, alpha>``."""
        return tuple(linalg.vec_mat(alpha, self.matrix))

    @property
    def is_identity(self) -> bool:
        return all(x == int(i == j) for i, row in enumerate(self.matrix) for j, x in enumerate(row))


@cache
def _matmul(a, b):
    return tuple(tuple(row) for row in linalg.mat_mul(a, b))


@cache
def _inverse(a):
    return linalg.integer_inverse(a)


@dataclass(frozen=True, eq=False)
class RootSystem:
    """Root data of a reduced irreducible root system.

    Built by :func:`build_root_system`; instances are interned per datum, so
    identity comparison is meaningful.
    """

    cartan: CartanDatum
    cartan_matrix: tuple[tuple[int, ...], ...]
    positive_roots: tuple[Covector, ...]
    root_coords: tuple[tuple[int, ...], ...]  # simple-root coefficients, same order
    positive_coroots: tuple[tuple[int, ...], ...]  # coroot coordinates, same order
    coroot_norms: tuple[Fraction, ...]  # (alpha_i^vee, alpha_i^vee), W-invariant form

    @property
    def rank(self) -> int:
        return self.cartan.rank

    @property
    def simple_roots(self) -> tuple[Covector, ...]:
        return self.positive_roots[: self.rank]

    @property
    def simple_coroots(self) -> tuple[tuple[int, ...], ...]:
        return self.positive_coroots[: self.rank]

    @property
    def root_index(self) -> dict[Covector, int]:
        return _root_index(self)

    def signed_index(self, alpha: Covector) -> tuple[int, int]:
        """``(sign, i)`` with ``alpha == sign * positive_roots[i]``."""
        idx = self.root_index
        if alpha in idx:
            return 1, idx[alpha]
        neg = tuple(-a for a in alpha)
        if neg in idx:
            return -1, idx[neg]
        raise ValueError(f"{alpha} is not a root of {self.cartan}")

    def coroot(self, alpha: Covector) -> tuple[int, ...]:
        sign, i = self.signed_index(alpha)
        return tuple(sign * c for c in self.positive_coroots[i])

    def height(self, alpha: Covector) -> int:
        sign, i = self.signed_index(alpha)
        return sign * sum(self.root_coords[i])

    @property
    def coxeter_number(self) -> int:
        """``<rho^vee, theta> + 1``."""
        return self.height(highest_root(self)) + 1

    @property
    def gram_matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        """W-invariant inner products ``(alpha_i^vee, alpha_j^vee)``."""
        a, c = self.cartan_matrix, self.coroot_norms
        return tuple(tuple(Fraction(a[i][j]) * c[j] / 2 for j in range(self.rank))
                     for i in range(self.rank))

    def __repr__(self):
        return f"RootSystem({self.cartan})"


@cache
def _root_index(rs: RootSystem) -> dict[Covector, int]:
    return {a: i for i, a in enumerate(rs.positive_roots)}


def _coroot_norms(a) -> tuple[Fraction, ...]:
    # a_ij c_j = a_ji c_i  on every edge of the (connected) Dynkin diagram
    n = len(a)
    c: list[Fraction | None] = [None] * n
    c[0] = Fraction(2)
    todo = deque([0])
    while todo:
        i = todo.popleft()
        for j in range(n):
            if j != i and a[i][j] and c[j] is None:
                c[j] = Fraction(a[j][i]) * c[i] / a[i][j]
                todo.append(j)
    shortest = min(c)
    return tuple(x * 2 / shortest for x in c)


@cache
def build_root_system(c: CartanDatum) -> RootSystem:
    """Generate all positive roots by closing the simple roots under simple reflections.

    Roots and coroots are reflected in tandem, so each root carries its own
    coroot without appeal to root lengths.  Simple roots come first, then the
    remaining positive roots by height, ties broken by reverse lexicographic
    order on the simple-root coefficients.
    """
    a = cartan_matrix(c)
    n = c.rank

    def reflect(j, root, coroot):
        cj = sum(root[i] * a[j][i] for i in range(n))        # <alpha_j^vee, alpha>
        dj = sum(coroot[k] * a[k][j] for k in range(n))      # <alpha^vee, alpha_j>
        new_root = tuple(x - (cj if i == j else 0) for i, x in enumerate(root))
        new_coroot = tuple(x - (dj if i == j else 0) for i, x in enumerate(coroot))
        return new_root, new_coroot

    unit = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    seen = {u: u for u in unit}
    queue = deque((u, u) for u in unit)
    while queue:
        root, coroot = queue.popleft()
        for j in range(n):
            r2, c2 = reflect(j, root, coroot)
            if r2 not in seen:
                seen[r2] = c2
                queue.append((r2, c2))

    positive = [r for r in seen if all(x >= 0 for x in r)]
    positive.sort(key=lambda r: (sum(r), [-x for x in r]))
    covectors = tuple(tuple(sum(r[i] * a[j][i] for i in range(n)) for j in range(n))
                      for r in positive)
    return RootSystem(
        cartan=c,
        cartan_matrix=a,
        positive_roots=covectors,
        root_coords=tuple(positive),
        positive_coroots=tuple(seen[r] for r in positive),
        coroot_norms=_coroot_norms(a),
    )


def pairing(x: Sequence, alpha: Sequence) -> int | Fraction:
    """``<x, alpha>`` for a point in coroot coordinates and a root covector."""
    if len(x) != len(alpha):
        raise ValueError("dimension mismatch")
    # ints and Fractions mix exactly; the result is an int when integral
    total = sum(p * q for p, q in zip(x, alpha))
    if isinstance(total, Fraction) and total.denominator == 1:
        return total.numerator
    return total


def simple_reflection(rs: RootSystem, i: int) -> FiniteWeylElement:
    """``s_i(x) = x - <x, alpha_i> alpha_i^vee`` for ``1 <= i <= rank``."""
    if not 1 <= i <= rs.rank:
        raise IndexError(f"simple reflection index {i} out of range 1..{rs.rank}")
    return _simple_reflection(rs, i)


@cache
def _simple_reflection(rs: RootSystem, i: int) -> FiniteWeylElement:
    n, a = rs.rank, rs.cartan_matrix
    k = i - 1
    m = [[int(p == q) for q in range(n)] for p in range(n)]
    for q in range(n):
        m[k][q] -= a[q][k]
    return FiniteWeylElement(tuple(tuple(r) for r in m), (i,))


def root_reflection(rs: RootSystem, alpha: Covector) -> FiniteWeylElement:
    """Reflection ``x -> x - <x, alpha> alpha^vee`` for any root."""
    cor = rs.coroot(alpha)
    n = rs.rank
    m = tuple(tuple(int(p == q) - cor[p] * alpha[q] for q in range(n)) for p in range(n))
    return FiniteWeylElement(m)


def highest_root(rs: RootSystem) -> Covector:
    return max(zip(rs.root_coords, rs.positive_roots), key=lambda t: sum(t[0]))[1]


@cache
def fundamental_coweights(rs: RootSystem) -> tuple[Point, ...]:
    """Points ``omega_i`` with ``<omega_i, alpha_j> = delta_ij``."""
    inv = linalg.inverse(rs.cartan_matrix)
    return tuple(tuple(row) for row in inv)


@cache
def rho_check(rs: RootSystem) -> Point:
    return tuple(sum(col, Fraction(0)) for col in zip(*fundamental_coweights(rs)))


@cache
def base_point(rs: RootSystem) -> Point:
    """``rho^vee / h``; lies strictly inside the base alcove."""
    h = rs.coxeter_number
    return tuple(x / h for x in rho_check(rs))


def identity_element(rs: RootSystem) -> FiniteWeylElement:
    return FiniteWeylElement(tuple(tuple(r) for r in linalg.identity(rs.rank)), ())


@cache
def _enumerate(rs: RootSystem, cap: int) -> tuple[FiniteWeylElement, ...]:
    gens = [simple_reflection(rs, i) for i in range(1, rs.rank + 1)]
    start = identity_element(rs)
    seen = {start.matrix: start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for s in gens:
            v = u * s
            if v.matrix not in seen:
                if len(seen) >= cap:
                    raise WeylGroupTooLarge(
                        f"W({rs.cartan}) has more than {cap} elements; raise the cap"
                        " (QCOXETER_WEYL_CAP) to enumerate it")
                seen[v.matrix] = v
                queue.append(v)
    return tuple(seen.values())


def enumerate_finite_weyl(rs: RootSystem, cap: int | None = None) -> tuple[FiniteWeylElement, ...]:
    """All elements of the finite Weyl group, breadth-first from the identity.

    Each element carries a reduced word in its ``word`` attribute.
    """
    return _enumerate(rs, DEFAULT_WEYL_CAP if cap is None else cap)


@cache
def longest_element(rs: RootSystem) -> FiniteWeylElement:
    return enumerate_finite_weyl(rs)[-1]
