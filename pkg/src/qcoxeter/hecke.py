"""Iwahori-Hecke algebras of quasi-Coxeter groups and their truncated centres.

Elements are finite combinations of basis vectors ``T_w`` with rational
coefficients.  Multiplication uses the Iwahori-Matsumoto rules

* ``T_s T_w = T_{sw}`` if ``ℓ(sw) > ℓ(w)``, else ``(q_s - 1) T_w + q_s T_{sw}``,
* ``T_w T_τ = T_{wτ}`` for ``τ`` of length 0,

with integer parameters ``q_s``.

>>> from qcoxeter.group import QuasiCoxeterGroup
>>> G = QuasiCoxeterGroup.adjoint("A", 1)
>>> q = QParams.uniform(G, 2)
>>> center_dimension(G, 2, G.omega_identity(), q)
2
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping

from . import linalg
from .group import GroupElement, OmegaElement, QuasiCoxeterGroup
from .rootsys import fundamental_coweights

__all__ = [
    "QParams",
    "HeckeElement",
    "CentralitySystem",
    "DimensionReport",
    "BoundViolation",
    "mul_generator_left",
    "mul_generator_right",
    "mul_omega",
    "mul",
    "is_central",
    "build_centrality_system",
    "center_basis",
    "center_dimension",
    "translation_orbit_count",
    "check_dimension_bound",
]


class BoundViolation(AssertionError):
    def __init__(self, report: DimensionReport):
        super().__init__(f"dimension {report.dim} exceeds orbit count {report.orbits}")
        self.report = report


@dataclass(frozen=True)
class QParams:
    """Integer parameters ``q_s`` for the affine generators ``s_0 .. s_r``."""

    values: tuple[int, ...]

    def __post_init__(self):
        if any(int(v) != v or v < 1 for v in self.values):
            raise ValueError("q parameters must be positive integers")

    def __getitem__(self, s: int) -> int:
        return self.values[s]

    @classmethod
    def uniform(cls, G: QuasiCoxeterGroup, q: int) -> QParams:
        return cls(tuple(q for _ in G.generators))

    @classmethod
    def from_mapping(cls, G: QuasiCoxeterGroup, values: Mapping[int, int], default: int = 2):
        return cls(tuple(values.get(s, default) for s in range(len(G.generators))))

    def check_invariance(self, G: QuasiCoxeterGroup, bound: int = 4) -> None:
        """Raise if ``q`` differs on two generators that are conjugate in the group.

        Conjugacy among generators is detected by conjugating with every
        element of length at most ``bound`` (Ω-sections included).
        """
        n = len(G.generators)
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        index = {g: i for i, g in enumerate(G.generators)}
        for g in G.ball(bound):
            gi = g.inverse()
            for i, s in enumerate(G.generators):
                j = index.get(g * s * gi)
                if j is not None:
                    parent[find(i)] = find(j)
        for i in range(n):
            if self.values[i] != self.values[find(i)]:
                raise ValueError(
                    f"q(s{i}) = {self.values[i]} but s{i} is conjugate to s{find(i)}"
                    f" with q = {self.values[find(i)]}")


class HeckeElement:
    """Finite combination ``sum h_w T_w`` with exact rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[GroupElement, Fraction | int] | None = None):
        self.terms: dict[GroupElement, Fraction] = {
            w: Fraction(c) for w, c in (terms or {}).items() if c != 0}

    @classmethod
    def basis(cls, w: GroupElement) -> HeckeElement:
        return cls({w: 1})

    def __eq__(self, other):
        return isinstance(other, HeckeElement) and self.terms == other.terms

    def __add__(self, other: HeckeElement) -> HeckeElement:
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return HeckeElement(out)

    def __sub__(self, other: HeckeElement) -> HeckeElement:
        return self + other.scale(-1)

    def scale(self, c) -> HeckeElement:
        return HeckeElement({w: c * x for w, x in self.terms.items()})

    def coefficient(self, w: GroupElement) -> Fraction:
        return self.terms.get(w, Fraction(0))

    @property
    def support(self) -> set[GroupElement]:
        return set(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*T[{w}]" for w, c in self.terms.items())


def _accumulate(out: dict, w, c):
    out[w] = out.get(w, 0) + c


def mul_generator_left(s: int, h: HeckeElement, q: QParams) -> HeckeElement:
    """``T_s * h``."""
    out: dict[GroupElement, Fraction] = {}
    for x, c in h.terms.items():
        g = x.group.generators[s]
        sx = g * x
        if sx.length > x.length:
            _accumulate(out, sx, c)
        else:
            _accumulate(out, x, (q[s] - 1) * c)
            _accumulate(out, sx, q[s] * c)
    return HeckeElement(out)


def mul_generator_right(h: HeckeElement, s: int, q: QParams) -> HeckeElement:
    """``h * T_s``."""
    out: dict[GroupElement, Fraction] = {}
    for x, c in h.terms.items():
        g = x.group.generators[s]
        xs = x * g
        if xs.length > x.length:
            _accumulate(out, xs, c)
        else:
            _accumulate(out, x, (q[s] - 1) * c)
            _accumulate(out, xs, q[s] * c)
    return HeckeElement(out)


def _relabel(h: HeckeElement, tau: GroupElement, side: str) -> HeckeElement:
    if side == "left":
        return HeckeElement({tau * x: c for x, c in h.terms.items()})
    if side == "right":
        return HeckeElement({x * tau: c for x, c in h.terms.items()})
    raise ValueError("side must be 'left' or 'right'")


def mul_omega(h: HeckeElement, c: OmegaElement, side: str, G: QuasiCoxeterGroup) -> HeckeElement:
    """``T_τ * h`` or ``h * T_τ`` for the length-0 section ``τ`` of ``c``."""
    return _relabel(h, G.omega_section(c), side)


def mul(h1: HeckeElement, h2: HeckeElement, q: QParams) -> HeckeElement:
    """Product of two Hecke elements.

    Each ``T_y`` of ``h2`` is factored as ``T_{s_1} ... T_{s_k} T_τ`` from a
    reduced decomposition ``y = s_1 ... s_k τ``, and ``h1`` is multiplied by
    these factors on the right one at a time.
    """
    total = HeckeElement()
    for y, c in h2.terms.items():
        letters, tau = y.group.decompose(y)
        part = h1
        for s in letters:
            part = mul_generator_right(part, s, q)
        total = total + _relabel(part, tau, "right").scale(c)
    return total


def is_central(h: HeckeElement, q: QParams, G: QuasiCoxeterGroup) -> bool:
    """Commutes with every ``T_s`` and with ``T_τ`` for each Ω generator."""
    for s in range(len(G.generators)):
        if mul_generator_left(s, h, q) != mul_generator_right(h, s, q):
            return False
    for c in G.omega_generators():
        if mul_omega(h, c, "left", G) != mul_omega(h, c, "right", G):
            return False
    return True


@dataclass
class CentralitySystem:
    variables: list[GroupElement]
    equations: list[dict[int, Fraction]]
    L: int
    tau: OmegaElement
    q: QParams
    index: dict[GroupElement, int] = field(default_factory=dict)

    def nullspace(self) -> list[list[Fraction]]:
        return linalg.nullspace(self.equations, len(self.variables))

    def element(self, vector) -> HeckeElement:
        return HeckeElement({w: c for w, c in zip(self.variables, vector)})


def build_centrality_system(G: QuasiCoxeterGroup, L: int, tau: OmegaElement,
                            q: QParams) -> CentralitySystem:
    """Linear conditions for ``h`` supported on ``{ℓ ≤ L, Ω = τ}`` to be central.

    Comparing coefficients of ``T_x`` in ``T_s h`` and ``h T_s``: the left
    side is ``q h_{sx}`` when ``ℓ(sx) > ℓ(x)`` and ``h_{sx} + (q - 1) h_x``
    otherwise; the right side mirrors this with ``xs``.  All terms have the
    Ω-class of ``x``.  Only ``ℓ(x) <= L + 1`` is needed: for longer ``x``
    every term has length at least ``ℓ(x) - 1 > L`` and vanishes.
    Commuting with ``T_τ'`` for the Ω generators gives ``h_x = h_{τ' x τ'^{-1}}``.
    """
    ball = G.ball(L + 1)
    variables = [w for w, d in ball.items() if d <= L and G.omega_projection(w) == tau]
    index = {w: i for i, w in enumerate(variables)}
    rows: list[dict[int, Fraction]] = []

    def add(row: dict, w: GroupElement, c):
        i = index.get(w)
        if i is not None and c:
            row[i] = row.get(i, 0) + c

    for x, d in ball.items():
        if G.omega_projection(x) != tau:
            continue
        lx = d
        for s, g in enumerate(G.generators):
            row: dict[int, Fraction] = {}
            sx, xs = g * x, x * g
            if sx.length > lx:
                add(row, sx, q[s])
            else:
                add(row, sx, 1)
                add(row, x, q[s] - 1)
            if xs.length > lx:
                add(row, xs, -q[s])
            else:
                add(row, xs, -1)
                add(row, x, -(q[s] - 1))
            row = {k: v for k, v in row.items() if v}
            if row:
                rows.append(row)
    for c in G.omega_generators():
        t = G.omega_section(c)
        ti = t.inverse()
        for x in variables:
            row = {}
            add(row, x, 1)
            add(row, t * x * ti, -1)
            row = {k: v for k, v in row.items() if v}
            if row:
                rows.append(row)
    return CentralitySystem(variables, rows, L, tau, q, index)


def center_basis(G: QuasiCoxeterGroup, L: int, tau: OmegaElement, q: QParams,
                 check: bool = True) -> list[HeckeElement]:
    """A basis of the central elements supported on ``{ℓ ≤ L, Ω = τ}``."""
    system = build_centrality_system(G, L, tau, q)
    basis = [system.element(v) for v in system.nullspace()]
    if check:
        for z in basis:
            if not is_central(z, q, G):
                raise AssertionError(f"nullspace vector is not central: {z}")
    return basis


def center_dimension(G: QuasiCoxeterGroup, L: int, tau: OmegaElement, q: QParams) -> int:
    return len(center_basis(G, L, tau, q))


def _dominant_translations(G: QuasiCoxeterGroup, L: int):
    """Dominant ``λ ∈ Λ_free`` with ``ℓ(t_λ) = Σ_{α>0} <λ, α> <= L``."""
    rs = G.root_system
    weights = [sum(c[i] for c in rs.root_coords) for i in range(rs.rank)]
    om = fundamental_coweights(rs)
    for cs in product(*(range(L // w + 1) for w in weights)):
        if sum(c * w for c, w in zip(cs, weights)) > L:
            continue
        lam = tuple(sum(c * o[j] for c, o in zip(cs, om)) for j in range(rs.rank))
        if G.contains(lam):
            yield lam


def translation_orbit_count(G: QuasiCoxeterGroup, L: int, tau: OmegaElement):
    """Number of W-orbits of translations with length ``<= L`` in class ``τ``.

    Returns ``(count, orbits)`` where each orbit is a frozenset of translations.
    """
    weyl = G.finite_weyl()
    torsions = list(product(*(range(m) for m in G.torsion_orders)))
    orbits = []
    for lam in _dominant_translations(G, L):
        points = {u(lam) for u in weyl}
        for tor in torsions:
            orbit = frozenset(G.translation(p, tor) for p in points)
            lengths = {t.length for t in orbit}
            if len(lengths) != 1:
                raise AssertionError(f"length is not constant on the orbit of {lam}")
            if lengths.pop() <= L and G.omega_projection(next(iter(orbit))) == tau:
                orbits.append(orbit)
    return len(orbits), orbits


@dataclass(frozen=True)
class DimensionReport:
    group: str
    L: int
    tau: str
    q: tuple[int, ...]
    dim: int
    orbits: int

    @property
    def ok(self) -> bool:
        return self.dim <= self.orbits

    @property
    def tight(self) -> bool:
        return self.dim == self.orbits


def check_dimension_bound(G: QuasiCoxeterGroup, L: int, tau: OmegaElement,
                          q: QParams) -> DimensionReport:
    """Compare ``dim Z_{L,τ}`` with the orbit count; raise if the bound fails."""
    report = DimensionReport(repr(G), L, str(tau), q.values,
                             center_dimension(G, L, tau, q),
                             translation_orbit_count(G, L, tau)[0])
    if not report.ok:
        raise BoundViolation(report)
    return report

