"""Search for lateral conjugates with a direct diamond, with checkable certificates.

For ``w`` outside the translation subgroup, :func:`find_diamond` returns a
sequence ``s_1, ..., s_n`` of affine generators and a witness ``s`` such
that every partial conjugate ``s_i ... s_1 w s_1 ... s_i`` has the length of
``w`` and the final conjugate ``w'`` satisfies ``ℓ(s w' s) > ℓ(w')``.

The search runs in three phases:

* *intermediate*: walk the vertex ``w(0)`` into the closed antidominant
  chamber by conjugating with finite simple reflections;
* *dominant shortcut*: if the base alcove lies in the Weyl chamber of the
  marked alcove of ``w``, a finite simple reflection works immediately;
* *antidominant*: conjugate along a reduced word of ``t_{2ρ^vee}`` repeated
  forever, which drags the pair of alcoves deep into the dominant chamber
  until a direct diamond shows up.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .geometry import (
    Gallery,
    antidominant_chamber,
    base_alcove,
    base_walls,
    chamber_of,
    dist_vertex_region,
    distance,
    infinite_gallery_word,
    is_umbrella,
    marked_alcove_of,
    region_contains_alcove,
)
from .group import GroupElement, QuasiCoxeterGroup
from .rootsys import pairing

__all__ = [
    "DiamondCertificate",
    "TranscriptStep",
    "Verification",
    "TranslationInput",
    "TheoremViolation",
    "has_direct_diamond",
    "dominant_case_witness",
    "intermediate_reduction",
    "antidominant_search",
    "find_diamond",
    "verify_certificate",
    "brute_force_diamond",
    "lateral_class",
    "certificate_to_text",
    "certificate_from_text",
]

INSTRUMENT = os.environ.get("QCOXETER_INSTRUMENT", "1") != "0"


class TranslationInput(ValueError):
    """Raised for elements of Λ: the search needs ``w ∉ Λ``."""


class TheoremViolation(AssertionError):
    """An invariant that the underlying theory guarantees has failed."""


@dataclass(frozen=True)
class TranscriptStep:
    element: GroupElement
    length: int
    phase: str  # "intermediate", "antidominant", "dominant-shortcut" or "early-return"
    generator: int | None = None


@dataclass
class DiamondCertificate:
    original: GroupElement
    conjugators: tuple[int, ...]
    witness: int
    final_element: GroupElement
    transcript: list[TranscriptStep] = field(default_factory=list)
    iterations: int = 0


@dataclass(frozen=True)
class Verification:
    ok: bool
    reason: str = "ok"

    def __bool__(self):
        return self.ok


def _gen(w: GroupElement, s: int) -> GroupElement:
    return w.group.generators[s]


def _require_not_translation(w: GroupElement):
    if w.is_translation():
        raise TranslationInput(
            f"{w} is a translation; the diamond search requires w ∉ Λ")


def has_direct_diamond(w: GroupElement, s: int) -> bool:
    """``ℓ(sw) > ℓ(w)``, ``ℓ(ws) > ℓ(w)`` and ``sws != w``.

    The equivalent single condition ``ℓ(sws) > ℓ(w)`` is evaluated as well and
    must agree.
    """
    g = _gen(w, s)
    ell = w.length
    sws = g * w * g
    three = (g * w).length > ell and (w * g).length > ell and sws != w
    unified = sws.length > ell
    if three != unified:
        raise TheoremViolation(f"direct diamond forms disagree for {w} at s{s}")
    return three


def dominant_case_witness(w: GroupElement) -> int:
    """A finite simple reflection giving a direct diamond when ``w(A°) ⊂ C°``.

    Writing ``w = t u``, any wall of ``u(C°)`` between ``u(A°)`` and ``A°``
    works; the least ``i`` with ``u(α_i) < 0`` is returned.
    """
    _require_not_translation(w)
    rs = w.group.root_system
    m = marked_alcove_of(w)
    if not region_contains_alcove(antidominant_chamber(rs).opposite(), m.alcove):
        raise ValueError(f"{w} does not send the base alcove into the dominant chamber")
    u = w.finite_part
    for i, a in enumerate(rs.simple_roots):
        if rs.signed_index(u.act_on_root(a))[0] < 0:
            if not has_direct_diamond(w, i + 1):
                raise TheoremViolation(f"dominant case failed for {w} at s{i + 1}")
            return i + 1
    raise TheoremViolation("finite part is trivial")  # unreachable for w ∉ Λ


def _is_antidominant(rs, v) -> bool:
    return all(pairing(v, a) <= 0 for a in rs.positive_roots)


def intermediate_reduction(w: GroupElement, checks: bool | None = None):
    """Conjugate by finite simple reflections until ``w(0)`` is antidominant.

    Returns ``(conjugators, element, witness, transcript)``; ``witness`` is not
    ``None`` when some conjugation would have raised the length, in which case
    that generator already gives a direct diamond for ``element``.
    """
    _require_not_translation(w)
    checks = INSTRUMENT if checks is None else checks
    G = w.group
    rs = G.root_system
    opp = antidominant_chamber(rs)
    zero = tuple(0 for _ in range(rs.rank))
    ell = w.length
    conj: list[int] = []
    transcript = [TranscriptStep(w, ell, "intermediate")]
    progress = dist_vertex_region(rs, w(zero), opp) if checks else None
    while True:
        v = w(zero)
        cands = [i + 1 for i, a in enumerate(rs.simple_roots)
                 if pairing(v, a) != 0 and (G.generators[i + 1] * w).length > ell]
        if not cands:
            if not _is_antidominant(rs, v):
                raise TheoremViolation(f"{v} should be antidominant")
            return conj, w, None, transcript
        s = cands[0]
        g = G.generators[s]
        sws = g * w * g
        if sws.length > ell:
            transcript.append(TranscriptStep(w, ell, "early-return", s))
            return conj, w, s, transcript
        w = sws
        conj.append(s)
        transcript.append(TranscriptStep(w, w.length, "intermediate", s))
        if checks:
            new = dist_vertex_region(rs, w(zero), opp)
            if not new < progress:
                raise TheoremViolation("vertex did not move towards the antidominant chamber")
            progress = new


def antidominant_search(w: GroupElement, max_iter: int | None = None,
                        checks: bool | None = None) -> DiamondCertificate:
    """Search along the ``2ρ^vee`` gallery, for ``w`` with antidominant ``w(0)``."""
    _require_not_translation(w)
    checks = INSTRUMENT if checks is None else checks
    G = w.group
    rs = G.root_system
    zero = tuple(0 for _ in range(rs.rank))
    if not _is_antidominant(rs, w(zero)):
        raise ValueError(f"{w}(0) is not in the closed antidominant chamber")
    ell = w.length
    base = base_alcove(rs)
    chamber = chamber_of(marked_alcove_of(w))
    if region_contains_alcove(chamber, base):
        s = dominant_case_witness(w.inverse())
        if not has_direct_diamond(w, s):
            raise TheoremViolation("swapped-frame witness does not transfer")
        return DiamondCertificate(w, (), s, w, [TranscriptStep(w, ell, "dominant-shortcut", s)])

    word = infinite_gallery_word(rs)
    if max_iter is None:
        max_iter = 16 * (ell + 2) * len(word)
    transcript = [TranscriptStep(w, ell, "antidominant")]
    conj: list[int] = []
    cur = w
    x = G.identity  # x_i = s_0 ... s_{i-1}: A_i = x_i(A°), B_i = w(A_i)
    b_gallery = [w.affine.alcove_image(base)]
    for i in range(max_iter):
        s = word[i % len(word)]
        if has_direct_diamond(cur, s):
            return DiamondCertificate(w, tuple(conj), s, cur, transcript, i)
        g = G.generators[s]
        if checks:
            if not (g * cur).length > ell:
                raise TheoremViolation(f"step {i}: ℓ(s w) does not increase")
            a_i = x.affine.alcove_image(base)
            h_i = x.affine.image(base_walls(rs)[s])
            if distance(a_i, b_gallery[-1]) != ell:
                raise TheoremViolation(f"step {i}: pair distance changed")
            if not is_umbrella(Gallery(tuple(b_gallery)), a_i, h_i):
                raise TheoremViolation(f"step {i}: B-gallery is not an umbrella")
        cur = g * cur * g
        if cur.length != ell:
            raise TheoremViolation(f"step {i}: lateral conjugation changed the length")
        conj.append(s)
        transcript.append(TranscriptStep(cur, ell, "antidominant", s))
        x = x * g
        if checks:
            b_gallery.append((w * x).affine.alcove_image(base))
    raise TheoremViolation(f"no direct diamond within {max_iter} iterations for {w}")


def find_diamond(w: GroupElement, max_iter: int | None = None,
                 checks: bool | None = None) -> DiamondCertificate:
    """Certificate of the diamond property for ``w ∉ Λ``."""
    _require_not_translation(w)
    conj, reduced, early, transcript = intermediate_reduction(w, checks)
    if early is not None:
        return DiamondCertificate(w, tuple(conj), early, reduced, transcript)
    tail = antidominant_search(reduced, max_iter, checks)
    steps = tail.transcript
    if steps[0].phase == "antidominant":
        steps = steps[1:]  # its first record repeats the reduced element
    return DiamondCertificate(w, tuple(conj) + tail.conjugators, tail.witness,
                              tail.final_element, transcript + steps, tail.iterations)


def verify_certificate(w: GroupElement, c: DiamondCertificate) -> Verification:
    """Replay a certificate using only multiplication and length."""
    if c.original != w:
        return Verification(False, "certificate is for a different element")
    G = w.group
    n = len(G.generators)
    if c.witness not in range(n) or any(s not in range(n) for s in c.conjugators):
        return Verification(False, "unknown generator")
    ell = w.length
    cur = w
    for k, s in enumerate(c.conjugators):
        g = G.generators[s]
        cur = g * cur * g
        if cur.length != ell:
            return Verification(False, f"conjugation {k + 1} by s{s} changes the length")
    if cur != c.final_element:
        return Verification(False, "final element does not match the replay")
    g = G.generators[c.witness]
    if not (g * cur).length > ell:
        return Verification(False, "ℓ(s w') does not exceed ℓ(w')")
    if not (cur * g).length > ell:
        return Verification(False, "ℓ(w' s) does not exceed ℓ(w')")
    if g * cur * g == cur:
        return Verification(False, "s w' s equals w'")
    return Verification(True)


def _lateral_neighbours(w: GroupElement):
    ell = w.length
    for g in w.group.generators:
        x = g * w * g
        if x.length == ell and x != w:
            yield x


def lateral_class(w: GroupElement, node_cap: int = 50_000) -> tuple[set[GroupElement], bool]:
    """Closure of ``w`` under length-preserving simple conjugation.

    Returns the set found and whether the closure is complete (not cut off
    by ``node_cap``).
    """
    seen = {w}
    queue = deque([w])
    while queue:
        x = queue.popleft()
        for y in _lateral_neighbours(x):
            if y not in seen:
                if len(seen) >= node_cap:
                    return seen, False
                seen.add(y)
                queue.append(y)
    return seen, True


def brute_force_diamond(w: GroupElement, node_cap: int = 50_000):
    """Breadth-first search of the lateral class for a direct diamond.

    Returns ``(element, witness)`` for the first hit, ``None`` if ``node_cap``
    nodes were visited without success, and raises :class:`TheoremViolation`
    if the whole class was explored without finding one.
    """
    _require_not_translation(w)
    n = len(w.group.generators)
    seen = {w}
    queue = deque([w])
    while queue:
        x = queue.popleft()
        ell = x.length
        for s in range(n):
            g = x.group.generators[s]
            if (g * x * g).length > ell:
                return x, s
        for y in _lateral_neighbours(x):
            if y not in seen:
                if len(seen) >= node_cap:
                    return None
                seen.add(y)
                queue.append(y)
    raise TheoremViolation(f"lateral class of {w} has no direct diamond")


# --------------------------------------------------------------------------
# text form


def _element_fields(prefix: str, w: GroupElement) -> list[str]:
    return [
        f"{prefix}.lambda: " + " ".join(str(c) for c in w.lambda_free),
        f"{prefix}.torsion: " + " ".join(str(c) for c in w.lambda_torsion),
        f"{prefix}.finite: " + " ; ".join(" ".join(map(str, r)) for r in w.finite_part.matrix),
    ]


def certificate_to_text(c: DiamondCertificate) -> str:
    G = c.original.group
    lines = [
        "# diamond certificate",
        f"type: {G.root_system.cartan}",
        *_element_fields("original", c.original),
        "conjugators: " + " ".join(f"s{s}" for s in c.conjugators),
        f"witness: s{c.witness}",
        *_element_fields("final", c.final_element),
        f"length: {c.original.length}",
        f"iterations: {c.iterations}",
        "phases: " + " ".join(step.phase for step in c.transcript),
    ]
    return "\n".join(lines) + "\n"


def _parse_element(G: QuasiCoxeterGroup, data: dict, prefix: str) -> GroupElement:
    from .rootsys import FiniteWeylElement

    lam = tuple(Fraction(x) for x in data[f"{prefix}.lambda"].split())
    tor = tuple(int(x) for x in data.get(f"{prefix}.torsion", "").split())
    rows = tuple(tuple(int(x) for x in r.split()) for r in data[f"{prefix}.finite"].split(";"))
    u = FiniteWeylElement(rows)
    if u not in set(G.finite_weyl()):
        raise ValueError(f"{prefix}: matrix is not in the finite Weyl group")
    return G.element(lam, tor, u)


def certificate_from_text(G: QuasiCoxeterGroup, text: str) -> DiamondCertificate:
    data = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        key, _, value = line.partition(":")
        data[key.strip()] = value.strip()
    if data.get("type") != str(G.root_system.cartan):
        raise ValueError(f"certificate type {data.get('type')} does not match {G.root_system.cartan}")

    def gen(name: str) -> int:
        if not name.startswith("s") or not name[1:].isdigit():
            raise ValueError(f"bad generator name {name!r}")
        return int(name[1:])

    return DiamondCertificate(
        original=_parse_element(G, data, "original"),
        conjugators=tuple(gen(x) for x in data.get("conjugators", "").split()),
        witness=gen(data["witness"]),
        final_element=_parse_element(G, data, "final"),
        iterations=int(data.get("iterations", 0)),
    )
