"""Command line interface: ``qcoxeter {validate,diamond,center,orbits,render} CONFIG ...``.

Configuration files are INI documents::

    [group]
    family = C
    rank = 2
    lattice = adjoint          ; adjoint | coweight | explicit
    generators = 1/2 0; 0 1    ; rows in coroot coordinates (explicit only)
    torsion = 2                ; comma separated orders, optional

    [hecke]
    q = 2                      ; one integer, or per generator: s0:2, s1:3

    [limits]
    node_cap = 50000
    element_cap = 200000
    max_iter = 0               ; 0 means the built-in default
    seed = 0
    qcg_bound = 8

Environment variables ``QCOXETER_NODE_CAP``, ``QCOXETER_ELEMENT_CAP``,
``QCOXETER_WEYL_CAP`` and ``QCOXETER_MAX_ITER`` override the ``[limits]`` values.

Elements are written as whitespace separated tokens multiplied left to
right: ``s0 .. sr`` for the affine generators, ``t(c1,...,ck)`` for the
translation by ``sum c_i g_i`` over the lattice generator rows (append
``;t1,...`` for torsion components) and ``omega(k1,...)`` for the
length-0 representative of a class of Ω.
"""

from __future__ import annotations

import argparse
import configparser
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import diamond as dm
from .geometry import base_alcove, dominant_chamber, minimal_gallery
from .group import (
    EnumerationCapExceeded,
    GroupElement,
    LatticeError,
    LatticeSpec,
    QuasiCoxeterGroup,
    validate_qcg,
)
from .hecke import BoundViolation, QParams, check_dimension_bound, translation_orbit_count
from .render import FigureSpec, render_svg
from .rootsys import CartanDatum, WeylGroupTooLarge, build_root_system

__all__ = ["ConfigError", "GroupConfig", "load_config", "parse_element", "main"]


class ConfigError(ValueError):
    pass


@dataclass
class GroupConfig:
    family: str
    rank: int
    lattice: str
    generators: list[tuple[Fraction, ...]]
    torsion: list[int]
    q: dict[int, int] | int = 2
    limits: dict[str, int] = field(default_factory=dict)

    def build(self) -> QuasiCoxeterGroup:
        rs = build_root_system(CartanDatum(self.family, self.rank))
        if self.lattice == "adjoint":
            spec = LatticeSpec.adjoint(rs, self.torsion)
        elif self.lattice == "coweight":
            spec = LatticeSpec.coweight(rs, self.torsion)
        else:
            spec = LatticeSpec(tuple(self.generators), tuple(self.torsion))
        G = QuasiCoxeterGroup(rs, spec)
        G.element_cap = self.limits["element_cap"]
        G.weyl_cap = self.limits["weyl_cap"]
        return G

    def qparams(self, G: QuasiCoxeterGroup) -> QParams:
        if isinstance(self.q, int):
            return QParams.uniform(G, self.q)
        return QParams.from_mapping(G, self.q)


DEFAULT_LIMITS = {
    "node_cap": 50_000,
    "element_cap": 200_000,
    "weyl_cap": 2000,
    "max_iter": 0,
    "seed": 0,
    "qcg_bound": 8,
}
ENV_OVERRIDES = {
    "node_cap": "QCOXETER_NODE_CAP",
    "element_cap": "QCOXETER_ELEMENT_CAP",
    "weyl_cap": "QCOXETER_WEYL_CAP",
    "max_iter": "QCOXETER_MAX_ITER",
}


def _int(value: str, where: str) -> int:
    try:
        return int(value.strip())
    except ValueError:
        raise ConfigError(f"{where}: expected an integer, got {value!r}") from None


def _fraction(value: str, where: str) -> Fraction:
    try:
        return Fraction(value.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{where}: expected a rational number, got {value!r}") from None


def parse_config(text: str, source: str = "<config>") -> GroupConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    if not cp.has_section("group"):
        raise ConfigError(f"{source}: missing [group] section")
    g = cp["group"]
    for key in ("family", "rank"):
        if key not in g:
            raise ConfigError(f"{source}: [group] {key} is required")
    family = g["family"].strip().upper()
    rank = _int(g["rank"], f"{source}: [group] rank")
    lattice = g.get("lattice", "adjoint").strip().lower()
    if lattice not in ("adjoint", "coweight", "explicit"):
        raise ConfigError(f"{source}: [group] lattice must be adjoint, coweight or explicit")
    generators = []
    if lattice == "explicit":
        if "generators" not in g:
            raise ConfigError(f"{source}: [group] generators is required for explicit lattices")
        for k, row in enumerate(g["generators"].split(";"), 1):
            entries = row.replace(",", " ").split()
            where = f"{source}: [group] generators row {k}"
            if len(entries) != rank:
                raise ConfigError(f"{where}: expected {rank} entries, got {len(entries)}")
            generators.append(tuple(_fraction(e, where) for e in entries))
    torsion = [_int(t, f"{source}: [group] torsion")
               for t in g.get("torsion", "").replace(",", " ").split()]

    q: dict[int, int] | int = 2
    if cp.has_section("hecke") and "q" in cp["hecke"]:
        raw = cp["hecke"]["q"].strip()
        if ":" in raw:
            q = {}
            for part in raw.split(","):
                name, _, val = part.partition(":")
                m = re.fullmatch(r"s(\d+)", name.strip())
                if not m:
                    raise ConfigError(f"{source}: [hecke] q: bad generator name {name.strip()!r}")
                q[int(m.group(1))] = _int(val, f"{source}: [hecke] q")
        else:
            q = _int(raw, f"{source}: [hecke] q")

    limits = dict(DEFAULT_LIMITS)
    if cp.has_section("limits"):
        for key, val in cp["limits"].items():
            if key not in limits:
                raise ConfigError(f"{source}: [limits] unknown key {key!r}")
            limits[key] = _int(val, f"{source}: [limits] {key}")
    for key, var in ENV_OVERRIDES.items():
        if var in os.environ:
            limits[key] = _int(os.environ[var], f"environment {var}")
    try:
        CartanDatum(family, rank)
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    return GroupConfig(family, rank, lattice, generators, torsion, q, limits)


def load_config(path: str) -> GroupConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return parse_config(text, path)


_TOKEN = re.compile(r"s(\d+)|t\(([^)]*)\)|omega\(([^)]*)\)")


def parse_element(G: QuasiCoxeterGroup, text: str) -> GroupElement:
    """Parse the element grammar described in the module docstring."""
    w = G.identity
    pos = 0
    text = text.strip()
    gens = G.lattice.free_generators
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse element at {text[pos:]!r}")
        pos = m.end()
        if m.group(1) is not None:
            s = int(m.group(1))
            if s >= len(G.generators):
                raise ValueError(f"s{s}: generators are s0..s{len(G.generators) - 1}")
            w = w * G.generators[s]
        elif m.group(2) is not None:
            free, _, tor = m.group(2).partition(";")
            cs = [Fraction(c) for c in free.split(",") if c.strip()]
            if len(cs) != len(gens):
                raise ValueError(f"t(...) needs {len(gens)} coefficients")
            lam = tuple(sum(c * g[j] for c, g in zip(cs, gens)) for j in range(G.rank))
            ts = [int(c) for c in tor.split(",") if c.strip()] or None
            w = w * G.translation(lam, ts)
        else:
            comps = [int(c) for c in m.group(3).split(",") if c.strip()]
            w = w * G.omega_section(G.omega_class(comps))
    return w


# --------------------------------------------------------------------------
# subcommands


def cmd_validate(cfg: GroupConfig, args) -> int:
    G = cfg.build()
    report = validate_qcg(G, bound=cfg.limits["qcg_bound"], seed=cfg.limits["seed"])
    print(f"group: {G.root_system.cartan} lattice={cfg.lattice} torsion={cfg.torsion}")
    print(f"omega order: {G.omega_order}")
    print(report)
    try:
        cfg.qparams(G).check_invariance(G)
        print("q invariance: pass")
    except ValueError as exc:
        print(f"q invariance: FAIL ({exc})")
        return 1
    return 0 if report.ok else 1


def _run_one(G, w, cfg, args) -> bool:
    max_iter = args.max_iter or cfg.limits["max_iter"] or None
    cert = dm.find_diamond(w, max_iter=max_iter)
    ok = True
    if not args.quiet:
        sys.stdout.write(dm.certificate_to_text(cert))
    if args.verify:
        v = dm.verify_certificate(w, cert)
        ok &= bool(v)
        if not args.quiet:
            print(f"verify: {'pass' if v else 'FAIL'} ({v.reason})")
    if args.brute_force:
        found = dm.brute_force_diamond(w, cfg.limits["node_cap"])
        cls, _ = dm.lateral_class(w, cfg.limits["node_cap"])
        agree = found is not None and cert.final_element in cls
        ok &= agree
        if not args.quiet:
            print(f"brute-force: {'pass' if agree else 'FAIL'}")
    return ok


def cmd_diamond(cfg: GroupConfig, args) -> int:
    G = cfg.build()
    if args.certificate:
        with open(args.certificate, encoding="utf-8") as fh:
            cert = dm.certificate_from_text(G, fh.read())
        v = dm.verify_certificate(cert.original, cert)
        print(f"verify: {'pass' if v else 'FAIL'} ({v.reason})")
        return 0 if v else 1
    if args.random:
        import random

        rng = random.Random(args.seed if args.seed is not None else cfg.limits["seed"])
        done = passed = 0
        while done < args.random:
            w = G.random_element(rng.randrange(args.max_length + 1), rng.random())
            if w.is_translation():
                continue
            done += 1
            passed += _run_one(G, w, cfg, args)
        print(f"{passed}/{done} passed")
        return 0 if passed == done else 1
    if not args.element:
        print("error: give an element or --random N", file=sys.stderr)
        return 2
    try:
        w = parse_element(G, " ".join(args.element))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        ok = _run_one(G, w, cfg, args)
    except dm.TranslationInput:
        print("error: the element is a translation; the theorem needs w ∉ Λ", file=sys.stderr)
        return 1
    return 0 if ok else 1


def _taus(G, args):
    if args.tau is None:
        return G.omega_elements()
    comps = [int(c) for c in args.tau.split(",") if c.strip()]
    return [G.omega_class(comps)]


def cmd_center(cfg: GroupConfig, args) -> int:
    G = cfg.build()
    qs = ([QParams.uniform(G, int(x)) for x in args.q_list.split(",")]
          if args.q_list else [cfg.qparams(G)])
    print("type\tlattice\tL\ttau\tq\tdim\tN\ttight")
    status = 0
    for q in qs:
        q.check_invariance(G)
        for tau in _taus(G, args):
            try:
                r = check_dimension_bound(G, args.L, tau, q)
            except BoundViolation as exc:
                r, status = exc.report, 1
            qtxt = ",".join(map(str, q.values))
            print(f"{G.root_system.cartan}\t{cfg.lattice}\t{r.L}\t{r.tau}\t{qtxt}\t"
                  f"{r.dim}\t{r.orbits}\t{'yes' if r.tight else 'no'}")
    return status


def cmd_orbits(cfg: GroupConfig, args) -> int:
    G = cfg.build()
    for tau in _taus(G, args):
        n, orbits = translation_orbit_count(G, args.L, tau)
        print(f"{tau}: {n} orbits with length <= {args.L}")
        for orbit in sorted(orbits, key=lambda o: (next(iter(o)).length, sorted(map(str, o)))):
            rep = min(orbit, key=str)
            print(f"  length {rep.length}, size {len(orbit)}, e.g. "
                  f"{' '.join(str(c) for c in rep.lambda_free)}"
                  + (f" ; {' '.join(map(str, rep.lambda_torsion))}" if rep.lambda_torsion else ""))
    return 0


def cmd_render(cfg: GroupConfig, args) -> int:
    G = cfg.build()
    rs = G.root_system
    if rs.rank != 2:
        print("error: render needs a rank 2 root system", file=sys.stderr)
        return 2
    spec = FigureSpec(radius=args.radius, base=not args.no_base)
    if args.element:
        w = parse_element(G, args.element)
        cls, complete = dm.lateral_class(w, cfg.limits["node_cap"])
        spec.lateral_class = {x.affine.alcove_image(base_alcove(rs)) for x in cls}
        if args.gallery:
            target = w.affine.alcove_image(base_alcove(rs))
            spec.gallery = set(minimal_gallery(base_alcove(rs), target).alcoves)
    if args.chamber:
        spec.chambers = [dominant_chamber(rs)]
    svg = render_svg(rs, spec)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(svg)
    else:
        sys.stdout.write(svg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcoxeter", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check the quasi-Coxeter hypotheses")
    v.add_argument("config")

    d = sub.add_parser("diamond", help="find and check diamond certificates")
    d.add_argument("config")
    d.add_argument("element", nargs="*", help="element tokens, e.g. s1 s0 or t(1,0) s2")
    d.add_argument("--verify", action="store_true", help="replay the certificate")
    d.add_argument("--brute-force", action="store_true", help="cross-check with the BFS oracle")
    d.add_argument("--max-iter", type=int, default=0)
    d.add_argument("--random", type=int, default=0, metavar="N",
                   help="run N random non-translation elements")
    d.add_argument("--max-length", type=int, default=14, help="word length for --random")
    d.add_argument("--seed", type=int, default=None)
    d.add_argument("--quiet", action="store_true")
    d.add_argument("--certificate", help="verify a saved certificate document instead")

    c = sub.add_parser("center", help="dimension of truncated centres versus orbit counts")
    c.add_argument("config")
    c.add_argument("--L", type=int, required=True)
    c.add_argument("--tau", help="Ω class components, e.g. 1 or 0,1 (default: all)")
    c.add_argument("--q-list", help="comma separated uniform q values")

    o = sub.add_parser("orbits", help="W-orbits of translations up to a length")
    o.add_argument("config")
    o.add_argument("--L", type=int, required=True)
    o.add_argument("--tau")

    r = sub.add_parser("render", help="SVG picture of a rank 2 tiling")
    r.add_argument("config")
    r.add_argument("--radius", type=int, default=3)
    r.add_argument("--element", help="highlight the lateral class of this element")
    r.add_argument("--gallery", action="store_true", help="also highlight a minimal gallery to it")
    r.add_argument("--chamber", action="store_true", help="shade the dominant chamber")
    r.add_argument("--no-base", action="store_true")
    r.add_argument("--output", "-o")
    return p


COMMANDS = {
    "validate": cmd_validate,
    "diamond": cmd_diamond,
    "center": cmd_center,
    "orbits": cmd_orbits,
    "render": cmd_render,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        return COMMANDS[args.command](cfg, args)
    except (ConfigError, LatticeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EnumerationCapExceeded, WeylGroupTooLarge) as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
