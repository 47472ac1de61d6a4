from __future__ import annotations

from functools import cache

from hypothesis import settings

from qcoxeter.group import QuasiCoxeterGroup

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@cache
def group(family: str, rank: int, lattice: str = "adjoint", torsion: tuple = ()) -> QuasiCoxeterGroup:
    """Shared group instances, so enumeration caches are reused across tests."""
    make = QuasiCoxeterGroup.adjoint if lattice == "adjoint" else QuasiCoxeterGroup.coweight
    return make(family, rank, torsion)


# (family, rank, lattice, torsion) configurations swept by the theorem checks
THEOREM_CONFIGS = [
    ("A", 1, "adjoint", ()),
    ("A", 1, "coweight", ()),
    ("A", 1, "adjoint", (2,)),
    ("A", 2, "adjoint", ()),
    ("A", 2, "coweight", ()),
    ("C", 2, "adjoint", ()),
    ("C", 2, "coweight", ()),
    ("G", 2, "adjoint", ()),
]


def config_id(cfg) -> str:
    fam, rank, lattice, torsion = cfg
    return f"{fam}{rank}-{lattice}" + (f"-T{'x'.join(map(str, torsion))}" if torsion else "")
