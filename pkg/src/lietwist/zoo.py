"""Named example algebras with their expected results.

Fixtures live in ``zoo_fixtures.json`` next to this module and are keyed by
``name`` or ``name/n`` for the families.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .algebra import LieAlgebra

DEFAULT_N = {"torus": 3, "v_family": 5, "diag_example": 3}


@dataclass(frozen=True, eq=False)
class ZooEntry:
    name: str
    algebra: LieAlgebra
    provenance: str
    expected: dict | None = field(default=None)


@lru_cache(maxsize=None)
def _fixtures() -> dict:
    text = resources.files(__package__).joinpath("zoo_fixtures.json").read_text()
    return json.loads(text)


def fixture(key: str) -> dict | None:
    return _fixtures().get(key)


def fixture_keys() -> list[str]:
    return sorted(_fixtures())


def torus(n: int = 3) -> ZooEntry:
    if n < 1:
        raise ValueError("torus dimension must be >= 1")
    return ZooEntry(f"torus/{n}", LieAlgebra(n), f"abelian Lie algebra of the {n}-torus", fixture(f"torus/{n}"))


def heisenberg() -> ZooEntry:
    L = LieAlgebra(3, {(0, 1): {2: 1}})
    return ZooEntry("heisenberg", L, "3-dim Heisenberg algebra, [e1,e2]=e3", fixture("heisenberg"))


def v_family(n: int = 5) -> ZooEntry:
    """[e_i, e_j] = (j - i) e_{i+j} for i + j <= n."""
    if n < 3:
        raise ValueError("v_family needs n >= 3")
    br = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if i + j <= n:
                br[(i - 1, j - 1)] = {i + j - 1: j - i}
    return ZooEntry(f"v_family/{n}", LieAlgebra(n, br), f"nilpotent V_{n}, [e_i,e_j]=(j-i)e_(i+j)", fixture(f"v_family/{n}"))


def g0() -> ZooEntry:
    L = LieAlgebra(3, {(0, 1): {1: 1}, (0, 2): {2: -1}})
    return ZooEntry("g0", L, "3-dim completely solvable unimodular, [e1,e2]=e2, [e1,e3]=-e3", fixture("g0"))


def diag_example(n: int = 3) -> ZooEntry:
    """Basis X, e_1..e_n with [X, e_i] = e_i; X is index 0."""
    if n < 1:
        raise ValueError("diag_example needs n >= 1")
    names = ("X",) + tuple(f"e{i}" for i in range(1, n + 1))
    L = LieAlgebra(n + 1, {(0, i): {i: 1} for i in range(1, n + 1)}, names)
    return ZooEntry(
        f"diag_example/{n}", L, f"(n+1)-dim semidirect sum with ad X = identity on K^{n}", fixture(f"diag_example/{n}")
    )


CONSTRUCTORS = {
    "torus": torus,
    "heisenberg": heisenberg,
    "v_family": v_family,
    "g0": g0,
    "diag_example": diag_example,
}


def get(name: str, n: int | None = None) -> ZooEntry:
    if "/" in name and n is None:
        name, _, num = name.partition("/")
        n = int(num)
    if name not in CONSTRUCTORS:
        raise KeyError(f"unknown zoo algebra {name!r}; choose from {', '.join(sorted(CONSTRUCTORS))}")
    if name in DEFAULT_N:
        return CONSTRUCTORS[name](DEFAULT_N[name] if n is None else n)
    if n is not None:
        raise ValueError(f"{name} takes no size parameter")
    return CONSTRUCTORS[name]()


def standard_entries() -> list[ZooEntry]:
    """The small set of entries used for exhaustive checks."""
    return [torus(1), torus(2), torus(3), heisenberg(), v_family(4), v_family(5), g0(),
            diag_example(1), diag_example(2), diag_example(3)]
