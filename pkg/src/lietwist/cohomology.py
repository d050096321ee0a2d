"""Betti tables and cohomology representatives of the twisted complex."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .algebra import LieAlgebra, Twist, differential_rank, differential_wedge_form
from .linalg import (
    Matrix,
    Vector,
    format_rational,
    kernel_basis,
    rref,
    to_fraction,
    vector,
)

NOVIKOV_NOTE = (
    "generic_betti is reported as the Novikov numbers of omega; "
    "this identification assumes omega has commensurable periods"
)


@dataclass(frozen=True)
class BettiTable:
    twist: Twist
    betti: tuple[int, ...]

    @property
    def euler(self) -> int:
        return sum((-1) ** q * b for q, b in enumerate(self.betti))

    @property
    def is_zero(self) -> bool:
        return not any(self.betti)

    def __getitem__(self, q: int) -> int:
        return self.betti[q]

    def to_dict(self) -> dict:
        return {**self.twist.to_dict(), "betti": list(self.betti), "euler": self.euler}


@dataclass(frozen=True)
class CohomologySpace:
    degree: int
    representatives: tuple[Vector, ...]

    @property
    def dimension(self) -> int:
        return len(self.representatives)

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "dimension": self.dimension,
            "representatives": [[format_rational(x) for x in v] for v in self.representatives],
        }


def betti(L: LieAlgebra, t: Twist | None = None) -> BettiTable:
    """b^q = (C(n,q) - rank d_q) - rank d_{q-1}."""
    n = L.dim
    t = t if t is not None else Twist.zero(n)
    L.check_closed(t.omega)
    ranks = [differential_rank(L, q, t) for q in range(n + 1)]
    table = tuple(comb(n, q) - ranks[q] - (ranks[q - 1] if q else 0) for q in range(n + 1))
    return BettiTable(t, table)


def _image_basis(L: LieAlgebra, q: int, t: Twist) -> list[list[Fraction]]:
    """Reduced echelon basis of im d_{q-1} inside degree-q cochains."""
    if q == 0:
        return []
    d = differential_wedge_form(L, q - 1, t).matrix
    rows, _ = rref(d.T)
    return rows


def reduce_modulo(v: Sequence[Fraction], echelon_rows, pivots) -> list[Fraction]:
    v = list(v)
    for row, pc in zip(echelon_rows, pivots):
        f = v[pc]
        if f:
            v = [a - f * b for a, b in zip(v, row)]
    return v


def cohomology_space(L: LieAlgebra, t: Twist | None, q: int) -> CohomologySpace:
    """Canonical representatives of H^q: cocycles reduced modulo coboundaries, in echelon form.

    Kernel vectors are reduced against the echelon basis of the image (clearing the
    image pivot coordinates), and the survivors are put in reduced echelon form with
    leading coefficient 1.  The result does not depend on the kernel basis chosen.
    """
    n = L.dim
    t = t if t is not None else Twist.zero(n)
    L.check_closed(t.omega)
    if not 0 <= q <= n:
        raise ValueError(f"degree {q} out of range 0..{n}")
    size = comb(n, q)
    if q < n:
        cocycles = kernel_basis(differential_wedge_form(L, q, t).matrix)
    else:
        cocycles = [tuple(Fraction(int(i == j)) for j in range(size)) for i in range(size)]
    image = _image_basis(L, q, t)
    pivots = [next(j for j, x in enumerate(r) if x != 0) for r in image]
    reduced = [reduce_modulo(v, image, pivots) for v in cocycles]
    reduced = [r for r in reduced if any(r)]
    if not reduced:
        return CohomologySpace(q, ())
    rows, _ = rref(Matrix(reduced, size))
    return CohomologySpace(q, tuple(tuple(r) for r in rows))


def scan_line(L: LieAlgebra, omega: Sequence, lambdas: Iterable) -> list[BettiTable]:
    """One Betti table per lambda on the line through omega, in input order."""
    omega = L.check_closed(omega)
    return [betti(L, Twist(omega, lam)) for lam in lambdas]


@dataclass(frozen=True)
class NovikovReport:
    omega: Vector
    generic_lambda: Fraction
    generic_betti: tuple[int, ...]
    exceptional: tuple[tuple[Fraction, BettiTable], ...]
    note: str = field(default=NOVIKOV_NOTE)

    @property
    def exceptional_lambdas(self) -> list[Fraction]:
        return [lam for lam, _ in self.exceptional]

    @property
    def morse_lower_bounds(self) -> tuple[int, ...]:
        tables = [self.generic_betti] + [tab.betti for _, tab in self.exceptional]
        return tuple(max(col) for col in zip(*tables))

    def to_dict(self) -> dict:
        return {
            "omega": [format_rational(x) for x in self.omega],
            "generic_lambda": format_rational(self.generic_lambda),
            "generic_betti": list(self.generic_betti),
            "exceptional_lambdas": [
                {"lambda": format_rational(lam), "betti": list(tab.betti), "euler": tab.euler}
                for lam, tab in self.exceptional
            ],
            "morse_lower_bounds": list(self.morse_lower_bounds),
            "note": self.note,
        }


def generic_probe(omega: Sequence, candidates: Iterable, omega_set: Iterable = ()) -> Fraction:
    """Smallest positive integer lambda outside ``candidates`` with -lambda*omega not in ``omega_set``."""
    omega = vector(omega)
    cands = {to_fraction(c) for c in candidates}
    excluded = {vector(v) for v in omega_set}
    lam = 1
    while True:
        f = Fraction(lam)
        if f not in cands and tuple(-f * w for w in omega) not in excluded:
            return f
        lam += 1


def novikov_report(
    L: LieAlgebra,
    omega: Sequence,
    exceptional_candidates: Iterable,
    omega_set: Iterable = (),
) -> NovikovReport:
    omega = L.check_closed(omega)
    cands = sorted({to_fraction(c) for c in exceptional_candidates})
    lam_star = generic_probe(omega, cands, omega_set)
    generic = betti(L, Twist(omega, lam_star))
    exceptional = []
    for lam in cands:
        tab = betti(L, Twist(omega, lam))
        if not tab.is_zero:
            exceptional.append((lam, tab))
    return NovikovReport(omega, lam_star, generic.betti, tuple(exceptional))
