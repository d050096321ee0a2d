"""Triangular (Lie-theorem) bases of solvable algebras and their weight systems.

For solvable g with rational eigenvalues on [g, g] we build a basis
e'_1..e'_k, e'_{k+1}..e'_n where e'_{k+1}..e'_n span [g, g] and every
Span(e'_j..e'_n) is ad-invariant.  In the dual basis

    dw'_i = 0                               (i <= k)
    dw'_j = a_j ^ w'_j + P_j(w'_1..w'_{j-1})  (j > k)

and the closed 1-forms a_j(x) = w'_j([x, e'_j]) are the weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .algebra import (
    LieAlgebra,
    Twist,
    bracket,
    classify,
    derived_subalgebra,
    differential_wedge_form,
    basis_monomials,
    is_unimodular,
    unit,
)
from .cohomology import BettiTable, betti
from .errors import NotSolvable, ProbeInExceptionalSet, RationalSpectrumRequired
from .linalg import (
    Matrix,
    Vector,
    char_poly_rational_roots,
    format_rational,
    inverse,
    kernel_basis,
    normalize_leading,
    solve,
    span_rank,
    vector,
)


def _zero(n: int) -> Vector:
    return (Fraction(0),) * n


def _restrict(op: Matrix, basis: Sequence[Vector]) -> Matrix:
    """Matrix of ``op`` on the invariant subspace spanned by ``basis``."""
    dim = op.nrows
    frame = Matrix.from_columns(basis, dim)
    cols = []
    for v in basis:
        y = solve(frame, op.apply(v))
        if y is None:
            raise RuntimeError("subspace is not invariant")
        cols.append(y)
    return Matrix.from_columns(cols, len(basis))


def common_eigenvector(ops: Sequence[Matrix], dim: int) -> Vector:
    """A common eigenvector of operators spanning a solvable matrix Lie algebra.

    The commutators act nilpotently, so their common kernel U is nonzero; U is
    invariant and the operators commute on it.  Successive eigenspaces of the
    restricted operators (smallest rational eigenvalue first) cut U down to a
    common eigenspace.
    """
    comms = []
    for a, b in combinations(ops, 2):
        c = a @ b - b @ a
        if not c.is_zero():
            comms.extend(c.rows)
    if comms:
        space = kernel_basis(Matrix(comms, dim))
    else:
        space = [unit(dim, i) for i in range(dim)]
    if not space:
        raise RuntimeError("commutators have trivial common kernel; the family is not solvable")
    for op in ops:
        local = _restrict(op, space)
        fac = char_poly_rational_roots(local)
        if not fac.rational_roots:
            raise RationalSpectrumRequired(
                "no rational eigenvalue available for the triangular flag", fac.residual_factor
            )
        mu = fac.rational_roots[0][0]
        shifted = local - Matrix.identity(local.nrows).scale(mu)
        sub = kernel_basis(shifted)
        space = [
            tuple(sum((c * v[i] for c, v in zip(coeffs, space)), Fraction(0)) for i in range(dim))
            for coeffs in sub
        ]
    return normalize_leading(space[0])


def invariant_flag(ops: Sequence[Matrix], dim: int) -> list[Vector]:
    """Vectors f_0, f_1, ... with each Span(f_0..f_t) invariant under every op."""
    flag: list[Vector] = []
    while len(flag) < dim:
        # complement of span(flag): standard vectors chosen greedily
        comp = []
        for i in range(dim):
            e = unit(dim, i)
            if span_rank([*flag, *comp, e], dim) > len(flag) + len(comp):
                comp.append(e)
        frame = Matrix.from_columns([*flag, *comp], dim)
        quotient_ops = []
        for op in ops:
            cols = []
            for c in comp:
                y = solve(frame, op.apply(c))
                cols.append(y[len(flag):])
            quotient_ops.append(Matrix.from_columns(cols, len(comp)))
        w = common_eigenvector(quotient_ops, len(comp))
        lifted = tuple(sum((wi * c[i] for wi, c in zip(w, comp)), Fraction(0)) for i in range(dim))
        flag.append(lifted)
    return flag


@dataclass(frozen=True, eq=False)
class AdaptedBasis:
    algebra: LieAlgebra
    change_of_basis: Matrix  # columns e'_1..e'_n in original coordinates
    k: int
    transformed: LieAlgebra
    weights: tuple[Vector, ...]  # a_{k+1}..a_n in the original dual coordinates
    weights_adapted: tuple[Vector, ...]  # same, in the adapted dual coordinates
    quadratic_parts: tuple[dict, ...]  # P_j: {(a, b): coef} over adapted 0-based indices

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "change_of_basis": self.change_of_basis.tolist(),
            "weights": [[format_rational(x) for x in w] for w in self.weights],
            "quadratic_parts": [
                [{"monomial": [a + 1, b + 1], "coef": format_rational(c)} for (a, b), c in sorted(p.items())]
                for p in self.quadratic_parts
            ],
        }


def adapted_basis(L: LieAlgebra) -> AdaptedBasis:
    if not classify(L).solvable:
        raise NotSolvable("the algebra is not solvable")
    n = L.dim
    der = derived_subalgebra(L).basis
    m = len(der)
    k = n - m
    flag_cols: list[Vector] = []
    if m:
        frame = Matrix.from_columns(der, n)
        ops = []
        for i in range(n):
            cols = [solve(frame, bracket(L, unit(n, i), d)) for d in der]
            ops.append(Matrix.from_columns(cols, m))
        flag = invariant_flag(ops, m)
        flag_cols = [frame.apply(f) for f in flag]
    complement: list[Vector] = []
    for i in range(n):
        e = unit(n, i)
        if span_rank([*flag_cols, *complement, e], n) > len(flag_cols) + len(complement):
            complement.append(e)
    cols = complement + list(reversed(flag_cols))
    P = Matrix.from_columns(cols, n)
    T = L.change_basis(P)

    weights_new = []
    parts = []
    d1 = differential_wedge_form(T, 1).matrix
    pairs = basis_monomials(n, 2)
    for j in range(k, n):
        alpha = tuple(T.bracket_basis(a, j).get(j, Fraction(0)) for a in range(n))
        if any(alpha[a] for a in range(k, n)):
            raise RuntimeError(f"weight {j + 1} does not vanish on the derived algebra")
        # dw'_j - a_j ^ w'_j
        rest = {}
        for r, (a, b) in enumerate(pairs):
            c = d1[r, j]
            if b == j:
                c -= alpha[a]
            elif a == j:
                c += alpha[b]
            if c:
                if b >= j:
                    raise RuntimeError(f"structure equation for w'{j + 1} is not triangular")
                rest[(a, b)] = c
        weights_new.append(alpha)
        parts.append(rest)
    weights = tuple(_to_original(P, a) for a in weights_new)
    return AdaptedBasis(L, P, k, T, weights, tuple(weights_new), tuple(parts))


def _to_original(P: Matrix, alpha_new: Sequence[Fraction]) -> Vector:
    """Covector given on the adapted basis -> coordinates on the original basis."""
    pinv = inverse(P)
    # e_i = sum_a pinv[a, i] e'_a
    return tuple(
        sum((pinv[a, i] * alpha_new[a] for a in range(P.nrows)), Fraction(0)) for i in range(P.nrows)
    )


def omega_set(weights: Iterable[Sequence]) -> list[Vector]:
    """All sums over nonempty index subsets of the weights, deduplicated and sorted."""
    weights = [vector(w) for w in weights]
    if not weights:
        return []
    n = len(weights[0])
    out = set()
    for p in range(1, len(weights) + 1):
        for idx in combinations(range(len(weights)), p):
            out.add(tuple(sum((weights[i][c] for i in idx), Fraction(0)) for c in range(n)))
    return sorted(out)


def omega_tilde(L: LieAlgebra, sums: Iterable[Sequence]) -> list[Vector]:
    """Nonzero theta in ``sums`` whose twist lam*w = -theta has nonzero cohomology."""
    out = []
    for theta in sums:
        theta = vector(theta)
        if not any(theta):
            continue
        if not betti(L, Twist(tuple(-x for x in theta), 1)).is_zero:
            out.append(theta)
    return sorted(out)


@dataclass(frozen=True, eq=False)
class WeightSystem:
    basis: AdaptedBasis
    weights: tuple[Vector, ...]
    omega_set: tuple[Vector, ...]
    omega_tilde: tuple[Vector, ...]

    @property
    def sum_of_all(self) -> Vector:
        n = self.basis.algebra.dim
        return tuple(sum((w[i] for w in self.weights), Fraction(0)) for i in range(n))

    def to_dict(self) -> dict:
        fmt = lambda v: [format_rational(x) for x in v]  # noqa: E731
        return {
            "k": self.basis.k,
            "weights": [fmt(w) for w in self.weights],
            "omega_set": [fmt(w) for w in self.omega_set],
            "omega_tilde": [fmt(w) for w in self.omega_tilde],
            "sum_of_all": fmt(self.sum_of_all),
            "unimodular": is_unimodular(self.basis.algebra),
        }


def weight_system(L: LieAlgebra) -> WeightSystem:
    ab = adapted_basis(L)
    sums = omega_set(ab.weights)
    return WeightSystem(ab, ab.weights, tuple(sums), tuple(omega_tilde(L, sums)))


def line_candidates(omega: Sequence, sums: Iterable[Sequence]) -> list[Fraction]:
    """The lambdas with -lam*omega in {0} or ``sums``."""
    omega = vector(omega)
    out = {Fraction(0)}
    i = next((i for i, w in enumerate(omega) if w), None)
    if i is None:
        return [Fraction(0)]
    for theta in sums:
        theta = vector(theta)
        mu = theta[i] / omega[i]
        if all(t == mu * w for t, w in zip(theta, omega)):
            out.add(-mu)
    return sorted(out)


@dataclass(frozen=True)
class VanishingReport:
    tables: tuple[BettiTable, ...]

    @property
    def verdicts(self) -> tuple[bool, ...]:
        return tuple(t.is_zero for t in self.tables)

    @property
    def ok(self) -> bool:
        return all(self.verdicts)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "probes": [{**t.to_dict(), "vanishes": t.is_zero} for t in self.tables]}


def verify_vanishing(L: LieAlgebra, probes: Iterable[Twist], sums: Iterable[Sequence] | None = None) -> VanishingReport:
    """Betti tables of twists with -lam*w outside {0} and the weight sums; all must vanish."""
    if sums is None:
        sums = omega_set(adapted_basis(L).weights)
    excluded = {vector(s) for s in sums} | {_zero(L.dim)}
    tables = []
    for t in probes:
        neg = tuple(-x for x in t.effective)
        if neg in excluded:
            raise ProbeInExceptionalSet(
                f"-lam*omega = ({', '.join(format_rational(x) for x in neg)}) is an exceptional twist"
            )
        tables.append(betti(L, t))
    return VanishingReport(tuple(tables))
