"""Splitting g along a closed 1-form and the derivation adX* on H*(ker w).

For a closed ``w != 0``, ``b = ker w`` is an ideal of codimension one and any X with
``w(X) = 1`` gives ``g = span(X) + b``.  The twisted Betti numbers are then
determined by kernels of ``adX* + lam Id`` on ``H^i(b)``:

    b^i_{lam w}(g) = k^i + k^{i-1},   k^i = dim ker(adX*_i + lam Id)

with ``(adX* a)(x) = a([X, x])`` on 1-forms, extended to a degree-zero derivation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Sequence

from .algebra import (
    LieAlgebra,
    Twist,
    basis_monomials,
    bracket,
    differential_wedge_form,
    monomial_index,
    permutation_sign,
)
from .cohomology import BettiTable, betti, cohomology_space
from .errors import IrrationalSpectrum, OmegaZero
from .linalg import (
    CharPolyFactorization,
    Matrix,
    Vector,
    char_poly_rational_roots,
    determinant,
    format_rational,
    kernel_basis,
    rank,
    solve,
    vector,
)


@dataclass(frozen=True, eq=False)
class SubalgebraView:
    parent: LieAlgebra
    omega: Vector
    inclusion: Matrix  # n x (n-1), columns span ker omega
    induced: LieAlgebra
    transversal: Vector

    @cached_property
    def ad_x(self) -> Matrix:
        """Matrix of x -> [X, x] on b, in the column basis of ``inclusion``."""
        cols = self.inclusion.columns()
        n = self.parent.dim
        out = []
        for c in cols:
            v = bracket(self.parent, self.transversal, c)
            y = solve(self.inclusion, v)
            if y is None:
                raise RuntimeError("[X, b] is not contained in b; omega is not closed")
            out.append(y)
        return Matrix.from_columns(out, n - 1)

    @cached_property
    def adapted_basis(self) -> Matrix:
        """Columns X, b_1, ..., b_{n-1}."""
        return Matrix.from_columns([self.transversal, *self.inclusion.columns()], self.parent.dim)

    def to_dict(self) -> dict:
        return {
            "omega": [format_rational(x) for x in self.omega],
            "transversal": [format_rational(x) for x in self.transversal],
            "ideal_basis": [[format_rational(x) for x in c] for c in self.inclusion.columns()],
        }


def split(L: LieAlgebra, omega: Sequence, transversal: Sequence | None = None) -> SubalgebraView:
    """Kernel basis of omega, induced brackets, and X with omega(X) = 1.

    X defaults to e_i / omega_i for the smallest i with omega_i != 0.
    """
    omega = vector(omega)
    if len(omega) != L.dim:
        raise ValueError("covector has the wrong length")
    if not any(omega):
        raise OmegaZero("omega must be nonzero")
    L.check_closed(omega)
    n = L.dim
    cols = kernel_basis(Matrix([omega], n))
    inclusion = Matrix.from_columns(cols, n)
    brackets = {}
    for a, b in combinations(range(n - 1), 2):
        v = bracket(L, cols[a], cols[b])
        y = solve(inclusion, v)
        if y is None:
            raise RuntimeError("ker omega is not closed under the bracket")
        terms = {k: c for k, c in enumerate(y) if c}
        if terms:
            brackets[(a, b)] = terms
    induced = LieAlgebra(n - 1, brackets) if n > 1 else None
    if transversal is None:
        i = next(i for i, w in enumerate(omega) if w)
        x = tuple(Fraction(int(k == i)) / omega[i] for k in range(n))
    else:
        x = vector(transversal)
        if sum((a * b for a, b in zip(omega, x)), Fraction(0)) != 1:
            raise ValueError("transversal must satisfy omega(X) = 1")
    return SubalgebraView(L, omega, inclusion, induced, x)


def ad_star_on_forms(view: SubalgebraView, k: int) -> Matrix:
    """Derivation adX* on degree-k forms of b, in the monomial basis of b's dual basis."""
    m = view.parent.dim - 1
    A = view.ad_x  # (adX* beta^c)(b_a) = A[c, a]
    target = monomial_index(m, k)
    size = comb(m, k)
    rows = [[Fraction(0)] * size for _ in range(size)]
    for col, mono in enumerate(basis_monomials(m, k)):
        for pos, c in enumerate(mono):
            for a in range(m):
                coef = A[c, a]
                if not coef:
                    continue
                new = mono[:pos] + (a,) + mono[pos + 1:]
                if a != c and a in mono:
                    continue
                rows[target[tuple(sorted(new))]][col] += permutation_sign(new) * coef
    return Matrix(rows, size)


def commutes_with_differential(view: SubalgebraView) -> bool:
    """d o adX* == adX* o d on every degree of the cochains of b."""
    m = view.parent.dim - 1
    if m == 0:
        return True
    for k in range(m):
        d = differential_wedge_form(view.induced, k).matrix
        if d @ ad_star_on_forms(view, k) != ad_star_on_forms(view, k + 1) @ d:
            return False
    return True


@dataclass(frozen=True)
class DegreeSpectrum:
    degree: int
    matrix: Matrix  # adX* on H^k(b) in the representative basis
    factorization: CharPolyFactorization

    @property
    def eigenvalues(self) -> list[Fraction]:
        return self.factorization.eigenvalues

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "dimension": self.matrix.nrows,
            "matrix": self.matrix.tolist(),
            "eigenvalues": [format_rational(r) for r in self.eigenvalues],
            **self.factorization.to_dict(),
        }


@dataclass(frozen=True)
class OperatorSpectrum:
    view: SubalgebraView
    degrees: tuple[DegreeSpectrum, ...]

    @property
    def spec_union(self) -> list[Fraction]:
        return sorted({r for d in self.degrees for r in d.eigenvalues})

    @property
    def rational_complete(self) -> bool:
        return all(d.factorization.is_rational_complete for d in self.degrees)

    def to_dict(self) -> dict:
        return {
            **self.view.to_dict(),
            "degrees": [d.to_dict() for d in self.degrees],
            "spec_union": [format_rational(r) for r in self.spec_union],
            "rational_complete": self.rational_complete,
        }


def _induced_on_cohomology(view: SubalgebraView, k: int) -> Matrix:
    b = view.induced
    m = view.parent.dim - 1
    reps = cohomology_space(b, None, k).representatives
    h = len(reps)
    if h == 0:
        return Matrix.zeros(0, 0)
    op = ad_star_on_forms(view, k)
    image = []
    if k > 0:
        image = differential_wedge_form(b, k - 1).matrix.columns()
    system = Matrix.from_columns([*reps, *image], comb(m, k))
    cols = []
    for r in reps:
        y = solve(system, op.apply(r))
        if y is None:
            raise RuntimeError(f"adX* does not preserve cocycles in degree {k}")
        cols.append(y[:h])
    return Matrix.from_columns(cols, h)


def ad_star_on_cohomology(view: SubalgebraView, k: int) -> DegreeSpectrum:
    mat = _induced_on_cohomology(view, k)
    if mat.nrows == 0:
        fac = CharPolyFactorization((Fraction(1),), (), (Fraction(1),))
    else:
        fac = char_poly_rational_roots(mat)
    return DegreeSpectrum(k, mat, fac)


def operator_spectrum(L: LieAlgebra, omega: Sequence, transversal: Sequence | None = None) -> OperatorSpectrum:
    view = split(L, omega, transversal)
    if view.induced is None:
        # g is 1-dimensional: b = 0, H^0(b) is the constants and adX* acts by zero
        fac = char_poly_rational_roots(Matrix.zeros(1, 1))
        return OperatorSpectrum(view, (DegreeSpectrum(0, Matrix.zeros(1, 1), fac),))
    return OperatorSpectrum(view, tuple(ad_star_on_cohomology(view, k) for k in range(L.dim)))


@dataclass(frozen=True)
class NontrivialitySet:
    omega: Vector
    lambdas: tuple[Fraction, ...]
    certified: tuple[BettiTable, ...]
    complete: bool
    residuals: tuple = ()

    def to_dict(self) -> dict:
        return {
            "omega": [format_rational(x) for x in self.omega],
            "lambdas": [format_rational(x) for x in self.lambdas],
            "certified": [t.to_dict() for t in self.certified],
            "complete": self.complete,
            "residual_factors": [
                {"degree": k, "factor": [format_rational(c) for c in res]} for k, res in self.residuals
            ],
        }


def nontriviality_set(L: LieAlgebra, omega: Sequence, strict: bool = False) -> NontrivialitySet:
    """The lambdas with nonzero twisted cohomology on the line through ``omega``.

    Every member is certified by computing its Betti table directly.  When some
    degree has irrational eigenvalues the answer is only the rational part:
    ``complete`` is False, or IrrationalSpectrum is raised if ``strict``.
    """
    spec = operator_spectrum(L, omega)
    residuals = tuple(
        (d.degree, d.factorization.residual_factor)
        for d in spec.degrees
        if not d.factorization.is_rational_complete
    )
    if residuals and strict:
        raise IrrationalSpectrum("adX* has eigenvalues that are not rational", residuals)
    lambdas = tuple(sorted(-mu for mu in spec.spec_union))
    tables = []
    for lam in lambdas:
        tab = betti(L, Twist(spec.view.omega, lam))
        if tab.is_zero:
            raise RuntimeError(f"lambda={lam} predicted nontrivial but cohomology vanishes")
        tables.append(tab)
    return NontrivialitySet(spec.view.omega, lambdas, tuple(tables), not residuals, residuals)


@dataclass(frozen=True)
class LESReport:
    lam: Fraction
    kernel_dims: tuple[int, ...]  # k^0 .. k^{n-1}
    predicted: tuple[int, ...]  # b^0 .. b^n
    actual: tuple[int, ...]

    @property
    def verdicts(self) -> tuple[bool, ...]:
        return tuple(p == a for p, a in zip(self.predicted, self.actual))

    @property
    def ok(self) -> bool:
        return all(self.verdicts)

    def to_dict(self) -> dict:
        return {
            "lambda": format_rational(self.lam),
            "kernel_dims": list(self.kernel_dims),
            "predicted_betti": list(self.predicted),
            "actual_betti": list(self.actual),
            "verdicts": ["equal" if v else "unequal" for v in self.verdicts],
            "ok": self.ok,
        }


def kernel_dims(spec: OperatorSpectrum, lam) -> tuple[int, ...]:
    lam = Fraction(lam)
    out = []
    for d in spec.degrees:
        h = d.matrix.nrows
        shifted = d.matrix + Matrix.identity(h).scale(lam) if h else d.matrix
        out.append(h - rank(shifted) if h else 0)
    return tuple(out)


def verify_les(L: LieAlgebra, omega: Sequence, lam, spec: OperatorSpectrum | None = None) -> LESReport:
    lam = Fraction(lam)
    if spec is None:
        spec = operator_spectrum(L, omega)
    ks = kernel_dims(spec, lam)
    n = L.dim
    padded = list(ks) + [0] * (n + 1 - len(ks))
    predicted = tuple(padded[i] + (padded[i - 1] if i else 0) for i in range(n + 1))
    actual = betti(L, Twist(spec.view.omega, lam)).betti
    return LESReport(lam, ks, predicted, actual)


# -- contraction identity --------------------------------------------------------------------


def compound_matrix(p: Matrix, q: int) -> Matrix:
    """Entry [T, S] = det p[S, T]: converts degree-q form coordinates to the basis given by p's columns."""
    n = p.nrows
    monos = basis_monomials(n, q)
    rows = []
    for T in monos:
        row = []
        for S in monos:
            if q == 0:
                row.append(Fraction(1))
            else:
                row.append(determinant(Matrix([[p[s, t] for t in T] for s in S], q)))
        rows.append(row)
    return Matrix(rows, len(monos))


@dataclass(frozen=True)
class ContractionReport:
    checked: int
    failures: tuple = ()  # (degree, monomial (1-based), lhs, rhs)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "checked": self.checked,
            "ok": self.ok,
            "failures": [
                {"degree": q, "monomial": list(mono), "lhs": [format_rational(x) for x in lhs],
                 "rhs": [format_rational(x) for x in rhs]}
                for q, mono, lhs, rhs in self.failures
            ],
        }


def _split_form(coords: Sequence[Fraction], n: int, q: int):
    """In the basis (X, b_1..b_{n-1}) split f = w ^ f_X + f''; both parts as coordinates on b."""
    m = n - 1
    f_x = [Fraction(0)] * comb(m, q - 1) if q >= 1 else []
    f_b = [Fraction(0)] * comb(m, q)
    idx_x = monomial_index(m, q - 1) if q >= 1 else {}
    idx_b = monomial_index(m, q)
    for c, mono in zip(coords, basis_monomials(n, q)):
        if not c:
            continue
        if mono and mono[0] == 0:
            f_x[idx_x[tuple(i - 1 for i in mono[1:])]] += c
        else:
            f_b[idx_b[tuple(i - 1 for i in mono)]] += c
    return f_x, f_b


def contraction_identity_check(
    L: LieAlgebra, omega: Sequence, forms: Sequence[tuple[int, Sequence]] | None = None, max_degree: int = 2
) -> ContractionReport:
    """Check (df)_X = adX*(f'') + d'(f_X) on b for sampled forms f = w ^ f_X + f''.

    ``d'`` is the differential of the shifted complex of b-forms sitting inside g via
    ``w ^``, which is minus the differential of b.  ``forms`` holds (degree, coordinates
    in the original dual basis); by default every monomial of degree <= ``max_degree``.
    """
    view = split(L, omega)
    n = L.dim
    m = n - 1
    if forms is None:
        forms = []
        for q in range(0, min(max_degree, n) + 1):
            size = comb(n, q)
            forms.extend((q, tuple(Fraction(int(i == j)) for j in range(size))) for i in range(size))
    if m == 0:
        return ContractionReport(0)
    p = view.adapted_basis
    g_new = L.change_basis(p)
    failures = []
    checked = 0
    for q, coords in forms:
        coords = vector(coords)
        checked += 1
        new = compound_matrix(p, q).apply(coords)
        df = differential_wedge_form(g_new, q).matrix.apply(new) if q < n else ()
        lhs, _ = _split_form(df, n, q + 1)
        f_x, f_b = _split_form(new, n, q)
        rhs = list(ad_star_on_forms(view, q).apply(f_b))
        if q >= 1:
            d_fx = differential_wedge_form(view.induced, q - 1).matrix.apply(f_x)
            rhs = [a - b for a, b in zip(rhs, d_fx)]
        if list(lhs) != list(rhs):
            mono = next((tuple(i + 1 for i in basis_monomials(n, q)[j]) for j, c in enumerate(coords) if c), ())
            failures.append((q, mono, tuple(lhs), tuple(rhs)))
    return ContractionReport(checked, tuple(failures))
