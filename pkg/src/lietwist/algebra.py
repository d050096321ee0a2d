"""Lie algebras given by rational structure constants, and their cochain complexes.

Sign convention for the differential: in degree one, ``(df)(X, Y) = f([X, Y])``,
extended to higher degrees by

    df(X_1..X_{q+1}) = sum_{i<j} (-1)^(i+j-1) f([X_i, X_j], X_1..^X_i..^X_j..X_{q+1})

so for ``[e_1, e_2] = e_3`` one gets ``d w3 = w1 ^ w2``.  Forms are evaluated
with the determinant convention ``(w_a1 ^ ... ^ w_aq)(e_a1, ..., e_aq) = 1``.

Degree-q cochains are coordinate vectors over the monomials of
``basis_monomials(n, q)``: strictly increasing index tuples in lexicographic
order (equivalently, itertools.combinations order).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import comb
from typing import Mapping, NamedTuple, Sequence

from .errors import InvalidAlgebra, OmegaNotClosed
from .linalg import (
    Matrix,
    Vector,
    format_rational,
    inverse,
    rank,
    row_basis,
    solve,
    to_fraction,
    vector,
)


# -- exterior basis -------------------------------------------------------------


class Monomial(NamedTuple):
    """A basis monomial w_{i1} ^ ... ^ w_{iq}, stored as a bitmask over 0-based indices."""

    mask: int

    @classmethod
    def from_indices(cls, indices: Sequence[int]) -> Monomial:
        m = 0
        for i in indices:
            m |= 1 << i
        return cls(m)

    @property
    def indices(self) -> tuple[int, ...]:
        out, m, i = [], self.mask, 0
        while m:
            if m & 1:
                out.append(i)
            m >>= 1
            i += 1
        return tuple(out)

    @property
    def degree(self) -> int:
        return bin(self.mask).count("1")


@lru_cache(maxsize=None)
def basis_monomials(n: int, q: int) -> tuple[tuple[int, ...], ...]:
    if q < 0 or q > n:
        return ()
    return tuple(combinations(range(n), q))


@lru_cache(maxsize=None)
def monomial_index(n: int, q: int) -> dict[tuple[int, ...], int]:
    return {mono: i for i, mono in enumerate(basis_monomials(n, q))}


def _mask(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def wedge_monomials(a: Sequence[int], b: Sequence[int]) -> tuple[int, tuple[int, ...]] | None:
    """w_a ^ w_b = sign * w_c with c sorted, or None when the product vanishes."""
    ma, mb = _mask(a), _mask(b)
    if ma & mb:
        return None
    # each index of b moves left past the indices of a that exceed it
    swaps = sum(bin(ma >> (j + 1)).count("1") for j in b)
    return (-1 if swaps & 1 else 1), tuple(sorted((*a, *b)))


def permutation_sign(seq: Sequence[int]) -> int:
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv & 1 else 1


# -- the algebra ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Structure constants ``[e_i, e_j] = sum_k c_ij^k e_k`` for 0-based ``i < j``.

    Only pairs with ``i < j`` are stored; the other half follows from antisymmetry.
    The constructor normalizes values to Fractions and drops zero coefficients,
    but does not check the Jacobi identity (see :func:`jacobi_check`).
    """

    dim: int
    brackets: Mapping[tuple[int, int], Mapping[int, Fraction]] = field(default_factory=dict)
    basis_names: tuple[str, ...] = ()

    def __post_init__(self):
        n = self.dim
        if not isinstance(n, int) or n < 1:
            raise InvalidAlgebra(f"dimension must be a positive integer, got {n!r}")
        clean: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), terms in self.brackets.items():
            if not (0 <= i < j < n):
                raise InvalidAlgebra(f"bracket index pair ({i}, {j}) must satisfy 0 <= i < j < {n}")
            row = {}
            for k, c in terms.items():
                if not 0 <= k < n:
                    raise InvalidAlgebra(f"bracket [{i},{j}] has output index {k} out of range")
                c = to_fraction(c)
                if c:
                    row[k] = c
            if row:
                clean[(i, j)] = dict(sorted(row.items()))
        object.__setattr__(self, "brackets", dict(sorted(clean.items())))
        names = tuple(self.basis_names) or tuple(f"e{i + 1}" for i in range(n))
        if len(names) != n:
            raise InvalidAlgebra(f"expected {n} basis names, got {len(names)}")
        object.__setattr__(self, "basis_names", names)

    # structure constants

    def bracket_basis(self, i: int, j: int) -> dict[int, Fraction]:
        if i == j:
            return {}
        if i < j:
            return self.brackets.get((i, j), {})
        return {k: -c for k, c in self.brackets.get((j, i), {}).items()}

    @cached_property
    def _table(self) -> list[list[dict[int, Fraction]]]:
        n = self.dim
        return [[self.bracket_basis(i, j) for j in range(n)] for i in range(n)]

    def ad(self, x: Sequence) -> Matrix:
        """Matrix of y -> [x, y]."""
        x = vector(x)
        cols = [bracket(self, x, unit(self.dim, j)) for j in range(self.dim)]
        return Matrix.from_columns(cols, self.dim)

    def change_basis(self, p: Matrix) -> LieAlgebra:
        """The same algebra written in the basis given by the columns of ``p``."""
        pinv = inverse(p)
        cols = p.columns()
        new = {}
        for a in range(self.dim):
            for b in range(a + 1, self.dim):
                v = pinv.apply(bracket(self, cols[a], cols[b]))
                terms = {k: c for k, c in enumerate(v) if c}
                if terms:
                    new[(a, b)] = terms
        return LieAlgebra(self.dim, new)

    def same_as(self, other: LieAlgebra) -> bool:
        return self.dim == other.dim and self.brackets == other.brackets and self.basis_names == other.basis_names

    def digest(self) -> str:
        payload = {
            "dim": self.dim,
            "basis": list(self.basis_names),
            "brackets": [
                [i, j, [[k, format_rational(c)] for k, c in terms.items()]]
                for (i, j), terms in self.brackets.items()
            ],
        }
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()

    # cochain complex caches (untwisted part and wedge operators)

    @cached_property
    def _d_cache(self) -> dict:
        return {}

    def check_closed(self, omega: Sequence) -> Vector:
        omega = vector(omega)
        if len(omega) != self.dim:
            raise ValueError(f"covector has length {len(omega)}, algebra has dimension {self.dim}")
        for (i, j), terms in self.brackets.items():
            if sum((c * omega[k] for k, c in terms.items()), Fraction(0)) != 0:
                raise OmegaNotClosed(
                    f"d(omega) != 0: omega([e{i + 1}, e{j + 1}]) = "
                    f"{format_rational(sum((c * omega[k] for k, c in terms.items()), Fraction(0)))}"
                )
        return omega


def unit(n: int, i: int) -> Vector:
    return tuple(Fraction(1) if k == i else Fraction(0) for k in range(n))


def bracket(L: LieAlgebra, x: Sequence, y: Sequence) -> Vector:
    """Bilinear antisymmetric extension of the structure constants."""
    n = L.dim
    if len(x) != n or len(y) != n:
        raise ValueError("vectors must have length equal to the algebra dimension")
    out = [Fraction(0)] * n
    table = L._table
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if not yj or i == j:
                continue
            for k, c in table[i][j].items():
                out[k] += xi * yj * c
    return tuple(out)


# -- twists -------------------------------------------------------------------------


@dataclass(frozen=True)
class Twist:
    """The closed 1-form ``lam * omega`` that deforms the differential."""

    omega: Vector
    lam: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "omega", vector(self.omega))
        object.__setattr__(self, "lam", to_fraction(self.lam))

    @classmethod
    def checked(cls, L: LieAlgebra, omega: Sequence, lam=1) -> Twist:
        return cls(L.check_closed(omega), lam)

    @classmethod
    def zero(cls, n: int) -> Twist:
        return cls((0,) * n, 0)

    @cached_property
    def effective(self) -> Vector:
        return tuple(self.lam * w for w in self.omega)

    @property
    def is_trivial(self) -> bool:
        return all(x == 0 for x in self.effective)

    def to_dict(self) -> dict:
        return {
            "omega": [format_rational(x) for x in self.omega],
            "lambda": format_rational(self.lam),
            "effective": [format_rational(x) for x in self.effective],
        }


def _as_twist(L: LieAlgebra, t: Twist | None) -> Twist:
    if t is None:
        return Twist.zero(L.dim)
    if len(t.omega) != L.dim:
        raise ValueError("twist has the wrong length for this algebra")
    L.check_closed(t.omega)
    return t


# -- differentials -----------------------------------------------------------------------


@dataclass(frozen=True)
class DifferentialMatrix:
    degree: int
    matrix: Matrix
    twist: Twist


def _d_one_forms(L: LieAlgebra) -> list[dict[tuple[int, int], Fraction]]:
    """dw^k = sum_{i<j} c_ij^k w^i ^ w^j."""
    out: list[dict] = [{} for _ in range(L.dim)]
    for (i, j), terms in L.brackets.items():
        for k, c in terms.items():
            out[k][(i, j)] = c
    return out


def _untwisted_sparse(L: LieAlgebra, q: int) -> dict[tuple[int, int], Fraction]:
    """Leibniz extension of d on degree-q monomials; entries (row, col) of the matrix."""
    key = ("d", q)
    cache = L._d_cache
    if key in cache:
        return cache[key]
    n = L.dim
    d1 = _d_one_forms(L)
    target = monomial_index(n, q + 1)
    entries: dict[tuple[int, int], Fraction] = {}
    for col, mono in enumerate(basis_monomials(n, q)):
        for pos, l in enumerate(mono):
            if not d1[l]:
                continue
            rest = mono[:pos] + mono[pos + 1:]
            # left ^ (2-form) ^ right == (2-form) ^ left ^ right since 2-forms are central
            base = -1 if pos & 1 else 1
            for pair, c in d1[l].items():
                w = wedge_monomials(pair, rest)
                if w is None:
                    continue
                sign, res = w
                row = target[res]
                entries[(row, col)] = entries.get((row, col), 0) + base * sign * c
    entries = {k: v for k, v in entries.items() if v}
    cache[key] = entries
    return entries


def wedge_operator(n: int, theta: Sequence, q: int) -> dict[tuple[int, int], Fraction]:
    """Sparse matrix of a -> theta ^ a on degree-q cochains."""
    target = monomial_index(n, q + 1)
    entries: dict[tuple[int, int], Fraction] = {}
    for col, mono in enumerate(basis_monomials(n, q)):
        for a, t in enumerate(theta):
            if not t:
                continue
            w = wedge_monomials((a,), mono)
            if w is None:
                continue
            sign, res = w
            key = (target[res], col)
            entries[key] = entries.get(key, 0) + sign * t
    return {k: v for k, v in entries.items() if v}


def differential_sparse(L: LieAlgebra, q: int, t: Twist | None = None) -> dict[tuple[int, int], Fraction]:
    t = _as_twist(L, t)
    entries = dict(_untwisted_sparse(L, q))
    if not t.is_trivial:
        for key, v in wedge_operator(L.dim, t.effective, q).items():
            entries[key] = entries.get(key, 0) + v
        entries = {k: v for k, v in entries.items() if v}
    return entries


def differential_wedge_form(L: LieAlgebra, q: int, t: Twist | None = None) -> DifferentialMatrix:
    """d_{lam w} = d + lam w ^, with d built from d on 1-forms by the Leibniz rule."""
    n = L.dim
    if not 0 <= q <= n:
        raise ValueError(f"degree {q} out of range 0..{n}")
    t = _as_twist(L, t)
    entries = differential_sparse(L, q, t)
    m = Matrix.from_sparse(comb(n, q + 1), comb(n, q), entries)
    return DifferentialMatrix(q, m, t)


def _evaluate_monomial_with_first(k: int, rest: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
    """w_S(e_k, e_rest...) is nonzero only for S = sorted(k, rest); returns (sign, S)."""
    if k in rest:
        return None
    smaller = sum(1 for r in rest if r < k)
    return (-1 if smaller & 1 else 1), tuple(sorted((k, *rest)))


def differential_rep_form(L: LieAlgebra, q: int, t: Twist | None = None) -> DifferentialMatrix:
    """Cochain differential with coefficients in the 1-dim representation x -> lam w(x).

    Assembled by evaluating the cochain formula on basis vectors directly,
    independently of :func:`differential_wedge_form`.
    """
    n = L.dim
    if not 0 <= q <= n:
        raise ValueError(f"degree {q} out of range 0..{n}")
    t = _as_twist(L, t)
    theta = t.effective
    source = monomial_index(n, q)
    table = L._table
    entries: dict[tuple[int, int], Fraction] = {}

    def add(row, col, v):
        entries[(row, col)] = entries.get((row, col), 0) + v

    for row, args in enumerate(basis_monomials(n, q + 1)):
        # rho(X_i) f(X_1..^X_i..), sign (-1)^(i+1) for 1-based i
        for i, a in enumerate(args):
            if theta[a]:
                rest = args[:i] + args[i + 1:]
                add(row, source[rest], (-1 if i & 1 else 1) * theta[a])
        # f([X_i, X_j], ...), sign (-1)^(i+j-1) for 1-based i, j
        for i in range(len(args)):
            for j in range(i + 1, len(args)):
                br = table[args[i]][args[j]]
                if not br:
                    continue
                sign_ij = 1 if (i + j) & 1 else -1  # 0-based i+j+1
                rest = args[:i] + args[i + 1:j] + args[j + 1:]
                for k, c in br.items():
                    ev = _evaluate_monomial_with_first(k, rest)
                    if ev is None:
                        continue
                    s, mono = ev
                    add(row, source[mono], sign_ij * s * c)
    m = Matrix.from_sparse(comb(n, q + 1), comb(n, q), {k: v for k, v in entries.items() if v})
    return DifferentialMatrix(q, m, t)


# -- structural queries ----------------------------------------------------------------------


@dataclass(frozen=True)
class JacobiReport:
    ok: bool
    violations: tuple = ()  # ((i, j, k), residual vector), 0-based

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"triple": [i + 1, j + 1, k + 1], "residual": [format_rational(x) for x in res]}
                for (i, j, k), res in self.violations
            ],
        }


def jacobi_check(L: LieAlgebra) -> JacobiReport:
    """Check [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]] = 0 for all i<j<k."""
    n = L.dim
    e = [unit(n, i) for i in range(n)]
    bad = []
    for i, j, k in combinations(range(n), 3):
        terms = (
            bracket(L, e[i], bracket(L, e[j], e[k])),
            bracket(L, e[j], bracket(L, e[k], e[i])),
            bracket(L, e[k], bracket(L, e[i], e[j])),
        )
        res = tuple(sum(col, Fraction(0)) for col in zip(*terms))
        if any(res):
            bad.append(((i, j, k), res))
    return JacobiReport(not bad, tuple(bad))


class DerivedAlgebra(NamedTuple):
    basis: list[Vector]
    dim: int


def _span_of_brackets(L: LieAlgebra, xs: Sequence[Vector], ys: Sequence[Vector]) -> list[Vector]:
    vecs = [bracket(L, x, y) for x in xs for y in ys]
    return row_basis([v for v in vecs if any(v)], L.dim)


def derived_subalgebra(L: LieAlgebra) -> DerivedAlgebra:
    """Echelonized basis of [g, g]."""
    vecs = [bracket(L, unit(L.dim, i), unit(L.dim, j)) for (i, j) in L.brackets]
    basis = row_basis(vecs, L.dim)
    return DerivedAlgebra(basis, len(basis))


def closed_one_forms(L: LieAlgebra) -> list[Vector]:
    """Basis of the closed 1-forms (the annihilator of [g, g])."""
    from .linalg import kernel_basis

    der = derived_subalgebra(L).basis
    if not der:
        return [unit(L.dim, i) for i in range(L.dim)]
    return kernel_basis(Matrix(der, L.dim))


def is_unimodular(L: LieAlgebra) -> bool:
    return all(
        sum((L.bracket_basis(i, j).get(j, Fraction(0)) for j in range(L.dim)), Fraction(0)) == 0
        for i in range(L.dim)
    )


@dataclass(frozen=True)
class Classification:
    nilpotent: bool
    solvable: bool
    lower_central_dims: tuple[int, ...]
    derived_dims: tuple[int, ...]

    @property
    def kind(self) -> str:
        if self.nilpotent:
            return "nilpotent"
        if self.solvable:
            return "solvable"
        return "non-solvable"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "nilpotent": self.nilpotent,
            "solvable": self.solvable,
            "lower_central_series": list(self.lower_central_dims),
            "derived_series": list(self.derived_dims),
        }


def classify(L: LieAlgebra) -> Classification:
    n = L.dim
    full = [unit(n, i) for i in range(n)]

    lower = [n]
    cur = full
    while cur:
        nxt = _span_of_brackets(L, full, cur)
        if len(nxt) == len(cur):
            break
        cur = nxt
        lower.append(len(cur))

    derived = [n]
    cur = full
    while cur:
        nxt = _span_of_brackets(L, cur, cur)
        if len(nxt) == len(cur):
            break
        cur = nxt
        derived.append(len(cur))

    return Classification(lower[-1] == 0, derived[-1] == 0, tuple(lower), tuple(derived))


def compose_is_zero(L: LieAlgebra, t: Twist | None = None) -> bool:
    """d_{q+1} o d_q == 0 for every q."""
    n = L.dim
    for q in range(n - 1):
        a = differential_wedge_form(L, q, t).matrix
        b = differential_wedge_form(L, q + 1, t).matrix
        if not (b @ a).is_zero():
            return False
    return True


def differential_rank(L: LieAlgebra, q: int, t: Twist | None = None) -> int:
    if q < 0 or q >= L.dim:
        return 0
    return rank(differential_wedge_form(L, q, t).matrix)


def coordinates_in(basis_columns: Sequence[Vector], v: Sequence, n: int) -> Vector:
    """Coordinates of ``v`` in the span of ``basis_columns``; raises if not in the span."""
    sol = solve(Matrix.from_columns(basis_columns, n), v)
    if sol is None:
        raise ValueError("vector is not in the span")
    return sol
