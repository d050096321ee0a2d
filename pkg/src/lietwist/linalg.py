"""Exact rational linear algebra.

Dense matrices of :class:`fractions.Fraction` with rank, kernel, solving and
characteristic-polynomial utilities.  Nothing in here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Sequence

from sympy import divisors

from .errors import NonSquare

Vector = tuple  # tuple[Fraction, ...]


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact scalars")
    return Fraction(x)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or ``"-p/q"`` exactly."""
    text = str(text).strip()
    if not text:
        raise ValueError("empty rational")
    try:
        num, _, den = text.partition("/")
        if den:
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    x = to_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def vector(values: Iterable) -> Vector:
    return tuple(to_fraction(v) for v in values)


def is_zero_vector(v: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in v)


def normalize_leading(v: Sequence[Fraction]) -> Vector:
    """Scale so the first nonzero coordinate is 1."""
    for x in v:
        if x != 0:
            return tuple(y / x for y in v)
    return tuple(v)


class Matrix:
    """Immutable dense rational matrix."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(to_fraction(x) for x in row) for row in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        for row in data:
            if len(row) != ncols:
                raise ValueError("ragged matrix rows")
        object.__setattr__(self, "rows", data)
        object.__setattr__(self, "nrows", len(data))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> Matrix:
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> Matrix:
        return cls([[col[i] for col in columns] for i in range(nrows)], len(columns))

    @classmethod
    def from_sparse(cls, nrows: int, ncols: int, entries) -> Matrix:
        """Build from a mapping ``(i, j) -> value``."""
        rows = [[Fraction(0)] * ncols for _ in range(nrows)]
        for (i, j), v in entries.items():
            rows[i][j] = to_fraction(v)
        return cls(rows, ncols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def T(self) -> Matrix:
        return Matrix(zip(*self.rows), self.nrows) if self.nrows else Matrix.zeros(self.ncols, 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def nonzero(self) -> Iterator[tuple[int, int, Fraction]]:
        for i, row in enumerate(self.rows):
            for j, x in enumerate(row):
                if x != 0:
                    yield i, j, x

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.rows for x in row)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.ncols:
            raise ValueError("dimension mismatch")
        return tuple(sum((a * b for a, b in zip(row, v) if a and b), Fraction(0)) for row in self.rows)

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.T.rows
        return Matrix(
            [[sum((a * b for a, b in zip(row, col) if a and b), Fraction(0)) for col in cols]
             for row in self.rows],
            other.ncols,
        )

    def __add__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: Matrix) -> Matrix:
        return self + other.scale(-1)

    def scale(self, c) -> Matrix:
        c = to_fraction(c)
        return Matrix([[c * a for a in row] for row in self.rows], self.ncols)

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in row) for row in self.rows)
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"

    def tolist(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self.rows]


def stack_rows(vectors: Sequence[Sequence], ncols: int) -> Matrix:
    return Matrix(vectors, ncols)


# -- elimination ------------------------------------------------------------


def _integer_rows(m: Matrix) -> list[list[int]]:
    out = []
    for row in m.rows:
        den = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * den) for x in row])
    return out


def rank(m: Matrix) -> int:
    """Exact rank by fraction-free (Bareiss) elimination on integer rows."""
    a = [r for r in _integer_rows(m) if any(r)]
    nrows, ncols = len(a), m.ncols
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        prow = a[r]
        for i in range(r + 1, nrows):
            row = a[i]
            f = row[c]
            if f:
                for j in range(c + 1, ncols):
                    row[j] = (p * row[j] - f * prow[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    if row[j]:
                        row[j] = (p * row[j]) // prev
            row[c] = 0
        prev = p
        r += 1
    return r


def rref(m: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; pivots chosen as the first nonzero entry in column order.

    Returns the nonzero rows and the pivot columns.
    """
    a = [list(row) for row in m.rows]
    nrows, ncols = m.nrows, m.ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        if p != 1:
            a[r] = [x / p for x in a[r]]
        prow = a[r]
        nz = [j for j in range(c, ncols) if prow[j] != 0]
        for i in range(nrows):
            if i != r:
                f = a[i][c]
                if f != 0:
                    row = a[i]
                    for j in nz:
                        row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def kernel_basis(m: Matrix) -> list[Vector]:
    """Basis of the right null space, one vector per free column.

    Each vector is normalized so its first nonzero coordinate is 1.
    """
    rows, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for free in range(m.ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * m.ncols
        v[free] = Fraction(1)
        for row, pc in zip(rows, pivots):
            v[pc] = -row[free]
        basis.append(normalize_leading(v))
    return basis


def solve(m: Matrix, b: Sequence) -> Vector | None:
    """One solution of ``m x = b`` with free variables set to zero, or None."""
    b = vector(b)
    if len(b) != m.nrows:
        raise ValueError("right-hand side has wrong length")
    aug = Matrix([list(row) + [bi] for row, bi in zip(m.rows, b)], m.ncols + 1)
    rows, pivots = rref(aug)
    if pivots and pivots[-1] == m.ncols:
        return None
    x = [Fraction(0)] * m.ncols
    for row, pc in zip(rows, pivots):
        x[pc] = row[m.ncols]
    return tuple(x)


def row_basis(vectors: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Echelonized basis (reduced rows) of the span of ``vectors``."""
    if not vectors:
        return []
    rows, _ = rref(Matrix(vectors, ncols))
    return [tuple(r) for r in rows]


def span_rank(vectors: Sequence[Sequence], ncols: int) -> int:
    if not vectors:
        return 0
    return rank(Matrix(vectors, ncols))


def determinant(m: Matrix) -> Fraction:
    if m.nrows != m.ncols:
        raise NonSquare(f"determinant of a {m.nrows}x{m.ncols} matrix")
    a = [list(r) for r in m.rows]
    n = m.nrows
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        p = a[c][c]
        det *= p
        for i in range(c + 1, n):
            f = a[i][c] / p
            if f:
                for j in range(c, n):
                    a[i][j] -= f * a[c][j]
    return det


def inverse(m: Matrix) -> Matrix:
    n = m.nrows
    if n != m.ncols:
        raise NonSquare(f"inverse of a {m.nrows}x{m.ncols} matrix")
    aug = Matrix([list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(m.rows)], 2 * n)
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise ZeroDivisionError("matrix is singular")
    return Matrix([row[n:] for row in rows], n)


# -- polynomials --------------------------------------------------------------
# Polynomials are tuples of Fractions, lowest degree first.


def poly_trim(p: Sequence[Fraction]) -> tuple:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p) if p else (Fraction(0),)


def poly_eval(p: Sequence[Fraction], x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_mul(p: Sequence[Fraction], q: Sequence[Fraction]) -> tuple:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return poly_trim(out)


def _deflate(p: Sequence[Fraction], root: Fraction) -> tuple[tuple, Fraction]:
    """Synthetic division by (x - root); returns quotient and remainder."""
    n = len(p) - 1
    q = [Fraction(0)] * n
    acc = Fraction(0)
    for i in range(n, 0, -1):
        acc = acc * root + p[i]
        q[i - 1] = acc
    rem = acc * root + p[0]
    return tuple(q), rem


def char_poly(m: Matrix) -> tuple:
    """Characteristic polynomial det(x I - m), via exact Hessenberg reduction."""
    if m.nrows != m.ncols:
        raise NonSquare(f"characteristic polynomial of a {m.nrows}x{m.ncols} matrix")
    n = m.nrows
    h = [list(r) for r in m.rows]
    for k in range(1, n - 1):
        piv = next((i for i in range(k, n) if h[i][k - 1] != 0), None)
        if piv is None:
            continue
        if piv != k:
            h[k], h[piv] = h[piv], h[k]
            for row in h:
                row[k], row[piv] = row[piv], row[k]
        t = h[k][k - 1]
        for i in range(k + 1, n):
            u = h[i][k - 1] / t
            if u == 0:
                continue
            for j in range(n):
                h[i][j] -= u * h[k][j]
            for j in range(n):
                h[j][k] += u * h[j][i]
    polys: list[tuple] = [(Fraction(1),)]
    for mm in range(1, n + 1):
        p = poly_mul((-h[mm - 1][mm - 1], Fraction(1)), polys[mm - 1])
        prod = Fraction(1)
        for i in range(mm - 1, 0, -1):
            prod *= h[i][i - 1]
            if prod == 0:
                break
            coef = h[i - 1][mm - 1] * prod
            if coef:
                prev = polys[i - 1]
                p = list(p)
                for d, c in enumerate(prev):
                    p[d] -= coef * c
                p = poly_trim(p)
        polys.append(poly_trim(p))
    return polys[n]


def rational_roots(p: Sequence[Fraction]) -> tuple[list[tuple[Fraction, int]], tuple]:
    """All rational roots of ``p`` with multiplicity, and the root-free residual.

    Roots come back in ascending order.  The residual is monic.
    """
    p = poly_trim(vector(p))
    if len(p) == 1:
        if p[0] == 0:
            raise ValueError("zero polynomial has no well-defined roots")
        return [], (Fraction(1),)
    lead = p[-1]
    p = tuple(c / lead for c in p)
    found: dict[Fraction, int] = {}
    zeros = 0
    while len(p) > 1 and p[0] == 0:
        p = p[1:]
        zeros += 1
    if zeros:
        found[Fraction(0)] = zeros
    changed = True
    while changed and len(p) > 1:
        changed = False
        den = lcm(*(c.denominator for c in p))
        ints = [int(c * den) for c in p]
        a0, an = abs(ints[0]), abs(ints[-1])
        for q in divisors(an):
            for num in divisors(a0):
                for cand in (Fraction(num, q), Fraction(-num, q)):
                    if poly_eval(p, cand) == 0:
                        while len(p) > 1:
                            quot, rem = _deflate(p, cand)
                            if rem != 0:
                                break
                            p = quot
                            found[cand] = found.get(cand, 0) + 1
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return sorted(found.items()), p


@dataclass(frozen=True)
class CharPolyFactorization:
    """char_poly = prod (x - root)^mult * residual_factor."""

    char_poly: tuple
    rational_roots: tuple  # ((root, multiplicity), ...)
    residual_factor: tuple

    @property
    def is_rational_complete(self) -> bool:
        return len(self.residual_factor) == 1

    @property
    def eigenvalues(self) -> list[Fraction]:
        return [r for r, _ in self.rational_roots]

    def to_dict(self) -> dict:
        return {
            "char_poly": [format_rational(c) for c in self.char_poly],
            "rational_roots": [
                {"root": format_rational(r), "multiplicity": mult} for r, mult in self.rational_roots
            ],
            "residual_factor": [format_rational(c) for c in self.residual_factor],
        }


def char_poly_rational_roots(m: Matrix) -> CharPolyFactorization:
    cp = char_poly(m)
    roots, residual = rational_roots(cp)
    return CharPolyFactorization(cp, tuple(roots), residual)
