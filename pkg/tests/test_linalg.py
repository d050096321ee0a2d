from fractions import Fraction
from itertools import combinations
from functools import lru_cache

import pytest
import sympy
from hypothesis import given, strategies as st

from lietwist.errors import NonSquare
from lietwist.linalg import (
    Matrix,
    char_poly,
    char_poly_rational_roots,
    determinant,
    format_rational,
    inverse,
    kernel_basis,
    parse_rational,
    poly_eval,
    rank,
    rational_roots,
    solve,
)


def minor_rank(rows):
    """Rank as the largest k with a nonzero k x k minor, minors by Laplace expansion."""
    nr = len(rows)
    nc = len(rows[0]) if rows else 0

    @lru_cache(maxsize=None)
    def minor(rs, cs):
        if not rs:
            return Fraction(1)
        r0, rest = rs[0], rs[1:]
        total = Fraction(0)
        for pos, c in enumerate(cs):
            a = rows[r0][c]
            if a:
                sub = cs[:pos] + cs[pos + 1:]
                total += (-1) ** pos * a * minor(rest, sub)
        return total

    best = 0
    for k in range(1, min(nr, nc) + 1):
        if any(minor(rs, cs) for rs in combinations(range(nr), k) for cs in combinations(range(nc), k)):
            best = k
        else:
            break
    return best


def leverrier(m: Matrix):
    """Faddeev-LeVerrier characteristic polynomial, lowest degree first."""
    n = m.nrows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = Matrix.zeros(n, n)
    ident = Matrix.identity(n)
    for k in range(1, n + 1):
        M = m @ M + ident.scale(coeffs[n - k + 1])
        AM = m @ M
        coeffs[n - k] = -sum(AM[i, i] for i in range(n)) / k
    return tuple(coeffs)


small_matrix = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)
square_matrix = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=n, max_size=n)
)


class TestRank:
    def test_identity(self):
        assert rank(Matrix.identity(3)) == 3

    def test_zero(self):
        assert rank(Matrix.zeros(2, 3)) == 0

    def test_proportional_rows(self):
        assert rank(Matrix([[1, 2], [2, 4]])) == 1

    def test_rational_entries(self):
        m = Matrix([[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]])
        assert rank(m) == 1

    @given(small_matrix)
    def test_agrees_with_minor_oracle(self, rows):
        assert rank(Matrix(rows)) == minor_rank(rows)

    def test_zero_skipping_columns(self):
        m = Matrix([[0, 2, 1, 0], [0, 4, 2, 1], [0, 0, 0, 3]])
        assert rank(m) == minor_rank(m.rows) == 2


class TestKernel:
    def test_identity_has_empty_kernel(self):
        assert kernel_basis(Matrix.identity(4)) == []

    def test_zero_matrix(self):
        assert kernel_basis(Matrix.zeros(2, 2)) == [(1, 0), (0, 1)]

    def test_normalized_first_entry(self):
        assert kernel_basis(Matrix([[1, 1]])) == [(1, -1)]

    @given(small_matrix)
    def test_rank_nullity(self, rows):
        m = Matrix(rows)
        ker = kernel_basis(m)
        assert rank(m) + len(ker) == m.ncols
        for v in ker:
            assert all(x == 0 for x in m.apply(v))
        if ker:
            assert rank(Matrix(ker)) == len(ker)


class TestSolve:
    def test_identity(self):
        assert solve(Matrix.identity(2), [3, Fraction(1, 2)]) == (3, Fraction(1, 2))

    def test_free_variables_zero(self):
        assert solve(Matrix([[1, 1]]), [2]) == (2, 0)

    def test_inconsistent(self):
        assert solve(Matrix([[1], [1]]), [1, 2]) is None

    @given(small_matrix, st.data())
    def test_solution_satisfies_system(self, rows, data):
        m = Matrix(rows)
        x = data.draw(st.lists(st.integers(-5, 5), min_size=m.ncols, max_size=m.ncols))
        b = m.apply(x)
        sol = solve(m, b)
        assert sol is not None
        assert m.apply(sol) == b


class TestCharPoly:
    def test_identity(self):
        fac = char_poly_rational_roots(Matrix.identity(4))
        assert fac.rational_roots == ((1, 4),)
        assert fac.residual_factor == (1,)

    def test_irrational(self):
        fac = char_poly_rational_roots(Matrix([[0, 2], [1, 0]]))
        assert fac.rational_roots == ()
        assert fac.residual_factor == (-2, 0, 1)
        assert not fac.is_rational_complete

    def test_diagonal_pm_one(self):
        fac = char_poly_rational_roots(Matrix([[1, 0], [0, -1]]))
        assert fac.eigenvalues == [-1, 1]

    def test_non_square(self):
        with pytest.raises(NonSquare):
            char_poly(Matrix.zeros(2, 3))

    def test_rational_root_with_denominator(self):
        roots, resid = rational_roots((Fraction(-1), Fraction(0), Fraction(0), Fraction(4)))  # 4x^3 - 1
        assert roots == []
        roots, resid = rational_roots((Fraction(1), Fraction(-3), Fraction(2)))  # 2x^2 - 3x + 1
        assert roots == [(Fraction(1, 2), 1), (Fraction(1), 1)]
        assert resid == (1,)

    @given(square_matrix)
    def test_matches_leverrier(self, rows):
        m = Matrix(rows)
        assert char_poly(m) == leverrier(m)

    @given(square_matrix)
    def test_matches_sympy(self, rows):
        expected = sympy.Matrix(rows).charpoly().all_coeffs()[::-1]
        assert list(char_poly(Matrix(rows))) == [Fraction(int(c)) for c in expected]

    @given(square_matrix)
    def test_roots_are_roots(self, rows):
        fac = char_poly_rational_roots(Matrix(rows))
        deg = sum(mult for _, mult in fac.rational_roots) + len(fac.residual_factor) - 1
        assert deg == len(rows)
        for r, _ in fac.rational_roots:
            assert poly_eval(fac.char_poly, r) == 0
        for r in range(-6, 7):
            assert poly_eval(fac.residual_factor, r) != 0


def test_rational_round_trip():
    for text in ["0", "3", "-7/2", "5/10"]:
        assert parse_rational(format_rational(parse_rational(text))) == parse_rational(text)
    assert format_rational(Fraction(5, 10)) == "1/2"
    with pytest.raises(ValueError):
        parse_rational("1.5")
    with pytest.raises(ValueError):
        parse_rational("1/0")


def test_inverse_and_determinant():
    m = Matrix([[2, 1], [7, 4]])
    assert determinant(m) == 1
    assert m @ inverse(m) == Matrix.identity(2)
    assert determinant(Matrix([[1, 2], [2, 4]])) == 0


def test_matrix_is_immutable():
    m = Matrix.identity(2)
    with pytest.raises(AttributeError):
        m.nrows = 3
