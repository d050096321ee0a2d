from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from lietwist import zoo
from lietwist.algebra import LieAlgebra, Twist, derived_subalgebra, is_unimodular, jacobi_check
from lietwist.cohomology import betti
from lietwist.dixmier import nontriviality_set
from lietwist.errors import NotSolvable, ProbeInExceptionalSet, RationalSpectrumRequired
from lietwist.linalg import Matrix, char_poly_rational_roots, solve
from lietwist.weights import (
    adapted_basis,
    common_eigenvector,
    invariant_flag,
    line_candidates,
    omega_set,
    omega_tilde,
    verify_vanishing,
    weight_system,
)

from conftest import semidirect

G0 = zoo.g0().algebra
SL2 = LieAlgebra(3, {(0, 1): {2: 1}, (0, 2): {0: -2}, (1, 2): {1: 2}})

triangularizable = st.tuples(
    st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)
).map(lambda t: [[t[0], t[1]], [0, t[2]]])


def conjugated(a):
    """Upper-triangular a conjugated by [[1,1],[1,2]], so the flag is not the standard one."""
    p = Matrix([[1, 1], [1, 2]])
    pinv = Matrix([[2, -1], [-1, 1]])
    return (p @ Matrix(a) @ pinv).rows


class TestFlag:
    def test_common_eigenvector_commuting(self):
        ops = [Matrix([[1, 1], [0, 1]]), Matrix([[2, 0], [0, 2]])]
        assert common_eigenvector(ops, 2) == (1, 0)

    def test_flag_is_invariant(self):
        ops = [Matrix([[1, 2, 0], [0, 3, 0], [1, 0, 2]])]
        flag = invariant_flag(ops, 3)
        for t in range(1, 4):
            span = Matrix.from_columns(flag[:t], 3)
            for op in ops:
                for v in flag[:t]:
                    assert solve(span, op.apply(v)) is not None


class TestAdaptedBasis:
    def test_g0(self):
        ab = adapted_basis(G0)
        assert ab.k == 1
        assert sorted(ab.weights) == [(-1, 0, 0), (1, 0, 0)]

    def test_heisenberg(self):
        ab = adapted_basis(zoo.heisenberg().algebra)
        assert ab.k == 2
        assert ab.weights == ((0, 0, 0),)
        assert ab.quadratic_parts == ({(0, 1): 1},)

    def test_torus_no_weights(self):
        ab = adapted_basis(zoo.torus(3).algebra)
        assert ab.weights == ()

    def test_diag_example(self):
        ab = adapted_basis(zoo.diag_example(3).algebra)
        assert ab.weights == ((1, 0, 0, 0),) * 3

    def test_not_solvable(self):
        with pytest.raises(NotSolvable):
            adapted_basis(SL2)

    def test_irrational(self):
        with pytest.raises(RationalSpectrumRequired) as info:
            adapted_basis(semidirect([[0, 2], [1, 0]]))
        assert info.value.residual == (-2, 0, 1)

    @given(triangularizable)
    def test_structure_equations_triangular(self, a):
        L = semidirect(conjugated(a))
        ab = adapted_basis(L)
        T = ab.transformed
        assert jacobi_check(T).ok
        n = L.dim
        # each Span(e'_j..e'_n) with j > k is an ideal
        for j in range(ab.k, n):
            for a_ in range(n):
                for b_ in range(j, n):
                    v = T.bracket_basis(min(a_, b_), max(a_, b_)) if a_ != b_ else {}
                    assert all(c >= j for c in v)

    @given(triangularizable)
    def test_weights_are_eigenvalues(self, a):
        L = semidirect(conjugated(a))
        ab = adapted_basis(L)
        # weights evaluated on X give the eigenvalues of ad X restricted to the derived algebra
        derived = derived_subalgebra(L).dim
        assert len(ab.weights) == derived
        ev = sorted(w[0] for w in ab.weights)
        fac = char_poly_rational_roots(Matrix(a))
        all_ev = sorted(r for r, m in fac.rational_roots for _ in range(m))
        for x in ev:
            assert x in all_ev


class TestOmegaSets:
    def test_omega_set_g0(self):
        ws = weight_system(G0)
        assert ws.omega_set == ((-1, 0, 0), (0, 0, 0), (1, 0, 0))
        assert ws.omega_tilde == ((-1, 0, 0), (1, 0, 0))

    def test_sum_is_trace_form(self):
        for entry in zoo.standard_entries():
            L = entry.algebra
            ws = weight_system(L)
            if is_unimodular(L):
                assert not any(ws.sum_of_all)
            else:
                assert any(ws.sum_of_all)

    def test_omega_set_dedup(self):
        assert omega_set([(1, 0), (1, 0)]) == [(1, 0), (2, 0)]
        assert omega_set([]) == []

    def test_omega_tilde_excludes_zero(self):
        assert omega_tilde(G0, [(0, 0, 0)]) == []

    def test_line_candidates(self):
        assert line_candidates((1, 0, 0), [(1, 0, 0), (-1, 0, 0), (0, 1, 0)]) == [-1, 0, 1]
        assert line_candidates((2, 0), [(1, 0)]) == [Fraction(-1, 2), 0]
        assert line_candidates((0, 0), [(1, 0)]) == [0]


class TestInclusion:
    @pytest.mark.parametrize("entry", [e for e in zoo.standard_entries() if e.algebra.dim >= 2],
                             ids=lambda e: e.name)
    def test_nontrivial_within_candidates(self, entry):
        L = entry.algebra
        om = (1,) + (0,) * (L.dim - 1)
        ws = weight_system(L)
        ns = nontriviality_set(L, om)
        cands = line_candidates(om, ws.omega_set)
        assert set(ns.lambdas) <= set(cands)

    @given(triangularizable, st.integers(-4, 4))
    def test_random(self, a, lam):
        L = semidirect(conjugated(a))
        ws = weight_system(L)
        neg = tuple(-Fraction(lam) * w for w in (1, 0, 0))
        if not betti(L, Twist((1, 0, 0), lam)).is_zero:
            assert neg in set(ws.omega_set) | {(0, 0, 0)}


class TestVanishing:
    def test_g0(self):
        rep = verify_vanishing(G0, [Twist((1, 0, 0), lam) for lam in (2, -3, Fraction(1, 2))])
        assert rep.ok and rep.verdicts == (True, True, True)

    def test_exceptional_probe(self):
        with pytest.raises(ProbeInExceptionalSet):
            verify_vanishing(G0, [Twist((1, 0, 0), 1)])
        with pytest.raises(ProbeInExceptionalSet):
            verify_vanishing(G0, [Twist((1, 0, 0), 0)])

    @given(triangularizable, st.integers(-5, 5), st.integers(1, 3))
    def test_random(self, a, num, den):
        L = semidirect(conjugated(a))
        sums = weight_system(L).omega_set
        lam = Fraction(num, den)
        neg = tuple(-lam * w for w in (1, 0, 0))
        assume(neg not in set(sums) and any(neg))
        assert verify_vanishing(L, [Twist((1, 0, 0), lam)], sums).ok
