from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from lietwist import zoo
from lietwist.algebra import Twist, classify, derived_subalgebra, differential_wedge_form
from lietwist.cohomology import (
    NOVIKOV_NOTE,
    betti,
    cohomology_space,
    generic_probe,
    novikov_report,
    scan_line,
)
from lietwist.errors import OmegaNotClosed
from lietwist.linalg import Matrix, rank

from conftest import semidirect

G0 = zoo.g0().algebra
H3 = zoo.heisenberg().algebra


class TestExamples:
    def test_torus_binomial(self):
        for n in range(1, 5):
            assert betti(zoo.torus(n).algebra).betti == tuple(comb(n, q) for q in range(n + 1))

    def test_torus_twisted_vanishes(self):
        L = zoo.torus(3).algebra
        assert betti(L, Twist((0, 1, 0), Fraction(-1, 3))).is_zero

    def test_heisenberg(self):
        assert betti(H3).betti == (1, 2, 2, 1)

    def test_g0_untwisted(self):
        assert betti(G0).betti == (1, 1, 1, 1)

    @pytest.mark.parametrize("lam, expected", [(1, (0, 1, 1, 0)), (-1, (0, 1, 1, 0)), (2, (0,) * 4), (-2, (0,) * 4),
                                               (Fraction(1, 2), (0,) * 4)])
    def test_g0_line(self, lam, expected):
        assert betti(G0, Twist((1, 0, 0), lam)).betti == expected

    def test_diag_example_placement(self):
        # lambda = -p: the nonzero degrees are p and p+1
        for n in range(1, 5):
            L = zoo.diag_example(n).algebra
            om = (1,) + (0,) * n
            for p in range(n + 1):
                b = betti(L, Twist(om, -p)).betti
                expected = [0] * (n + 2)
                expected[p] = comb(n, p)
                expected[p + 1] = comb(n, p)
                assert b == tuple(expected), (n, p, b)

    def test_not_closed(self):
        with pytest.raises(OmegaNotClosed):
            betti(G0, Twist((0, 0, 1), 1))


class TestInvariants:
    @pytest.mark.parametrize("entry", zoo.standard_entries(), ids=lambda e: e.name)
    def test_untwisted_facts(self, entry):
        L = entry.algebra
        b = betti(L)
        assert b[0] == 1
        assert b.euler == 0
        assert b[1] == L.dim - derived_subalgebra(L).dim
        if classify(L).nilpotent and L.dim >= 2:
            assert all(x >= 2 for x in b.betti[1:-1])

    @pytest.mark.parametrize("entry", zoo.standard_entries(), ids=lambda e: e.name)
    def test_twisted_h0_vanishes(self, entry):
        L = entry.algebra
        n = L.dim
        om = (1,) + (0,) * (n - 1)
        for lam in (1, -1, Fraction(1, 2)):
            b = betti(L, Twist.checked(L, om, lam))
            assert b[0] == 0
            assert b.euler == 0

    def test_top_degree_vanishes_off_trace(self):
        # H^n_{lw} != 0 exactly when lam*w = -tr ad
        L = zoo.diag_example(2).algebra
        assert betti(L, Twist((1, 0, 0), -2))[3] == 1
        assert betti(L, Twist((1, 0, 0), -1))[3] == 0

    @given(st.lists(st.lists(st.integers(-2, 2), min_size=2, max_size=2), min_size=2, max_size=2),
           st.integers(-3, 3))
    def test_random_semidirect_euler_zero(self, a, lam):
        L = semidirect(a)
        b = betti(L, Twist.checked(L, (1, 0, 0), lam))
        assert b.euler == 0

    @given(st.lists(st.lists(st.integers(-2, 2), min_size=2, max_size=2), min_size=2, max_size=2),
           st.integers(-3, 3))
    def test_betti_from_independent_ranks(self, a, lam):
        L = semidirect(a)
        t = Twist.checked(L, (1, 0, 0), lam)
        ranks = [rank(Matrix(differential_wedge_form(L, q, t).matrix.rows)) for q in range(3)] + [0]
        expected = tuple(comb(3, q) - ranks[q] - (ranks[q - 1] if q else 0) for q in range(4))
        assert betti(L, t).betti == expected


class TestRepresentatives:
    @pytest.mark.parametrize("entry", zoo.standard_entries(), ids=lambda e: e.name)
    def test_dimensions_and_cocycles(self, entry):
        L = entry.algebra
        n = L.dim
        om = (1,) + (0,) * (n - 1)
        for lam in (0, -1, 1):
            t = Twist.checked(L, om, lam)
            b = betti(L, t)
            for q in range(n + 1):
                sp = cohomology_space(L, t, q)
                assert sp.dimension == b[q]
                if q < n:
                    d = differential_wedge_form(L, q, t).matrix
                    for v in sp.representatives:
                        assert not any(d.apply(v))

    def test_independent_mod_image(self):
        L = zoo.diag_example(2).algebra
        t = Twist((1, 0, 0), -1)
        sp = cohomology_space(L, t, 2)
        image = differential_wedge_form(L, 1, t).matrix
        im_rank = rank(image)
        stacked = Matrix(list(image.T.rows) + list(sp.representatives), 3)
        assert rank(stacked) == im_rank + sp.dimension

    def test_degree_out_of_range(self):
        with pytest.raises(ValueError):
            cohomology_space(G0, None, 4)

    def test_canonical(self):
        sp = cohomology_space(H3, None, 1)
        assert sp.representatives == ((1, 0, 0), (0, 1, 0))


def test_scan_line_order():
    tabs = scan_line(G0, (1, 0, 0), [-2, -1, 0, 1, 2])
    assert [t.twist.lam for t in tabs] == [-2, -1, 0, 1, 2]
    assert [t.is_zero for t in tabs] == [True, False, False, False, True]


class TestNovikov:
    def test_generic_probe_skips(self):
        assert generic_probe((1, 0), [1, 2]) == 3
        assert generic_probe((1, 0), [], [(-1, 0)]) == 2

    def test_g0(self):
        rep = novikov_report(G0, (1, 0, 0), [-1, 0, 1])
        assert rep.generic_lambda == 2
        assert rep.generic_betti == (0, 0, 0, 0)
        assert rep.exceptional_lambdas == [-1, 0, 1]
        assert rep.morse_lower_bounds == (1, 1, 1, 1)
        assert rep.note == NOVIKOV_NOTE
        d = rep.to_dict()
        assert d["generic_lambda"] == "2"

    def test_candidate_with_zero_cohomology_dropped(self):
        rep = novikov_report(G0, (1, 0, 0), [5])
        assert rep.exceptional == ()
