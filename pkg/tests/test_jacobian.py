"""Differential matrices, Smith form over the ring, the Jacobian
number by two routes, and the kernel bookkeeping along chains."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from genuschange.ffield import FiniteField
from genuschange.basefield import RationalField, KPoly
from genuschange.series import TruncatedSeries, PrecisionExhausted
from genuschange.localring import (LocalRingPresentation, hensel_prepare,
                                   PresentationError)
from genuschange.jacobian import (omega_matrix, smith_over_dvr, jac_number,
                                  kernel_dims_along_chain)


def F3t():
    return RationalField(FiniteField(3), ["t"])


def cusp_ring(K):
    t = K.gen(0)
    rel = {
        (3,): TruncatedSeries.one(K),
        (0,): TruncatedSeries(K, {0: -t, 2: -K.one()}, math.inf),
    }
    return LocalRingPresentation(K, [rel])


def xnormal_ring(K):
    t = K.gen(0)
    rel = {
        (3,): TruncatedSeries.one(K),
        (0,): TruncatedSeries(K, {0: -t, 1: -K.one()}, math.inf),
    }
    return LocalRingPresentation(K, [rel])


def fam1_ring(p, n):
    K = RationalField(FiniteField(p), ["t"])
    t = K.gen(0)
    rel = {
        (p * p,): TruncatedSeries.one(K),
        (0,): TruncatedSeries(K, {0: -t, n: -K.one()}, math.inf),
    }
    return LocalRingPresentation(K, [rel])


def tower_ring(K):
    t = K.gen(0)
    one = K.one()
    rel1 = {
        (3, 0): TruncatedSeries.one(K),
        (0, 0): TruncatedSeries(K, {0: -t, 2: -one}, math.inf),
    }
    rel2 = {
        (0, 3): TruncatedSeries.one(K),
        (1, 0): TruncatedSeries.constant(K, -one),
        (0, 0): TruncatedSeries(K, {1: -one}, math.inf),
    }
    return LocalRingPresentation(K, [rel1, rel2])


def branch_ring(K, m):
    """Rank-3 branch of Y^4 - t Y - S^m along Y^3 - t, prepared
    shallowly so precision has to regrow on demand."""
    t = K.gen(0)
    one = K.one()
    f = [
        TruncatedSeries(K, {m: -one}, math.inf),
        TruncatedSeries.constant(K, -t),
        TruncatedSeries.zero(K),
        TruncatedSeries.zero(K),
        TruncatedSeries.one(K),
    ]
    b0 = KPoly(K, [-t, K.zero(), K.zero(), one])
    return hensel_prepare(K, f, b0, 4)


def q0_ring():
    K = RationalField(FiniteField(3), ["s", "t"])
    t = K.gen(1)
    rel = {
        (3,): TruncatedSeries.one(K),
        (0,): TruncatedSeries(K, {0: -t, 2: -K.one()}, math.inf),
    }
    return LocalRingPresentation(K, [rel])


def deep_ring():
    """T^5 - S^125 T + s^5 S^25 - t = 0 over F_5(s, t), q(t) = 125."""
    K = RationalField(FiniteField(5), ["s", "t"])
    s, t = K.gen(0), K.gen(1)
    rel = {
        (5,): TruncatedSeries.one(K),
        (1,): TruncatedSeries(K, {125: -K.one()}, math.inf),
        (0,): TruncatedSeries(K, {0: -t, 25: s ** 5}, math.inf),
    }
    return LocalRingPresentation(K, [rel])


class TestOmegaMatrix:
    def test_fam1_p3_row(self):
        R = fam1_ring(3, 2)
        om = omega_matrix(R)
        assert om.m == 1
        # d(T^9 - t - S^2) = -2S dS = S dS in characteristic 3
        assert om.matrix[0][0] == R.uniformizer()
        assert om.matrix[0][1].known_zero()

    def test_fam1_p5_row(self):
        R = fam1_ring(5, 3)
        om = omega_matrix(R)
        assert om.matrix[0][0] == R.from_int(2).shift(2)
        assert om.matrix[0][1].known_zero()

    def test_smooth_row_has_unit(self):
        R = xnormal_ring(F3t())
        om = omega_matrix(R)
        assert om.matrix[0][0] == -R.one()
        assert om.matrix[0][1].known_zero()

    def test_tower_rows(self):
        R = tower_ring(F3t())
        om = omega_matrix(R)
        assert om.m == 2
        assert om.matrix[0][0] == R.uniformizer()
        assert om.matrix[0][1].known_zero()
        assert om.matrix[0][2].known_zero()
        assert om.matrix[1][0] == -R.one()
        assert om.matrix[1][1] == -R.one()
        assert om.matrix[1][2].known_zero()

    def test_rejects_non_p_power_degree(self):
        K = F3t()
        rel = {
            (2,): TruncatedSeries.one(K),
            (0,): TruncatedSeries.constant(K, -K.gen(0)),
        }
        R = LocalRingPresentation(K, [rel])
        with pytest.raises(PresentationError, match="separable"):
            omega_matrix(R)

    def test_rejects_intermediate_power(self):
        # T^9 + t T^3 + t reduces at S = 0 to a separable cubic in T^3
        K = F3t()
        t = K.gen(0)
        rel = {
            (9,): TruncatedSeries.one(K),
            (3,): TruncatedSeries.constant(K, t),
            (0,): TruncatedSeries.constant(K, t),
        }
        R = LocalRingPresentation(K, [rel])
        with pytest.raises(PresentationError, match="separable"):
            omega_matrix(R)


class TestSmithOverDvr:
    def test_single_pivot(self):
        R = cusp_ring(F3t())
        assert smith_over_dvr([[R.uniformizer(), R.zero()]], 64) == [1]

    def test_unit_entry_means_free(self):
        R = cusp_ring(F3t())
        assert smith_over_dvr([[R.one(), R.zero()]], 64) == []

    def test_two_rows_sorted(self):
        R = cusp_ring(F3t())
        S, z = R.uniformizer(), R.zero()
        J = [[S ** 3, z, z], [z, S, z]]
        assert smith_over_dvr(J, 64) == [1, 3]

    def test_elimination_mixes_entries(self):
        # [[S, 1], [S^2, S^3]] has determinant valuation 2 and a unit
        # entry, so the divisors are S^0 and S^2
        R = cusp_ring(F3t())
        S = R.uniformizer()
        J = [[S, R.one()], [S ** 2, S ** 3]]
        assert smith_over_dvr(J, 64) == [2]

    def test_rank_deficiency(self):
        R = cusp_ring(F3t())
        J = [[R.zero(), R.zero()]]
        with pytest.raises(ArithmeticError, match="rank deficiency"):
            smith_over_dvr(J, 64)

    def test_uncertified_row(self):
        K = F3t()
        R = cusp_ring(K)
        fuzzy = R.element({(0,): TruncatedSeries(K, {}, 3)})
        with pytest.raises(PrecisionExhausted):
            smith_over_dvr([[fuzzy, R.zero()]], 64)

    @given(st.integers(0, 5), st.integers(0, 5),
           st.integers(0, 2), st.integers(0, 2))
    @settings(max_examples=40, deadline=None)
    def test_invariant_under_elementary_ops(self, a, b, u, w):
        R = cusp_ring(F3t())
        S, z = R.uniformizer(), R.zero()
        rows = [[S ** a, z, z], [z, S ** b, z]]
        mult = R.from_int(u) * S
        rows[0] = [x + mult * y for x, y in zip(rows[0], rows[1])]
        for row in rows:
            row[2] = row[2] + R.from_int(w) * row[0]
        expected = sorted(x for x in (a, b) if x)
        assert smith_over_dvr(rows, 64) == expected


class TestJacNumber:
    def test_fam1_p3(self):
        rep = jac_number(fam1_ring(3, 2))
        assert rep.elementary_divisor_exponents == [1]
        assert rep.jac == 9
        assert rep.torsion_dim == 9
        assert rep.route == "smith"

    def test_fam1_p5(self):
        rep = jac_number(fam1_ring(5, 3))
        assert rep.elementary_divisor_exponents == [2]
        assert rep.jac == 50

    def test_fam1_p2(self):
        rep = jac_number(fam1_ring(2, 3))
        assert rep.elementary_divisor_exponents == [2]
        assert rep.jac == 8

    def test_cusp(self):
        rep = jac_number(cusp_ring(F3t()))
        assert rep.elementary_divisor_exponents == [1]
        assert rep.jac == 3

    def test_smooth(self):
        rep = jac_number(xnormal_ring(F3t()))
        assert rep.elementary_divisor_exponents == []
        assert rep.jac == 0

    def test_tower(self):
        rep = jac_number(tower_ring(F3t()))
        assert rep.elementary_divisor_exponents == [1]
        assert rep.jac == 9

    def test_branch_regrows_precision(self):
        rep = jac_number(branch_ring(F3t(), 9))
        assert rep.jac == 27

    def test_deep(self):
        rep = jac_number(deep_ring())
        assert rep.elementary_divisor_exponents == [125]
        assert rep.jac == 625

    def test_two_variable_base(self):
        assert jac_number(q0_ring()).jac == 3


class TestKernelChain:
    def test_fam1_single_step(self):
        assert kernel_dims_along_chain(fam1_ring(3, 2)) == [9]

    def test_cusp_single_step(self):
        assert kernel_dims_along_chain(cusp_ring(F3t())) == [3]

    def test_branch_p_divides_q(self):
        # q = 9 is divisible by p = 3: the step gives 1 * 3 * 9
        assert kernel_dims_along_chain(branch_ring(F3t(), 9)) == [27]

    def test_trivial_step_contributes_zero(self):
        assert kernel_dims_along_chain(q0_ring()) == [0, 3]

    def test_deep_chain(self):
        assert kernel_dims_along_chain(deep_ring()) == [0, 625]

    def test_smooth_chain(self):
        # q = 1 on the normal model: q - 1 = 0 kills the contribution
        assert kernel_dims_along_chain(xnormal_ring(F3t())) == [0]


class TestHeadlineIdentity:
    def test_fam1_p3(self):
        from genuschange.normalize import full_genus_change
        R = fam1_ring(3, 2)
        g = full_genus_change(R).total
        jac = jac_number(R).jac
        assert (g, jac) == (3, 9)
        assert 2 * 3 * g == (3 - 1) * jac

    def test_deep(self):
        from genuschange.normalize import full_genus_change
        R = deep_ring()
        g = full_genus_change(R).total
        jac = jac_number(R).jac
        assert (g, jac) == (250, 625)
        assert 2 * 5 * g == (5 - 1) * jac
