"""q invariants, delta and conductor closed forms, normal form
extraction, coin problem oracles."""

import math

import pytest

from genuschange.ffield import FiniteField
from genuschange.basefield import RationalField, KPoly
from genuschange.series import TruncatedSeries
from genuschange.localring import LocalRingPresentation, hensel_prepare
from genuschange.invariants import (
    q_invariant, iterated_q_invariants, brute_force_q, delta_formulas,
    delta_conductor, is_x_normal, extract_normal_form, semigroup_gaps,
    staircase_count, coin_dim, coin_dim_closed, coin_dim_echelon,
)


def F3t():
    return RationalField(FiniteField(3), ["t"])


def cusp_ring(K):
    t = K.gen(0)
    rel = {
        (3,): TruncatedSeries.one(K),
        (0,): TruncatedSeries(K, {0: -t, 2: -K.one()}, math.inf),
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


class TestQClimb:
    def test_cusp_q_is_two(self):
        K = F3t()
        R = cusp_ring(K)
        w = q_invariant(R, K.gen(0))
        assert w.q == 2
        assert w.reason == "level not divisible"
        assert w.witness == R.gen()
        assert len(w.trace) == 1

    def test_witness_certifies(self):
        K = F3t()
        R = cusp_ring(K)
        w = q_invariant(R, K.gen(0))
        d = w.witness.pth_power() - R.from_base(K.gen(0))
        assert d.valuation() == w.q

    def test_exact_root_detected(self):
        K = F3t()
        R = cusp_ring(K)
        x = R.from_base(K.gen(0)) + R.uniformizer() ** 2
        w = q_invariant(R, x)
        assert w.q == math.inf
        assert w.reason == "exact root"
        assert w.witness.pth_power() == x

    def test_q_zero_when_root_misses_residue_field(self):
        K = RationalField(FiniteField(3), ["s", "t"])
        t = K.gen(1)
        rel = {
            (3,): TruncatedSeries.one(K),
            (0,): TruncatedSeries(K, {0: -t, 2: -K.one()}, math.inf),
        }
        R = LocalRingPresentation(K, [rel])
        w = q_invariant(R, K.gen(0))
        assert w.q == 0
        assert w.reason == "residue not a root"

    def test_tower_q_unchanged(self):
        K = F3t()
        R = tower_ring(K)
        w = q_invariant(R, K.gen(0))
        assert w.q == 2

    def test_iterated_on_ninth_root_ring(self):
        K = F3t()
        t = K.gen(0)
        rel = {
            (9,): TruncatedSeries.one(K),
            (0,): TruncatedSeries(K, {0: -t, 1: -K.one()}, math.inf),
        }
        R = LocalRingPresentation(K, [rel])
        ws = iterated_q_invariants(R, t, depth=2)
        assert [w.q for w in ws] == [1, 1]

    @pytest.mark.parametrize("apow,b", [(1, 2), (2, 0), (3, 5)])
    def test_invariance_under_pth_power_twists(self, apow, b):
        # q(a^p x + c^p) = q(x) for a != 0
        K = F3t()
        R = cusp_ring(K)
        t = K.gen(0)
        a = (t + K.from_int(1)) ** apow
        u = a ** 3 * t + ((t ** b) ** 3 if b else K.zero())
        assert q_invariant(R, u).q == 2

    def test_precision_regrowth_on_hensel_ring(self):
        # branch of Y^4 - t Y - S^9 along Y^3 - t, realized shallowly;
        # the climb to q = 9 must sharpen the presentation by itself
        K = F3t()
        t = K.gen(0)
        one = K.one()
        f = [
            TruncatedSeries(K, {9: -one}, math.inf),
            TruncatedSeries.constant(K, -t),
            TruncatedSeries.zero(K),
            TruncatedSeries.zero(K),
            TruncatedSeries.one(K),
        ]
        b0 = KPoly(K, [-t, K.zero(), K.zero(), one])
        R = hensel_prepare(K, f, b0, 4)
        w = q_invariant(R, t)
        assert w.q == 9
        assert w.reason == "residue not a root"


class TestBruteForceAgreement:
    def test_cusp(self):
        K = F3t()
        R = cusp_ring(K)
        assert brute_force_q(R, K.gen(0)) == 2

    def test_tower(self):
        K = F3t()
        R = tower_ring(K)
        assert brute_force_q(R, K.gen(0)) == 2

    def test_member(self):
        K = F3t()
        R = cusp_ring(K)
        x = R.from_base(K.gen(0)) + R.uniformizer() ** 2
        assert brute_force_q(R, x) == math.inf

    def test_power_two(self):
        K = F3t()
        t = K.gen(0)
        rel = {
            (9,): TruncatedSeries.one(K),
            (0,): TruncatedSeries(K, {0: -t, 1: -K.one()}, math.inf),
        }
        R = LocalRingPresentation(K, [rel])
        assert brute_force_q(R, t, power=2) == 1


class TestDeltaFormulas:
    def test_uniformizer_case(self):
        e, f, delta, cond, xn = delta_formulas(3, 2)
        assert (e, f) == (3, 1)
        assert delta == 1
        assert cond == 2
        assert not xn

    def test_residue_case(self):
        e, f, delta, cond, xn = delta_formulas(3, 9)
        assert (e, f) == (1, 3)
        assert delta == 9
        assert cond == 6
        assert not xn

    def test_q_zero(self):
        assert delta_formulas(3, 0) == (1, 3, 0, 0, True)

    def test_normal_boundary(self):
        e, f, delta, cond, xn = delta_formulas(3, 1)
        assert delta == 0 and cond == 0 and xn

    def test_small_prime(self):
        e, f, delta, cond, xn = delta_formulas(2, 3)
        assert delta == 1
        assert cond == 2

    def test_conductor_delta_identity(self):
        # f1 * conductor_exponent = 2 delta in both cases
        for q in (2, 4, 7):
            e, f, delta, cond, _ = delta_formulas(3, q)
            assert cond * 1 == 2 * delta
        for q in (3, 9, 12):
            e, f, delta, cond, _ = delta_formulas(3, q)
            assert cond * 3 == 2 * delta

    def test_residue_case_delta_divisible_by_p(self):
        for p in (3, 5, 7):
            for step in (1, 2, 3):
                _, _, delta, _, _ = delta_formulas(p, p * step)
                assert delta % p == 0

    def test_gap_counts_match_delta(self):
        assert len(semigroup_gaps(3, 2)) == delta_formulas(3, 2)[2]
        assert len(semigroup_gaps(5, 3)) == delta_formulas(5, 3)[2]
        assert staircase_count(3, 3) == delta_formulas(3, 9)[2]


class TestDeltaConductor:
    def test_cusp_report(self):
        K = F3t()
        R = cusp_ring(K)
        rep = delta_conductor(R, K.gen(0))
        assert (rep.p, rep.q, rep.e, rep.f) == (3, 2, 3, 1)
        assert rep.delta == 1
        assert rep.conductor_exponent == 2
        assert rep.genus_step == 1
        assert not rep.x_normal
        assert rep.oracle_confirmed is None

    def test_tower_genus_step_scales_with_rank(self):
        K = F3t()
        R = tower_ring(K)
        rep = delta_conductor(R, K.gen(0))
        assert rep.q == 2 and rep.delta == 1
        assert rep.genus_step == rep.delta * (R.D // 3) == 3

    def test_exact_root_rejected(self):
        K = F3t()
        R = cusp_ring(K)
        x = R.from_base(K.gen(0)) + R.uniformizer() ** 2
        with pytest.raises(ValueError):
            delta_conductor(R, x)

    def test_x_normal_predicate(self):
        K = F3t()
        t = K.gen(0)
        rel = {
            (3,): TruncatedSeries.one(K),
            (0,): TruncatedSeries(K, {0: -t, 1: -K.one()}, math.inf),
        }
        R1 = LocalRingPresentation(K, [rel])
        assert is_x_normal(R1, t)
        assert not is_x_normal(cusp_ring(K), t)
        K2 = RationalField(FiniteField(3), ["s", "t"])
        t2 = K2.gen(1)
        rel2 = {
            (3,): TruncatedSeries.one(K2),
            (0,): TruncatedSeries(K2, {0: -t2, 2: -K2.one()}, math.inf),
        }
        R2 = LocalRingPresentation(K2, [rel2])
        assert is_x_normal(R2, K2.gen(0))


class TestExtractNormalForm:
    def test_cusp(self):
        K = F3t()
        R = cusp_ring(K)
        (nf,) = extract_normal_form(R)
        assert (nf.n, nf.q, nf.q_prime) == (1, 2, 2)
        assert nf.f_coeffs == {(0,): K.gen(0)}
        assert nf.w_tilde.known_zero()
        assert nf.u_tilde == R.one()
        assert nf.r_prime == R.gen()

    def test_tower(self):
        K = F3t()
        R = tower_ring(K)
        nf1, nf2 = extract_normal_form(R)
        assert (nf1.n, nf1.q, nf1.q_prime) == (1, 2, 2)
        assert (nf2.n, nf2.q, nf2.q_prime) == (1, 1, 1)
        assert nf2.f_coeffs == {(1, 0): K.one()}

    def test_depth_two_with_peeling(self):
        # T^9 = t + T^3 S^3 + S^4: the 9-step blocks at level 3 but the
        # 3-step peels one digit and lands on q = 4
        K = F3t()
        t = K.gen(0)
        one = K.one()
        rel = {
            (9,): TruncatedSeries.one(K),
            (3,): TruncatedSeries(K, {3: -one}, math.inf),
            (0,): TruncatedSeries(K, {0: -t, 4: -one}, math.inf),
        }
        R = LocalRingPresentation(K, [rel])
        (nf,) = extract_normal_form(R)
        assert (nf.n, nf.q, nf.q_prime) == (2, 4, 3)
        assert nf.u_tilde == R.one()
        assert nf.w_tilde == -R.gen()
        assert nf.r_prime == R.gen()
        # the q climb matches the single-step invariant
        assert q_invariant(R, t).q == 4

    def test_rejects_separable_generator(self):
        K = F3t()
        t = K.gen(0)
        rel = {
            (2,): TruncatedSeries.one(K),
            (0,): TruncatedSeries(K, {0: -t, 1: -K.one()}, math.inf),
        }
        R = LocalRingPresentation(K, [rel])
        with pytest.raises(ValueError, match="purely inseparable"):
            extract_normal_form(R)


class TestSemigroup:
    def test_frozen_gap_lists(self):
        assert semigroup_gaps(2, 3) == [1]
        assert semigroup_gaps(3, 5) == [1, 2, 4, 7]
        assert semigroup_gaps(2, 5) == [1, 3]

    def test_noncoprime_rejected(self):
        with pytest.raises(ValueError):
            semigroup_gaps(4, 6)


class TestCoinProblem:
    @pytest.mark.parametrize("p,m,n", [
        (5, 2, 3), (3, 3, 5), (5, 2, 5), (2, 5, 7), (7, 4, 9),
    ])
    def test_routes_agree(self, p, m, n):
        dim, cond = coin_dim_closed(m, n)
        assert len(semigroup_gaps(m, n)) == dim
        assert coin_dim_echelon(p, m, n, seed=11) == dim
        F = FiniteField(p)
        assert coin_dim(m, n, {0: 1}, {0: 1}, F) == (dim, cond)

    def test_units_do_not_move_the_answer(self):
        F = FiniteField(5)
        gamma = {0: 1, 1: 2, 5: 1}
        delta = {0: 3, 2: 4}
        assert coin_dim(3, 4, gamma, delta, F) == coin_dim_closed(3, 4)

    def test_generic_field_paths(self):
        K = F3t()
        t = K.gen(0)
        gamma = {0: K.one(), 1: t}
        delta = {0: t, 2: K.one()}
        assert coin_dim(2, 3, gamma, delta, K) == (1, 2)
        F9 = FiniteField(3, 2)
        g = F9.gen()
        assert coin_dim(2, 3, {0: g}, {0: F9.one(), 1: g}, F9) == (1, 2)

    def test_trivial_and_invalid(self):
        F = FiniteField(3)
        assert coin_dim(1, 7, {0: 1}, {0: 1}, F) == (0, 0)
        with pytest.raises(ValueError):
            coin_dim(4, 6, {0: 1}, {0: 1}, F)
        with pytest.raises(ValueError):
            coin_dim(2, 3, {0: 0}, {0: 1}, F)

    def test_seeds_do_not_matter(self):
        for seed in range(4):
            assert coin_dim_echelon(3, 3, 4, seed=seed) == 3
