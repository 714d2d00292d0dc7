"""Weighted echelon engine: frozen worked examples and edge behavior.

The two main fixtures come from the cusp ring K[[S]][T]/(T^3 - t - S^2)
over K = F_3(t), worked out by hand: the p-th power columns are
z_b = (T^b)^3 reduced, i.e. 1, t + S^2, (t + S^2)^2.
"""

import math

import pytest

from genuschange.ffield import FiniteField
from genuschange.basefield import RationalField
from genuschange.series import TruncatedSeries, PrecisionConfig, PrecisionExhausted
from genuschange.dvrseries import (
    weighted_echelon, ModuleView, decompose_column, row_weight,
    column_floor, column_wval, run_certified,
)


def F3t():
    return RationalField(FiniteField(3), ["t"])


def cusp_vectors(K):
    """S-expansions of 1, t + S^2, (t + S^2)^2 as one-row vectors."""
    t = K.gen(0)
    one = K.one()
    two = K.from_int(2)
    return [
        {0: TruncatedSeries(K, {0: one}, math.inf)},
        {0: TruncatedSeries(K, {0: t, 2: one}, math.inf)},
        {0: TruncatedSeries(K, {0: t * t, 2: two * t, 4: one}, math.inf)},
    ]


class TestCuspBaseChange:
    """Columns over K' = F_3(t^(1/3)), rows split by cube roots in K'."""

    def setup_method(self):
        K = F3t()
        self.ext = K.extend_by_pth_root(0)
        Kp = self.ext.ext
        vecs = [
            {o: s.map_coeffs(self.ext.embed, Kp, stretch=1)
             for o, s in vec.items()}
            for vec in cusp_vectors(K)
        ]
        self.Kp = Kp
        self.cols = [decompose_column(v, Kp.decompose_pth, 3, Kp)
                     for v in vecs]

    def test_embedding_scaled_exponents(self):
        tau = self.ext.root()
        srs = self.cols[1]
        assert srs[(0, (0,), 0)].coeffs == {0: tau}
        assert srs[(0, (0,), 2)].coeffs == {0: self.Kp.one()}

    def test_pivot_weighted_vals(self):
        ech = weighted_echelon(self.Kp, self.cols, row_weight, 3)
        assert ech.zero_cols == []
        assert sorted(ech.pivot_weighted_vals()) == [0, 2, 4]

    def test_lattice_dimension_formula(self):
        # delta of the cusp z^3 = S^2 is (3-1)*(2-1)/2 = 1, and the
        # module index formula sum min(wval // 3, kmax) must agree,
        # with kmax = ceil((p-1)(q-1)/p) = 1
        ech = weighted_echelon(self.Kp, self.cols, row_weight, 3)
        kmax = 1
        dim = sum(min(wv // 3, kmax) for wv in ech.pivot_weighted_vals())
        dim += len(ech.zero_cols) * kmax
        assert dim == 1
        assert max(wv // 3 for wv in ech.pivot_weighted_vals()) == kmax


class TestCuspDistance:
    """Distance from t to the cube module over K = F_3(t) itself."""

    def setup_method(self):
        K = F3t()
        self.K = K
        self.cols = [decompose_column(v, K.decompose_pth, 3, K)
                     for v in cusp_vectors(K)]
        ech = weighted_echelon(K, self.cols, row_weight, 3)
        self.mod = ModuleView(ech)

    def test_distance_of_t_is_two(self):
        t = self.K.gen(0)
        target = decompose_column(
            {0: TruncatedSeries(self.K, {0: t}, math.inf)},
            self.K.decompose_pth, 3, self.K)
        assert self.mod.distance(target) == 2

    def test_distance_of_s_squared_is_two(self):
        target = decompose_column(
            {0: TruncatedSeries(self.K, {2: self.K.one()}, math.inf)},
            self.K.decompose_pth, 3, self.K)
        assert self.mod.distance(target) == 2

    def test_member_has_infinite_distance(self):
        t = self.K.gen(0)
        target = decompose_column(
            {0: TruncatedSeries(self.K, {0: t, 2: self.K.one()}, math.inf)},
            self.K.decompose_pth, 3, self.K)
        assert self.mod.distance(target) == math.inf

    def test_level_cap_short_circuits(self):
        t = self.K.gen(0)
        target = decompose_column(
            {0: TruncatedSeries(self.K, {0: t}, math.inf)},
            self.K.decompose_pth, 3, self.K)
        assert self.mod.distance(target, level_cap=1) is None
        assert self.mod.distance(target, level_cap=2) == 2


class SmallField:
    """Minimal wrapped prime field for engine-only tests."""

    class El:
        __slots__ = ("p", "v")

        def __init__(self, p, v):
            self.p, self.v = p, v % p

        def is_zero(self):
            return self.v == 0

        def __add__(self, o):
            return SmallField.El(self.p, self.v + o.v)

        def __sub__(self, o):
            return SmallField.El(self.p, self.v - o.v)

        def __neg__(self):
            return SmallField.El(self.p, -self.v)

        def __mul__(self, o):
            return SmallField.El(self.p, self.v * o.v)

        def __truediv__(self, o):
            return self * SmallField.El(self.p, pow(o.v, self.p - 2, self.p))

        def __pow__(self, n):
            return SmallField.El(self.p, pow(self.v, n, self.p))

        def __eq__(self, o):
            return isinstance(o, SmallField.El) and self.v == o.v

        def __repr__(self):
            return str(self.v)

    def __init__(self, p):
        self.p = p

    def zero(self):
        return self.El(self.p, 0)

    def one(self):
        return self.El(self.p, 1)

    def from_int(self, n):
        return self.El(self.p, n)


def flat_weight(_):
    return 0


class TestExpress:
    def test_roundtrip_exact(self):
        F = SmallField(5)
        one = F.one()
        c0 = {"a": TruncatedSeries(F, {0: one}, math.inf)}
        c1 = {"b": TruncatedSeries(F, {1: one}, math.inf)}
        ech = weighted_echelon(F, [c0, c1], flat_weight, 1)
        mod = ModuleView(ech)
        target = {
            "a": TruncatedSeries(F, {0: one, 1: F.from_int(2)}, math.inf),
            "b": TruncatedSeries(F, {2: F.from_int(3)}, math.inf),
        }
        coeffs = mod.express(target)
        assert coeffs[0].coeffs == {0: one, 1: F.from_int(2)}
        assert coeffs[0].prec == math.inf
        assert coeffs[1].coeffs == {1: F.from_int(3)}

    def test_outside_raises(self):
        F = SmallField(5)
        c0 = {"a": TruncatedSeries(F, {0: F.one()}, math.inf)}
        ech = weighted_echelon(F, [c0], flat_weight, 1)
        mod = ModuleView(ech)
        with pytest.raises(ArithmeticError):
            mod.express({"b": TruncatedSeries(F, {0: F.one()}, math.inf)})


class TestPrecisionHonesty:
    def test_uncertified_pivot_raises(self):
        F = SmallField(5)
        cols = [
            {"a": TruncatedSeries(F, {}, 1)},
            {"b": TruncatedSeries(F, {1: F.one()}, math.inf)},
        ]
        with pytest.raises(PrecisionExhausted):
            weighted_echelon(F, cols, flat_weight, 1)

    def test_truncated_target_membership_undecided(self):
        F = SmallField(5)
        c0 = {"a": TruncatedSeries(F, {0: F.one()}, math.inf)}
        ech = weighted_echelon(F, [c0], flat_weight, 1)
        mod = ModuleView(ech)
        target = {"a": TruncatedSeries(F, {}, 5)}
        with pytest.raises(PrecisionExhausted):
            mod.distance(target)
        assert mod.distance(target, level_cap=3) is None

    def test_exact_dependent_column_detected(self):
        F = SmallField(5)
        one = F.one()
        c0 = {"a": TruncatedSeries(F, {0: one}, math.inf)}
        c1 = {"a": TruncatedSeries(F, {0: F.from_int(3)}, math.inf)}
        ech = weighted_echelon(F, [c0, c1], flat_weight, 1)
        assert ech.zero_cols == [1]
        assert ech.zero_floor == math.inf
        with pytest.raises(ArithmeticError):
            ModuleView(ech, allow_zero_cols=False)

    def test_truncated_zero_column_bounds_verdicts(self):
        F = SmallField(5)
        one = F.one()
        c0 = {"a": TruncatedSeries(F, {0: one}, math.inf)}
        # same leading behavior, known only to O(sigma^3): after
        # clearing, nothing is certified about what else it spans
        c1 = {"a": TruncatedSeries(F, {0: one}, 3)}
        ech = weighted_echelon(F, [c0, c1], flat_weight, 1)
        assert ech.zero_cols == [1]
        assert ech.zero_floor == 3
        mod = ModuleView(ech)
        target = {"b": TruncatedSeries(F, {4: one}, math.inf)}
        with pytest.raises(PrecisionExhausted):
            mod.distance(target)
        target_low = {"b": TruncatedSeries(F, {2: one}, math.inf)}
        assert mod.distance(target_low) == 2

    def test_nonmonomial_pivot_keeps_honest_precision(self):
        F = SmallField(5)
        one = F.one()
        u = TruncatedSeries(F, {0: one, 1: one}, math.inf)
        c0 = {"a": u}
        c1 = {"a": TruncatedSeries(F, {0: F.from_int(2)}, math.inf),
              "b": TruncatedSeries(F, {0: one}, math.inf)}
        ech = weighted_echelon(F, [c0, c1], flat_weight, 1, work_prec=8)
        piv2 = ech.columns[1]
        assert "a" not in piv2 or piv2["a"].valuation() is None
        assert piv2["b"].prec == math.inf or piv2["b"].prec >= 8


class TestDecomposeColumn:
    def test_rows_weights_and_markers(self):
        K = F3t()
        t = K.gen(0)
        srs = TruncatedSeries(K, {0: t, 1: t * t, 4: t}, 6)
        col = decompose_column({0: srs}, K.decompose_pth, 3, K)
        assert col[(0, (1,), 0)].coeffs == {0: K.one()}
        assert col[(0, (1,), 0)].prec == 2
        assert col[(0, (2,), 1)].coeffs == {0: K.one()}
        assert col[(0, (1,), 1)].coeffs == {1: K.one()}
        assert col[(0, None, 2)].coeffs == {}
        assert col[(0, None, 2)].prec == 2
        assert row_weight((0, (1,), 2)) == 2
        assert column_floor(col, row_weight, 3) == 6

    def test_reconstruction(self):
        K = F3t()
        t = K.gen(0)
        one = K.one()
        srs = TruncatedSeries(
            K, {0: t ** 4 + t, 1: one, 2: t * t, 5: t ** 3 + one}, math.inf)
        col = decompose_column({0: srs}, K.decompose_pth, 3, K)
        rebuilt = {}
        for (outer, sub, j), rs in col.items():
            if sub is None:
                continue
            mono = K.monomial(sub)
            for k, w in rs.coeffs.items():
                m = 3 * k + j
                term = (w ** 3) * mono
                rebuilt[m] = rebuilt.get(m, K.zero()) + term
        rebuilt = {m: c for m, c in rebuilt.items() if not c.is_zero()}
        assert rebuilt == srs.coeffs

    def test_exact_input_no_markers(self):
        K = F3t()
        srs = TruncatedSeries(K, {0: K.one()}, math.inf)
        col = decompose_column({0: srs}, K.decompose_pth, 3, K)
        assert all(sub is not None for (_, sub, _) in col)


class TestRunCertified:
    def test_retries_until_enough(self):
        calls = []

        def fn(prec):
            calls.append(prec)
            if prec < 60:
                raise PrecisionExhausted("need more")
            return prec

        out = run_certified(fn, PrecisionConfig(start=16, cap=256))
        assert out == 64
        assert calls == [16, 32, 64]

    def test_cap_propagates(self):
        def fn(prec):
            raise PrecisionExhausted("never enough")

        with pytest.raises(PrecisionExhausted):
            run_certified(fn, PrecisionConfig(start=8, cap=16))
