import math

import pytest
from hypothesis import given, settings, strategies as st

from genuschange.ffield import FiniteField
from genuschange.basefield import RationalField
from genuschange.series import (
    TruncatedSeries, PrecisionConfig, PrecisionExhausted,
    unit_inverse, divide_units, stable_compute)

K = RationalField(FiniteField(3), ())
KT = RationalField(FiniteField(3), ("t",))


def S(spec, prec=math.inf, field=K):
    return TruncatedSeries(field, {k: field.from_int(c) for k, c in spec.items()},
                           prec)


@st.composite
def series_elems(draw):
    n = draw(st.integers(0, 4))
    coeffs = {draw(st.integers(0, 6)): K.from_int(draw(st.integers(0, 2)))
              for _ in range(n)}
    prec = draw(st.sampled_from([8, 12, math.inf]))
    return TruncatedSeries(K, coeffs, prec)


@given(series_elems(), series_elems(), series_elems())
@settings(max_examples=60)
def test_ring_axioms_to_common_precision(f, g, h):
    p = min(f.prec, g.prec, h.prec, 8)
    lhs = ((f + g) * h).truncate(p)
    rhs = (f * h + g * h).truncate(p)
    assert lhs.coeffs == rhs.coeffs
    assert (f * g).truncate(p).coeffs == (g * f).truncate(p).coeffs


def test_known_inverse():
    # (2 + S)^(-1) = 2 + 2S + 2S^2 + ... over F_3
    u = S({0: 2, 1: 1})
    w = unit_inverse(u, 3)
    assert w == S({0: 2, 1: 2, 2: 2}, prec=3)
    assert (u * w).truncate(3) == S({0: 1}, prec=3)


@given(series_elems(), st.integers(1, 16))
@settings(max_examples=40)
def test_unit_inverse_property(f, n):
    u = f + S({0: 1})
    if u.coeff(0).is_zero():
        u = u + S({0: 1})
    if u.coeff(0).is_zero():
        return
    n = min(n, u.prec)
    if n < 1:
        return
    w = unit_inverse(u, n)
    prod = (u * w).truncate(n)
    assert prod == TruncatedSeries.one(K).truncate(n)


def test_inverse_requires_unit():
    with pytest.raises(ZeroDivisionError):
        unit_inverse(S({1: 1}), 4)


def test_valuation_certification():
    f = S({3: 2, 5: 1}, prec=10)
    assert f.valuation() == 3
    g = S({}, prec=10)
    assert g.valuation() is None
    assert g.valuation_lb() == 10
    h = S({12: 1}, prec=10)  # stored term beyond precision is dropped
    assert h.valuation() is None


def test_precision_rules():
    a = S({0: 1}, prec=5)
    b = S({2: 1}, prec=4)
    assert (a + b).prec == 4
    # the O(S^4) error of b is multiplied by a unit: min(5+2, 4+0) = 4
    assert (a * b).prec == 4
    # a factor with positive valuation sharpens the bound
    c = S({3: 1}, prec=5)
    assert (c * b).prec == 7  # min(5 + 2, 4 + 3)
    exact = S({2: 1})
    assert (exact * exact).prec == math.inf


def test_shift_and_sdiv():
    f = S({2: 1, 4: 2}, prec=6)
    g = f.shift(-2)
    assert g == S({0: 1, 2: 2}, prec=4)
    with pytest.raises(ValueError):
        f.shift(-3)


def test_pth_power_frobenius():
    t = KT.gen(0)
    f = TruncatedSeries(KT, {0: t, 2: KT.one()}, prec=5)
    g = f.pth_power()
    assert g.prec == 15
    assert g.coeffs == {0: t ** 3, 6: KT.one()}


def test_coeff_respects_precision():
    f = S({1: 1}, prec=4)
    with pytest.raises(PrecisionExhausted):
        f.coeff(4)
    assert f.coeff(3).is_zero()
    assert f.coeff(1) == K.one()


def test_divide_units():
    a = S({1: 1, 2: 2})
    u = S({0: 2, 1: 1})
    q = divide_units(a, u, 5)
    assert (q * u).truncate(5) == a.truncate(5)


def test_stable_compute_agreement():
    calls = []

    def fn(n):
        calls.append(n)
        return 7 if n >= 32 else n

    assert stable_compute(fn, PrecisionConfig(16, 1024)) == 7
    assert calls == [16, 32, 64]


def test_stable_compute_none_is_undecided():
    def fn(n):
        return None if n < 64 else 3

    assert stable_compute(fn, PrecisionConfig(16, 1024)) == 3


def test_stable_compute_exhaustion():
    def fn(n):
        return n

    with pytest.raises(PrecisionExhausted):
        stable_compute(fn, PrecisionConfig(16, 64))
