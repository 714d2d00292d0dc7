import pytest
from hypothesis import given, strategies as st

from genuschange.ffield import FiniteField, find_irreducible, _is_irreducible

F3 = FiniteField(3)
F9 = FiniteField(3, 2)
F4 = FiniteField(2, 2)
F5 = FiniteField(5)

FIELDS = [FiniteField(2), F3, F5, F4, F9, FiniteField(2, 3)]


def all_elements(F):
    return list(F.iter_elements())


@pytest.mark.parametrize("F", FIELDS)
def test_field_axioms_exhaustive(F):
    els = all_elements(F)
    assert len(els) == F.q
    zero, one = F.zero(), F.one()
    for a in els:
        assert F.add(a, zero) == a
        assert F.mul(a, one) == a
        assert F.add(a, F.neg(a)) == zero
        if not F.is_zero(a):
            assert F.mul(a, F.inv(a)) == one
    # distributivity on a small sample
    for a in els[:4]:
        for b in els[:4]:
            for c in els[:4]:
                lhs = F.mul(a, F.add(b, c))
                rhs = F.add(F.mul(a, b), F.mul(a, c))
                assert lhs == rhs


@pytest.mark.parametrize("F", FIELDS)
def test_frobenius_roundtrip(F):
    for a in all_elements(F):
        r = F.pth_root(a)
        assert F.pow(r, F.p) == a
        assert F.pth_root(F.pow(a, F.p)) == a


def test_pth_root_is_identity_on_prime_field():
    for a in range(5):
        assert F5.pth_root(a) == a


def test_iterated_pth_root():
    for a in F9.iter_elements():
        r = F9.pth_root(a, 2)
        assert F9.pow(r, 9) == a


def test_modulus_is_irreducible():
    for p, e in [(2, 2), (2, 3), (3, 2), (5, 2)]:
        mod = find_irreducible(p, e)
        assert len(mod) == e + 1 and mod[-1] == 1
        assert _is_irreducible(list(mod), p)


def test_reducible_rejected():
    # x^2 over F_2 and x^2 - 1 over F_3 both factor
    assert not _is_irreducible([0, 0, 1], 2)
    assert not _is_irreducible([2, 0, 1], 3)


def test_f9_generator_squares_to_modulus_root():
    g = F9.gen()
    m = F9.modulus
    # g^2 = -(m0 + m1 g)
    lhs = F9.mul(g, g)
    rhs = F9.neg(F9.add(F9.from_int(m[0]), F9.mul(F9.from_int(m[1]), g)))
    assert lhs == rhs


def test_nth_root():
    assert F5.nth_root(4, 2) in (2, 3)
    assert F5.nth_root(2, 2) is None  # 2 is not a square mod 5


@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_f9_associativity(i, j, k):
    els = all_elements(F9)
    a, b, c = els[i], els[j], els[k]
    assert F9.mul(F9.mul(a, b), c) == F9.mul(a, F9.mul(b, c))
    assert F9.add(F9.add(a, b), c) == F9.add(a, F9.add(b, c))


def test_element_constructor():
    assert F3.element(5) == 2
    assert F9.element([1, 2]) == (1, 2)
    assert F9.element(4) == (1, 0)
    assert F9.str_of((1, 2)) == "1+2*g"
    assert F9.str_of((0, 1)) == "g"
    assert F9.str_of((0, 0)) == "0"
