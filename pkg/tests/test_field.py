from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from hnflow.exact.field import FieldMismatchError, NumberField, real_value, sign


def test_rational_arithmetic():
    assert Fraction(1, 2) + Fraction(1, 3) == Fraction(5, 6)


def test_sqrt2_squared(r2):
    assert r2 * r2 == 2


def test_conjugate_product(r2):
    assert (1 + r2) * (1 - r2) == -1


def test_inverse_and_division(r2):
    x = 3 + 2 * r2
    assert x * x.inverse() == 1
    assert (x / x) == 1
    assert x.inverse() == 3 - 2 * r2


def test_real_value_rational_exact():
    assert real_value(Fraction(3, 4), 10) == (Fraction(3, 4), Fraction(3, 4))


def test_real_value_sqrt2_width(r2):
    lo, hi = real_value(r2, 20)
    assert hi - lo <= Fraction(1, 2 ** 20)
    assert lo <= Fraction("1.41421356") and Fraction("1.41421357") <= hi


def test_zero_element_is_exact(K):
    z = K.element([0, 0])
    assert z == 0
    assert real_value(z, 10) == (0, 0)
    assert sign(z) == 0


def test_mixing_fields_is_an_error(r2):
    other = NumberField([-3, 0, 1], [1, 2], "u").gen()
    with pytest.raises(FieldMismatchError):
        r2 + other


def test_reducible_minpoly_rejected():
    with pytest.raises(ValueError):
        NumberField([-1, 0, 1], [0, 2], "t")


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(8, 120))
def test_intervals_contain_reference_and_shrink(a, b, bits):
    K = NumberField([-2, 0, 1], [1, 2], "t")
    x = a + b * K.gen()
    lo, hi = real_value(x, bits)
    lo2, hi2 = real_value(x, bits + 16)
    with mpmath.workprec(400):
        ref = a + b * mpmath.sqrt(2)
        assert mpmath.mpf(lo.numerator) / lo.denominator <= ref <= mpmath.mpf(hi.numerator) / hi.denominator
    assert hi2 - lo2 <= hi - lo
    assert sign(x) == (0 if a == b == 0 else (1 if ref > 0 else -1))


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=2), st.lists(st.integers(-9, 9), min_size=2, max_size=2))
def test_field_axioms(u, v):
    K = NumberField([-2, 0, 1], [1, 2], "t")
    x, y = K.element(u), K.element(v)
    assert x * y == y * x
    assert (x + y) * x == x * x + y * x
    if y != 0:
        assert (x / y) * y == x


def test_pickle_roundtrip_keeps_one_field(r2):
    import pickle

    from hnflow.exact import span

    x, V = pickle.loads(pickle.dumps((3 - r2, span([(r2, 1)]))))
    assert x.field is V.field
    assert x * x == 11 - 6 * x.field.gen()
    assert V.contains((2, x.field.gen()))
