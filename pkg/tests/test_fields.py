from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from miniversal.errors import DivisionByZero, PrecisionExhausted
from miniversal.fields import (
    ComplexField,
    LaurentField,
    PadicField,
    absolute_value,
    field_add,
    field_from_config,
    field_inv,
    field_mul,
    field_neg,
)

Q5 = PadicField(5)
Q7 = PadicField(7)
LQ = LaurentField()
L7 = LaurentField(7)


def padic_elements(K):
    nonzero = st.builds(
        lambda s, a, b, v: K.embed(Fraction(s * a, b) * Fraction(K.p) ** v),
        st.sampled_from([1, -1]),
        st.integers(1, 10**6),
        st.integers(1, 10**6),
        st.integers(-6, 6),
    )
    return st.one_of(st.just(K.zero()), nonzero)


def laurent_elements(K):
    if K.q is None:
        coeff = st.fractions(min_value=-20, max_value=20, max_denominator=12)
    else:
        coeff = st.integers(0, K.q - 1)
    return st.builds(lambda v, cs: K.from_coeffs(v, cs), st.integers(-5, 5), st.lists(coeff, min_size=0, max_size=6))


# --- examples ---------------------------------------------------------------


def test_complex_modulus():
    assert ComplexField().abs(3 + 4j) == 5


def test_padic_absolute_values():
    assert Q5.abs(Q5.embed(5)) == Fraction(1, 5)
    assert Q5.abs(Q5.embed(Fraction(1, 5))) == 5
    x = Q7.embed(2 * 7**2 + 3 * 7**3)
    assert Q7.abs(x) == Fraction(1, 49)
    assert float(Q7.abs(x)) == pytest.approx(0.020408163265306)


def test_laurent_absolute_values():
    assert LQ.abs(LQ.from_coeffs(-1, [1, 1])) == 2
    assert LQ.abs(LQ.from_coeffs(2, [3, 1])) == Fraction(1, 4)


def test_zero_has_absolute_value_zero():
    for K in (ComplexField(), Q5, LQ, L7):
        assert absolute_value(K.zero()) == 0


def test_inverse_of_exact_zero_raises():
    for K in (Q5, LQ, L7):
        with pytest.raises(DivisionByZero):
            K.zero().inverse()
        with pytest.raises(DivisionByZero):
            field_inv(K.zero())


def test_inverse_of_inexact_zero_exhausts_precision():
    K = PadicField(5, precision=4)
    x = K.embed(1) + K.embed(5**4 - 1)  # 5^4 is invisible at 4 digits
    assert K.is_zero(x)
    with pytest.raises(PrecisionExhausted):
        x.inverse()
    L = LaurentField(precision=3)
    y = L.from_coeffs(0, [1, 2, 3]) - L.from_coeffs(0, [1, 2, 3])
    with pytest.raises(PrecisionExhausted):
        y.inverse()


def test_padic_digits_and_rational_round_trip():
    x = Q5.embed(Fraction(-7, 3))
    assert x.to_rational() == Fraction(-7, 3)
    y = Q5.from_digits(x.val, x.digits(), x.prec)
    assert y == x
    assert Q5.from_json(Q5.to_json(x)) == x


def test_laurent_series_inverse():
    x = LQ.from_coeffs(0, [1, 1])
    inv = x.inverse()
    assert [inv.coefficient(k) for k in range(6)] == [1, -1, 1, -1, 1, -1]
    assert x * inv == LQ.one()


def test_prime_field_coefficients():
    x = L7.from_coeffs(0, [3])
    assert (x * x.inverse()) == L7.one()
    assert L7.embed(Fraction(1, 3)) * 3 == L7.one()
    with pytest.raises(DivisionByZero):
        L7.embed(Fraction(1, 7))


def test_json_round_trip_laurent():
    x = LQ.from_coeffs(-2, [Fraction(1, 3), 0, 5], precision=10)
    back = LQ.from_json(LQ.to_json(x))
    assert back == x and back.prec == x.prec


def test_float_literals_rejected_on_exact_fields():
    with pytest.raises(TypeError):
        Q5.from_json(0.5)
    with pytest.raises(TypeError):
        LQ.from_json(0.5)


def test_field_config_round_trip():
    for K in (ComplexField(), Q5, LQ, L7, PadicField(3, 20)):
        assert field_from_config(K.config()) == K
    assert field_from_config(Q5.config(), precision=12).precision == 12


def test_functional_aliases():
    a, b = Q5.embed(3), Q5.embed(Fraction(2, 5))
    assert field_add(a, b) == a + b
    assert field_mul(a, b) == a * b
    assert field_neg(a) == -a
    assert field_inv(b) * b == Q5.one()


def test_precision_cap():
    K = PadicField(5, precision=8)
    x = K.embed(Fraction(1, 3))
    assert x.prec == 8
    assert (x * x).prec == 8


# --- field laws -------------------------------------------------------------


@pytest.mark.parametrize("K", [Q5, Q7], ids=["Q5", "Q7"])
@given(data=st.data())
def test_padic_laws(K, data):
    x = data.draw(padic_elements(K))
    y = data.draw(padic_elements(K))
    ax, ay = K.abs(x), K.abs(y)
    assert K.abs(x * y) == ax * ay
    assert K.abs(x + y) <= max(ax, ay)
    if ax != ay:
        assert K.abs(x + y) == max(ax, ay)
    assert K.abs(-x) == ax
    if not K.is_zero(x):
        assert K.abs(x.inverse()) == 1 / ax
        assert x * x.inverse() == K.one()


@pytest.mark.parametrize("K", [LQ, L7], ids=["LQ", "L7"])
@given(data=st.data())
def test_laurent_laws(K, data):
    x = data.draw(laurent_elements(K))
    y = data.draw(laurent_elements(K))
    ax, ay = K.abs(x), K.abs(y)
    assert K.abs(x * y) == ax * ay
    assert K.abs(x + y) <= max(ax, ay)
    if ax != ay:
        assert K.abs(x + y) == max(ax, ay)
    if not K.is_zero(x):
        assert K.abs(x.inverse()) == 1 / ax


@given(
    st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False),
    st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False),
)
def test_complex_laws(x, y):
    K = ComplexField()
    assert K.abs(x * y) == pytest.approx(K.abs(x) * K.abs(y), rel=1e-12, abs=1e-300)
    assert K.abs(x + y) <= (K.abs(x) + K.abs(y)) * (1 + 1e-12)


@given(st.fractions(min_value=-1000, max_value=1000, max_denominator=1000))
def test_rational_embedding_round_trip(q):
    assert Q5.embed(q).to_rational() == q if q else Q5.is_zero(Q5.embed(q))
    x = LQ.embed(q)
    assert (x.coefficient(0) == q) if q else LQ.is_zero(x)


@given(data=st.data())
def test_padic_ring_axioms(data):
    x, y, z = (data.draw(padic_elements(Q5)) for _ in range(3))
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x - x == Q5.zero()


def test_one_has_absolute_value_one():
    for K in (Q5, LQ, L7):
        assert K.abs(K.one()) == 1
