import cmath
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from coxminimal.exactnum import ScalarSyntaxError, common_field, field, parse_scalar

CONDUCTORS = [1, 3, 4, 5, 8, 12, 24, 60]


def elements(N):
    F = field(N)
    deg = int(sympy.totient(N))
    coeff = st.fractions(min_value=-20, max_value=20, max_denominator=7)
    return st.lists(coeff, min_size=deg, max_size=deg).map(F.from_coeffs)


def approx(a, b, tol=1e-9):
    return abs(a - b) <= tol * (1 + abs(a) + abs(b))


@pytest.mark.parametrize("N", CONDUCTORS)
def test_zeta_order(N):
    F = field(N)
    z = F.zeta()
    assert z ** N == F.one
    for k in range(1, N):
        if N % k == 0:
            assert z ** k != F.one


def test_square_roots():
    F = field(12)
    i = F.zeta(1, 4)
    s3 = F.zeta(1, 6) * 2 - 1  # sqrt(-3)
    assert i * i == -F.one
    assert s3 * s3 == F(-3)
    F5 = field(5)
    r5 = (F5.zeta(1) + F5.zeta(4)) * 2 + 1
    assert r5 * r5 == F5(5)


def test_embedding_is_a_ring_map():
    a = parse_scalar("z + 3*z^2", 8)
    b = parse_scalar("1 - z^3", 8)
    assert (a * b).embed(24) == a.embed(24) * b.embed(24)
    assert a.embed(24).to_complex() == pytest.approx(a.to_complex())


def test_common_field():
    a = field(4).zeta()
    b = field(6).zeta()
    assert common_field(a, b).conductor == 12


def test_parse_and_format_roundtrip():
    for text in ["0", "1", "-3/4", "z", "2*z^4 + 1", "(1 - z)^3 / 2", "-z^-1"]:
        v = parse_scalar(text, 12)
        assert parse_scalar(str(v), 12) == v


@pytest.mark.parametrize("bad", ["", "1 +", "z^", "(1", "w", "1 // 2"])
def test_parse_errors(bad):
    with pytest.raises(ScalarSyntaxError):
        parse_scalar(bad, 12)


def test_root_of_unity_exponent():
    F = field(12)
    assert (F.zeta() ** 7).root_of_unity_exponent(12) == 7
    assert F(2).root_of_unity_exponent(12) is None


def test_rational_values():
    F = field(8)
    assert F(Fraction(3, 4)).is_rational()
    assert F(Fraction(3, 4)).rational() == Fraction(3, 4)
    assert not F.zeta().is_rational()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 8, 12, 60]).flatmap(lambda N: st.tuples(elements(N), elements(N), elements(N))))
def test_field_axioms_against_complex_embedding(abc):
    a, b, c = abc
    assert (a + b) * c == a * c + b * c
    assert approx((a * b).to_complex(), a.to_complex() * b.to_complex())
    assert approx((a + b).to_complex(), a.to_complex() + b.to_complex())
    assert approx(a.conjugate().to_complex(), a.to_complex().conjugate())
    if not a.is_zero():
        assert a * a.inverse() == a.field.one
        assert approx((b / a).to_complex(), b.to_complex() / a.to_complex())


@pytest.mark.parametrize("N", [5, 12, 24])
def test_zeta_matches_sympy(N):
    z = field(N).zeta()
    exact = complex(sympy.N(sympy.exp(2 * sympy.pi * sympy.I / N), 30))
    assert cmath.isclose(z.to_complex(), exact, rel_tol=1e-12)
