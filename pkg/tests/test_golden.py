from fractions import Fraction
import math

import pytest
from hypothesis import given, strategies as st

from coxfold.golden import ONE, SIGMA, TAU, ZERO, GoldenRat, parse_golden, sqrt_golden, tau_pow

PHI = (1 + math.sqrt(5)) / 2

goldens = st.builds(
    GoldenRat,
    st.integers(-10**6, 10**6),
    st.integers(-10**6, 10**6),
    st.integers(1, 1000),
)
nonzero = goldens.filter(lambda x: not x.is_zero())


def approx(x: GoldenRat) -> float:
    return (x.a + x.b * PHI) / x.den


@given(goldens, goldens, goldens)
def test_ring_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + ZERO == x and x * ONE == x
    assert x - x == ZERO


@given(goldens, goldens)
def test_conjugation_is_a_ring_homomorphism(x, y):
    assert (x + y).conj() == x.conj() + y.conj()
    assert (x * y).conj() == x.conj() * y.conj()
    assert x.conj().conj() == x


@given(nonzero)
def test_inverse(x):
    assert x * x.inverse() == ONE
    assert x / x == ONE


@given(goldens)
def test_norm_is_product_with_conjugate(x):
    assert GoldenRat(x.norm()) == x * x.conj()


@given(goldens, goldens)
def test_order_agrees_with_floats(x, y):
    if abs(approx(x) - approx(y)) > 1e-6:
        assert (x < y) == (approx(x) < approx(y))
    if abs(approx(x)) > 1e-9:
        assert x.sign() == (1 if approx(x) > 0 else -1)


@given(goldens)
def test_string_and_json_round_trip(x):
    assert parse_golden(str(x)) == x
    assert GoldenRat.from_json(x.to_json()) == x


def test_canonical_form():
    x = GoldenRat(2, 4, 6)
    assert (x.a, x.b, x.den) == (1, 2, 3)
    assert GoldenRat(1, 1, -2) == GoldenRat(-1, -1, 2)
    assert GoldenRat(0, 0, 7).to_json() == {"a": 0, "b": 0, "den": 1}


def test_tau_identities():
    assert TAU * TAU == TAU + 1
    assert SIGMA == 1 - TAU
    assert TAU * SIGMA == -1
    assert TAU.conj() == SIGMA
    assert tau_pow(-1) == TAU - 1
    assert tau_pow(5) * tau_pow(-5) == ONE


def test_parts():
    x = parse_golden("3/2 - tau/4")
    assert x.rational_part == Fraction(3, 2)
    assert x.tau_part == Fraction(-1, 4)
    assert not x.in_ztau() and parse_golden("2-3*tau").in_ztau()
    assert parse_golden("4/5*(tau-3)") == GoldenRat(-12, 4, 5)


@given(goldens)
def test_sqrt_of_square(x):
    r = sqrt_golden(x * x)
    assert r is not None and r * r == x * x and r.sign() >= 0


def test_sqrt_of_non_square():
    assert sqrt_golden(TAU) is None
    assert sqrt_golden(GoldenRat(2)) is None
    assert sqrt_golden(GoldenRat(-1)) is None


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


@pytest.mark.parametrize("bad", ["", "tau tau", "x+1", "1//2", "import os"])
def test_parse_rejects(bad):
    with pytest.raises((ValueError, SyntaxError)):
        parse_golden(bad)
