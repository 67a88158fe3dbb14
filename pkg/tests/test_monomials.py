import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qtembed.errors import DimensionMismatchError, InputDocumentError
from qtembed.monomials import (
    Monomial,
    evaluate_monomial,
    format_monomial,
    parse_monomial,
)


def test_format_uses_w_for_conjugates():
    assert format_monomial((0, 0, 1, 0, 0, -1, -1, 1, 0)) == "z3 w6 w7 z8"
    assert format_monomial((2, 0, -3)) == "z1^2 w3^3"
    assert format_monomial((0, 0)) == "1"


def test_parse_examples():
    assert parse_monomial("z3 w6 w7 z8", 9).exponents == (0, 0, 1, 0, 0, -1, -1, 1, 0)
    assert parse_monomial("z1^2 w3^3", 3).exponents == (2, 0, -3)
    assert parse_monomial("1", 4).is_constant


@pytest.mark.parametrize(
    "text",
    ["", "z0", "x1", "z2 z1", "z1 w1", "z1^0", "z5", "z1^-2"],
)
def test_parse_rejects(text):
    with pytest.raises(InputDocumentError):
        parse_monomial(text, 4)


@given(st.lists(st.integers(min_value=-4, max_value=4), min_size=1, max_size=9))
def test_format_then_parse(exponents):
    text = format_monomial(exponents)
    assert parse_monomial(text, len(exponents)).exponents == tuple(exponents)


def test_monomial_properties():
    mono = Monomial((1, -2, 0))
    assert mono.degree == 3
    assert mono.m == 3
    assert (-mono).exponents == (-1, 2, 0)
    assert str(mono) == "z1 w2^2"


def test_evaluate_conjugates_negative_exponents():
    z = np.array([1 + 1j, 2j, 0])
    assert evaluate_monomial((1, -1, 0), z) == pytest.approx((1 + 1j) * (-2j))
    assert evaluate_monomial((0, 0, 0), z) == 1
    assert evaluate_monomial((0, 0, 2), z) == 0


def test_evaluate_modulus():
    rng = np.random.default_rng(3)
    z = rng.normal(size=4) + 1j * rng.normal(size=4)
    a = (2, -1, 0, -3)
    expected = np.prod(np.abs(z) ** np.abs(a))
    assert abs(evaluate_monomial(a, z)) == pytest.approx(expected, rel=1e-12)


def test_evaluate_checks_length():
    with pytest.raises(DimensionMismatchError):
        evaluate_monomial((1, 2), np.array([1.0, 2.0, 3.0]))
