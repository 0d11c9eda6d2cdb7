from fractions import Fraction

import pytest

from hnflow.exact import LiteralError, format_scalar, parse_scalar


def test_rationals():
    assert parse_scalar("3/4") == Fraction(3, 4)
    assert parse_scalar("0.6") == Fraction(3, 5)
    assert parse_scalar(-7) == -7
    assert parse_scalar("-(1/2)**2") == Fraction(-1, 4)


def test_field_expression(K, r2):
    assert parse_scalar("1 + 2*t", K) == 1 + 2 * r2
    assert parse_scalar("t**2", K) == 2
    assert isinstance(parse_scalar("t*t", K), Fraction)


@pytest.mark.parametrize("bad", ["", "x", "1/0", "2**t", "import os", "1.5e", True, 0.5, [1]])
def test_rejects(bad, K):
    with pytest.raises(LiteralError):
        parse_scalar(bad, K)


def test_roundtrip(K, r2):
    for x in (Fraction(5, 3), Fraction(-2), 3 - r2):
        assert parse_scalar(format_scalar(x), K) == x
