"""Tests for coefficient fields."""
from fractions import Fraction

import pytest

from mfa.common.field import FieldSpec, characteristic, field_inverse
from mfa.exceptions import DivisionByZero, FieldError


@pytest.mark.parametrize(("text", "expected"), [("q", 0), ("Q", 0), ("gf:7", 7), (" gf:2 ", 2), ("gf:2147483647", 2**31 - 1)])
def test_parse(text: str, expected: int) -> None:
    """Field specs parse to their characteristic."""
    field = FieldSpec.parse(text)
    assert characteristic(field) == expected
    assert str(FieldSpec.parse(str(field))) == str(field)


@pytest.mark.parametrize("text", ["gf:4", "gf:0", "gf:1", "gf:2147483648", "gf:", "gf:x", "r", ""])
def test_parse_rejects(text: str) -> None:
    """Non-prime characteristics and unknown names are refused."""
    with pytest.raises(FieldError):
        FieldSpec.parse(text)


def test_inverse() -> None:
    """Inverses in Q and GF(5)."""
    assert field_inverse(Fraction(2, 3), FieldSpec.rationals()) == Fraction(3, 2)
    assert field_inverse(2, FieldSpec.prime(5)) == 3
    with pytest.raises(DivisionByZero):
        field_inverse(0, FieldSpec.rationals())
    with pytest.raises(DivisionByZero):
        FieldSpec.prime(5).inverse(10)


def test_element_and_signed() -> None:
    """Literals reduce into GF(p) and print with the symmetric representative."""
    gf7 = FieldSpec.prime(7)
    assert gf7.element(Fraction(1, 2)) == 4
    assert gf7.element(-1) == 6
    assert gf7.signed(6) == -1
    assert gf7.signed(3) == 3
    with pytest.raises(DivisionByZero):
        gf7.element(Fraction(1, 7))
    assert FieldSpec.rationals().element(3) == Fraction(3)
    assert gf7.zero == 0 and gf7.one == 1
