"""Exact scalar fields: the rationals and prime fields GF(p)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from sympy import isprime

from ..const import FIELD_PRIME_PREFIX, FIELD_RATIONALS, MAX_PRIME
from ..exceptions import DivisionByZero, FieldError

FieldScalar = Union[Fraction, int]


@dataclass(frozen=True)
class FieldSpec:
    """Field of coefficients.

    ``characteristic == 0`` selects the rationals, whose scalars are
    ``Fraction``; otherwise scalars are residues ``0 <= a < p``.
    """

    characteristic: int = 0

    def __post_init__(self) -> None:
        p = self.characteristic
        if p == 0:
            return
        if p < 0 or p >= MAX_PRIME:
            raise FieldError(field=p, reason=f"characteristic must be below {MAX_PRIME}")
        if not isprime(p):
            raise FieldError(field=p, reason="characteristic is not prime")

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> FieldSpec:
        if p < 2:
            raise FieldError(field=p, reason="characteristic is not prime")
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> FieldSpec:
        """Parse ``q`` or ``gf:P``."""
        spec = text.strip().lower()
        if spec == FIELD_RATIONALS:
            return cls.rationals()
        if spec.startswith(FIELD_PRIME_PREFIX):
            digits = spec[len(FIELD_PRIME_PREFIX):]
            if digits.isdigit():
                return cls.prime(int(digits))
        raise FieldError(field=text, reason=f"expected '{FIELD_RATIONALS}' or '{FIELD_PRIME_PREFIX}P'")

    @property
    def is_prime_field(self) -> bool:
        return self.characteristic != 0

    @property
    def zero(self) -> FieldScalar:
        return 0 if self.characteristic else Fraction(0)

    @property
    def one(self) -> FieldScalar:
        return 1 if self.characteristic else Fraction(1)

    def element(self, value: int | Fraction) -> FieldScalar:
        """Map an integer or rational literal into the field."""
        p = self.characteristic
        if not p:
            return Fraction(value)
        value = Fraction(value)
        if value.denominator % p == 0:
            raise DivisionByZero(field=str(self))
        return value.numerator * pow(value.denominator, -1, p) % p

    def normalize(self, value: FieldScalar) -> FieldScalar:
        """Reduce the result of ``+``, ``-`` or ``*`` on field scalars."""
        if self.characteristic:
            return value % self.characteristic
        return value

    def inverse(self, value: FieldScalar) -> FieldScalar:
        value = self.normalize(value)
        if value == 0:
            raise DivisionByZero(field=str(self))
        if self.characteristic:
            return pow(value, -1, self.characteristic)
        return 1 / Fraction(value)

    def signed(self, value: FieldScalar) -> Fraction:
        """Representative used for printing: residues in (-p/2, p/2]."""
        p = self.characteristic
        if p and value > p // 2:
            return Fraction(value - p)
        return Fraction(value)

    def __str__(self) -> str:
        if self.characteristic:
            return f"{FIELD_PRIME_PREFIX}{self.characteristic}"
        return FIELD_RATIONALS


def characteristic(field: FieldSpec) -> int:
    return field.characteristic


def field_inverse(a: FieldScalar, field: FieldSpec) -> FieldScalar:
    """Return ``a⁻¹``; raises DivisionByZero for ``a = 0``."""
    return field.inverse(a)
