"""Exceptions raised by the mfa kernel."""
from __future__ import annotations

from typing import Any

from .const import (
    ERROR_CONFIG,
    ERROR_DIMENSION_MISMATCH,
    ERROR_DIVISION_BY_ZERO,
    ERROR_FIELD,
    ERROR_IDENTITY_ENDOMORPHISM,
    ERROR_INVALID_ARGUMENT,
    ERROR_INVALID_INDEX,
    ERROR_MAP_FORMAT,
    ERROR_NOT_ANTISYMMETRIC,
    ERROR_NOT_CHEIN,
    ERROR_NOT_IA,
    ERROR_NOT_IN_A_SQUARED,
    ERROR_NOT_IN_AUGMENTATION_IDEAL,
    ERROR_PARSE,
    ERROR_RANK_TOO_SMALL,
    ERROR_STRUCTURAL_MISMATCH,
    ERROR_USAGE,
)


class MfaException(Exception):
    """Base class for every error the kernel reports.

    ``code`` selects the message template in ``translations/en.json`` and
    ``placeholders`` fills it in.
    """

    code = "unknown_error"

    def __init__(self, **placeholders: Any) -> None:
        """Initialize with the values the message template refers to."""
        super().__init__(self.code, placeholders)
        self.placeholders = placeholders

    def __str__(self) -> str:
        if not self.placeholders:
            return self.code
        details = ", ".join(f"{key}={value}" for key, value in sorted(self.placeholders.items()))
        return f"{self.code}: {details}"


class FieldError(MfaException):
    """Invalid field specification."""

    code = ERROR_FIELD


class DivisionByZero(MfaException, ZeroDivisionError):
    """Inverse of the zero scalar requested."""

    code = ERROR_DIVISION_BY_ZERO


class StructuralMismatch(MfaException):
    """Operands live over different alphabets, fields or ranks."""

    code = ERROR_STRUCTURAL_MISMATCH


class DimensionMismatch(MfaException):
    """Matrix or vector sizes do not agree."""

    code = ERROR_DIMENSION_MISMATCH


class NotInAugmentationIdeal(MfaException):
    """A polynomial with a nonzero constant term where none is allowed."""

    code = ERROR_NOT_IN_AUGMENTATION_IDEAL


class NotAntisymmetric(MfaException):
    """Fox columns whose left cofactors are not antisymmetric."""

    code = ERROR_NOT_ANTISYMMETRIC


class InvalidIndex(MfaException, IndexError):
    """Variable index outside 1..n."""

    code = ERROR_INVALID_INDEX


class NotIA(MfaException):
    """Endomorphism whose linear part is not the identity."""

    code = ERROR_NOT_IA


class NotChein(MfaException):
    """Chein candidate with a nonzero first Fox derivative."""

    code = ERROR_NOT_CHEIN


class NotInASquared(MfaException):
    """Element with a nonzero linear part where A² is required."""

    code = ERROR_NOT_IN_A_SQUARED


class RankTooSmall(MfaException):
    """Construction needs more variables than the rank provides."""

    code = ERROR_RANK_TOO_SMALL


class IdentityEndomorphism(MfaException):
    """Tangent derivation requested for the identity."""

    code = ERROR_IDENTITY_ENDOMORPHISM


class ParseError(MfaException):
    """Syntax error in an expression, positioned by line and column."""

    code = ERROR_PARSE


class MapFormatError(MfaException):
    """Map file with a bad header or missing/duplicate rows."""

    code = ERROR_MAP_FORMAT


class InvalidArgument(MfaException, ValueError):
    """Argument outside the documented range."""

    code = ERROR_INVALID_ARGUMENT


class ConfigError(MfaException):
    """Command line configuration failed validation."""

    code = ERROR_CONFIG


class UsageError(MfaException):
    """Command line arguments could not be parsed."""

    code = ERROR_USAGE
