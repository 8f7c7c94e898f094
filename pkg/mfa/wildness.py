"""Absolute wildness certificates.

An endomorphism ε of the free algebra B in IE(i) \\ IE(i+1) that induces an
automorphism φ of A = B/I certifies φ absolutely wild when I has no
elements of degree <= i + 1 and the tangent derivation T(ε) has nonzero
divergence.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from .common.anticomm import (
    BDerivation,
    BElement,
    BEndomorphism,
    divergence,
    ie_level,
    left_normed,
    quotient_to_A,
    tangent,
    xi,
)
from .common.cyclic import CyclicPoly
from .common.endomorphism import (
    AEndomorphism,
    Exact,
    InversionResult,
    invert_ia,
    jacobian_inverse_check,
)
from .common.field import FieldSpec
from .common.metabelian import basis_monomial, generator
from .const import (
    IDEAL_MIN_DEGREE,
    REASON_AUTOMORPHISM_UNVERIFIED,
    REASON_IDEAL_DEGREE_CHECK_FAILED,
    REASON_ZERO_DIVERGENCE,
    VERDICT_ABSOLUTELY_WILD,
    VERDICT_INCONCLUSIVE,
)
from .exceptions import InvalidArgument, RankTooSmall

_LOGGER = logging.getLogger(__name__)


def _require_rank(n: int) -> None:
    if n < 3:
        raise RankTooSmall(rank=n, minimum=3)


def builtin_sigma(n: int, field: FieldSpec | None = None) -> BEndomorphism:
    """(ξ_1 + (ξ_3ξ_2)ξ_1, ξ_2, ..., ξ_n)."""
    _require_rank(n)
    field = field or FieldSpec.rationals()
    images = [xi(i, n, field) for i in range(1, n + 1)]
    images[0] = images[0] + BElement(n, field, [(left_normed(3, 2, (1,)), 1)])
    return BEndomorphism(images)


def builtin_tau(n: int, field: FieldSpec | None = None) -> AEndomorphism:
    """(x_1 + (x_3x_2)x_1, x_2, ..., x_n)."""
    _require_rank(n)
    field = field or FieldSpec.rationals()
    return AEndomorphism.moving(1, generator(1, n, field) + basis_monomial(3, 2, (1,), n, field))


@dataclass
class WildnessCertificate:
    """Outcome of the wildness pipeline; ``reason`` is set only for Inconclusive."""

    verdict: str
    reason: str | None
    reason_degree: int | None
    ie_level: int
    degree_check: bool
    tangent: BDerivation
    divergence_value: CyclicPoly
    automorphism_evidence: InversionResult | None
    jacobian_verified: bool
    induced: AEndomorphism
    max_degree: int
    ideal_min_degree: int = IDEAL_MIN_DEGREE

    @property
    def is_absolutely_wild(self) -> bool:
        """Whether every check passed."""
        return self.verdict == VERDICT_ABSOLUTELY_WILD


def certify_absolutely_wild(e: BEndomorphism, max_degree: int = 10) -> WildnessCertificate:
    """Run the criterion on ``e``; any failed check yields Inconclusive with one reason.

    Reasons are reported in pipeline order: an unverified automorphism first,
    then the degree condition on the ideal, then a vanishing divergence.
    """
    if max_degree < IDEAL_MIN_DEGREE:
        raise InvalidArgument(name="max_degree", reason=f"must be at least {IDEAL_MIN_DEGREE}")
    if e.rank < 2:
        raise RankTooSmall(rank=e.rank, minimum=2)
    derivation = tangent(e)

    induced = quotient_to_A(e)
    evidence: InversionResult | None = None
    jacobian_verified = False
    if induced.is_ia():
        evidence = invert_ia(induced, max_degree)
        if isinstance(evidence, Exact):
            jacobian_verified = jacobian_inverse_check(induced, evidence.inverse)
    _LOGGER.debug("Induced automorphism evidence: %s", type(evidence).__name__)

    level = ie_level(e, max_degree).level
    degree_check = level + 1 < IDEAL_MIN_DEGREE
    value = divergence(derivation)
    _LOGGER.debug("IE level %s, degree check %s, divergence zero %s", level, degree_check, value.is_zero())

    reason = None
    reason_degree = None
    if not isinstance(evidence, Exact):
        reason = REASON_AUTOMORPHISM_UNVERIFIED
        reason_degree = max_degree
    elif not degree_check:
        reason = REASON_IDEAL_DEGREE_CHECK_FAILED
    elif value.is_zero():
        reason = REASON_ZERO_DIVERGENCE
    verdict = VERDICT_INCONCLUSIVE if reason else VERDICT_ABSOLUTELY_WILD
    if reason:
        _LOGGER.warning("Certificate inconclusive: %s", reason)
    return WildnessCertificate(
        verdict=verdict,
        reason=reason,
        reason_degree=reason_degree,
        ie_level=level,
        degree_check=degree_check,
        tangent=derivation,
        divergence_value=value,
        automorphism_evidence=evidence,
        jacobian_verified=jacobian_verified,
        induced=induced,
        max_degree=max_degree,
    )


def elementary_lift(n: int, field: FieldSpec | None = None) -> BEndomorphism:
    """(ξ_1 + ξ_3ξ_2, ξ_2, ..., ξ_n), whose tangent has zero divergence."""
    _require_rank(n)
    field = field or FieldSpec.rationals()
    images = [xi(i, n, field) for i in range(1, n + 1)]
    images[0] = images[0] + BElement(n, field, [(left_normed(3, 2, ()), 1)])
    return BEndomorphism(images)


def quartic_lift(n: int, field: FieldSpec | None = None) -> BEndomorphism:
    """(ξ_1 + ((ξ_3ξ_2)ξ_1)ξ_1, ξ_2, ..., ξ_n), tangent of degree 3."""
    _require_rank(n)
    field = field or FieldSpec.rationals()
    images = [xi(i, n, field) for i in range(1, n + 1)]
    images[0] = images[0] + BElement(n, field, [(left_normed(3, 2, (1, 1)), 1)])
    return BEndomorphism(images)

