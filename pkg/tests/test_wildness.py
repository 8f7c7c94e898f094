"""Tests for absolute wildness certificates."""
import logging

import pytest

from mfa.common.anticomm import BElement, BEndomorphism, MonomialAlphabet, leaf, lift_to_free, node, xi
from mfa.common.cyclic import CyclicPoly
from mfa.common.endomorphism import AEndomorphism, Exact
from mfa.common.field import FieldSpec
from mfa.common.metabelian import generator
from mfa.const import (
    REASON_AUTOMORPHISM_UNVERIFIED,
    REASON_IDEAL_DEGREE_CHECK_FAILED,
    REASON_ZERO_DIVERGENCE,
    VERDICT_ABSOLUTELY_WILD,
    VERDICT_INCONCLUSIVE,
)
from mfa.exceptions import IdentityEndomorphism, InvalidArgument, RankTooSmall
from mfa.wildness import (
    builtin_sigma,
    builtin_tau,
    certify_absolutely_wild,
    elementary_lift,
    quartic_lift,
)

Q = FieldSpec.rationals()


def test_builtins() -> None:
    """σ and τ move x1 by (x3x2)x1 and fix the rest."""
    s = builtin_sigma(5)
    assert s.image(1) == xi(1, 5) + (xi(3, 5) * xi(2, 5)) * xi(1, 5)
    assert all(s.image(i) == xi(i, 5) for i in range(2, 6))
    t = builtin_tau(3)
    assert t == AEndomorphism.moving(1, generator(1, 3) + (generator(3, 3) * generator(2, 3)) * generator(1, 3))
    assert lift_to_free(t) == builtin_sigma(3)


@pytest.mark.parametrize("builtin", [builtin_sigma, builtin_tau, elementary_lift, quartic_lift])
def test_builtins_need_rank_three(builtin) -> None:
    """ξ3 must exist."""
    with pytest.raises(RankTooSmall) as err:
        builtin(2)
    assert err.value.placeholders == {"rank": 2, "minimum": 3}


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("field", [FieldSpec.rationals(), FieldSpec.prime(5)])
def test_sigma_is_absolutely_wild(n: int, field: FieldSpec) -> None:
    """The full criterion holds for σ."""
    certificate = certify_absolutely_wild(builtin_sigma(n, field))
    assert certificate.verdict == VERDICT_ABSOLUTELY_WILD
    assert certificate.is_absolutely_wild
    assert certificate.reason is None and certificate.reason_degree is None
    assert certificate.ie_level == 2
    assert certificate.degree_check
    assert certificate.jacobian_verified
    assert certificate.divergence_value == CyclicPoly(MonomialAlphabet(n), field, [((node(leaf(3), leaf(2)).ident,), -1)])
    x = [generator(i, n, field) for i in range(1, n + 1)]
    assert certificate.induced == AEndomorphism.moving(1, x[0] + (x[2] * x[1]) * x[0])
    assert certificate.automorphism_evidence == Exact(AEndomorphism.moving(1, x[0] - (x[2] * x[1]) * x[0]))
    assert certificate.tangent.image(1) == (xi(3, n, field) * xi(2, n, field)) * xi(1, n, field)


def test_elementary_lift_has_zero_divergence(caplog) -> None:
    """(ξ1 + ξ3ξ2, ξ2, ξ3) induces a tame automorphism."""
    with caplog.at_level(logging.WARNING):
        certificate = certify_absolutely_wild(elementary_lift(3))
    assert certificate.verdict == VERDICT_INCONCLUSIVE
    assert certificate.reason == REASON_ZERO_DIVERGENCE
    assert certificate.ie_level == 1
    assert certificate.degree_check
    assert certificate.divergence_value.is_zero()
    assert isinstance(certificate.automorphism_evidence, Exact)
    assert "inconclusive" in caplog.text


def test_quartic_lift_fails_degree_check() -> None:
    """A cubic tangent reaches the degree of the metabelian ideal."""
    certificate = certify_absolutely_wild(quartic_lift(3))
    assert certificate.verdict == VERDICT_INCONCLUSIVE
    assert certificate.reason == REASON_IDEAL_DEGREE_CHECK_FAILED
    assert certificate.ie_level == 3
    assert not certificate.degree_check
    assert not certificate.divergence_value.is_zero()
    assert isinstance(certificate.automorphism_evidence, Exact)


def test_unverified_automorphism() -> None:
    """Lifts of non-IA maps cannot be certified."""
    images = [xi(1, 3).scale(2) + (xi(3, 3) * xi(2, 3)) * xi(1, 3), xi(2, 3), xi(3, 3)]
    certificate = certify_absolutely_wild(BEndomorphism(images), max_degree=6)
    assert certificate.reason == REASON_AUTOMORPHISM_UNVERIFIED
    assert certificate.reason_degree == 6
    assert certificate.automorphism_evidence is None
    assert not certificate.jacobian_verified


def test_rank_two_without_exact_inverse() -> None:
    """(ξ1 + ξ2ξ1, ξ2) only inverts up to truncation."""
    images = [xi(1, 2) + xi(2, 2) * xi(1, 2), xi(2, 2)]
    certificate = certify_absolutely_wild(BEndomorphism(images), max_degree=5)
    assert certificate.reason == REASON_AUTOMORPHISM_UNVERIFIED
    assert certificate.automorphism_evidence.verified_degree == 5


def test_certificate_checks() -> None:
    """Argument validation."""
    with pytest.raises(InvalidArgument):
        certify_absolutely_wild(builtin_sigma(3), max_degree=3)
    with pytest.raises(RankTooSmall):
        certify_absolutely_wild(BEndomorphism([BElement.monomial(leaf(1), 1, Q, 2)]))
    with pytest.raises(IdentityEndomorphism):
        certify_absolutely_wild(BEndomorphism.identity(3))
