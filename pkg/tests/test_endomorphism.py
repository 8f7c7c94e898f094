"""Tests for endomorphisms of the free metabelian anticommutative algebra."""
import logging
import random

import pytest

from mfa.common.endomorphism import (
    AEndomorphism,
    Exact,
    FiltrationLevel,
    Truncated,
    apply_endo,
    chain_rule_fox,
    chein,
    chein_factors,
    chein_inverse,
    compose,
    first_column_shape,
    ia_level,
    in_chein_ideal,
    induced_substitution,
    invert_ia,
    is_elementary,
    jacobian,
    jacobian_inverse_check,
    rank2_rigidity_search,
    transposition,
)
from mfa.common.field import FieldSpec
from mfa.common.metabelian import AElement, fox, generator
from mfa.common.ncpoly import IndexAlphabet, LinearSubstitution, NCPoly, mat_mul_twisted
from mfa.exceptions import DimensionMismatch, InvalidArgument, NotChein, NotIA, NotInASquared
from mfa.utils import derive_seed

from .common import random_a_squared, random_chein_element, random_endomorphism

Q = FieldSpec.rationals()


def x(i: int, n: int = 3, field: FieldSpec = Q) -> AElement:
    return generator(i, n, field)


def tau(n: int = 3, field: FieldSpec = Q) -> AEndomorphism:
    return AEndomorphism.moving(1, x(1, n, field) + (x(3, n, field) * x(2, n, field)) * x(1, n, field))


def z(*word: int, coefficient: int = 1) -> NCPoly:
    return NCPoly.monomial(IndexAlphabet(3), Q, word, coefficient)


def test_apply() -> None:
    """Images of elements under the identity and τ."""
    g = (x(3) * x(2)) * x(1)
    assert apply_endo(AEndomorphism.identity(3), g + x(2)) == g + x(2)
    assert apply_endo(tau(), x(3) * x(2)) == x(3) * x(2)
    assert apply_endo(tau(), g) == g
    assert apply_endo(tau(), x(2) * x(1)) == x(2) * x(1) - g * x(2)
    assert apply_endo(tau(), x(1).scale(3)) == tau().image(1).scale(3)


def test_apply_linear() -> None:
    """A linear map acts on every letter of the basis words."""
    swap = AEndomorphism.linear([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    assert apply_endo(swap, (x(3) * x(2)) * x(1)) == (x(3) * x(1)) * x(2)
    assert apply_endo(swap, x(2) * x(1)) == x(1) * x(2)


def test_compose() -> None:
    """τ∘τ doubles the correction."""
    g = (x(3) * x(2)) * x(1)
    assert compose(tau(), tau()) == AEndomorphism.moving(1, x(1) + g.scale(2))
    assert compose(tau(), AEndomorphism.identity(3)) == tau()
    with pytest.raises(DimensionMismatch):
        compose(tau(), AEndomorphism.identity(4))


@pytest.mark.parametrize("n", [3, 4])
def test_chain_rule(n: int) -> None:
    """J(φ∘ψ) = J(φ) J(ψ)^φ̃ for arbitrary linear parts."""
    rng = random.Random(derive_seed(23, n))
    for _ in range(50):
        phi = random_endomorphism(rng, n, Q)
        psi = random_endomorphism(rng, n, Q)
        composed = compose(phi, psi)
        assert jacobian(composed) == mat_mul_twisted(jacobian(phi), jacobian(psi), induced_substitution(phi))
        g = psi.image(1)
        assert fox(apply_endo(phi, g, verify=True)) == chain_rule_fox(phi, g)


def test_jacobian() -> None:
    """J(τ) and its inverse check."""
    matrix = jacobian(tau())
    one = NCPoly.one(IndexAlphabet(3), Q)
    zero = NCPoly.zero(IndexAlphabet(3), Q)
    assert matrix.column(1) == (one, z(3, 1, coefficient=-1), z(2, 1))
    assert matrix.column(2) == (zero, one, zero)
    assert matrix.constant_determinant() == 1
    inverse = AEndomorphism.moving(1, x(1) - (x(3) * x(2)) * x(1))
    assert jacobian_inverse_check(tau(), inverse)
    assert not jacobian_inverse_check(tau(), tau())
    assert jacobian(AEndomorphism.identity(3)).is_identity()


def test_induced_substitution() -> None:
    """φ̃ reads off the linear parts."""
    assert induced_substitution(tau()).is_identity()
    assert induced_substitution(AEndomorphism.identity(3)).is_identity()
    swap = AEndomorphism.linear([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    assert induced_substitution(swap) == LinearSubstitution(Q, ((0, 1, 0), (1, 0, 0), (0, 0, 1)))
    assert jacobian(swap).constant_determinant() == -1
    assert tau().is_ia() and not swap.is_ia()


@pytest.mark.parametrize(
    ("phi", "expected"),
    [
        (AEndomorphism.identity(3), FiltrationLevel(10, at_least=True)),
        (AEndomorphism.moving(1, x(1) + (x(3) * x(2)) * x(1)), FiltrationLevel(2)),
        (AEndomorphism.moving(1, x(1) + x(3) * x(2)), FiltrationLevel(1)),
        (AEndomorphism.linear([[2, 0, 0], [0, 1, 0], [0, 0, 1]]), FiltrationLevel(0)),
    ],
)
def test_ia_level(phi: AEndomorphism, expected: FiltrationLevel) -> None:
    """IA filtration level."""
    assert ia_level(phi) == expected


def test_ia_level_bounds() -> None:
    """Levels at or past the bound are reported as a lower bound."""
    assert str(ia_level(AEndomorphism.identity(3), 4)) == "AtLeast(4)"
    assert str(ia_level(tau(), 2)) == "AtLeast(2)"
    assert str(ia_level(tau(), 3)) == "2"
    with pytest.raises(InvalidArgument):
        ia_level(tau(), 0)


def test_invert_tau() -> None:
    """τ has the exact inverse (x1 - (x3x2)x1, x2, x3)."""
    result = invert_ia(tau())
    assert isinstance(result, Exact)
    assert result.inverse == AEndomorphism.moving(1, x(1) - (x(3) * x(2)) * x(1))
    assert compose(tau(), result.inverse).is_identity()
    assert invert_ia(AEndomorphism.identity(3)) == Exact(AEndomorphism.identity(3))


def test_invert_rank_two(caplog) -> None:
    """(x1 + x2x1, x2) has no inverse; the partial one is verified through the bound."""
    phi = AEndomorphism.moving(1, x(1, 2) + x(2, 2) * x(1, 2))
    with caplog.at_level(logging.WARNING):
        result = invert_ia(phi, 6)
    assert isinstance(result, Truncated)
    assert result.verified_degree == 6
    residual = compose(result.partial, phi).corrections()
    assert all(c.lowest_degree() == 7 for c in residual if not c.is_zero())
    assert "verified through degree 6" in caplog.text


def test_invert_checks() -> None:
    """Only IA-endomorphisms are inverted."""
    with pytest.raises(NotIA) as err:
        invert_ia(AEndomorphism.linear([[1, 0, 0], [0, 2, 0], [0, 0, 1]]))
    assert err.value.placeholders == {"index": 2}
    with pytest.raises(InvalidArgument):
        invert_ia(tau(), 1)


def test_chein_examples() -> None:
    """Accepted and rejected Chein candidates."""
    g = (x(3) * x(2)) * x(1)
    assert chein(g, 3) == tau()
    assert chein(x(3) * x(2), 3) == AEndomorphism.moving(1, x(1) + x(3) * x(2))
    with pytest.raises(NotChein) as err:
        chein(x(2) * x(1), 3)
    assert err.value.placeholders["position"] == 1
    assert err.value.placeholders["witness"] == z(2, coefficient=-1)


def test_chein_checks() -> None:
    """Argument validation."""
    with pytest.raises(NotInASquared):
        chein(x(2), 3)
    with pytest.raises(DimensionMismatch):
        chein(x(3) * x(2), 4)
    with pytest.raises(InvalidArgument):
        chein(x(3) * x(2), 3, position=4)


def test_chein_other_position() -> None:
    """Moving x2 is the conjugate by the transposition (1 2)."""
    assert chein(x(3) * x(1), 3, position=2) == AEndomorphism.moving(2, x(2) + x(3) * x(1))
    with pytest.raises(NotChein) as err:
        chein(x(2) * x(1), 3, position=2)
    assert err.value.placeholders["witness"] == z(1)
    swap = transposition(3, 2)
    assert compose(swap, swap).is_identity()
    assert swap.image(1) == x(2)


def test_chein_criterion() -> None:
    """chein accepts exactly the candidates with zero first Fox column."""
    rng = random.Random(derive_seed(5, 0))
    accepted = 0
    for index in range(200):
        f = random_chein_element(rng, 3, Q) if index % 2 else random_a_squared(rng, 3, Q)
        expected = fox(f)[0].is_zero()
        assert in_chein_ideal(f) == expected
        if not expected:
            with pytest.raises(NotChein):
                chein(f, 3)
            continue
        accepted += 1
        delta = chein(f, 3)
        inverse = chein_inverse(f, 3)
        assert compose(delta, inverse).is_identity()
        assert compose(inverse, delta).is_identity()
        if accepted <= 20:
            assert invert_ia(delta) == Exact(inverse)
    assert accepted >= 100


def test_chein_additive() -> None:
    """chein(f)∘chein(g) = chein(f + g)."""
    rng = random.Random(derive_seed(6, 0))
    for _ in range(100):
        f = random_chein_element(rng, 3, Q)
        g = random_chein_element(rng, 3, Q)
        assert compose(chein(f, 3), chein(g, 3)) == chein(f + g, 3)


def test_chein_factors() -> None:
    """Factors are grouped by the leading pair and compose back to δ."""
    n = 4
    f = x(3, n) * x(2, n) + ((x(4, n) * x(2, n)) * x(1, n)).scale(2) + (x(4, n) * x(3, n)) * x(3, n)
    factors = chein_factors(f, n)
    assert len(factors) == 3
    product = AEndomorphism.identity(n)
    for factor in factors:
        product = compose(product, factor)
    assert product == chein(f, n)
    assert factors[0] == AEndomorphism.moving(1, x(1, n) + x(3, n) * x(2, n))
    with pytest.raises(NotChein):
        chein_factors(x(2, n) * x(1, n), n)


def test_is_elementary() -> None:
    """(x1, ..., αx_i + f, ..., xn) with f free of x_i."""
    assert is_elementary(AEndomorphism.moving(1, x(1) + x(3) * x(2)))
    assert is_elementary(AEndomorphism.moving(1, x(1).scale(2) + x(2)))
    assert is_elementary(AEndomorphism.identity(3))
    assert not is_elementary(tau())
    assert not is_elementary(AEndomorphism.moving(1, x(2)))
    assert not is_elementary(AEndomorphism.linear([[0, 1, 0], [1, 0, 0], [0, 0, 1]]))


def test_rank2_rigidity() -> None:
    """No exact inverse among single-monomial and random rank 2 candidates."""
    report = rank2_rigidity_search(3, 100, seed=0, max_degree=8)
    assert report.control_exact
    assert report.candidates == 2 * (1 + 2) + 100
    assert report.counterexamples == []
    assert report.shape_violations == []
    assert report.max_degree == 8


def test_first_column_shape() -> None:
    """Rank 2 corrections always have the antisymmetric first column."""
    rng = random.Random(5)
    for _ in range(50):
        phi = AEndomorphism([x(i, 2) + random_a_squared(rng, 2, Q) for i in (1, 2)])
        assert first_column_shape(phi)
    assert first_column_shape(AEndomorphism.moving(1, x(1, 2) + x(2, 2) * x(1, 2)))


def test_rank2_rigidity_reproducible() -> None:
    """Same seed, same report."""
    first = rank2_rigidity_search(4, 10, seed=42)
    second = rank2_rigidity_search(4, 10, seed=42)
    assert first == second
    assert first.max_degree == 8
    assert first.counterexamples == []
