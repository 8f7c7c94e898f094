"""Endomorphisms of the free metabelian anticommutative algebra A."""
from __future__ import annotations

import logging
import random
from collections.abc import Sequence
from dataclasses import dataclass, field as dataclass_field
from typing import Union

from ..exceptions import (
    DimensionMismatch,
    InvalidArgument,
    NotChein,
    NotIA,
    NotInASquared,
    StructuralMismatch,
)
from ..utils import derive_seed
from .field import FieldScalar, FieldSpec
from .metabelian import (
    AElement,
    BasisKey,
    a_mul,
    basis_decompose,
    basis_monomial,
    basis_monomials,
    element_from_terms,
    fox,
    generator,
    right_act,
)
from .ncpoly import (
    IndexAlphabet,
    LinearSubstitution,
    MatU,
    NCPoly,
    apply_linear_substitution,
    left_decompose,
    mat_mul_twisted,
    nc_mul,
)

_LOGGER = logging.getLogger(__name__)

DEFAULT_INVERSION_DEGREE = 10


@dataclass(frozen=True)
class FiltrationLevel:
    """Position in a descending filtration; ``at_least`` marks a bound reached without a witness."""

    level: int
    at_least: bool = False

    def __str__(self) -> str:
        return f"AtLeast({self.level})" if self.at_least else str(self.level)


class AEndomorphism:
    """The n-tuple (f_1, ..., f_n) sending x_i to f_i."""

    __slots__ = ("rank", "field", "images")

    def __init__(self, images: Sequence[AElement]) -> None:
        """Initialize from the images of x_1..x_n."""
        if not images:
            raise InvalidArgument(name="rank", reason="rank must be at least 1")
        rank = images[0].rank
        field = images[0].field
        if len(images) != rank:
            raise DimensionMismatch(expected=rank, actual=len(images))
        for image in images:
            if image.rank != rank or image.field != field:
                raise StructuralMismatch(left=f"rank {rank}/{field}", right=f"rank {image.rank}/{image.field}")
        self.rank = rank
        self.field = field
        self.images = tuple(images)

    @classmethod
    def identity(cls, n: int, field: FieldSpec | None = None) -> AEndomorphism:
        return cls([generator(i, n, field) for i in range(1, n + 1)])

    @classmethod
    def linear(cls, matrix: Sequence[Sequence[FieldScalar]], field: FieldSpec | None = None) -> AEndomorphism:
        """x_i -> Σ_j matrix[i][j] x_j."""
        field = field or FieldSpec.rationals()
        n = len(matrix)
        return cls(
            [
                element_from_terms(n, field, {j + 1: c for j, c in enumerate(row) if c != 0})
                for row in matrix
            ]
        )

    @classmethod
    def moving(cls, position: int, image: AElement) -> AEndomorphism:
        """Endomorphism moving x_position to ``image`` and fixing the others."""
        n = image.rank
        images = [generator(i, n, image.field) for i in range(1, n + 1)]
        images[position - 1] = image
        return cls(images)

    def image(self, i: int) -> AElement:
        return self.images[i - 1]

    def corrections(self) -> list[AElement]:
        """f_i - x_i."""
        return [f - generator(i, self.rank, self.field) for i, f in enumerate(self.images, start=1)]

    def is_identity(self) -> bool:
        return all(c.is_zero() for c in self.corrections())

    def is_ia(self) -> bool:
        return induced_substitution(self).is_identity()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AEndomorphism):
            return NotImplemented
        return self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"AEndomorphism({self.images!r})"


@dataclass(frozen=True)
class Exact:
    """Verified two-sided inverse."""

    inverse: AEndomorphism


@dataclass(frozen=True)
class Truncated:
    """Partial inverse, correct through ``verified_degree``."""

    partial: AEndomorphism
    verified_degree: int


InversionResult = Union[Exact, Truncated]


def induced_substitution(phi: AEndomorphism) -> LinearSubstitution:
    """φ̃: z_i -> Σ_j α_j(f_i) z_j."""
    return LinearSubstitution(phi.field, tuple(f.linear for f in phi.images))


def _check_rank(phi: AEndomorphism, a: AElement) -> None:
    if phi.rank != a.rank or phi.field != a.field:
        raise StructuralMismatch(left=f"rank {phi.rank}/{phi.field}", right=f"rank {a.rank}/{a.field}")


def chain_rule_fox(phi: AEndomorphism, g: AElement) -> tuple[NCPoly, ...]:
    """Σ_i ∂(f_i) (∂g/∂x_i)^{φ̃}."""
    _check_rank(phi, g)
    s = induced_substitution(phi)
    alphabet = IndexAlphabet(phi.rank)
    result = [NCPoly.zero(alphabet, phi.field)] * phi.rank
    for f, u in zip(phi.images, fox(g)):
        if u.is_zero():
            continue
        twisted = apply_linear_substitution(u, s)
        result = [total + nc_mul(entry, twisted) for total, entry in zip(result, fox(f))]
    return tuple(result)


def apply_endo(phi: AEndomorphism, a: AElement, *, verify: bool = False) -> AElement:
    """φ(a), evaluated on the basis decomposition of ``a``.

    On A² right multiplication by f_k acts as the letter z_k^{φ̃}, so each
    group of basis terms with the same leading pair (x_i x_j) costs one
    product f_i f_j and one substitution. With ``verify`` the Fox columns of
    the result are compared with the chain rule.
    """
    _check_rank(phi, a)
    decomposition = basis_decompose(a)
    s = induced_substitution(phi)
    alphabet = IndexAlphabet(a.rank)
    result = AElement.zero(a.rank, a.field)
    for f, alpha in zip(phi.images, decomposition.linear):
        if alpha != 0:
            result = result + f.scale(alpha)
    grouped: dict[tuple[int, int], dict] = {}
    for (i, j, word), coefficient in decomposition.terms.items():
        grouped.setdefault((i, j), {})[word] = coefficient
    for (i, j), words in sorted(grouped.items()):
        product = a_mul(phi.image(i), phi.image(j))
        if product.is_zero():
            continue
        cofactor = apply_linear_substitution(NCPoly(alphabet, a.field, words), s)
        result = result + right_act(product, cofactor)
    if verify and fox(result) != chain_rule_fox(phi, a):
        raise AssertionError("chain rule violated")
    return result


def compose(phi: AEndomorphism, psi: AEndomorphism) -> AEndomorphism:
    """φ∘ψ: x_i -> φ(ψ(x_i))."""
    if phi.rank != psi.rank:
        raise DimensionMismatch(expected=phi.rank, actual=psi.rank)
    return AEndomorphism([apply_endo(phi, g) for g in psi.images])


def jacobian(phi: AEndomorphism) -> MatU:
    """J(φ) = [∂f_j/∂x_i]; column j is ∂(f_j)."""
    return MatU.from_columns(IndexAlphabet(phi.rank), phi.field, [fox(f) for f in phi.images])


def jacobian_inverse_check(phi: AEndomorphism, psi: AEndomorphism) -> bool:
    """J(φ) J(ψ)^{φ̃} = I_n, which holds whenever φ∘ψ is the identity."""
    return mat_mul_twisted(jacobian(phi), jacobian(psi), induced_substitution(phi)).is_identity()


def _filtration_level(corrections: Sequence, max_degree: int) -> FiltrationLevel:
    degrees = [c.lowest_degree() for c in corrections if not c.is_zero()]
    if not degrees:
        return FiltrationLevel(max_degree, at_least=True)
    level = min(degrees) - 1
    if level >= max_degree:
        return FiltrationLevel(max_degree, at_least=True)
    return FiltrationLevel(level)


def ia_level(phi: AEndomorphism, max_degree: int = DEFAULT_INVERSION_DEGREE) -> FiltrationLevel:
    """Largest k <= max_degree with f_i - x_i ∈ A^{k+1} for every i."""
    if max_degree < 1:
        raise InvalidArgument(name="max_degree", reason="must be at least 1")
    return _filtration_level(phi.corrections(), max_degree)


def _ensure_ia(phi: AEndomorphism) -> None:
    for i, f in enumerate(phi.images, start=1):
        if f.linear != generator(i, phi.rank, phi.field).linear:
            raise NotIA(index=i)


def invert_ia(phi: AEndomorphism, max_degree: int = DEFAULT_INVERSION_DEGREE) -> InversionResult:
    """Invert an IA-endomorphism by fixed-point iteration truncated at ``max_degree``.

    With φ = x + g the left inverse ψ = x + h satisfies h = -g(x + h). The
    iterate is exact when the untruncated residual vanishes and both
    compositions are the identity; anything else is reported as Truncated.
    """
    _ensure_ia(phi)
    if max_degree < 2:
        raise InvalidArgument(name="max_degree", reason="must be at least 2")
    n = phi.rank
    g = phi.corrections()
    h = [-c.truncate(max_degree) for c in g]
    for iteration in range(max_degree + 1):
        psi = _shift(h, n, phi.field)
        updated = [-apply_endo(psi, c).truncate(max_degree) for c in g]
        if updated == h:
            _LOGGER.debug("Inversion iterate stable after %s rounds", iteration)
            break
        h = updated
    psi = _shift(h, n, phi.field)
    residual = [hi + apply_endo(psi, c) for hi, c in zip(h, g)]
    if all(r.is_zero() for r in residual):
        if compose(phi, psi).is_identity() and compose(psi, phi).is_identity():
            return Exact(psi)
    residual_degrees = [r.lowest_degree() for r in residual if not r.is_zero()]
    if not residual_degrees:
        residual_degrees = [
            c.lowest_degree() for c in compose(phi, psi).corrections() if not c.is_zero()
        ]
    verified = min([max_degree] + [d - 1 for d in residual_degrees])
    _LOGGER.warning("Inversion did not terminate exactly; verified through degree %s", verified)
    return Truncated(psi, verified)


def _shift(h: Sequence[AElement], n: int, field: FieldSpec) -> AEndomorphism:
    return AEndomorphism([generator(i, n, field) + hi for i, hi in enumerate(h, start=1)])


def transposition(n: int, position: int, field: FieldSpec | None = None) -> AEndomorphism:
    """Linear automorphism swapping x_1 and x_position."""
    field = field or FieldSpec.rationals()
    matrix = [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
    if position != 1:
        matrix[0][0] = matrix[position - 1][position - 1] = field.zero
        matrix[0][position - 1] = matrix[position - 1][0] = field.one
    return AEndomorphism.linear(matrix, field)


def chein(f: AElement, n: int, position: int = 1) -> AEndomorphism:
    """δ = (x_1 + f, x_2, ..., x_n), accepted iff ∂f/∂x_1 = 0.

    For another position p the test is ∂f/∂x_p = 0 and the result is
    obtained by conjugating with the transposition (1 p).
    """
    if f.rank != n:
        raise DimensionMismatch(expected=n, actual=f.rank)
    if not 1 <= position <= n:
        raise InvalidArgument(name="position", reason=f"must lie in 1..{n}")
    if not f.in_a_squared():
        raise NotInASquared(element=f)
    witness = fox(f)[position - 1]
    if not witness.is_zero():
        raise NotChein(position=position, witness=witness)
    if position != 1:
        swap = transposition(n, position, f.field)
        delta = chein(apply_endo(swap, f), n)
        return compose(swap, compose(delta, swap))
    return AEndomorphism.moving(1, generator(1, n, f.field) + f)


def chein_inverse(f: AElement, n: int, position: int = 1) -> AEndomorphism:
    """(x_1 - f, x_2, ..., x_n) for an accepted ``f``."""
    return chein(-f, n, position)


def in_chein_ideal(f: AElement) -> bool:
    """f ∈ A² lies in the ideal generated by x_i x_j with i, j > 1."""
    if not f.in_a_squared():
        return False
    return all(j > 1 for (_, j, _) in basis_decompose(f).terms)


def chein_factors(f: AElement, n: int) -> list[AEndomorphism]:
    """Factor an accepted Chein automorphism into δ_ij = (x_1 + (x_i x_j)u_ij, x_2, ..., x_n)."""
    chein(f, n)
    grouped: dict[tuple[int, int], list[tuple[BasisKey, FieldScalar]]] = {}
    for key, coefficient in basis_decompose(f).items():
        grouped.setdefault(key[:2], []).append((key, coefficient))
    return [chein(element_from_terms(n, f.field, terms=terms), n) for _, terms in sorted(grouped.items())]


def is_elementary(phi: AEndomorphism) -> bool:
    """(x_1, ..., αx_i + f, ..., x_n) with α ≠ 0 and f free of x_i."""
    moved = [i for i, c in enumerate(phi.corrections(), start=1) if not c.is_zero()]
    if not moved:
        return True
    if len(moved) > 1:
        return False
    i = moved[0]
    image = phi.image(i)
    if image.linear[i - 1] == 0:
        return False
    if not image.columns[i - 1].is_zero():
        return False
    return all(i not in column.letters() for column in image.columns)


@dataclass
class RigidityReport:
    """Outcome of the rank-2 search for nonlinear automorphisms."""

    degree_bound: int
    samples: int
    seed: int
    max_degree: int
    candidates: int = 0
    counterexamples: list[AEndomorphism] = dataclass_field(default_factory=list)
    shape_violations: list[AEndomorphism] = dataclass_field(default_factory=list)
    control_exact: bool = False


def first_column_shape(phi: AEndomorphism) -> bool:
    """First column of J(φ) - I is (z_2 h, -z_1 h)ᵗ for one h ∈ U.

    Antisymmetry forces this for every IA-endomorphism of rank 2. The
    rigidity search asserts it as an internal consistency check: a violation
    is a kernel defect, never a property of φ.
    """
    correction = phi.corrections()[0]
    a, c = correction.columns
    a_parts = left_decompose(a, 2)
    c_parts = left_decompose(c, 2)
    return a_parts[0].is_zero() and c_parts[1].is_zero() and c_parts[0] == -a_parts[1]


def _random_correction(rng: random.Random, degree_bound: int, field: FieldSpec) -> AElement:
    keys = [key for d in range(2, degree_bound + 1) for key in basis_monomials(2, d)]
    count = rng.randint(0, 3)
    terms = [(rng.choice(keys), rng.choice([-2, -1, 1, 2, 3])) for _ in range(count)]
    return element_from_terms(2, field, terms=terms)


def rank2_rigidity_search(
    degree_bound: int,
    samples: int,
    seed: int,
    field: FieldSpec | None = None,
    max_degree: int | None = None,
) -> RigidityReport:
    """Look for IA-automorphisms of rank 2 with corrections of degree <= ``degree_bound``.

    Every single basis monomial correction at either position is tried,
    followed by ``samples`` random candidates; each must fail to invert
    exactly through ``max_degree`` (default twice the bound).
    """
    field = field or FieldSpec.rationals()
    max_degree = max_degree or 2 * degree_bound
    report = RigidityReport(degree_bound, samples, seed, max_degree)
    report.control_exact = isinstance(invert_ia(AEndomorphism.identity(2, field), max_degree), Exact)

    candidates: list[AEndomorphism] = []
    for d in range(2, degree_bound + 1):
        for i, j, word in basis_monomials(2, d):
            for position in (1, 2):
                image = generator(position, 2, field) + basis_monomial(i, j, word, 2, field)
                candidates.append(AEndomorphism.moving(position, image))
    for index in range(samples):
        rng = random.Random(derive_seed(seed, index))
        corrections = [_random_correction(rng, degree_bound, field) for _ in range(2)]
        if all(c.is_zero() for c in corrections):
            corrections[0] = basis_monomial(2, 1, (), 2, field)
        candidates.append(AEndomorphism([generator(i, 2, field) + c for i, c in enumerate(corrections, start=1)]))

    for candidate in candidates:
        report.candidates += 1
        if not candidate.corrections()[0].is_zero() and not first_column_shape(candidate):
            report.shape_violations.append(candidate)
        if isinstance(invert_ia(candidate, max_degree), Exact):
            report.counterexamples.append(candidate)
    _LOGGER.debug(
        "Rank 2 search checked %s candidates, %s counterexamples", report.candidates, len(report.counterexamples)
    )
    return report
