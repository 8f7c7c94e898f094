"""The free metabelian anticommutative algebra A of rank n.

Elements are stored in module form, as their image under the embedding
x_i -> y_i + t_i into Y ⊕ T: a linear part α (the Y component) and the
columns r_1..r_n with u_i = α_i + r_i the Fox derivatives. Product of two
elements:

    (a_1 + m_1)(a_2 + m_2) = m_1 R_{a_2} - m_2 R_{a_1}

so products have zero linear part and A² A² = 0 holds structurally.
"""
from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Tuple

from ..exceptions import (
    DimensionMismatch,
    InvalidArgument,
    InvalidIndex,
    NotAntisymmetric,
    NotInAugmentationIdeal,
    StructuralMismatch,
)
from .field import FieldScalar, FieldSpec
from .ncpoly import (
    IndexAlphabet,
    NCPoly,
    Word,
    left_decompose,
    nc_mul,
    poly_sum,
)

_LOGGER = logging.getLogger(__name__)

# (i, j, k_1..k_s) with i > j: the left-normed monomial (((x_i x_j) x_{k_1}) ...) x_{k_s}
BasisKey = Tuple[int, int, Word]


class AElement:
    """Element y + Σ t_i (α_i + r_i) of A, with every r_i in the augmentation ideal."""

    __slots__ = ("rank", "field", "linear", "columns", "_hash")

    def __init__(
        self,
        rank: int,
        field: FieldSpec,
        linear: Sequence[FieldScalar],
        columns: Sequence[NCPoly],
        *,
        check: bool = True,
    ) -> None:
        """Initialize; with ``check`` the columns must satisfy the antisymmetry conditions."""
        if rank < 1:
            raise InvalidArgument(name="rank", reason="rank must be at least 1")
        if len(linear) != rank or len(columns) != rank:
            raise DimensionMismatch(expected=rank, actual=max(len(linear), len(columns)))
        self.rank = rank
        self.field = field
        self.linear = tuple(field.element(c) if check else c for c in linear)
        self.columns = tuple(columns)
        self._hash: int | None = None
        if check:
            validate_columns(self.columns, rank)

    @classmethod
    def _wrap(
        cls, rank: int, field: FieldSpec, linear: Sequence[FieldScalar], columns: Sequence[NCPoly]
    ) -> AElement:
        return cls(rank, field, linear, columns, check=False)

    @classmethod
    def zero(cls, rank: int, field: FieldSpec) -> AElement:
        zero = NCPoly.zero(IndexAlphabet(rank), field)
        return cls._wrap(rank, field, (field.zero,) * rank, (zero,) * rank)

    @property
    def alphabet(self) -> IndexAlphabet:
        return IndexAlphabet(self.rank)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.linear) and all(r.is_zero() for r in self.columns)

    def in_a_squared(self) -> bool:
        return all(c == 0 for c in self.linear)

    def lowest_degree(self) -> int | None:
        """Smallest degree of a nonzero homogeneous component; None for zero."""
        if any(c != 0 for c in self.linear):
            return 1
        lengths = [r.lowest_degree() for r in self.columns if not r.is_zero()]
        if not lengths:
            return None
        return 1 + min(lengths)

    def degree(self) -> int:
        """Largest degree of a nonzero component; -1 for zero."""
        top = max((r.degree() for r in self.columns), default=-1)
        if top >= 1:
            return 1 + top
        return 1 if any(c != 0 for c in self.linear) else -1

    def component(self, degree: int) -> AElement:
        """Homogeneous component of the given degree."""
        if degree == 1:
            return self._wrap(self.rank, self.field, self.linear, AElement.zero(self.rank, self.field).columns)
        return self._wrap(
            self.rank,
            self.field,
            (self.field.zero,) * self.rank,
            tuple(r.homogeneous(degree - 1) for r in self.columns),
        )

    def truncate(self, max_degree: int) -> AElement:
        """Drop components of degree above ``max_degree``."""
        linear = self.linear if max_degree >= 1 else (self.field.zero,) * self.rank
        return self._wrap(self.rank, self.field, linear, tuple(r.truncate(max_degree - 1) for r in self.columns))

    def _check(self, other: AElement) -> None:
        if self.rank != other.rank or self.field != other.field:
            raise StructuralMismatch(left=f"rank {self.rank}/{self.field}", right=f"rank {other.rank}/{other.field}")

    def __add__(self, other: AElement) -> AElement:
        self._check(other)
        field = self.field
        return self._wrap(
            self.rank,
            field,
            tuple(field.normalize(a + b) for a, b in zip(self.linear, other.linear)),
            tuple(a + b for a, b in zip(self.columns, other.columns)),
        )

    def __neg__(self) -> AElement:
        field = self.field
        return self._wrap(
            self.rank, field, tuple(field.normalize(-c) for c in self.linear), tuple(-r for r in self.columns)
        )

    def __sub__(self, other: AElement) -> AElement:
        return self + (-other)

    def scale(self, scalar: FieldScalar) -> AElement:
        field = self.field
        return self._wrap(
            self.rank,
            field,
            tuple(field.normalize(c * scalar) for c in self.linear),
            tuple(r.scale(scalar) for r in self.columns),
        )

    def __mul__(self, other: AElement | int | Fraction) -> AElement:
        if isinstance(other, AElement):
            return a_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other: int | Fraction) -> AElement:
        return self.scale(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AElement):
            return NotImplemented
        return (
            self.rank == other.rank
            and self.field == other.field
            and self.linear == other.linear
            and self.columns == other.columns
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rank, self.field, self.linear, self.columns))
        return self._hash

    def __repr__(self) -> str:
        return f"AElement(linear={self.linear!r}, columns={self.columns!r})"


@dataclass(frozen=True)
class AntisymmetricFamily:
    """Left cofactors w_j^{(i)}; ``entries[i-1][j-1]`` holds w_j^{(i)}."""

    rank: int
    entries: tuple[tuple[NCPoly, ...], ...]

    def __post_init__(self) -> None:
        n = self.rank
        if len(self.entries) != n or any(len(row) != n for row in self.entries):
            raise DimensionMismatch(expected=n, actual=len(self.entries))
        for i in range(n):
            if not self.entries[i][i].is_zero():
                raise NotAntisymmetric(i=i + 1, j=i + 1)
            for j in range(i + 1, n):
                if self.entries[i][j] != -self.entries[j][i]:
                    raise NotAntisymmetric(i=i + 1, j=j + 1)

    def w(self, i: int, j: int) -> NCPoly:
        """w_j^{(i)}, 1-based."""
        return self.entries[i - 1][j - 1]

    def is_zero(self) -> bool:
        return all(entry.is_zero() for row in self.entries for entry in row)


@dataclass
class CanonicalSum:
    """Coordinates in the basis x_1..x_n plus the left-normed monomials (((x_i x_j)x_k1)...)x_ks, i > j."""

    rank: int
    field: FieldSpec
    linear: tuple[FieldScalar, ...]
    terms: dict[BasisKey, FieldScalar] = dataclass_field(default_factory=dict)

    def items(self) -> list[tuple[BasisKey, FieldScalar]]:
        """Basis terms in canonical order: degree, then (i, j, word)."""
        return sorted(self.terms.items(), key=lambda item: basis_key_order(item[0]))

    def is_zero(self) -> bool:
        return not self.terms and all(c == 0 for c in self.linear)


def basis_key_order(key: BasisKey) -> tuple:
    i, j, word = key
    return (basis_key_degree(key), i, j, word)


def basis_key_degree(key: BasisKey) -> int:
    return 2 + len(key[2])


def generator(i: int, n: int, field: FieldSpec | None = None) -> AElement:
    """x_i: linear part e_i, all columns zero, so ∂(x_i) = e_iᵗ."""
    field = field or FieldSpec.rationals()
    if n < 1:
        raise InvalidArgument(name="rank", reason="rank must be at least 1")
    if not 1 <= i <= n:
        raise InvalidIndex(index=i, rank=n)
    zero = NCPoly.zero(IndexAlphabet(n), field)
    return AElement._wrap(n, field, tuple(field.one if k == i else field.zero for k in range(1, n + 1)), (zero,) * n)


def generators(n: int, field: FieldSpec | None = None) -> list[AElement]:
    return [generator(i, n, field) for i in range(1, n + 1)]


def linear_form(a: AElement) -> NCPoly:
    """λ(a) = Σ_j α_j z_j, the right multiplication by the linear part of ``a``."""
    return NCPoly._wrap(a.alphabet, a.field, {(j,): c for j, c in enumerate(a.linear, start=1) if c != 0})


def fox(a: AElement) -> tuple[NCPoly, ...]:
    """Fox derivatives u_i = α_i + r_i."""
    alphabet = a.alphabet
    return tuple(
        r + NCPoly.constant(alphabet, a.field, alpha) if alpha != 0 else r
        for alpha, r in zip(a.linear, a.columns)
    )


def a_mul(a: AElement, b: AElement) -> AElement:
    """Product in A; column i is u_i(a) λ(b) - u_i(b) λ(a)."""
    a._check(b)
    lam_a = linear_form(a)
    lam_b = linear_form(b)
    zero_linear = (a.field.zero,) * a.rank
    if lam_a.is_zero() and lam_b.is_zero():
        return AElement.zero(a.rank, a.field)
    fox_a = fox(a)
    fox_b = fox(b)
    columns = []
    for u_a, u_b in zip(fox_a, fox_b):
        column = nc_mul(u_a, lam_b) if not lam_b.is_zero() else NCPoly.zero(a.alphabet, a.field)
        if not lam_a.is_zero():
            column = column - nc_mul(u_b, lam_a)
        columns.append(column)
    return AElement._wrap(a.rank, a.field, zero_linear, tuple(columns))


def right_act(a: AElement, u: NCPoly) -> AElement:
    """a·u for a ∈ A² and u ∈ U: each letter z_k right-multiplies by x_k."""
    if not a.in_a_squared():
        raise InvalidArgument(name="a", reason="right action of U is defined on A² only")
    return AElement._wrap(a.rank, a.field, a.linear, tuple(nc_mul(r, u) for r in a.columns))


def validate_columns(r: Sequence[NCPoly], n: int) -> AntisymmetricFamily:
    """Recover the antisymmetric family behind the columns of an A²-element.

    Each r_i is split as Σ_j z_j w_j^{(i)}; the w must satisfy
    w_j^{(i)} = -w_i^{(j)} and w_i^{(i)} = 0, and then r_n is re-derived from
    r_1..r_{n-1} as a consistency check.
    """
    if len(r) != n:
        raise DimensionMismatch(expected=n, actual=len(r))
    for column in r:
        if column.augmentation() != 0:
            raise NotInAugmentationIdeal(constant=column.augmentation())
    entries = tuple(tuple(left_decompose(column, n)) for column in r)
    family = AntisymmetricFamily(n, entries)
    if n >= 1 and r:
        alphabet = r[0].alphabet
        field = r[0].field
        derived = poly_sum(
            (-nc_mul(NCPoly.letter(alphabet, field, j), family.w(j, n)) for j in range(1, n)),
            alphabet,
            field,
        )
        if derived != r[n - 1]:
            raise NotAntisymmetric(i=n, j=n)
    return family


def basis_monomial(i: int, j: int, word: Sequence[int], n: int, field: FieldSpec | None = None) -> AElement:
    """(((x_i x_j) x_{k_1}) ...) x_{k_s} via its module image (t_i z_j - t_j z_i) z_{k_1}...z_{k_s}."""
    field = field or FieldSpec.rationals()
    for index in (i, j, *word):
        if not 1 <= index <= n:
            raise InvalidIndex(index=index, rank=n)
    alphabet = IndexAlphabet(n)
    word = tuple(word)
    columns = [NCPoly.zero(alphabet, field)] * n
    if i != j:
        columns[i - 1] = NCPoly.monomial(alphabet, field, (j,) + word)
        columns[j - 1] = NCPoly.monomial(alphabet, field, (i,) + word, field.normalize(-1))
    return AElement._wrap(n, field, (field.zero,) * n, tuple(columns))


def leading_term(key: BasisKey) -> tuple[int, Word]:
    """Deglex-leading monomial t_i z_j z_{k_1}...z_{k_s} of a basis monomial's image."""
    i, j, word = key
    return (i, (j,) + tuple(word))


def basis_monomials(n: int, degree: int) -> list[BasisKey]:
    """Basis keys of degree ``degree`` >= 2 in canonical order; there are C(n,2)·n^{d-2}."""
    if degree < 2:
        raise InvalidArgument(name="degree", reason="basis monomials of A² start at degree 2")
    return [
        (i, j, word)
        for i in range(2, n + 1)
        for j in range(1, i)
        for word in itertools.product(range(1, n + 1), repeat=degree - 2)
    ]


def reconstruct(w: AntisymmetricFamily, field: FieldSpec | None = None) -> AElement:
    """g = Σ_{j<i} (x_i x_j) w_j^{(i)}."""
    n = w.rank
    if field is None:
        field = next((e.field for row in w.entries for e in row), FieldSpec.rationals())
    result = AElement.zero(n, field)
    for i in range(2, n + 1):
        for j in range(1, i):
            cofactor = w.w(i, j)
            if cofactor.is_zero():
                continue
            result = result + right_act(a_mul(generator(i, n, field), generator(j, n, field)), cofactor)
    return result


def basis_decompose(a: AElement) -> CanonicalSum:
    """Coordinates of ``a`` in the left-normed monomial basis."""
    family = validate_columns(a.columns, a.rank)
    terms: dict[BasisKey, FieldScalar] = {}
    for i in range(2, a.rank + 1):
        for j in range(1, i):
            for word, coefficient in family.w(i, j).items():
                terms[(i, j, word)] = coefficient
    return CanonicalSum(a.rank, a.field, a.linear, terms)


def basis_compose(s: CanonicalSum) -> AElement:
    """Inverse of ``basis_decompose``."""
    n = s.rank
    field = s.field
    alphabet = IndexAlphabet(n)
    columns: list[dict[Word, FieldScalar]] = [{} for _ in range(n)]
    for (i, j, word), coefficient in s.terms.items():
        if not n >= i > j >= 1:
            raise InvalidIndex(index=i if i > n else j, rank=n)
        coefficient = field.normalize(coefficient)
        plus = (j,) + tuple(word)
        minus = (i,) + tuple(word)
        columns[i - 1][plus] = field.normalize(columns[i - 1].get(plus, 0) + coefficient)
        columns[j - 1][minus] = field.normalize(columns[j - 1].get(minus, 0) - coefficient)
    return AElement._wrap(
        n,
        field,
        tuple(field.element(c) for c in s.linear),
        tuple(NCPoly._wrap(alphabet, field, {w: c for w, c in column.items() if c != 0}) for column in columns),
    )


def element_from_terms(
    n: int,
    field: FieldSpec,
    linear: Mapping[int, FieldScalar] | None = None,
    terms: Iterable[tuple[BasisKey, FieldScalar]] = (),
) -> AElement:
    """Convenience constructor from linear coefficients and basis terms."""
    linear_part = [field.zero] * n
    for index, coefficient in (linear or {}).items():
        if not 1 <= index <= n:
            raise InvalidIndex(index=index, rank=n)
        linear_part[index - 1] = field.element(coefficient)
    collected: dict[BasisKey, FieldScalar] = {}
    for (i, j, word), coefficient in terms:
        key = (i, j, tuple(word))
        collected[key] = field.normalize(collected.get(key, 0) + field.element(coefficient))
    return basis_compose(CanonicalSum(n, field, tuple(linear_part), collected))
