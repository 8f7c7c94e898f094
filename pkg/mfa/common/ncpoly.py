"""Noncommutative polynomials over an ordered alphabet.

Houses the free associative algebra U on z_1..z_n (labels are the indices)
and the enveloping algebra U(B) of the free anticommutative algebra (labels
are interned regular monomials, see ``anticomm.MonomialAlphabet``).
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Tuple

import sympy

from ..exceptions import (
    DimensionMismatch,
    InvalidIndex,
    NotInAugmentationIdeal,
    StructuralMismatch,
)
from .field import FieldScalar, FieldSpec

Word = Tuple[int, ...]

EMPTY_WORD: Word = ()


class Alphabet:
    """Ordered set of generator labels."""

    def sort_key(self, label: int) -> Any:
        raise NotImplementedError

    def format_label(self, label: int) -> str:
        raise NotImplementedError

    def word_key(self, word: Word) -> tuple:
        """Degree first, then lexicographic by label order."""
        return (len(word), tuple(self.sort_key(label) for label in word))


@dataclass(frozen=True)
class IndexAlphabet(Alphabet):
    """Labels 1..rank standing for z_i = R_{y_i}."""

    rank: int

    def sort_key(self, label: int) -> int:
        return label

    def format_label(self, label: int) -> str:
        return f"z{label}"

    def check(self, label: int) -> None:
        if not 1 <= label <= self.rank:
            raise InvalidIndex(index=label, rank=self.rank)


def word_compare(alphabet: Alphabet, left: Word, right: Word) -> int:
    """Three-way comparison of words: -1, 0 or 1."""
    left_key = alphabet.word_key(left)
    right_key = alphabet.word_key(right)
    return (left_key > right_key) - (left_key < right_key)


class NCPoly:
    """Finitely supported map Word -> FieldScalar with no zero coefficients."""

    __slots__ = ("alphabet", "field", "_terms", "_hash")

    def __init__(
        self,
        alphabet: Alphabet,
        field: FieldSpec,
        terms: Mapping[Word, FieldScalar] | Iterable[tuple[Word, FieldScalar]] | None = None,
    ) -> None:
        """Build from (word, coefficient) pairs, summing repeated words."""
        self.alphabet = alphabet
        self.field = field
        collected: dict[Word, FieldScalar] = {}
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        for word, coefficient in items:
            word = tuple(word)
            collected[word] = collected.get(word, 0) + coefficient
        self._terms = {
            word: value
            for word, coefficient in collected.items()
            if (value := field.element(coefficient)) != 0
        }
        self._hash: int | None = None

    @classmethod
    def _wrap(cls, alphabet: Alphabet, field: FieldSpec, terms: dict[Word, FieldScalar]) -> NCPoly:
        poly = cls.__new__(cls)
        poly.alphabet = alphabet
        poly.field = field
        poly._terms = terms
        poly._hash = None
        return poly

    @classmethod
    def zero(cls, alphabet: Alphabet, field: FieldSpec) -> NCPoly:
        return cls._wrap(alphabet, field, {})

    @classmethod
    def constant(cls, alphabet: Alphabet, field: FieldSpec, value: FieldScalar) -> NCPoly:
        value = field.normalize(value)
        return cls._wrap(alphabet, field, {EMPTY_WORD: value} if value != 0 else {})

    @classmethod
    def one(cls, alphabet: Alphabet, field: FieldSpec) -> NCPoly:
        return cls.constant(alphabet, field, field.one)

    @classmethod
    def monomial(
        cls, alphabet: Alphabet, field: FieldSpec, word: Sequence[int], coefficient: FieldScalar | None = None
    ) -> NCPoly:
        value = field.one if coefficient is None else field.normalize(coefficient)
        return cls._wrap(alphabet, field, {tuple(word): value} if value != 0 else {})

    @classmethod
    def letter(cls, alphabet: Alphabet, field: FieldSpec, label: int) -> NCPoly:
        return cls.monomial(alphabet, field, (label,))

    def items(self) -> Iterator[tuple[Word, FieldScalar]]:
        return iter(self._terms.items())

    def terms(self) -> list[tuple[Word, FieldScalar]]:
        """Terms in canonical word order."""
        return sorted(self._terms.items(), key=lambda item: self.alphabet.word_key(item[0]))

    def coefficient(self, word: Sequence[int]) -> FieldScalar:
        return self._terms.get(tuple(word), self.field.zero)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def augmentation(self) -> FieldScalar:
        """Coefficient of the empty word."""
        return self._terms.get(EMPTY_WORD, self.field.zero)

    def degree(self) -> int:
        """Largest word length; -1 for zero."""
        return max((len(word) for word in self._terms), default=-1)

    def lowest_degree(self) -> int | None:
        return min((len(word) for word in self._terms), default=None)

    def letters(self) -> set[int]:
        return {label for word in self._terms for label in word}

    def homogeneous(self, length: int) -> NCPoly:
        return self._wrap(
            self.alphabet, self.field, {w: c for w, c in self._terms.items() if len(w) == length}
        )

    def truncate(self, max_length: int) -> NCPoly:
        """Drop words longer than ``max_length``."""
        return self._wrap(
            self.alphabet, self.field, {w: c for w, c in self._terms.items() if len(w) <= max_length}
        )

    def _check(self, other: NCPoly) -> None:
        if self.alphabet != other.alphabet or self.field != other.field:
            raise StructuralMismatch(
                left=f"{self.alphabet}/{self.field}", right=f"{other.alphabet}/{other.field}"
            )

    def __add__(self, other: NCPoly) -> NCPoly:
        self._check(other)
        field = self.field
        terms = dict(self._terms)
        for word, coefficient in other._terms.items():
            value = field.normalize(terms.get(word, 0) + coefficient)
            if value == 0:
                terms.pop(word, None)
            else:
                terms[word] = value
        return self._wrap(self.alphabet, field, terms)

    def __neg__(self) -> NCPoly:
        field = self.field
        return self._wrap(self.alphabet, field, {w: field.normalize(-c) for w, c in self._terms.items()})

    def __sub__(self, other: NCPoly) -> NCPoly:
        return self + (-other)

    def scale(self, scalar: FieldScalar) -> NCPoly:
        field = self.field
        scalar = field.normalize(scalar)
        if scalar == 0:
            return self.zero(self.alphabet, field)
        return self._wrap(self.alphabet, field, {w: field.normalize(c * scalar) for w, c in self._terms.items()})

    def __mul__(self, other: NCPoly | int | Fraction) -> NCPoly:
        if isinstance(other, NCPoly):
            return nc_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other: int | Fraction) -> NCPoly:
        return self.scale(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.alphabet == other.alphabet and self.field == other.field and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.alphabet, self.field, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"NCPoly({self.terms()!r})"


def nc_mul(p: NCPoly, q: NCPoly) -> NCPoly:
    """Free associative product: bilinear extension of concatenation."""
    p._check(q)
    field = p.field
    terms: dict[Word, FieldScalar] = {}
    for left, a in p._terms.items():
        for right, b in q._terms.items():
            word = left + right
            terms[word] = terms.get(word, 0) + a * b
    return NCPoly._wrap(
        p.alphabet, field, {w: v for w, c in terms.items() if (v := field.normalize(c)) != 0}
    )


def poly_sum(polys: Iterable[NCPoly], alphabet: Alphabet, field: FieldSpec) -> NCPoly:
    total = NCPoly.zero(alphabet, field)
    for poly in polys:
        total = total + poly
    return total


@dataclass(frozen=True)
class LinearSubstitution:
    """n×n matrix read as z_i -> Σ_j rows[i][j] z_j (0-based storage)."""

    field: FieldSpec
    rows: tuple[tuple[FieldScalar, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.rows)
        for row in self.rows:
            if len(row) != n:
                raise DimensionMismatch(expected=n, actual=len(row))

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> LinearSubstitution:
        return cls(field, tuple(tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def alphabet(self) -> IndexAlphabet:
        return IndexAlphabet(self.n)

    def is_identity(self) -> bool:
        return all(
            (c == 1) if i == j else (c == 0)
            for i, row in enumerate(self.rows)
            for j, c in enumerate(row)
        )

    def image(self, label: int) -> NCPoly:
        """Linear form substituted for z_label."""
        row = self.rows[label - 1]
        return NCPoly._wrap(
            self.alphabet,
            self.field,
            {(j + 1,): c for j, c in enumerate(row) if c != 0},
        )


def apply_linear_substitution(p: NCPoly, s: LinearSubstitution) -> NCPoly:
    """Extend ``s`` to the algebra endomorphism of U fixing 1 and apply it."""
    if not isinstance(p.alphabet, IndexAlphabet):
        raise StructuralMismatch(left=p.alphabet, right=s.alphabet)
    if p.alphabet.rank != s.n:
        raise DimensionMismatch(expected=p.alphabet.rank, actual=s.n)
    if p.field != s.field:
        raise StructuralMismatch(left=p.field, right=s.field)
    if s.is_identity():
        return p
    images = {label: s.image(label) for label in range(1, s.n + 1)}
    cache: dict[Word, NCPoly] = {EMPTY_WORD: NCPoly.one(p.alphabet, p.field)}

    def substitute(word: Word) -> NCPoly:
        if word not in cache:
            cache[word] = nc_mul(substitute(word[:-1]), images[word[-1]])
        return cache[word]

    result = NCPoly.zero(p.alphabet, p.field)
    for word, coefficient in p.terms():
        result = result + substitute(word).scale(coefficient)
    return result


def left_decompose(r: NCPoly, n: int) -> list[NCPoly]:
    """Return w_1..w_n (0-based list) with r = Σ_j z_j w_j.

    Every word is split at its first letter; the decomposition is unique.
    """
    if r.augmentation() != 0:
        raise NotInAugmentationIdeal(constant=r.augmentation())
    buckets: list[dict[Word, FieldScalar]] = [{} for _ in range(n)]
    for word, coefficient in r.items():
        head = word[0]
        if not 1 <= head <= n:
            raise InvalidIndex(index=head, rank=n)
        buckets[head - 1][word[1:]] = coefficient
    return [NCPoly._wrap(r.alphabet, r.field, bucket) for bucket in buckets]


def left_recompose(w: Sequence[NCPoly], alphabet: Alphabet, field: FieldSpec) -> NCPoly:
    """Σ_j z_j w_j, the inverse of ``left_decompose``."""
    terms: dict[Word, FieldScalar] = {}
    for j, cofactor in enumerate(w, start=1):
        for word, coefficient in cofactor.items():
            terms[(j,) + word] = coefficient
    return NCPoly._wrap(alphabet, field, terms)


class MatU:
    """Square matrix over U (or U(B)); ``rows[i][j]`` is the (i+1, j+1) entry."""

    __slots__ = ("alphabet", "field", "rows")

    def __init__(self, alphabet: Alphabet, field: FieldSpec, rows: Sequence[Sequence[NCPoly]]) -> None:
        """Initialize from rows of equal length."""
        n = len(rows)
        for row in rows:
            if len(row) != n:
                raise DimensionMismatch(expected=n, actual=len(row))
            for entry in row:
                if entry.alphabet != alphabet or entry.field != field:
                    raise StructuralMismatch(left=f"{alphabet}/{field}", right=f"{entry.alphabet}/{entry.field}")
        self.alphabet = alphabet
        self.field = field
        self.rows = tuple(tuple(row) for row in rows)

    @classmethod
    def identity(cls, n: int, alphabet: Alphabet, field: FieldSpec) -> MatU:
        one = NCPoly.one(alphabet, field)
        zero = NCPoly.zero(alphabet, field)
        return cls(alphabet, field, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, alphabet: Alphabet, field: FieldSpec, columns: Sequence[Sequence[NCPoly]]) -> MatU:
        n = len(columns)
        return cls(alphabet, field, [[columns[j][i] for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.rows)

    def column(self, j: int) -> tuple[NCPoly, ...]:
        """Column ``j`` (1-based)."""
        return tuple(row[j - 1] for row in self.rows)

    def trace(self) -> NCPoly:
        return poly_sum((self.rows[i][i] for i in range(self.n)), self.alphabet, self.field)

    def substitute(self, s: LinearSubstitution) -> MatU:
        """Apply ``s`` entrywise: the matrix M^{s}."""
        return MatU(self.alphabet, self.field, [[apply_linear_substitution(e, s) for e in row] for row in self.rows])

    def __mul__(self, other: MatU) -> MatU:
        if self.n != other.n:
            raise DimensionMismatch(expected=self.n, actual=other.n)
        n = self.n
        return MatU(
            self.alphabet,
            self.field,
            [
                [poly_sum((nc_mul(self.rows[i][k], other.rows[k][j]) for k in range(n)), self.alphabet, self.field)
                 for j in range(n)]
                for i in range(n)
            ],
        )

    def is_identity(self) -> bool:
        return self == MatU.identity(self.n, self.alphabet, self.field)

    def constant_part(self) -> tuple[tuple[FieldScalar, ...], ...]:
        return tuple(tuple(entry.augmentation() for entry in row) for row in self.rows)

    def constant_determinant(self) -> FieldScalar:
        """Exact determinant of the constant part."""
        matrix = sympy.Matrix(
            [[sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) for c in row] for row in self.constant_part()]
        )
        det = sympy.Rational(matrix.det())
        return self.field.element(Fraction(int(det.p), int(det.q)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatU):
            return NotImplemented
        return self.alphabet == other.alphabet and self.field == other.field and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.alphabet, self.field, self.rows))

    def __repr__(self) -> str:
        return f"MatU({self.rows!r})"


def mat_mul_twisted(p: MatU, q: MatU, s: LinearSubstitution) -> MatU:
    """P · Q^{s}; with ``s`` the identity this is the plain product."""
    if p.n != q.n or p.n != s.n:
        raise DimensionMismatch(expected=p.n, actual=q.n if q.n != p.n else s.n)
    return p * q.substitute(s)
