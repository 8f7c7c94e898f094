"""Cyclic words: the quotient U/[U,U] as coefficient maps on necklaces."""
from __future__ import annotations

from collections.abc import Iterable, Iterator

from ..exceptions import StructuralMismatch
from .field import FieldScalar, FieldSpec
from .ncpoly import EMPTY_WORD, Alphabet, NCPoly, Word


def necklace(word: Word, alphabet: Alphabet) -> Word:
    """Lexicographically minimal rotation of ``word``."""
    if not word:
        return EMPTY_WORD
    return min(
        (word[i:] + word[:i] for i in range(len(word))),
        key=lambda rotation: tuple(alphabet.sort_key(label) for label in rotation),
    )


class CyclicPoly:
    """Finitely supported map necklace -> scalar, zero coefficients stripped."""

    __slots__ = ("alphabet", "field", "_terms")

    def __init__(self, alphabet: Alphabet, field: FieldSpec, terms: Iterable[tuple[Word, FieldScalar]] = ()) -> None:
        """Accumulate (word, coefficient) pairs, rotating each word to its necklace."""
        self.alphabet = alphabet
        self.field = field
        collected: dict[Word, FieldScalar] = {}
        for word, coefficient in terms:
            key = necklace(tuple(word), alphabet)
            collected[key] = field.normalize(collected.get(key, 0) + coefficient)
        self._terms = {key: value for key, value in collected.items() if value != 0}

    def items(self) -> Iterator[tuple[Word, FieldScalar]]:
        return iter(self._terms.items())

    def terms(self) -> list[tuple[Word, FieldScalar]]:
        return sorted(self._terms.items(), key=lambda item: self.alphabet.word_key(item[0]))

    def coefficient(self, word: Word) -> FieldScalar:
        return self._terms.get(necklace(tuple(word), self.alphabet), self.field.zero)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other: CyclicPoly) -> CyclicPoly:
        if self.alphabet != other.alphabet or self.field != other.field:
            raise StructuralMismatch(left=self.alphabet, right=other.alphabet)
        return CyclicPoly(self.alphabet, self.field, [*self.items(), *other.items()])

    def __neg__(self) -> CyclicPoly:
        return CyclicPoly(self.alphabet, self.field, [(w, -c) for w, c in self.items()])

    def __sub__(self, other: CyclicPoly) -> CyclicPoly:
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CyclicPoly):
            return NotImplemented
        return self.alphabet == other.alphabet and self.field == other.field and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.alphabet, self.field, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"CyclicPoly({self.terms()!r})"


def cyclic_project(p: NCPoly) -> CyclicPoly:
    """Image of ``p`` in U/[U,U]; zero exactly when every necklace class sums to zero."""
    return CyclicPoly(p.alphabet, p.field, p.items())
