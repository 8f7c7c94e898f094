"""The free anticommutative algebra B of rank n.

Basis: regular monomials, binary trees whose left factor exceeds the right
one at every node. Monomials are interned in a process-wide registry so
that equal trees are the same object; the registry id doubles as the
letter R_u of the enveloping algebra U(B).
"""
from __future__ import annotations

import logging
import threading
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from ..exceptions import (
    DimensionMismatch,
    IdentityEndomorphism,
    InvalidArgument,
    InvalidIndex,
    StructuralMismatch,
)
from .cyclic import CyclicPoly, cyclic_project
from .endomorphism import AEndomorphism, FiltrationLevel
from .field import FieldScalar, FieldSpec
from .metabelian import AElement, a_mul, basis_decompose, generator
from .ncpoly import Alphabet, MatU, NCPoly, nc_mul, poly_sum

_LOGGER = logging.getLogger(__name__)

# Nested tuples: an int leaf or a (left, right) pair; not necessarily regular.
Tree = Union[int, tuple]


@dataclass(frozen=True, eq=False)
class Monomial:
    """Interned regular monomial; compare with ``is`` or by ``sort_key``."""

    ident: int
    left: Monomial | None
    right: Monomial | None
    index: int
    degree: int
    sort_key: tuple

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def tree(self) -> Tree:
        if self.is_leaf:
            return self.index
        return (self.left.tree(), self.right.tree())

    def __lt__(self, other: Monomial) -> bool:
        return self.sort_key < other.sort_key

    def __repr__(self) -> str:
        return f"Monomial({format_monomial(self)})"


class _Registry:
    """Intern table; lookups are lock-free, insertions serialized."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._by_shape: dict[tuple, Monomial] = {}
        self._by_ident: list[Monomial] = []

    def intern(self, shape: tuple, build) -> Monomial:
        found = self._by_shape.get(shape)
        if found is not None:
            return found
        with self._lock:
            found = self._by_shape.get(shape)
            if found is None:
                found = build(len(self._by_ident))
                self._by_ident.append(found)
                self._by_shape[shape] = found
            return found

    def lookup(self, ident: int) -> Monomial:
        try:
            return self._by_ident[ident]
        except IndexError as err:
            raise InvalidArgument(name="monomial", reason=f"unknown id {ident}") from err


_REGISTRY = _Registry()


def leaf(i: int) -> Monomial:
    """ξ_i."""
    if i < 1:
        raise InvalidArgument(name="index", reason="variable indices start at 1")
    return _REGISTRY.intern(("leaf", i), lambda ident: Monomial(ident, None, None, i, 1, (1, i)))


def node(left: Monomial, right: Monomial) -> Monomial:
    """(left right); requires left ≻ right."""
    if not left.sort_key > right.sort_key:
        raise InvalidArgument(name="node", reason="left factor must exceed the right one")
    degree = left.degree + right.degree
    return _REGISTRY.intern(
        ("node", left.ident, right.ident),
        lambda ident: Monomial(ident, left, right, 0, degree, (degree, left.sort_key, right.sort_key)),
    )


def monomial_by_id(ident: int) -> Monomial:
    return _REGISTRY.lookup(ident)


def monomial_compare(u: Monomial, v: Monomial) -> int:
    """-1, 0 or 1: degree first, then (left, right) lexicographically."""
    return (u.sort_key > v.sort_key) - (u.sort_key < v.sort_key)


def format_monomial(u: Monomial) -> str:
    if u.is_leaf:
        return f"x{u.index}"
    return f"({format_monomial(u.left)}*{format_monomial(u.right)})"


def tree_degree(tree: Tree) -> int:
    if isinstance(tree, int):
        return 1
    return tree_degree(tree[0]) + tree_degree(tree[1])


def tree_key(tree: Tree) -> tuple:
    if isinstance(tree, int):
        return (1, tree)
    return (tree_degree(tree), tree_key(tree[0]), tree_key(tree[1]))


def tree_is_regular(tree: Tree) -> bool:
    """Every internal node has left ≻ right."""
    if isinstance(tree, int):
        return True
    left, right = tree
    return tree_key(left) > tree_key(right) and tree_is_regular(left) and tree_is_regular(right)


def from_tree(tree: Tree) -> Monomial:
    if isinstance(tree, int):
        return leaf(tree)
    return node(from_tree(tree[0]), from_tree(tree[1]))


@dataclass(frozen=True)
class MonomialAlphabet(Alphabet):
    """Letters R_u of U(B), labelled by monomial id and ordered like the monomials."""

    rank: int

    def sort_key(self, label: int) -> tuple:
        return monomial_by_id(label).sort_key

    def format_label(self, label: int) -> str:
        return f"R[{format_monomial(monomial_by_id(label))}]"


class BElement:
    """Finitely supported map regular monomial -> scalar."""

    __slots__ = ("rank", "field", "_terms", "_hash")

    def __init__(
        self,
        rank: int,
        field: FieldSpec,
        terms: Mapping[Monomial, FieldScalar] | Iterable[tuple[Monomial, FieldScalar]] = (),
    ) -> None:
        """Accumulate (monomial, coefficient) pairs."""
        if rank < 1:
            raise InvalidArgument(name="rank", reason="rank must be at least 1")
        self.rank = rank
        self.field = field
        collected: dict[Monomial, FieldScalar] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for monomial, coefficient in items:
            _check_letters(monomial, rank)
            collected[monomial] = field.normalize(collected.get(monomial, 0) + field.element(coefficient))
        self._terms = {m: c for m, c in collected.items() if c != 0}
        self._hash: int | None = None

    @classmethod
    def _wrap(cls, rank: int, field: FieldSpec, terms: dict[Monomial, FieldScalar]) -> BElement:
        element = cls.__new__(cls)
        element.rank = rank
        element.field = field
        element._terms = terms
        element._hash = None
        return element

    @classmethod
    def zero(cls, rank: int, field: FieldSpec) -> BElement:
        return cls._wrap(rank, field, {})

    @classmethod
    def monomial(cls, u: Monomial, rank: int, field: FieldSpec, coefficient: FieldScalar = 1) -> BElement:
        return cls(rank, field, [(u, coefficient)])

    def items(self) -> Iterator[tuple[Monomial, FieldScalar]]:
        return iter(self._terms.items())

    def terms(self) -> list[tuple[Monomial, FieldScalar]]:
        """Terms in monomial order."""
        return sorted(self._terms.items(), key=lambda item: item[0].sort_key)

    def coefficient(self, u: Monomial) -> FieldScalar:
        return self._terms.get(u, self.field.zero)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((u.degree for u in self._terms), default=-1)

    def lowest_degree(self) -> int | None:
        return min((u.degree for u in self._terms), default=None)

    def homogeneous(self, degree: int) -> BElement:
        return self._wrap(self.rank, self.field, {u: c for u, c in self._terms.items() if u.degree == degree})

    def _check(self, other: BElement) -> None:
        if self.rank != other.rank or self.field != other.field:
            raise StructuralMismatch(left=f"rank {self.rank}/{self.field}", right=f"rank {other.rank}/{other.field}")

    def __add__(self, other: BElement) -> BElement:
        self._check(other)
        field = self.field
        terms = dict(self._terms)
        for u, c in other._terms.items():
            value = field.normalize(terms.get(u, 0) + c)
            if value == 0:
                terms.pop(u, None)
            else:
                terms[u] = value
        return self._wrap(self.rank, field, terms)

    def __neg__(self) -> BElement:
        field = self.field
        return self._wrap(self.rank, field, {u: field.normalize(-c) for u, c in self._terms.items()})

    def __sub__(self, other: BElement) -> BElement:
        return self + (-other)

    def scale(self, scalar: FieldScalar) -> BElement:
        field = self.field
        scalar = field.normalize(scalar)
        return self._wrap(
            self.rank, field, {u: v for u, c in self._terms.items() if (v := field.normalize(c * scalar)) != 0}
        )

    def __mul__(self, other: BElement | int) -> BElement:
        if isinstance(other, BElement):
            return b_mul(self, other)
        return self.scale(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BElement):
            return NotImplemented
        return self.rank == other.rank and self.field == other.field and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rank, self.field, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"BElement({self.terms()!r})"


def _check_letters(u: Monomial, rank: int) -> None:
    if u.is_leaf:
        if u.index > rank:
            raise InvalidIndex(index=u.index, rank=rank)
        return
    _check_letters(u.left, rank)
    _check_letters(u.right, rank)


def xi(i: int, n: int, field: FieldSpec | None = None) -> BElement:
    """ξ_i as an element of B."""
    field = field or FieldSpec.rationals()
    if not 1 <= i <= n:
        raise InvalidIndex(index=i, rank=n)
    return BElement._wrap(n, field, {leaf(i): field.one})


def monomial_mul(u: Monomial, v: Monomial) -> tuple[int, Monomial | None]:
    """u·v = sign · monomial; (0, None) for u = v."""
    if u is v:
        return 0, None
    if u.sort_key > v.sort_key:
        return 1, node(u, v)
    return -1, node(v, u)


def b_mul(a: BElement, b: BElement) -> BElement:
    """Bilinear extension of ``monomial_mul``."""
    a._check(b)
    field = a.field
    terms: dict[Monomial, FieldScalar] = {}
    for u, c in a._terms.items():
        for v, d in b._terms.items():
            sign, w = monomial_mul(u, v)
            if sign:
                terms[w] = terms.get(w, 0) + sign * c * d
    return BElement._wrap(a.rank, field, {w: v for w, c in terms.items() if (v := field.normalize(c)) != 0})


@lru_cache(maxsize=None)
def _basis(n: int, d: int) -> tuple[Monomial, ...]:
    if d == 1:
        return tuple(leaf(i) for i in range(1, n + 1))
    found = []
    for d1 in range(d - 1, (d - 1) // 2, -1):
        d2 = d - d1
        if d1 > d2:
            found.extend(node(u, v) for u in _basis(n, d1) for v in _basis(n, d2))
        else:
            lower = _basis(n, d1)
            found.extend(node(u, v) for u in lower for v in lower if u.sort_key > v.sort_key)
    return tuple(sorted(found, key=lambda u: u.sort_key))


def enumerate_basis(n: int, d: int) -> list[Monomial]:
    """Regular monomials of degree d in increasing order."""
    if n < 1:
        raise InvalidArgument(name="rank", reason="rank must be at least 1")
    if d < 1:
        raise InvalidArgument(name="degree", reason="must be at least 1")
    return list(_basis(n, d))


def _alphabet_of(rank: int) -> MonomialAlphabet:
    return MonomialAlphabet(rank)


@lru_cache(maxsize=4096)
def _fox_monomial(u: Monomial, rank: int, field: FieldSpec) -> tuple[NCPoly, ...]:
    alphabet = _alphabet_of(rank)
    if u.is_leaf:
        zero = NCPoly.zero(alphabet, field)
        return tuple(NCPoly.one(alphabet, field) if i == u.index else zero for i in range(1, rank + 1))
    z_left = NCPoly.letter(alphabet, field, u.left.ident)
    z_right = NCPoly.letter(alphabet, field, u.right.ident)
    return tuple(
        nc_mul(p, z_right) - nc_mul(q, z_left)
        for p, q in zip(_fox_monomial(u.left, rank, field), _fox_monomial(u.right, rank, field))
    )


def fox_b(a: BElement) -> tuple[NCPoly, ...]:
    """Coordinates of D(a) in dξ_1 U(B) ⊕ ... ⊕ dξ_n U(B)."""
    alphabet = _alphabet_of(a.rank)
    columns = [NCPoly.zero(alphabet, a.field)] * a.rank
    for u, c in a.items():
        columns = [total + entry.scale(c) for total, entry in zip(columns, _fox_monomial(u, a.rank, a.field))]
    return tuple(columns)


def right_multiplication(a: BElement) -> NCPoly:
    """R_a = Σ c_u R_u as a linear polynomial of U(B)."""
    return NCPoly(_alphabet_of(a.rank), a.field, [((u.ident,), c) for u, c in a.items()])


def fox_product(a: BElement, b: BElement) -> tuple[NCPoly, ...]:
    """D(ab) expanded as -D(b)R_a + D(a)R_b."""
    a._check(b)
    r_a = right_multiplication(a)
    r_b = right_multiplication(b)
    return tuple(nc_mul(p, r_b) - nc_mul(q, r_a) for p, q in zip(fox_b(a), fox_b(b)))


class BDerivation:
    """D_F = f_1∂_1 + ... + f_n∂_n, the derivation with D(ξ_i) = f_i."""

    __slots__ = ("rank", "field", "images")

    def __init__(self, images: Sequence[BElement]) -> None:
        """Initialize from f_1..f_n."""
        self.rank, self.field, self.images = _check_images(images)

    @classmethod
    def zero(cls, n: int, field: FieldSpec) -> BDerivation:
        return cls([BElement.zero(n, field)] * n)

    @classmethod
    def matrix_unit(cls, i: int, j: int, n: int, field: FieldSpec | None = None) -> BDerivation:
        """e_ij = ξ_i∂_j."""
        field = field or FieldSpec.rationals()
        images = [BElement.zero(n, field)] * n
        images[j - 1] = xi(i, n, field)
        return cls(images)

    def image(self, i: int) -> BElement:
        return self.images[i - 1]

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.images)

    def __add__(self, other: BDerivation) -> BDerivation:
        return BDerivation([f + g for f, g in zip(self.images, other.images)])

    def __sub__(self, other: BDerivation) -> BDerivation:
        return BDerivation([f - g for f, g in zip(self.images, other.images)])

    def scale(self, scalar: FieldScalar) -> BDerivation:
        return BDerivation([f.scale(scalar) for f in self.images])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BDerivation):
            return NotImplemented
        return self.images == other.images

    def __hash__(self) -> int:
        return hash(("derivation", self.images))

    def __repr__(self) -> str:
        return f"BDerivation({self.images!r})"


def _check_images(images: Sequence[BElement]) -> tuple[int, FieldSpec, tuple[BElement, ...]]:
    if not images:
        raise InvalidArgument(name="rank", reason="rank must be at least 1")
    rank = images[0].rank
    field = images[0].field
    if len(images) != rank:
        raise DimensionMismatch(expected=rank, actual=len(images))
    for image in images:
        if image.rank != rank or image.field != field:
            raise StructuralMismatch(left=f"rank {rank}/{field}", right=f"rank {image.rank}/{image.field}")
    return rank, field, tuple(images)


def _evaluate(a: BElement, on_leaf, on_node, zero):
    """Linear extension of a map defined recursively on monomial trees."""
    cache: dict[int, object] = {}

    def visit(u: Monomial):
        if u.ident not in cache:
            cache[u.ident] = on_leaf(u.index) if u.is_leaf else on_node(u, visit)
        return cache[u.ident]

    result = zero
    for u, c in a.terms():
        result = result + visit(u).scale(c)
    return result


def derivation_apply(d: BDerivation, a: BElement) -> BElement:
    """Leibniz: D(uv) = D(u)v + uD(v)."""
    if d.rank != a.rank or d.field != a.field:
        raise StructuralMismatch(left=f"rank {d.rank}/{d.field}", right=f"rank {a.rank}/{a.field}")

    def on_node(u: Monomial, visit) -> BElement:
        left = BElement._wrap(a.rank, a.field, {u.left: a.field.one})
        right = BElement._wrap(a.rank, a.field, {u.right: a.field.one})
        return b_mul(visit(u.left), right) + b_mul(left, visit(u.right))

    return _evaluate(a, d.image, on_node, BElement.zero(a.rank, a.field))


def derivation_bracket(d1: BDerivation, d2: BDerivation) -> BDerivation:
    """[D1, D2](ξ_i) = D1(D2(ξ_i)) - D2(D1(ξ_i))."""
    if d1.rank != d2.rank:
        raise DimensionMismatch(expected=d1.rank, actual=d2.rank)
    return BDerivation(
        [derivation_apply(d1, g) - derivation_apply(d2, f) for f, g in zip(d1.images, d2.images)]
    )


def derivation_components(d: BDerivation) -> dict[int, BDerivation]:
    """Homogeneous parts keyed by derivation degree (monomial degree - 1)."""
    degrees = sorted({u.degree for f in d.images for u, _ in f.items()})
    return {k - 1: BDerivation([f.homogeneous(k) for f in d.images]) for k in degrees}


def derivation_jacobian(d: BDerivation) -> MatU:
    """J(D) = [∂f_j/∂ξ_i]."""
    return MatU.from_columns(_alphabet_of(d.rank), d.field, [fox_b(f) for f in d.images])


def divergence(d: BDerivation) -> CyclicPoly:
    """Trace of J(D) modulo [U(B), U(B)]."""
    columns = [fox_b(f) for f in d.images]
    trace = poly_sum((column[i] for i, column in enumerate(columns)), _alphabet_of(d.rank), d.field)
    return cyclic_project(trace)


def is_special(d: BDerivation) -> bool:
    return divergence(d).is_zero()


class BEndomorphism:
    """The n-tuple (g_1, ..., g_n) sending ξ_i to g_i."""

    __slots__ = ("rank", "field", "images")

    def __init__(self, images: Sequence[BElement]) -> None:
        """Initialize from the images of ξ_1..ξ_n."""
        self.rank, self.field, self.images = _check_images(images)

    @classmethod
    def identity(cls, n: int, field: FieldSpec | None = None) -> BEndomorphism:
        return cls([xi(i, n, field) for i in range(1, n + 1)])

    def image(self, i: int) -> BElement:
        return self.images[i - 1]

    def corrections(self) -> list[BElement]:
        return [g - xi(i, self.rank, self.field) for i, g in enumerate(self.images, start=1)]

    def is_identity(self) -> bool:
        return all(c.is_zero() for c in self.corrections())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BEndomorphism):
            return NotImplemented
        return self.images == other.images

    def __hash__(self) -> int:
        return hash(("endomorphism", self.images))

    def __repr__(self) -> str:
        return f"BEndomorphism({self.images!r})"


def b_apply_endo(e: BEndomorphism, a: BElement) -> BElement:
    if e.rank != a.rank or e.field != a.field:
        raise StructuralMismatch(left=f"rank {e.rank}/{e.field}", right=f"rank {a.rank}/{a.field}")
    return _evaluate(
        a, e.image, lambda u, visit: b_mul(visit(u.left), visit(u.right)), BElement.zero(a.rank, a.field)
    )


def b_compose(e1: BEndomorphism, e2: BEndomorphism) -> BEndomorphism:
    """ξ_i -> e1(e2(ξ_i))."""
    if e1.rank != e2.rank:
        raise DimensionMismatch(expected=e1.rank, actual=e2.rank)
    return BEndomorphism([b_apply_endo(e1, g) for g in e2.images])


def b_jacobian(e: BEndomorphism) -> MatU:
    return MatU.from_columns(_alphabet_of(e.rank), e.field, [fox_b(g) for g in e.images])


def ie_level(e: BEndomorphism, max_degree: int = 10) -> FiltrationLevel:
    """Largest i <= max_degree with every correction in B^{i+1}."""
    if max_degree < 1:
        raise InvalidArgument(name="max_degree", reason="must be at least 1")
    degrees = [c.lowest_degree() for c in e.corrections() if not c.is_zero()]
    if not degrees or min(degrees) - 1 >= max_degree:
        return FiltrationLevel(max_degree, at_least=True)
    return FiltrationLevel(min(degrees) - 1)


def tangent(e: BEndomorphism) -> BDerivation:
    """Lowest-degree homogeneous part of the corrections, as a derivation."""
    corrections = e.corrections()
    degrees = [c.lowest_degree() for c in corrections if not c.is_zero()]
    if not degrees:
        raise IdentityEndomorphism()
    lowest = min(degrees)
    _LOGGER.debug("Tangent derivation taken at degree %s", lowest - 1)
    return BDerivation([c.homogeneous(lowest) for c in corrections])


def quotient_to_A(x: BElement | BEndomorphism) -> AElement | AEndomorphism:
    """Image under B -> A = B/I, ξ_i -> x_i."""
    if isinstance(x, BEndomorphism):
        return AEndomorphism([quotient_to_A(g) for g in x.images])
    n = x.rank
    field = x.field
    return _evaluate(
        x,
        lambda i: generator(i, n, field),
        lambda u, visit: a_mul(visit(u.left), visit(u.right)),
        AElement.zero(n, field),
    )


def left_normed(i: int, j: int, word: Sequence[int]) -> Monomial:
    """(((ξ_i ξ_j) ξ_{k_1}) ...) ξ_{k_s} for i > j."""
    u = node(leaf(i), leaf(j))
    for k in word:
        u = node(u, leaf(k))
    return u


def lift_to_free(x: AElement | AEndomorphism) -> BElement | BEndomorphism:
    """Section A -> B taking each left-normed basis monomial to the same tree."""
    if isinstance(x, AEndomorphism):
        return BEndomorphism([lift_to_free(f) for f in x.images])
    decomposition = basis_decompose(x)
    terms = [(leaf(i), c) for i, c in enumerate(decomposition.linear, start=1) if c != 0]
    terms.extend((left_normed(i, j, word), c) for (i, j, word), c in decomposition.items())
    return BElement(x.rank, x.field, terms)
