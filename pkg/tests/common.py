"""Common generators used across tests for mfa."""
from __future__ import annotations

import random
from functools import lru_cache

from hypothesis import strategies as st

from mfa.common.anticomm import BElement, Monomial, enumerate_basis
from mfa.common.endomorphism import AEndomorphism
from mfa.common.field import FieldSpec
from mfa.common.metabelian import AElement, BasisKey, basis_monomials, element_from_terms
from mfa.common.ncpoly import IndexAlphabet, LinearSubstitution, NCPoly

COEFFICIENTS = [-2, -1, 1, 2, 3]


@lru_cache(maxsize=None)
def basis_keys(n: int, max_degree: int) -> tuple[BasisKey, ...]:
    """Basis keys of A² of degree 2..max_degree."""
    return tuple(key for d in range(2, max_degree + 1) for key in basis_monomials(n, d))


@lru_cache(maxsize=None)
def chein_keys(n: int, max_degree: int) -> tuple[BasisKey, ...]:
    """Basis keys (i, j, word) with j > 1."""
    return tuple(key for key in basis_keys(n, max_degree) if key[1] > 1)


@lru_cache(maxsize=None)
def free_monomials(n: int, max_degree: int) -> tuple[Monomial, ...]:
    return tuple(u for d in range(1, max_degree + 1) for u in enumerate_basis(n, d))


def _terms(rng: random.Random, keys, count: int) -> list:
    return [(rng.choice(keys), rng.choice(COEFFICIENTS)) for _ in range(count)]


def random_a_squared(rng: random.Random, n: int, field: FieldSpec, max_degree: int = 4) -> AElement:
    """Random element of A² with up to four basis terms."""
    return element_from_terms(n, field, terms=_terms(rng, basis_keys(n, max_degree), rng.randint(0, 4)))


def random_a_element(rng: random.Random, n: int, field: FieldSpec, max_degree: int = 4) -> AElement:
    linear = {i: rng.choice([0, *COEFFICIENTS]) for i in range(1, n + 1)}
    return random_a_squared(rng, n, field, max_degree) + element_from_terms(n, field, linear)


def random_chein_element(rng: random.Random, n: int, field: FieldSpec, max_degree: int = 4) -> AElement:
    """Random f ∈ A² with ∂f/∂x_1 = 0."""
    return element_from_terms(n, field, terms=_terms(rng, chein_keys(n, max_degree), rng.randint(1, 4)))


def random_endomorphism(rng: random.Random, n: int, field: FieldSpec, max_degree: int = 3) -> AEndomorphism:
    """Endomorphism with an arbitrary linear part and corrections of degree <= max_degree."""
    return AEndomorphism([random_a_element(rng, n, field, max_degree) for _ in range(n)])


def random_b_element(rng: random.Random, n: int, field: FieldSpec, max_degree: int = 3) -> BElement:
    return BElement(n, field, _terms(rng, free_monomials(n, max_degree), rng.randint(0, 4)))


def a_elements(n: int, field: FieldSpec, max_degree: int = 4):
    """Hypothesis strategy for elements of A."""
    linear = st.dictionaries(st.integers(1, n), st.sampled_from(COEFFICIENTS), max_size=n)
    terms = st.lists(st.tuples(st.sampled_from(basis_keys(n, max_degree)), st.sampled_from(COEFFICIENTS)), max_size=5)
    return st.builds(lambda lin, ts: element_from_terms(n, field, lin, ts), linear, terms)


def b_elements(n: int, field: FieldSpec, max_degree: int = 4):
    """Hypothesis strategy for elements of B."""
    terms = st.lists(
        st.tuples(st.sampled_from(free_monomials(n, max_degree)), st.sampled_from(COEFFICIENTS)), max_size=5
    )
    return st.builds(lambda ts: BElement(n, field, ts), terms)


def nc_polys(n: int, field: FieldSpec, max_length: int = 3):
    """Hypothesis strategy for polynomials in z_1..z_n, words of length <= max_length."""
    words = st.lists(st.integers(1, n), max_size=max_length).map(tuple)
    terms = st.lists(st.tuples(words, st.sampled_from(COEFFICIENTS)), max_size=4)
    return st.builds(lambda ts: NCPoly(IndexAlphabet(n), field, ts), terms)


def linear_substitutions(n: int, field: FieldSpec):
    """Hypothesis strategy for arbitrary (possibly singular) n×n substitutions."""
    entries = st.lists(st.sampled_from([0, *COEFFICIENTS]), min_size=n * n, max_size=n * n)
    return entries.map(
        lambda cs: LinearSubstitution(field, tuple(tuple(field.element(c) for c in cs[i * n : (i + 1) * n]) for i in range(n)))
    )
