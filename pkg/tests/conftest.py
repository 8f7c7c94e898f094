"""Global fixtures for mfa tests."""
import random

import pytest

from mfa.common.field import FieldSpec
from mfa.const import DEFAULT_SEED
from mfa.utils import derive_seed

FIELDS = ["q", "gf:2", "gf:3"]


@pytest.fixture(name="rationals")
def rationals_fixture() -> FieldSpec:
    """Coefficients in Q."""
    return FieldSpec.rationals()


@pytest.fixture(name="field", params=FIELDS)
def field_fixture(request) -> FieldSpec:
    """Q and the small prime fields where anticommutativity is most fragile."""
    return FieldSpec.parse(request.param)


@pytest.fixture(name="rng")
def rng_fixture() -> random.Random:
    """Seeded generator, identical for every test run."""
    return random.Random(derive_seed(DEFAULT_SEED, 0))
