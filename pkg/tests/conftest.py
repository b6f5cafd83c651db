"""
Shared fixtures: small fields, a deterministic run configuration and element strategies.
"""
import pytest
from hypothesis import strategies as st

from rmlab.models.schemas import RunConfig
from rmlab.services.gf import Field, field_for


@pytest.fixture
def config() -> RunConfig:
    return RunConfig(budget=2 ** 22, vector_budget=2 ** 22, workers=1, chunk_size=512, format="text")


@pytest.fixture
def F8() -> Field:
    return field_for(2, 3)


@pytest.fixture
def F16() -> Field:
    return field_for(2, 4)


@pytest.fixture
def F32() -> Field:
    return field_for(2, 5)


@pytest.fixture
def F81() -> Field:
    return field_for(3, 4)


def elements(F: Field, nonzero: bool = False):
    """Strategy over the integer codes of F's elements."""
    return st.integers(min_value=1 if nonzero else 0, max_value=F.order - 1)
