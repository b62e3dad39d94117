"""Shared fixtures for cooccur tests."""

from pathlib import Path

import pytest

from cooccur.modelfile import ModelFile
from cooccur.space import FiniteSpace, RandomObject, RationalMeasure

DATA_DIR = Path(__file__).parent / "data"
GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture
def m0_path() -> Path:
    """Four equally likely outcomes with parity, half and identity objects."""
    return DATA_DIR / "m0.json"


@pytest.fixture
def diagonal_path() -> Path:
    """Two outcomes observed twice through the identity."""
    return DATA_DIR / "diagonal.json"


@pytest.fixture
def m0(m0_path) -> ModelFile:
    return ModelFile.from_path(m0_path)


@pytest.fixture
def diagonal(diagonal_path) -> ModelFile:
    return ModelFile.from_path(diagonal_path)


@pytest.fixture
def P(m0) -> RationalMeasure:
    return m0.engine_model.law


@pytest.fixture
def X1(m0) -> RandomObject:
    return m0.get_object("X1")


@pytest.fixture
def X2(m0) -> RandomObject:
    return m0.get_object("X2")


@pytest.fixture
def X3(m0) -> RandomObject:
    return m0.get_object("X3")


@pytest.fixture
def coin() -> FiniteSpace:
    return FiniteSpace(2, ("h", "t"), "coin")
