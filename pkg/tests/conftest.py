"""Shared fixtures: the catalog structures and the bundled model files."""

from pathlib import Path

import pytest
from hypothesis import settings

from courantkit import catalog

settings.register_profile("courantkit", deadline=None, max_examples=25)
settings.load_profile("courantkit")

MODELS_DIR = Path(__file__).resolve().parent.parent / "models"


@pytest.fixture
def models_dir() -> Path:
    return MODELS_DIR


@pytest.fixture
def ring2():
    return catalog.real_space(2)


@pytest.fixture
def ring3():
    return catalog.real_space(3)


@pytest.fixture
def std2():
    return catalog.standard_double(2)


@pytest.fixture
def std3():
    return catalog.standard_double(3)


@pytest.fixture
def lin3():
    return catalog.linear_poisson_double()


@pytest.fixture
def g_pair():
    return catalog.algebra_pair()


@pytest.fixture
def heis_pair():
    return catalog.heisenberg_pair()
