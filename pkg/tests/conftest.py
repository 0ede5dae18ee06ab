from __future__ import annotations

import pytest

from evoforge import corpus


@pytest.fixture(scope="session")
def model():
    return corpus.default_model()


@pytest.fixture(scope="session")
def seed_coeffs(model):
    return corpus.seed_coefficients(model)
