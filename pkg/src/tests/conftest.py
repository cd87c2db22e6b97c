"""
Shared fixtures for the trichain tests.
"""

import os

import pytest

from src.core.reg2sim import clear_cache
from src.tests.helpers import XY, chain

CORPUS = os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))), 'corpus')


@pytest.fixture
def worked():
    """The worked two-variable chain with four simple branches."""
    return chain(['x^3 - x^2 + 2', '(x^5+x)*y^3 - x^3*y^2'], XY)


@pytest.fixture
def corpus_path():
    return CORPUS


@pytest.fixture(autouse=True)
def fresh_cache():
    clear_cache()
    yield
    clear_cache()
