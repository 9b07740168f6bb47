"""
Shared fixtures: the reference slopes every test module draws on.
"""

import sys
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).parent.parent))

from src.core.continued_fractions import fibonacci_cf, random_cf, synthesize_alpha_cf  # noqa: E402


@pytest.fixture(scope='session')
def fibonacci():
    return fibonacci_cf(40)


@pytest.fixture(scope='session')
def synth2():
    """a_{n+1} = round(q_n): q = 1, 2, 5, 27, 734, 538783, ..."""
    return synthesize_alpha_cf(2.0, 1.0, 10)


@pytest.fixture(scope='session')
def synth15():
    return synthesize_alpha_cf(1.5, 1.0, 12)


@pytest.fixture(scope='session')
def regularity_slope():
    return synthesize_alpha_cf(2.0, 1.0, 12)


@pytest.fixture(scope='session')
def random_slopes():
    return [random_cf(seed, 30) for seed in (0, 1)]
