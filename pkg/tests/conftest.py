import os
import sys

import numpy as np
import pytest

# main.py と同じくリポジトリのルートから src パッケージを import する
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.models.state import FixedOverlapPair, PureState  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-scale statistical checks (minutes)")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def zero_zero_pair():
    zero = PureState.basis(0)
    return FixedOverlapPair(psi=zero, phi=zero, c=1.0)


@pytest.fixture
def zero_one_pair():
    return FixedOverlapPair(psi=PureState.basis(0), phi=PureState.basis(1), c=0.0)
