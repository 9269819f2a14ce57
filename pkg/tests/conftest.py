import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "src"))

from utils.order import build_class_set  # noqa: E402
from utils.qform import LevelConfig  # noqa: E402


def _classes(ramified, M=1):
    return build_class_set(LevelConfig.from_primes(ramified, M))


@pytest.fixture(scope="session")
def level2():
    return _classes([2])


@pytest.fixture(scope="session")
def level6():
    """Eichler order of level 3 in the maximal order ramified at 2"""
    return _classes([2], 3)


@pytest.fixture(scope="session")
def level11():
    return _classes([11])


@pytest.fixture(scope="session")
def level66():
    return _classes([2, 3, 11])


@pytest.fixture(scope="session")
def level210():
    return _classes([2, 3, 7], 5)
