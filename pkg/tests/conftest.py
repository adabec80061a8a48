import math

import pytest

from submig.scene import SearchGrid, make_direction_set, reference_scene

K_MAX = 2 * math.pi / 0.2
K_MIN = 2 * math.pi / 0.6


@pytest.fixture(scope="session")
def scene():
    return reference_scene()


@pytest.fixture(scope="session")
def limited():
    return make_direction_set(12, math.pi / 4, 3 * math.pi / 4)


@pytest.fixture(scope="session")
def full64():
    return make_direction_set(64, 0.0, 2 * math.pi)


@pytest.fixture(scope="session")
def grid():
    return SearchGrid()
