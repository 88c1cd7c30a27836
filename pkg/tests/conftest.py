import random
from fractions import Fraction

import pytest

from heightlab import data


@pytest.fixture(scope="session")
def h3():
    return data.load_algebra("h3")


@pytest.fixture(scope="session")
def k4():
    return data.load_algebra("k4")


@pytest.fixture(scope="session")
def n3():
    return data.load_algebra("n3")


@pytest.fixture(scope="session")
def g2():
    return data.load_algebra("g2")


@pytest.fixture(scope="session")
def models():
    return {name: data.load_model(name) for name in data.SHIPPED_MODELS}


def rand_vec(rng: random.Random, n: int, dens=(1, 2, 3)):
    return tuple(Fraction(rng.randint(-9, 9), rng.choice(dens)) for _ in range(n))
