import pytest

from utils.presentation import family_fn, make_presentation, random_presentation

CORPUS_SIZE = 50


@pytest.fixture(scope="session")
def f4():
    return family_fn(4)


@pytest.fixture(scope="session")
def f5():
    return family_fn(5)


@pytest.fixture(scope="session")
def euclidean():
    """Λ1 = 2Z², no mirrors: the slope function is the identity."""
    return make_presentation((2, 0), (0, 2), (0, 0), {})


@pytest.fixture(scope="session")
def corpus():
    return [random_presentation(seed, 8) for seed in range(CORPUS_SIZE)]
