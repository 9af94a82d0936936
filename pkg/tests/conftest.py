import pytest

from twoselmer.curve import FullTwoTorsionModel

CORPUS_ROOTS = [(-1, 0, 1), (0, 1, 2), (0, 1, 5)]


@pytest.fixture(scope="session")
def m101():
    return FullTwoTorsionModel((-1, 0, 1))


@pytest.fixture(scope="session")
def m012():
    return FullTwoTorsionModel((0, 1, 2))


@pytest.fixture(scope="session")
def m015():
    return FullTwoTorsionModel((0, 1, 5))


@pytest.fixture(scope="session")
def corpus(m101, m012, m015):
    return [m101, m012, m015]
