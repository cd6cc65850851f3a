import pytest

from pictam import generators


@pytest.fixture(scope="session")
def corpus():
    return generators.corpus()


@pytest.fixture(scope="session")
def small_picard(corpus):
    """One object, automorphism group of order two: the smallest instance with
    nontrivial morphism data."""
    return corpus["b-z2"]


@pytest.fixture(scope="session")
def twisted_picard(corpus):
    return corpus["z2-z2-twisted"]
