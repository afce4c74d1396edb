import pytest

from arboreal.edge_algebra import edge_algebra
from arboreal.trees import enumerate_trees


@pytest.fixture(scope="session")
def edge():
    """The shared edge-algebra fixture with its named elements."""
    return edge_algebra()


@pytest.fixture(scope="session")
def small_trees():
    """All trees on at most five of the labels a..e, grouped by size."""
    letters = "abcde"
    return {n: enumerate_trees(letters[:n]) for n in range(1, 6)}
