import pytest

from treeshift import VertexTsft


@pytest.fixture
def mixing_2sym() -> VertexTsft:
    """2-symbol shift that is mixing (both matrices nearly full)."""
    return VertexTsft.from_matrices([[[1, 1], [1, 1]], [[1, 1], [1, 0]]])


@pytest.fixture
def irreducible_2sym() -> VertexTsft:
    """2-symbol shift that is irreducible but not mixing."""
    return VertexTsft.from_matrices([[[1, 1], [1, 0]], [[0, 1], [1, 1]]])


@pytest.fixture
def even_sum_4sym() -> VertexTsft:
    """4-symbol vertex presentation of the even-label-sum shift (mixing)."""
    a0 = [[1, 1, 0, 0], [0, 0, 1, 1], [1, 1, 0, 0], [0, 0, 1, 1]]
    a1 = [[1, 1, 0, 0], [0, 0, 1, 1], [0, 0, 1, 1], [1, 1, 0, 0]]
    return VertexTsft.from_matrices([a0, a1])


@pytest.fixture
def identity_2sym() -> VertexTsft:
    """Two disconnected fixed symbols: essential but not irreducible."""
    return VertexTsft.from_matrices([[[1, 0], [0, 1]], [[1, 0], [0, 1]]])


@pytest.fixture
def full_2sym() -> VertexTsft:
    """Full binary shift on two symbols."""
    ones = [[1, 1], [1, 1]]
    return VertexTsft.from_matrices([ones, ones])
