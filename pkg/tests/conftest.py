"""
Pytest configuration and fixtures.
"""
import pytest
from unittest.mock import MagicMock

from whitehead.domain.graph import Graph
from whitehead.domain.poset import enumerate_poset

G11_EDGES = [
    (1, 2), (2, 3), (3, 10), (3, 8), (5, 6),
    (5, 10), (5, 8), (8, 9), (6, 7), (10, 11),
]


@pytest.fixture(scope="session")
def g5():
    """Five vertices with the single edge {1, 2}."""
    return Graph.from_edges(5, [(1, 2)])


@pytest.fixture(scope="session")
def f2():
    """Edgeless graph on two vertices."""
    return Graph.from_edges(2)


@pytest.fixture(scope="session")
def f3():
    """Edgeless graph on three vertices."""
    return Graph.from_edges(3)


@pytest.fixture(scope="session")
def f4():
    """Edgeless graph on four vertices."""
    return Graph.from_edges(4)


@pytest.fixture(scope="session")
def g11():
    """Eleven vertices, ten edges, one isolated vertex."""
    return Graph.from_edges(11, G11_EDGES)


@pytest.fixture(scope="session")
def p4():
    """Path 1-2-3-4."""
    return Graph.from_edges(4, [(1, 2), (2, 3), (3, 4)])


@pytest.fixture(scope="session")
def c4():
    """Square 1-2-3-4-1."""
    return Graph.from_edges(4, [(1, 2), (2, 3), (3, 4), (1, 4)])


@pytest.fixture(scope="session")
def c5():
    """Pentagon 1-2-3-4-5-1."""
    return Graph.from_edges(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])


@pytest.fixture(scope="session")
def star_k13():
    """Star with centre 1 and leaves 2, 3, 4."""
    return Graph.from_edges(4, [(1, 2), (1, 3), (1, 4)])


@pytest.fixture(scope="session")
def p3_k2():
    """Path 1-2-3 next to the edge 4-5."""
    return Graph.from_edges(5, [(1, 2), (2, 3), (4, 5)])


@pytest.fixture(scope="session")
def g5_poset(g5):
    """Whitehead poset of g5 (61 elements)."""
    return enumerate_poset(g5, jobs=1)


@pytest.fixture(scope="session")
def f3_poset(f3):
    """Whitehead poset of f3."""
    return enumerate_poset(f3, jobs=1)


@pytest.fixture(scope="session")
def f4_poset(f4):
    """Whitehead poset of f4."""
    return enumerate_poset(f4, jobs=1)


@pytest.fixture
def mock_redis():
    """Mock redis.Redis connection."""
    mock = MagicMock()
    mock.get.return_value = None
    mock.set.return_value = True
    mock.setex.return_value = True
    mock.delete.return_value = 1
    mock.exists.return_value = 0
    mock.scan_iter.return_value = iter([])
    return mock


@pytest.fixture
def mock_backend():
    """Mock cache backend with the RedisClient surface."""
    mock = MagicMock()
    mock.get.return_value = None
    mock.set.return_value = True
    mock.delete.return_value = True
    mock.exists.return_value = False
    mock.clear_pattern.return_value = 0
    return mock


@pytest.fixture
def graph_file(tmp_path):
    """Write an edge-list file and return its path."""
    def write(text, name="graph.txt"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write
