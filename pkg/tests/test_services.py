"""
Tests for service layer and storage backends.
"""
import importlib
import json

import pytest
from redis.exceptions import ConnectionError as RedisConnectionError
from unittest.mock import patch

from whitehead.core.errors import DomainError
from whitehead.db.file_store import FileStore
from whitehead.db.redis_client import RedisClient
from whitehead.domain.graph import Graph
from whitehead.services.analysis_service import AnalysisService
from whitehead.services.cache_service import CacheService, select_backend
from whitehead.services.check_service import SUITES, CheckService

# The services and db packages re-export instances under the submodule names, which
# shadow the submodules for dotted patch targets on Python 3.10; patch the
# module objects directly.
cache_service_module = importlib.import_module("whitehead.services.cache_service")
analysis_service_module = importlib.import_module("whitehead.services.analysis_service")
redis_client_module = importlib.import_module("whitehead.db.redis_client")


def test_cache_service_generate_poset_key():
    """Test cache key generation."""
    key1 = CacheService._generate_poset_key(Graph.from_edges(3, [(1, 2)]))
    key2 = CacheService._generate_poset_key(Graph.from_edges(3, [(2, 1)]))
    key3 = CacheService._generate_poset_key(Graph.from_edges(3, [(2, 3)]))

    assert key1 == key2
    assert key1 != key3
    assert key1.startswith("poset:")


def test_cache_service_long_identifier():
    """Test that long identifiers are hashed."""
    key = CacheService._generate_cache_key("poset", "x" * 200)

    assert key.startswith("poset:")
    assert len(key) == len("poset:") + 64


def test_cache_service_disabled(g5, g5_poset):
    """Test that no backend means no caching."""
    cache = CacheService()

    assert cache.get_poset(g5) is None
    assert cache.set_poset(g5, g5_poset) is False
    assert cache.clear_all() == 0


def test_cache_service_set_and_get(mock_backend, f3, f3_poset):
    """Test caching and retrieval."""
    cache = CacheService(mock_backend)

    assert cache.set_poset(f3, f3_poset)
    key, document, ttl = mock_backend.set.call_args[0]
    assert key.startswith("poset:")
    assert ttl is None

    mock_backend.get.return_value = document
    restored = cache.get_poset(f3)
    assert restored is not None
    assert restored.elements == f3_poset.elements


def test_cache_service_miss(mock_backend, f3):
    """Test a cache miss."""
    assert CacheService(mock_backend).get_poset(f3) is None
    assert mock_backend.get.called


def test_cache_service_discards_corrupt_entry(mock_backend, f3):
    """Test that unreadable entries count as misses."""
    mock_backend.get.return_value = {"vertices": "nope"}
    assert CacheService(mock_backend).get_poset(f3) is None


def test_cache_service_discards_other_graph(mock_backend, f3, f3_poset):
    """Test an entry whose graph differs from the request."""
    mock_backend.get.return_value = f3_poset.to_document().model_dump(mode="json")
    assert CacheService(mock_backend).get_poset(Graph.from_edges(3, [(1, 2)])) is None


def test_cache_service_redis_down(mock_backend, f3, f3_poset):
    """Test that backend failures degrade to misses."""
    mock_backend.get.side_effect = RedisConnectionError("refused")
    mock_backend.set.side_effect = RedisConnectionError("refused")
    cache = CacheService(mock_backend)

    assert cache.get_poset(f3) is None
    assert cache.set_poset(f3, f3_poset) is False


def test_cache_service_invalidate_and_clear(mock_backend, f3):
    """Test deletion helpers."""
    cache = CacheService(mock_backend)

    assert cache.invalidate(f3)
    cache.clear_all()
    mock_backend.clear_pattern.assert_called_once_with("poset:*")


def test_select_backend(tmp_path):
    """Test backend selection."""
    assert isinstance(select_backend(str(tmp_path / "cache")), FileStore)
    with patch.object(cache_service_module, "settings") as mock_settings:
        mock_settings.cache_backend = "none"
        assert select_backend(None) is None


def test_select_backend_redis(mocker):
    """Test that the redis backend connects on selection."""
    mock_settings = mocker.patch.object(cache_service_module, "settings")
    mock_client = mocker.patch.object(cache_service_module, "redis_client")
    mock_settings.cache_backend = "redis"

    assert select_backend(None) is mock_client
    mock_client.connect.assert_called_once()


def test_select_backend_redis_unreachable(mocker):
    """Test that an unreachable server turns caching off."""
    mock_settings = mocker.patch.object(cache_service_module, "settings")
    mock_client = mocker.patch.object(cache_service_module, "redis_client")
    mock_settings.cache_backend = "redis"
    mock_client.ping.side_effect = RedisConnectionError("refused")

    assert select_backend(None) is None
    mock_client.disconnect.assert_called_once()


def test_redis_client_connect(mocker):
    """Test connecting through the settings URL."""
    from_url = mocker.patch.object(redis_client_module.redis.Redis, "from_url")
    client = RedisClient()
    client.connect()

    assert client.client is from_url.return_value
    assert from_url.call_args[0][0].startswith("redis://")
    client.disconnect()
    assert client.client is None


def test_file_store_roundtrip(tmp_path):
    """Test the directory backend."""
    store = FileStore(str(tmp_path))

    assert store.get("poset:abc") is None
    assert store.set("poset:abc", {"a": [1, 2]})
    assert store.exists("poset:abc")
    assert store.get("poset:abc") == {"a": [1, 2]}
    assert store.keys() == ["poset:abc"]
    assert (tmp_path / "poset__abc.json").exists()

    store.set("other:1", [1])
    assert store.clear_pattern("poset:*") == 1
    assert store.keys() == ["other:1"]
    assert store.delete("other:1")
    assert not store.exists("other:1")


def test_file_store_unreadable_entry(tmp_path):
    """Test a corrupted file."""
    store = FileStore(str(tmp_path))
    (tmp_path / "poset__bad.json").write_text("{not json", encoding="utf-8")

    assert store.get("poset:bad") is None


def test_file_store_backs_cache_service(tmp_path, f3, f3_poset):
    """Test a full cache cycle on disk."""
    cache = CacheService(FileStore(str(tmp_path)))
    cache.set_poset(f3, f3_poset)

    restored = CacheService(FileStore(str(tmp_path))).get_poset(f3)
    assert restored.elements == f3_poset.elements
    assert restored.hasse_edges == f3_poset.hasse_edges


def test_redis_client_without_connection():
    """Test that an unconnected client is inert."""
    client = RedisClient()

    assert client.get("k") is None
    assert not client.ping()
    assert client.set("k", 1) is False
    assert client.exists("k") is False
    assert client.clear_pattern("*") == 0


def test_redis_client_set_and_get(mock_redis):
    """Test JSON values and TTL handling."""
    client = RedisClient(mock_redis)

    client.set("k", {"a": 1}, ttl=0)
    mock_redis.set.assert_called_once_with("k", json.dumps({"a": 1}))

    client.set("k", {"a": 1}, ttl=60)
    mock_redis.setex.assert_called_once_with("k", 60, json.dumps({"a": 1}))

    mock_redis.get.return_value = '{"a": 1}'
    assert client.get("k") == {"a": 1}

    mock_redis.get.return_value = "not json"
    assert client.get("k") is None


def test_redis_client_clear_pattern(mock_redis):
    """Test deleting keys by pattern."""
    mock_redis.scan_iter.return_value = iter(["poset:1", "poset:2"])
    mock_redis.delete.return_value = 2

    assert RedisClient(mock_redis).clear_pattern("poset:*") == 2
    mock_redis.delete.assert_called_once_with("poset:1", "poset:2")


def test_analysis_service_uses_cache(mocker, mock_backend, f3, f3_poset):
    """Test that a cache hit skips enumeration."""
    mock_backend.get.return_value = f3_poset.to_document().model_dump(mode="json")
    service = AnalysisService(CacheService(mock_backend))
    mock_enumerate = mocker.patch.object(analysis_service_module, "enumerate_poset")

    poset, cached = service.load_poset(f3)

    assert cached
    assert not mock_enumerate.called
    assert poset.elements == f3_poset.elements


def test_analysis_service_stores_on_miss(mock_backend, f3):
    """Test that a miss enumerates and stores."""
    service = AnalysisService(CacheService(mock_backend))
    poset, cached = service.load_poset(f3)

    assert not cached
    assert len(poset) == 4
    assert mock_backend.set.called


def test_analysis_service_reduces_first(star_k13):
    """Test that dominating vertices are removed before enumeration."""
    service = AnalysisService(CacheService())
    summary = service.summary(star_k13)
    poset, _ = service.load_poset(star_k13)

    assert summary.reduced_vertices == [2, 3, 4]
    assert summary.partial_conjugations == 6
    assert poset.graph.vertices == (2, 3, 4)


def test_analysis_service_report_g5(g5):
    """Test the full report of g5."""
    report = AnalysisService(CacheService()).report(g5, include_ring=True)

    assert report.rank_histogram == [1, 15, 32, 12, 1]
    assert report.k_vector == [1, 10, 27, 10, 1]
    assert report.n_vector == [1, 5, 1]
    assert report.betti_psaut == [1, 15, 78, 155, 78, 15, 1]
    assert report.ring.b2_size == report.ring.expected == 78
    assert report.ring.phi.ok


def test_analysis_service_presentation(f3):
    """Test presentation export through the service."""
    assert AnalysisService(CacheService()).presentation(f3).census() == {"i": 3, "ii": 0, "iii": 6}


def test_check_service_subset(f3):
    """Test running selected suites."""
    service = CheckService(AnalysisService(CacheService()))
    report = service.run(f3, suites=["k1_formula", "free_group_formula", "cache_roundtrip"], seed=1)

    assert [result.name for result in report.results] == ["k1_formula", "free_group_formula", "cache_roundtrip"]
    assert report.passed


def test_check_service_unknown_suite(f3):
    """Test that suite names are validated."""
    with pytest.raises(DomainError):
        CheckService(AnalysisService(CacheService())).run(f3, suites=["nope"])


def test_check_service_reports_errors_as_failures(f3):
    """Test that a raising suite becomes a failed result."""
    service = CheckService(AnalysisService(CacheService()))
    ctx = service.context(f3, seed=0, trials=1)

    def broken(_):
        raise DomainError("boom")

    with patch.dict(SUITES, {"broken": broken}):
        result = service.run_suite("broken", ctx)

    assert not result.passed
    assert result.detail == "DomainError: boom"


@pytest.mark.slow
@pytest.mark.parametrize("name", ["f3", "g5", "p3_k2", "c5"])
def test_check_service_all_suites(name, request):
    """Test every suite on small graphs."""
    graph = request.getfixturevalue(name)
    report = CheckService(AnalysisService(CacheService())).run(graph, seed=0, trials=3)

    failed = [(r.name, r.detail) for r in report.results if not r.passed]
    assert failed == []
    assert len(report.results) == len(SUITES)
