import json

import pytest

from web_linearizer.algebra.jetpoly import R, S1, s
from web_linearizer.algebra.ralg import RAlg
from web_linearizer.algebra.spoly import SPoly
from web_linearizer.analysis.obstruction import ObstructionTower, SRow
from web_linearizer.data.cache import FileCacheBackend, InMemoryCache, TowerCache, version_hash


@pytest.fixture
def small_tower():
    row = SRow(SPoly([R]), SPoly([RAlg.const(0), RAlg.canonical_word("1")]), SPoly(), SPoly([RAlg.const(2)]))
    return ObstructionTower(
        phi=s() * R * -24 + s(S1),
        psi1=s(S1) ** 2,
        psi2=s() * RAlg.canonical_word("2"),
        rows=[row] * 4,
        derived_rows={1: [row] * 4, 2: [row] * 4},
        provenance={"pipeline": "test"},
    )


class TestInMemoryCache:
    def test_get_or_compute_runs_once(self):
        cache = InMemoryCache(max_size=4)
        calls = []
        for _ in range(3):
            assert cache.get_or_compute(("f", "0,0"), lambda: calls.append(1) or 42) == 42
        assert len(calls) == 1
        stats = cache.get_stats()
        assert stats["total_hits"] == 2
        assert stats["total_misses"] == 1

    def test_size_is_bounded(self):
        cache = InMemoryCache(max_size=2)
        for key in "abc":
            cache.set(key, key.upper())
        assert cache.get_stats()["entries"] == 2
        assert cache.get_stats()["evictions"] == 1


class TestFileCache:
    def test_round_trip(self, tmp_path):
        backend = FileCacheBackend(str(tmp_path))
        assert backend.set("phi", "(1)*s")
        assert backend.get("phi") == "(1)*s"
        assert backend.get("psi1") is None
        assert backend.get_cache_info()["file_count"] == 1

    def test_corrupted_file_is_removed(self, tmp_path):
        backend = FileCacheBackend(str(tmp_path))
        backend.set("phi", "(1)*s")
        path = backend._get_file_path("phi")
        path.write_text("{not json", encoding="utf-8")
        assert backend.get("phi") is None
        assert not path.exists()

    def test_entry_under_another_key_is_rejected(self, tmp_path):
        backend = FileCacheBackend(str(tmp_path))
        backend.set("phi", "(1)*s")
        path = backend._get_file_path("phi")
        path.write_text(json.dumps({"key": "psi1", "data": "0"}), encoding="utf-8")
        assert backend.get("phi") is None


class TestTowerCache:
    def test_save_and_load(self, tmp_path, small_tower):
        cache = TowerCache(str(tmp_path))
        cache.save(small_tower)
        loaded = TowerCache(str(tmp_path)).load()
        assert loaded == small_tower
        assert loaded.provenance == {"pipeline": "test"}
        assert cache.info()["current"]

    def test_get_or_build_uses_the_cache(self, tmp_path, small_tower):
        built = []

        def build():
            built.append(1)
            return small_tower

        first, hit = TowerCache(str(tmp_path)).get_or_build(build)
        assert not hit
        second, hit = TowerCache(str(tmp_path)).get_or_build(build)
        assert hit
        assert second == first
        assert len(built) == 1
        _, hit = TowerCache(str(tmp_path)).get_or_build(build, rebuild=True)
        assert not hit
        assert len(built) == 2

    def test_version_mismatch_invalidates(self, tmp_path, small_tower):
        cache = TowerCache(str(tmp_path))
        cache.save(small_tower)
        manifest = json.loads(cache.manifest_path.read_text(encoding="utf-8"))
        manifest["version_hash"] = "stale"
        cache.manifest_path.write_text(json.dumps(manifest), encoding="utf-8")
        assert cache.load() is None
        assert not cache.manifest_path.exists()
        assert cache.files.get_cache_info()["file_count"] == 0

    def test_missing_entry_invalidates(self, tmp_path, small_tower):
        cache = TowerCache(str(tmp_path))
        cache.save(small_tower)
        cache.files.delete("psi2")
        assert cache.load() is None

    def test_version_hash_depends_on_every_version(self):
        assert version_hash({"pipeline": "a"}) != version_hash({"pipeline": "b"})
        assert version_hash() == version_hash()
