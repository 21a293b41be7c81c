import json

import pytest

from ellassoc import cache
from ellassoc.mzv import mzv_table


@pytest.fixture
def root(tmp_path):
    old = cache.root()
    cache.set_root(tmp_path)
    yield tmp_path
    cache.set_root(old)


def test_round_trip(root):
    payload = {"a": [1, 2, "3/4"]}
    path = cache.store("mellin", "x.json", payload)
    assert path.parent == root / "mellin"
    assert cache.load("mellin", "x.json") == payload


def test_checksum_mismatch_discards(root, caplog):
    cache.store("mzv", "x.json", {"v": 1})
    path = root / "mzv" / "x.json"
    doc = json.loads(path.read_text())
    doc["payload"]["v"] = 2
    path.write_text(json.dumps(doc))
    assert cache.load("mzv", "x.json") is None
    assert not path.exists()
    assert "checksum" in caplog.text


def test_version_bump_discards(root):
    cache.store("basis", "t.json", [1], version=1)
    assert cache.load("basis", "t.json", version=2) is None
    assert cache.load("basis", "t.json", version=1) is None


def test_corrupt_file_discards(root):
    (root / "mzv").mkdir()
    (root / "mzv" / "bad.json").write_text("{not json")
    assert cache.load("mzv", "bad.json") is None


def test_unwritable_root_raises(tmp_path):
    old = cache.root()
    (tmp_path / "f").write_text("")
    cache.set_root(tmp_path / "f")
    try:
        with pytest.raises(cache.CacheError):
            cache.store("mzv", "x.json", {})
    finally:
        cache.set_root(old)


def test_corrupted_mzv_table_is_recomputed(root):
    first = mzv_table(4, 20)
    (path,) = (root / "mzv").glob("*.json")
    doc = json.loads(path.read_text())
    doc["checksum"] = "0" * 64
    path.write_text(json.dumps(doc))
    again = mzv_table(4, 20)
    assert all(abs(first[k] - again[k]) < 1e-25 for k in first.values)
    assert cache.load("mzv", path.name) is not None


def test_invalidate_counts(root):
    for i in range(3):
        cache.store("mellin", f"{i}.json", i)
    assert cache.invalidate("mellin") == 3
    assert cache.invalidate("nothing") == 0
