import sqlite3

import pytest

from fuglede.database import Database


def shard(name, examined=1, failures=()):
    return {
        "shard": name,
        "examined": examined,
        "spectral": examined,
        "tile": examined,
        "agree": examined,
        "failures": list(failures),
        "elapsed_ms": 1.5,
        "median_us": 120.0,
        "latency_hist": {120: examined},
    }


def catalog_row(label, path="/tmp/cache", order=20, blocks=1):
    return {
        "order": order, "class_label": label, "url": f"http://x/{label}.txt",
        "content_hash": "ab" * 32, "path": path, "block_count": blocks,
    }


def test_catalog_manifest_roundtrip(tmp_path):
    db = Database(tmp_path / "manifest.db")
    db.upsert_catalog_entries([catalog_row("had.20.pal")])
    record = db.get_catalog_entry(20, "had.20.pal")
    assert record["order"] == 20
    assert record["url"] == "http://x/had.20.pal.txt"
    assert db.get_catalog_entry(24, "had.20.pal") is None
    assert len(db.get_catalog_entries()) == 1
    assert db.get_catalog_entries(24) == []


def test_catalog_rows_are_written_together(tmp_path):
    db = Database(tmp_path / "manifest.db")
    rows = [catalog_row(f"had.24.{i}", order=24, blocks=3) for i in (1, 2, 3)]
    rows[1]["path"] = None
    with pytest.raises(sqlite3.IntegrityError):
        db.upsert_catalog_entries(rows)
    assert db.get_catalog_entries(24) == []

    rows[1]["path"] = "/tmp/had.24.2"
    db.upsert_catalog_entries(rows)
    assert [r["block_count"] for r in db.get_catalog_entries(24)] == [3, 3, 3]


def test_shards_are_keyed_by_run(tmp_path):
    db = Database(tmp_path / "run.db")
    db.save_shard("run-a", 1, shard("3-7", 4))
    db.save_shard("run-a", 0, shard("3-5", 2, failures=[{"tuple": [3, 5], "spectral": True, "tile": False}]))
    db.save_shard("run-b", 0, shard("3-5"))

    completed = db.get_completed_shards("run-a")
    assert list(completed) == ["3-5", "3-7"]
    assert completed["3-5"]["failures"][0]["tuple"] == [3, 5]
    assert completed["3-7"]["examined"] == 4
    assert completed["3-7"]["latency_hist"] == {120: 4}

    stats = db.get_stats()
    assert stats["verify_runs"] == 2
    assert stats["completed_shards"] == 3

    db.delete_run("run-a")
    assert db.get_completed_shards("run-a") == {}
    assert len(db.get_completed_shards("run-b")) == 1
