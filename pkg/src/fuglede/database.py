"""SQLite storage for the catalog cache manifest and verification checkpoints."""

import json
import sqlite3
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, List, Optional

from .config import Config
from .errors import CheckpointError


class Database:
    """Handles all SQLite database operations."""

    def __init__(self, db_path: Optional[Path] = None):
        self.db_path = Path(db_path or Config.CHECKPOINT_PATH)
        self.db_path.parent.mkdir(parents=True, exist_ok=True)
        try:
            self._init_database()
        except sqlite3.DatabaseError as e:
            raise CheckpointError(f"cannot open database {self.db_path}: {e}") from e

    @contextmanager
    def get_connection(self):
        """Context manager for database connections."""
        conn = sqlite3.connect(self.db_path)
        conn.row_factory = sqlite3.Row
        try:
            yield conn
            conn.commit()
        except Exception:
            conn.rollback()
            raise
        finally:
            conn.close()

    def _init_database(self):
        """Initialize database schema."""
        with self.get_connection() as conn:
            cur = conn.cursor()

            # Catalog cache manifest
            cur.execute("""
                CREATE TABLE IF NOT EXISTS catalog_entries (
                    catalog_order INTEGER NOT NULL,
                    class_label TEXT NOT NULL,
                    url TEXT NOT NULL,
                    content_hash TEXT NOT NULL,
                    path TEXT NOT NULL,
                    block_count INTEGER NOT NULL,
                    fetched_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
                    PRIMARY KEY (catalog_order, class_label)
                )
            """)

            # Completed verification shards
            cur.execute("""
                CREATE TABLE IF NOT EXISTS verify_shards (
                    run_key TEXT NOT NULL,
                    shard TEXT NOT NULL,
                    position INTEGER NOT NULL,
                    examined INTEGER NOT NULL,
                    spectral INTEGER NOT NULL,
                    tile INTEGER NOT NULL,
                    agree INTEGER NOT NULL,
                    failures_json TEXT NOT NULL,
                    elapsed_ms REAL NOT NULL,
                    median_us REAL NOT NULL,
                    latency_json TEXT NOT NULL,
                    completed_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
                    PRIMARY KEY (run_key, shard)
                )
            """)

            cur.execute("CREATE INDEX IF NOT EXISTS idx_shards_run ON verify_shards(run_key, position)")

            conn.commit()

    def upsert_catalog_entries(self, entries: List[Dict[str, Any]]):
        """Record or replace the cached entries of one catalog file in a single transaction."""
        with self.get_connection() as conn:
            conn.executemany("""
                INSERT OR REPLACE INTO catalog_entries (
                    catalog_order, class_label, url, content_hash, path, block_count
                ) VALUES (?, ?, ?, ?, ?, ?)
            """, [
                (
                    entry["order"],
                    entry["class_label"],
                    entry["url"],
                    entry["content_hash"],
                    entry["path"],
                    entry["block_count"],
                )
                for entry in entries
            ])

    def get_catalog_entry(self, order: int, class_label: str) -> Optional[Dict[str, Any]]:
        """Get the manifest record for one cached file."""
        with self.get_connection() as conn:
            cur = conn.execute(
                "SELECT * FROM catalog_entries WHERE catalog_order = ? AND class_label = ?",
                (order, class_label),
            )
            row = cur.fetchone()
            return self._catalog_row(row) if row else None

    def get_catalog_entries(self, order: Optional[int] = None) -> List[Dict[str, Any]]:
        """List manifest records, optionally for one order."""
        with self.get_connection() as conn:
            if order is None:
                cur = conn.execute("SELECT * FROM catalog_entries ORDER BY catalog_order, class_label")
            else:
                cur = conn.execute(
                    "SELECT * FROM catalog_entries WHERE catalog_order = ? ORDER BY class_label",
                    (order,),
                )
            return [self._catalog_row(row) for row in cur.fetchall()]

    @staticmethod
    def _catalog_row(row: sqlite3.Row) -> Dict[str, Any]:
        record = dict(row)
        record["order"] = record.pop("catalog_order")
        return record

    def save_shard(self, run_key: str, position: int, record: Dict[str, Any]):
        """Persist one completed shard in its own transaction."""
        with self.get_connection() as conn:
            conn.execute("""
                INSERT OR REPLACE INTO verify_shards (
                    run_key, shard, position, examined, spectral, tile, agree,
                    failures_json, elapsed_ms, median_us, latency_json
                ) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)
            """, (
                run_key,
                record["shard"],
                position,
                record["examined"],
                record["spectral"],
                record["tile"],
                record["agree"],
                json.dumps(record["failures"]),
                record["elapsed_ms"],
                record["median_us"],
                json.dumps(record["latency_hist"]),
            ))

    def get_completed_shards(self, run_key: str) -> Dict[str, Dict[str, Any]]:
        """Return completed shard records of a run keyed by shard id."""
        try:
            with self.get_connection() as conn:
                cur = conn.execute(
                    "SELECT * FROM verify_shards WHERE run_key = ? ORDER BY position",
                    (run_key,),
                )
                rows = cur.fetchall()
        except sqlite3.DatabaseError as e:
            raise CheckpointError(f"unreadable checkpoint {self.db_path}: {e}") from e

        completed = {}
        for row in rows:
            record = dict(row)
            try:
                record["failures"] = json.loads(record.pop("failures_json"))
                hist = json.loads(record.pop("latency_json"))
                record["latency_hist"] = {int(bucket): count for bucket, count in hist.items()}
            except json.JSONDecodeError as e:
                raise CheckpointError(f"corrupt record for shard {record['shard']}") from e
            completed[record["shard"]] = record
        return completed

    def delete_run(self, run_key: str):
        """Forget all shards of a run."""
        with self.get_connection() as conn:
            conn.execute("DELETE FROM verify_shards WHERE run_key = ?", (run_key,))

    def get_stats(self) -> Dict[str, Any]:
        """Get database statistics."""
        with self.get_connection() as conn:
            cur = conn.cursor()

            cur.execute("SELECT COUNT(*) as count FROM catalog_entries")
            entry_count = cur.fetchone()["count"]

            cur.execute("SELECT COUNT(DISTINCT catalog_order) as count FROM catalog_entries")
            order_count = cur.fetchone()["count"]

            cur.execute("SELECT COUNT(DISTINCT run_key) as count FROM verify_shards")
            run_count = cur.fetchone()["count"]

            cur.execute("SELECT COUNT(*) as count FROM verify_shards")
            shard_count = cur.fetchone()["count"]

            return {
                "catalog_files": entry_count,
                "catalog_orders": order_count,
                "verify_runs": run_count,
                "completed_shards": shard_count,
            }
