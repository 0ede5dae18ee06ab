"""Embedded persistence for sessions: sqlite keyed by session id.

Session snapshots are upserted as JSON documents; lineage rows are
append-only so a session's full judgment history stays auditable and cheap
to replay.
"""

from __future__ import annotations

import json
import sqlite3
import threading
from pathlib import Path


class SessionStore:
    def __init__(self, path: str | Path | None = None):
        self._path = str(path) if path is not None else ":memory:"
        if path is not None:
            Path(path).parent.mkdir(parents=True, exist_ok=True)
        self._conn = sqlite3.connect(self._path, check_same_thread=False)
        self._lock = threading.Lock()
        with self._lock:
            self._conn.executescript(
                """
                CREATE TABLE IF NOT EXISTS sessions (
                    session_id TEXT PRIMARY KEY,
                    status TEXT NOT NULL,
                    updated_at_ms INTEGER NOT NULL,
                    payload TEXT NOT NULL
                );
                CREATE TABLE IF NOT EXISTS lineage (
                    session_id TEXT NOT NULL,
                    generation INTEGER NOT NULL,
                    record TEXT NOT NULL,
                    PRIMARY KEY (session_id, generation)
                );
                """
            )
            self._conn.commit()

    def save(self, payload: dict) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT INTO sessions (session_id, status, updated_at_ms, payload)"
                " VALUES (?, ?, ?, ?)"
                " ON CONFLICT(session_id) DO UPDATE SET"
                " status=excluded.status, updated_at_ms=excluded.updated_at_ms,"
                " payload=excluded.payload",
                (
                    payload["session_id"],
                    payload["status"],
                    payload["updated_at_ms"],
                    json.dumps(payload),
                ),
            )
            self._conn.commit()

    def load(self, session_id: str) -> dict | None:
        with self._lock:
            row = self._conn.execute(
                "SELECT payload FROM sessions WHERE session_id = ?", (session_id,)
            ).fetchone()
        return json.loads(row[0]) if row else None

    def append_lineage(self, session_id: str, generation: int, record: dict) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT INTO lineage (session_id, generation, record) VALUES (?, ?, ?)",
                (session_id, generation, json.dumps(record)),
            )
            self._conn.commit()

    def lineage(self, session_id: str) -> list[dict]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT record FROM lineage WHERE session_id = ? ORDER BY generation",
                (session_id,),
            ).fetchall()
        return [json.loads(r[0]) for r in rows]

    def close(self) -> None:
        with self._lock:
            self._conn.close()
