"""Single-file SQLite store behind the blind evaluation service."""
from __future__ import annotations

import hashlib
import json
import random
import sqlite3
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import List, Optional, Sequence, Tuple

from .corpus import Document
from .evalstats import SCORE_TIERS, ScoreRecord, TitleKind

DEFAULT_BATCH_SIZE = 100

_SCHEMA = """
CREATE TABLE IF NOT EXISTS studies (
    study_id TEXT PRIMARY KEY,
    seed INTEGER NOT NULL,
    config TEXT NOT NULL,
    created_at TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS tasks (
    task_id TEXT PRIMARY KEY,
    study_id TEXT NOT NULL REFERENCES studies(study_id),
    order_index INTEGER NOT NULL,
    doc_id TEXT NOT NULL,
    source TEXT NOT NULL,
    text TEXT NOT NULL,
    real_title TEXT NOT NULL,
    generated_title TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS sessions (
    session_id TEXT PRIMARY KEY,
    study_id TEXT NOT NULL REFERENCES studies(study_id),
    evaluator_id TEXT NOT NULL,
    status TEXT NOT NULL,
    created_at TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS scores (
    session_id TEXT NOT NULL REFERENCES sessions(session_id),
    task_id TEXT NOT NULL REFERENCES tasks(task_id),
    evaluator_id TEXT NOT NULL,
    doc_id TEXT NOT NULL,
    title_kind TEXT NOT NULL,
    score INTEGER NOT NULL,
    PRIMARY KEY (session_id, task_id, title_kind)
);
"""


class StoreError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


@dataclass(frozen=True)
class StudyConfig:
    allowed_sources: Optional[List[str]] = None
    one_doc_per_source: bool = False
    batch_size: int = DEFAULT_BATCH_SIZE
    seed: int = 0

    def to_record(self) -> dict:
        return {
            "allowed_sources": self.allowed_sources,
            "one_doc_per_source": self.one_doc_per_source,
            "batch_size": self.batch_size,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class TaskView:
    """What a session is allowed to see: no title kinds anywhere."""

    task_id: str
    doc_id: str
    text: str
    titles: Tuple[str, str]
    session_id: str
    done: int
    total: int


def _derived_seed(*parts: str) -> int:
    digest = hashlib.sha256(":".join(parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def real_first(study_seed: int, session_id: str, task_id: str) -> bool:
    """Seeded per-task presentation order, reproducible for audit."""
    rng = random.Random(_derived_seed(str(study_seed), session_id, task_id))
    return rng.random() < 0.5


class EvalStore:
    def __init__(self, path: str = ":memory:"):
        self._conn = sqlite3.connect(path, check_same_thread=False)
        self._conn.row_factory = sqlite3.Row
        self._conn.executescript(_SCHEMA)
        self._lock = threading.Lock()

    def close(self) -> None:
        self._conn.close()

    # -- studies -----------------------------------------------------------

    def create_study(
        self,
        docs_with_generated: Sequence[Tuple[Document, str]],
        config: StudyConfig,
    ) -> str:
        if not docs_with_generated:
            raise StoreError("empty_study", "a study needs at least one document")
        for doc, generated in docs_with_generated:
            if not generated:
                raise StoreError(
                    "missing_generated_title",
                    f"document {doc.doc_id!r} has no generated title",
                )
        if config.one_doc_per_source:
            sources = [doc.source for doc, _ in docs_with_generated]
            if len(sources) != len(set(sources)):
                raise StoreError(
                    "duplicate_source", "one-doc-per-source study has duplicate sources"
                )
        if config.allowed_sources is not None:
            allowed = set(config.allowed_sources)
            for doc, _ in docs_with_generated:
                if doc.source not in allowed:
                    raise StoreError(
                        "source_not_allowed", f"source {doc.source!r} is not allowed"
                    )

        study_id = uuid.uuid4().hex
        order = list(range(len(docs_with_generated)))
        random.Random(config.seed).shuffle(order)
        now = datetime.now(timezone.utc).isoformat()
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT INTO studies VALUES (?, ?, ?, ?)",
                (study_id, config.seed, json.dumps(config.to_record()), now),
            )
            for position, doc_index in enumerate(order):
                doc, generated = docs_with_generated[doc_index]
                self._conn.execute(
                    "INSERT INTO tasks VALUES (?, ?, ?, ?, ?, ?, ?, ?)",
                    (
                        f"{study_id}-t{position}",
                        study_id,
                        position,
                        doc.doc_id,
                        doc.source,
                        doc.text,
                        doc.title,
                        generated,
                    ),
                )
        return study_id

    def _study_row(self, study_id: str) -> sqlite3.Row:
        row = self._conn.execute(
            "SELECT * FROM studies WHERE study_id = ?", (study_id,)
        ).fetchone()
        if row is None:
            raise StoreError("unknown_study", f"no study {study_id!r}")
        return row

    # -- sessions ----------------------------------------------------------

    def create_session(self, study_id: str, evaluator_id: str) -> Tuple[str, int]:
        study = self._study_row(study_id)
        config = json.loads(study["config"])
        total = self._conn.execute(
            "SELECT COUNT(*) FROM tasks WHERE study_id = ?", (study_id,)
        ).fetchone()[0]
        batch = min(total, config.get("batch_size") or DEFAULT_BATCH_SIZE)
        session_id = uuid.uuid4().hex
        now = datetime.now(timezone.utc).isoformat()
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT INTO sessions VALUES (?, ?, ?, ?, ?)",
                (session_id, study_id, evaluator_id, "active", now),
            )
        return session_id, batch

    def _session_row(self, session_id: str) -> sqlite3.Row:
        row = self._conn.execute(
            "SELECT * FROM sessions WHERE session_id = ?", (session_id,)
        ).fetchone()
        if row is None:
            raise StoreError("unknown_session", f"no session {session_id!r}")
        return row

    def _session_tasks(self, session: sqlite3.Row) -> List[sqlite3.Row]:
        study = self._study_row(session["study_id"])
        config = json.loads(study["config"])
        batch = config.get("batch_size") or DEFAULT_BATCH_SIZE
        return self._conn.execute(
            "SELECT * FROM tasks WHERE study_id = ? ORDER BY order_index LIMIT ?",
            (session["study_id"], batch),
        ).fetchall()

    def next_task(self, session_id: str) -> Optional[TaskView]:
        """The next unscored task for this session, or None when done
        (flipping the session to complete)."""
        session = self._session_row(session_id)
        tasks = self._session_tasks(session)
        scored = {
            row[0]
            for row in self._conn.execute(
                "SELECT DISTINCT task_id FROM scores WHERE session_id = ?",
                (session_id,),
            )
        }
        study_seed = self._study_row(session["study_id"])["seed"]
        for task in tasks:
            if task["task_id"] in scored:
                continue
            first_real = real_first(study_seed, session_id, task["task_id"])
            titles = (
                (task["real_title"], task["generated_title"])
                if first_real
                else (task["generated_title"], task["real_title"])
            )
            return TaskView(
                task_id=task["task_id"],
                doc_id=task["doc_id"],
                text=task["text"],
                titles=titles,
                session_id=session_id,
                done=len(scored),
                total=len(tasks),
            )
        if session["status"] != "complete":
            with self._lock, self._conn:
                self._conn.execute(
                    "UPDATE sessions SET status = 'complete' WHERE session_id = ?",
                    (session_id,),
                )
        return None

    def submit_scores(
        self, session_id: str, task_id: str, scores: Sequence[int]
    ) -> None:
        """Persist both scores, unblinding positions back to title kinds.
        Idempotent on identical resubmission; conflicting resubmission is
        rejected."""
        if len(scores) != 2:
            raise StoreError("bad_scores", "exactly two scores are required")
        for s in scores:
            if not isinstance(s, int) or not 0 <= s < SCORE_TIERS:
                raise StoreError("score_out_of_range", f"score {s!r} not in 0..4")
        session = self._session_row(session_id)
        task = self._conn.execute(
            "SELECT * FROM tasks WHERE task_id = ? AND study_id = ?",
            (task_id, session["study_id"]),
        ).fetchone()
        if task is None:
            raise StoreError("unknown_task", f"no task {task_id!r} in this session")

        study_seed = self._study_row(session["study_id"])["seed"]
        first_real = real_first(study_seed, session_id, task_id)
        by_kind = {
            TitleKind.REAL: scores[0] if first_real else scores[1],
            TitleKind.GENERATED: scores[1] if first_real else scores[0],
        }

        with self._lock, self._conn:
            existing = {
                row["title_kind"]: row["score"]
                for row in self._conn.execute(
                    "SELECT title_kind, score FROM scores "
                    "WHERE session_id = ? AND task_id = ?",
                    (session_id, task_id),
                )
            }
            if existing:
                if all(
                    existing.get(kind.value) == score
                    for kind, score in by_kind.items()
                ):
                    return  # idempotent resubmission
                raise StoreError(
                    "already_scored", f"task {task_id!r} already scored differently"
                )
            for kind, score in by_kind.items():
                self._conn.execute(
                    "INSERT INTO scores VALUES (?, ?, ?, ?, ?, ?)",
                    (
                        session_id,
                        task_id,
                        session["evaluator_id"],
                        task["doc_id"],
                        kind.value,
                        score,
                    ),
                )

    # -- export ------------------------------------------------------------

    def export_scores(
        self, study_id: str
    ) -> Tuple[List[Tuple[ScoreRecord, str]], dict]:
        """All (score record, session status) pairs for a study plus
        session metadata; partial sessions show up with status 'active'."""
        self._study_row(study_id)
        rows = self._conn.execute(
            "SELECT s.evaluator_id, s.doc_id, s.title_kind, s.score, ss.status "
            "FROM scores s JOIN sessions ss ON s.session_id = ss.session_id "
            "WHERE ss.study_id = ? ORDER BY s.session_id, s.task_id, s.title_kind",
            (study_id,),
        ).fetchall()
        records = [
            (
                ScoreRecord(
                    evaluator_id=row["evaluator_id"],
                    doc_id=row["doc_id"],
                    title_kind=TitleKind(row["title_kind"]),
                    score=row["score"],
                ),
                row["status"],
            )
            for row in rows
        ]
        sessions = self._conn.execute(
            "SELECT session_id, evaluator_id, status FROM sessions WHERE study_id = ?",
            (study_id,),
        ).fetchall()
        meta = {
            "study_id": study_id,
            "sessions": [
                {
                    "session_id": s["session_id"],
                    "evaluator_id": s["evaluator_id"],
                    "status": s["status"],
                }
                for s in sessions
            ],
        }
        return records, meta
