"""JSONL corpus of documents: streaming reader that tolerates bad lines."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, TextIO


@dataclass(frozen=True)
class Document:
    doc_id: str
    source: str
    published_at: str
    title: str
    text: str

    def to_record(self) -> dict:
        return {
            "id": self.doc_id,
            "source": self.source,
            "published_at": self.published_at,
            "title": self.title,
            "text": self.text,
        }

    @classmethod
    def from_record(cls, record: dict) -> "Document":
        if not isinstance(record["title"], str) or not isinstance(record["text"], str):
            raise ValueError("title and text must be strings")
        if not record["title"] or not record["text"]:
            raise ValueError("title and text must be non-empty")
        return cls(
            doc_id=str(record["id"]),
            source=str(record["source"]),
            published_at=str(record["published_at"]),
            title=record["title"],
            text=record["text"],
        )


@dataclass
class CorpusReadStats:
    lines_read: int = 0
    malformed_lines: int = 0


def iter_documents(
    path: str | Path, stats: CorpusReadStats | None = None
) -> Iterator[Document]:
    """Stream documents from a JSONL file; malformed lines are counted in
    stats (when given) and skipped, never fatal."""
    with open(path, encoding="utf-8") as f:
        yield from iter_documents_from(f, stats)


def iter_documents_from(
    f: TextIO, stats: CorpusReadStats | None = None
) -> Iterator[Document]:
    for line in f:
        line = line.strip()
        if not line:
            continue
        if stats is not None:
            stats.lines_read += 1
        try:
            yield Document.from_record(json.loads(line))
        except (json.JSONDecodeError, KeyError, ValueError, TypeError):
            if stats is not None:
                stats.malformed_lines += 1


def write_documents(path: str | Path, documents) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for doc in documents:
            f.write(json.dumps(doc.to_record(), ensure_ascii=False) + "\n")
            count += 1
    return count
