"""Sequential question-answer training samples from decomposed titles,
with JSONL and SQuAD-style serialization."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, List, Optional, TextIO

from .corpus import Document
from .decompose import Decomposition, SpanOrigin, decompose, decompose_with_dictionary
from .dictionary import Dictionary
from .segment import segment

# Appended to every document text so the termination answer "_" is always
# present as a standalone token.
TERMINAL_SUFFIX = "\n_"
TERMINAL_ANSWER = "_"


@dataclass(frozen=True)
class TrainingSample:
    doc_id: str
    question: str
    text: str
    answer: str
    answer_char_start: Optional[int]  # None for dictionary-word answers
    is_termination: bool
    origin: SpanOrigin

    def to_record(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "question": self.question,
            "text": self.text,
            "answer": self.answer,
            "answer_start": -1 if self.answer_char_start is None else self.answer_char_start,
            "is_termination": self.is_termination,
            "origin": self.origin.value,
        }

    @classmethod
    def from_record(cls, record: dict) -> "TrainingSample":
        start = record["answer_start"]
        return cls(
            doc_id=record["doc_id"],
            question=record["question"],
            text=record["text"],
            answer=record["answer"],
            answer_char_start=None if start == -1 else start,
            is_termination=record["is_termination"],
            origin=SpanOrigin(record["origin"]),
        )


@dataclass
class DatasetStats:
    documents_seen: int = 0
    documents_decomposable: int = 0
    malformed_documents: int = 0
    samples_emitted: int = 0
    termination_samples: int = 0
    dictionary_samples: int = 0
    total_spans: int = 0

    @property
    def mean_spans_per_title(self) -> float:
        if self.documents_decomposable == 0:
            return 0.0
        return self.total_spans / self.documents_decomposable

    def to_record(self) -> dict:
        return {
            "documents_seen": self.documents_seen,
            "documents_decomposable": self.documents_decomposable,
            "malformed_documents": self.malformed_documents,
            "samples_emitted": self.samples_emitted,
            "termination_samples": self.termination_samples,
            "dictionary_samples": self.dictionary_samples,
            "mean_spans_per_title": self.mean_spans_per_title,
        }


def build_samples(doc: Document, decomp: Decomposition) -> List[TrainingSample]:
    """One sample per span with cumulative questions, plus a termination
    sample answering "_" at the appended terminal symbol."""
    if decomp.title != doc.title:
        raise ValueError(
            f"decomposition title does not match document {doc.doc_id!r}"
        )
    text = doc.text + TERMINAL_SUFFIX
    samples: List[TrainingSample] = []
    question = ""
    for span in decomp.spans:
        if span.origin is SpanOrigin.TEXT_SPAN:
            start, end = span.text_char_range
            if text[start:end] != span.matched_text:
                raise ValueError(
                    f"span offsets do not match document {doc.doc_id!r}"
                )
            answer_start: Optional[int] = start
        else:
            answer_start = None
        samples.append(
            TrainingSample(
                doc_id=doc.doc_id,
                question=question,
                text=text,
                answer=span.matched_text,
                answer_char_start=answer_start,
                is_termination=False,
                origin=span.origin,
            )
        )
        question += span.matched_text
    samples.append(
        TrainingSample(
            doc_id=doc.doc_id,
            question=question,
            text=text,
            answer=TERMINAL_ANSWER,
            answer_char_start=len(text) - 1,
            is_termination=True,
            origin=SpanOrigin.TEXT_SPAN,
        )
    )
    return samples


def build_corpus_dataset(
    documents: Iterable[Document],
    dictionary: Optional[Dictionary],
    sink,
) -> DatasetStats:
    """Stream samples for every decomposable document into sink (a callable
    taking one TrainingSample). Samples for one document are emitted
    contiguously and in order."""
    stats = DatasetStats()
    for doc in documents:
        stats.documents_seen += 1
        title = segment(doc.title)
        text = segment(doc.text)
        if dictionary is None:
            decomp = decompose(title, text)
        else:
            decomp = decompose_with_dictionary(title, text, dictionary)
        if decomp is None:
            continue
        stats.documents_decomposable += 1
        stats.total_spans += len(decomp.spans)
        for sample in build_samples(doc, decomp):
            sink(sample)
            stats.samples_emitted += 1
            if sample.is_termination:
                stats.termination_samples += 1
            elif sample.origin is SpanOrigin.DICTIONARY_WORD:
                stats.dictionary_samples += 1
    return stats


def write_samples_jsonl(samples: Iterable[TrainingSample], f: TextIO) -> int:
    count = 0
    for sample in samples:
        f.write(json.dumps(sample.to_record(), ensure_ascii=False) + "\n")
        count += 1
    return count


def read_samples_jsonl(f: TextIO):
    for line in f:
        line = line.strip()
        if line:
            yield TrainingSample.from_record(json.loads(line))


def export_squad_format(samples: Iterable[TrainingSample], f: TextIO) -> int:
    """Write the nested extractive-QA JSON view: one context per document,
    one QA entry per sample. Returns the number of QA entries written."""
    contexts: dict[str, dict] = {}
    count = 0
    for sample in samples:
        entry = contexts.get(sample.doc_id)
        if entry is None:
            entry = {"id": sample.doc_id, "context": sample.text, "qas": []}
            contexts[sample.doc_id] = entry
        start = -1 if sample.answer_char_start is None else sample.answer_char_start
        if start >= 0 and entry["context"][start : start + len(sample.answer)] != sample.answer:
            raise ValueError(
                f"answer offset does not match context for document {sample.doc_id!r}"
            )
        entry["qas"].append(
            {
                "id": f"{sample.doc_id}-{len(entry['qas'])}",
                "question": sample.question,
                "answers": [{"text": sample.answer, "answer_start": start}],
                "is_termination": sample.is_termination,
                "from_dictionary": sample.origin is SpanOrigin.DICTIONARY_WORD,
            }
        )
        count += 1
    json.dump({"data": list(contexts.values())}, f, ensure_ascii=False)
    return count
