"""Sequential question-answer generation loop and the answerers that drive it."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Iterable, List, Optional, Protocol

import httpx

from .corpus import Document
from .dataset import TERMINAL_ANSWER, TERMINAL_SUFFIX
from .decompose import Decomposition, SpanOrigin
from .segment import segment

DEFAULT_MAX_STEPS = 32


@dataclass(frozen=True)
class Answer:
    answer: str
    answer_char_start: Optional[int]
    is_termination: bool


class Answerer(Protocol):
    answerer_id: str

    def answer(self, question: str, text: str) -> Answer: ...


@dataclass(frozen=True)
class GenerationStep:
    question: str
    answer: str
    answer_char_start: Optional[int]
    is_termination: bool
    latency_ms: float


@dataclass(frozen=True)
class GenerationTrace:
    doc_id: str
    steps: tuple[GenerationStep, ...]
    headline: str
    completed: bool
    answerer_id: str
    error: Optional[str] = None

    def to_record(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "steps": [
                {
                    "question": s.question,
                    "answer": s.answer,
                    "answer_start": -1 if s.answer_char_start is None else s.answer_char_start,
                    "is_termination": s.is_termination,
                    "latency_ms": s.latency_ms,
                }
                for s in self.steps
            ],
            "headline": self.headline,
            "completed": self.completed,
            "answerer_id": self.answerer_id,
            "error": self.error,
        }


class AnswererError(Exception):
    """Base for answerer failures; generate() aborts the trace on these."""


class AnswererTimeout(AnswererError):
    pass


class AnswererTransportError(AnswererError):
    pass


class AnswererResponseError(AnswererError):
    """Malformed response body."""


class AnswererInvariantError(AnswererError):
    """Answer is not a substring of the text at the claimed offset."""


class OracleMismatch(AnswererError):
    """The driver asked a question the oracle did not expect."""


def generate(doc: Document, answerer: Answerer, max_steps: int = DEFAULT_MAX_STEPS) -> GenerationTrace:
    """Ask with the accumulated headline, append each answer, stop at the
    termination symbol or after max_steps."""
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    if not doc.text:
        raise ValueError("document text must be non-empty")
    text = doc.text + TERMINAL_SUFFIX
    steps: List[GenerationStep] = []
    question = ""
    completed = False
    error: Optional[str] = None
    for _ in range(max_steps):
        started = time.perf_counter()
        try:
            result = answerer.answer(question, text)
        except AnswererError as exc:
            error = f"{type(exc).__name__}: {exc}"
            break
        latency_ms = (time.perf_counter() - started) * 1000.0
        steps.append(
            GenerationStep(
                question=question,
                answer=result.answer,
                answer_char_start=result.answer_char_start,
                is_termination=result.is_termination,
                latency_ms=latency_ms,
            )
        )
        if result.is_termination:
            completed = True
            break
        question += result.answer
    return GenerationTrace(
        doc_id=doc.doc_id,
        steps=tuple(steps),
        headline=question,
        completed=completed,
        answerer_id=answerer.answerer_id,
        error=error,
    )


class OracleAnswerer:
    """Replays a known decomposition: span i for the question made of spans
    0..i-1, then termination. A question mismatch signals a driver bug."""

    answerer_id = "oracle"

    def __init__(self, decomposition: Decomposition):
        if not decomposition.spans:
            raise ValueError("decomposition must have at least one span")
        self._spans = decomposition.spans

    def answer(self, question: str, text: str) -> Answer:
        consumed = ""
        for span in self._spans:
            if consumed == question:
                start = (
                    span.text_char_range[0]
                    if span.origin is SpanOrigin.TEXT_SPAN
                    else None
                )
                return Answer(span.matched_text, start, False)
            consumed += span.matched_text
        if consumed == question:
            return Answer(TERMINAL_ANSWER, len(text) - 1, True)
        raise OracleMismatch(f"unexpected question: {question!r}")


def oracle_answerer(decomposition: Decomposition) -> OracleAnswerer:
    return OracleAnswerer(decomposition)


class LeadAnswerer:
    """No-model baseline: answers the leading run of the text capped at a
    token budget and the first sentence boundary, then terminates."""

    answerer_id = "lead"

    _SENTENCE_ENDERS = {".", "!", "?", "\n"}

    def __init__(self, max_answer_tokens: int = 12):
        if max_answer_tokens < 1:
            raise ValueError("max_answer_tokens must be >= 1")
        self._max_answer_tokens = max_answer_tokens

    def answer(self, question: str, text: str) -> Answer:
        if question:
            return Answer(TERMINAL_ANSWER, len(text) - 1, True)
        tokens = segment(text).tokens[: self._max_answer_tokens]
        end = 0
        for tok in tokens:
            if tok.text in self._SENTENCE_ENDERS and end > 0:
                break
            end = tok.end
        end = max(end, 1)
        return Answer(text[:end], 0, False)


def lead_answerer(max_answer_tokens: int = 12) -> LeadAnswerer:
    return LeadAnswerer(max_answer_tokens)


class RemoteAnswerer:
    """HTTP client for a question-answer model service."""

    def __init__(self, endpoint: str, timeout_ms: int = 10000):
        self.endpoint = endpoint
        self.timeout_ms = timeout_ms
        self.answerer_id = f"remote:{endpoint}"
        self._client = httpx.Client(timeout=timeout_ms / 1000.0)

    def answer(self, question: str, text: str) -> Answer:
        try:
            response = self._client.post(
                self.endpoint, json={"question": question, "text": text}
            )
            response.raise_for_status()
        except httpx.TimeoutException as exc:
            raise AnswererTimeout(str(exc)) from exc
        except httpx.HTTPError as exc:
            raise AnswererTransportError(str(exc)) from exc
        try:
            body = response.json()
            answer = body["answer"]
            answer_start = body["answer_start"]
            is_termination = bool(body["is_termination"])
            if not isinstance(answer, str) or not isinstance(answer_start, int):
                raise TypeError("bad field types")
        except (ValueError, KeyError, TypeError) as exc:
            raise AnswererResponseError(f"malformed response: {exc}") from exc
        if not is_termination:
            if not answer:
                raise AnswererInvariantError("empty non-termination answer")
            if text[answer_start : answer_start + len(answer)] != answer:
                raise AnswererInvariantError(
                    f"answer {answer!r} not found at offset {answer_start}"
                )
        return Answer(answer, answer_start, is_termination)

    def close(self) -> None:
        self._client.close()


def remote_answerer(endpoint: str, timeout_ms: int = 10000) -> RemoteAnswerer:
    return RemoteAnswerer(endpoint, timeout_ms)


def write_traces_jsonl(traces: Iterable[GenerationTrace], f) -> int:
    count = 0
    for trace in traces:
        f.write(json.dumps(trace.to_record(), ensure_ascii=False) + "\n")
        count += 1
    return count
