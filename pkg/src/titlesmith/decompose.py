"""Greedy longest-match-first decomposition of a title into document-text spans."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, TYPE_CHECKING

from .segment import TokenizedText, TokenKind

if TYPE_CHECKING:
    from .dictionary import Dictionary


class SpanOrigin(Enum):
    TEXT_SPAN = "text"
    DICTIONARY_WORD = "dict"


@dataclass(frozen=True)
class SpanMatch:
    title_token_range: tuple[int, int]  # half-open [q, k+1) into title tokens
    text_char_range: tuple[int, int]    # half-open char range into the document source
    matched_text: str
    origin: SpanOrigin


@dataclass(frozen=True)
class Decomposition:
    title: str
    spans: tuple[SpanMatch, ...]

    @property
    def dictionary_hits(self) -> int:
        return sum(1 for s in self.spans if s.origin is SpanOrigin.DICTIONARY_WORD)


def _build_token_index(text: TokenizedText) -> dict[str, list[int]]:
    index: dict[str, list[int]] = {}
    for j, tok in enumerate(text.tokens):
        index.setdefault(tok.text, []).append(j)
    return index


def decompose(title: TokenizedText, text: TokenizedText) -> Optional[Decomposition]:
    """Tile the title with the longest token-aligned text matches, left to right.

    At each step the longest title-prefix slice that occurs as a contiguous
    run of whole text tokens is taken; among equally long matches the
    earliest text position wins. Returns None if any step finds no match.
    """
    return _decompose(title, text, None)


def decompose_with_dictionary(
    title: TokenizedText, text: TokenizedText, dictionary: "Dictionary"
) -> Optional[Decomposition]:
    """Like decompose, but a single letter-run token with no text match may be
    consumed from the dictionary (matched case-insensitively, one token per
    rescue)."""
    return _decompose(title, text, dictionary)


def _decompose(
    title: TokenizedText, text: TokenizedText, dictionary: Optional["Dictionary"]
) -> Optional[Decomposition]:
    if not title.tokens:
        raise ValueError("title must have at least one token")
    title_toks = title.tokens
    text_toks = text.tokens
    n = len(title_toks)
    index = _build_token_index(text)

    spans: list[SpanMatch] = []
    q = 0
    while q < n:
        positions = index.get(title_toks[q].text, [])
        best_len = 0
        best_pos = -1
        for m in positions:
            length = 1
            while (
                q + length < n
                and m + length < len(text_toks)
                and title_toks[q + length].text == text_toks[m + length].text
            ):
                length += 1
            if length > best_len:
                best_len = length
                best_pos = m
        if best_len == 0:
            tok = title_toks[q]
            if (
                dictionary is not None
                and tok.kind is TokenKind.LETTER_RUN
                and tok.text.lower() in dictionary
            ):
                spans.append(
                    SpanMatch(
                        title_token_range=(q, q + 1),
                        text_char_range=(0, 0),
                        matched_text=tok.text,
                        origin=SpanOrigin.DICTIONARY_WORD,
                    )
                )
                q += 1
                continue
            return None
        start = text_toks[best_pos].char_offset
        end = text_toks[best_pos + best_len - 1].end
        spans.append(
            SpanMatch(
                title_token_range=(q, q + best_len),
                text_char_range=(start, end),
                matched_text=text.source[start:end],
                origin=SpanOrigin.TEXT_SPAN,
            )
        )
        q += best_len
    return Decomposition(title=title.source, spans=tuple(spans))


def decomposability_rate(
    documents: Iterable, dictionary: Optional["Dictionary"] = None
) -> float:
    """Fraction of documents whose title decomposes against its own text."""
    from .segment import segment

    total = 0
    ok = 0
    for doc in documents:
        total += 1
        decomp = _decompose(segment(doc.title), segment(doc.text), dictionary)
        if decomp is not None:
            ok += 1
    if total == 0:
        raise ValueError("decomposability rate is undefined for an empty corpus")
    return ok / total
