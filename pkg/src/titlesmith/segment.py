"""Minimal token segmentation: maximal letter runs, maximal digit runs, single chars otherwise."""
from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import List

# Letters are Unicode categories Lu, Ll, Lt, Lm, Lo; digits are Nd.
_LETTER_CATS = frozenset({"Lu", "Ll", "Lt", "Lm", "Lo"})


class TokenKind(Enum):
    LETTER_RUN = "letter_run"
    DIGIT_RUN = "digit_run"
    OTHER = "other"


@lru_cache(maxsize=4096)
def _char_kind(ch: str) -> TokenKind:
    cat = unicodedata.category(ch)
    if cat in _LETTER_CATS:
        return TokenKind.LETTER_RUN
    if cat == "Nd":
        return TokenKind.DIGIT_RUN
    return TokenKind.OTHER


@dataclass(frozen=True)
class Token:
    text: str
    kind: TokenKind
    char_offset: int  # offset of the first character, in Unicode scalar values

    @property
    def end(self) -> int:
        return self.char_offset + len(self.text)


@dataclass(frozen=True)
class TokenizedText:
    source: str
    tokens: tuple[Token, ...]

    def __len__(self) -> int:
        return len(self.tokens)

    def token_texts(self) -> List[str]:
        return [t.text for t in self.tokens]


def segment(source: str) -> TokenizedText:
    """Segment a string into the shortest tokens such that no two adjacent
    tokens meet letter-to-letter or digit-to-digit.

    Letter and digit runs are kept whole (splitting them would create such a
    boundary); every other character stands alone. Total over any Unicode
    string; empty input yields no tokens.
    """
    tokens: List[Token] = []
    n = len(source)
    i = 0
    while i < n:
        kind = _char_kind(source[i])
        if kind is TokenKind.OTHER:
            tokens.append(Token(source[i], kind, i))
            i += 1
            continue
        j = i + 1
        while j < n and _char_kind(source[j]) is kind:
            j += 1
        tokens.append(Token(source[i:j], kind, i))
        i = j
    return TokenizedText(source=source, tokens=tuple(tokens))
