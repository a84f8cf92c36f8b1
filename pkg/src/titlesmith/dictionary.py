"""Dictionary of words that occur in titles but not in their own document texts,
with the case-merge filtering pipeline and decomposability growth curves."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Sequence

from .decompose import decompose, decompose_with_dictionary
from .segment import TokenKind, segment


@dataclass(frozen=True)
class Dictionary:
    """Ranked (word, count) entries; all words lowercase alphabetic, counts
    non-increasing, ties broken lexicographically."""

    entries: tuple[tuple[str, int], ...]
    _words: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_words", frozenset(w for w, _ in self.entries))

    def __contains__(self, word: str) -> bool:
        return word in self._words

    def __len__(self) -> int:
        return len(self.entries)

    def prefix(self, size: int) -> "Dictionary":
        return Dictionary(entries=self.entries[:size])

    def save_tsv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            for word, count in self.entries:
                f.write(f"{word}\t{count}\n")

    @classmethod
    def load_tsv(cls, path: str | Path) -> "Dictionary":
        entries = []
        with open(path, encoding="utf-8") as f:
            for line in f:
                line = line.rstrip("\n")
                if not line:
                    continue
                word, count = line.split("\t")
                entries.append((word, int(count)))
        return cls(entries=tuple(entries))

    @classmethod
    def empty(cls) -> "Dictionary":
        return cls(entries=())


@dataclass(frozen=True)
class DictGrowthPoint:
    dict_size: int
    decomposable_docs: int
    decomposable_ratio_vs_no_dict: float
    samples_from_text: int
    samples_from_dict: int


def _is_all_lowercase(word: str) -> bool:
    return word == word.lower()


def build_dictionary(
    documents: Iterable, min_lowercase_count: int = 100, top_n: int = 1000
) -> Dictionary:
    """Count cased alphabetic title words missing from the same document's
    text, merge cased variants into lowercase entries that clear the
    lowercase-occurrence threshold, drop the remaining non-lowercase words,
    and keep the top_n by count."""
    if min_lowercase_count < 1:
        raise ValueError("min_lowercase_count must be >= 1")
    if top_n < 1:
        raise ValueError("top_n must be >= 1")

    counts: Counter[str] = Counter()
    seen_any = False
    for doc in documents:
        seen_any = True
        text_words = {
            t.text for t in segment(doc.text).tokens if t.kind is TokenKind.LETTER_RUN
        }
        for tok in segment(doc.title).tokens:
            if tok.kind is TokenKind.LETTER_RUN and tok.text not in text_words:
                counts[tok.text] += 1
    if not seen_any:
        raise ValueError("cannot build a dictionary from an empty corpus")

    # Merge cased variants into lowercase entries with enough lowercase mass.
    merged: Counter[str] = Counter()
    mergeable = {
        w for w in counts if _is_all_lowercase(w) and counts[w] >= min_lowercase_count
    }
    for word, count in counts.items():
        lower = word.lower()
        if lower in mergeable:
            merged[lower] += count
        else:
            merged[word] += count

    # Drop anything still cased.
    filtered = {w: c for w, c in merged.items() if _is_all_lowercase(w)}

    ordered = sorted(filtered.items(), key=lambda item: (-item[1], item[0]))
    return Dictionary(entries=tuple(ordered[:top_n]))


def growth_curve(
    documents: Sequence, dictionary: Dictionary, sizes: List[int]
) -> List[DictGrowthPoint]:
    """Decomposability and sample counts as the dictionary prefix grows;
    ratios are normalized by the size-0 (no dictionary) count."""
    if sorted(sizes) != list(sizes):
        raise ValueError("sizes must be sorted ascending")
    if sizes and sizes[-1] > len(dictionary):
        raise ValueError("requested size exceeds dictionary length")

    baseline = 0
    for doc in documents:
        if decompose(segment(doc.title), segment(doc.text)) is not None:
            baseline += 1

    points = []
    for size in sizes:
        sub = dictionary.prefix(size)
        decomposable = 0
        text_samples = 0
        dict_samples = 0
        for doc in documents:
            title = segment(doc.title)
            text = segment(doc.text)
            decomp = (
                decompose(title, text)
                if size == 0
                else decompose_with_dictionary(title, text, sub)
            )
            if decomp is None:
                continue
            decomposable += 1
            hits = decomp.dictionary_hits
            dict_samples += hits
            # Non-dictionary spans plus the termination sample come from text.
            text_samples += len(decomp.spans) - hits + 1
        ratio = decomposable / baseline if baseline else float("nan")
        points.append(
            DictGrowthPoint(
                dict_size=size,
                decomposable_docs=decomposable,
                decomposable_ratio_vs_no_dict=ratio,
                samples_from_text=text_samples,
                samples_from_dict=dict_samples,
            )
        )
    return points
