#!/usr/bin/env python3
"""Generate the bundled fixture corpora under tests/fixtures/.

Deterministic: rerunning produces byte-identical files.
"""
from __future__ import annotations

import json
import random
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

NOUNS = [
    "mayor", "council", "city", "river", "bridge", "storm", "union", "report",
    "school", "budget", "election", "museum", "harbor", "train", "market",
    "garden", "police", "hospital", "airport", "factory",
]
VERBS = [
    "opened", "closed", "approved", "rejected", "visited", "toured",
    "announced", "delayed", "funded", "repaired", "flooded", "inspected",
]
NAMES = [
    "Christopher John", "Maria García", "André Müller", "Li Wei",
    "Sofia Rossi", "Olga Ivanova", "João Silva", "Aoife Byrne",
]
EXTRAS = [
    "on Monday", "after the vote", "despite protests", "for 3 weeks",
    "in early 2019", "near the coast", "with new funding", "at dawn",
]

# Headline-ese words that never appear in generated texts; they drive the
# in-title-not-in-text dictionary and the growth curves.
MISSING_WORDS = [
    "seeks", "head", "increases", "issues", "decreases", "says", "publishes",
    "announces", "vows", "eyes", "slams", "touts", "mulls", "backs", "urges",
    "warns", "denies", "hails", "probes", "weighs", "nears", "snubs", "lauds",
    "decries", "floats", "inks", "nixes", "okays", "pans", "preps", "readies",
    "shuns", "spurns", "stokes", "taps", "tips", "woos", "axes", "bags",
    "bids", "bows", "buoys", "cites", "dubs", "fells", "flags", "grips",
    "halts", "helms", "ires", "jolts", "lifts", "mars", "nods", "pegs",
    "quits", "rues", "sways", "tests", "vexes", "wins",
]


def make_sentence(rng: random.Random) -> str:
    name = rng.choice(NAMES)
    noun = rng.choice(NOUNS)
    verb = rng.choice(VERBS)
    extra = rng.choice(EXTRAS)
    forms = [
        f"{name} {verb} the {noun} {extra}.",
        f"The {noun} was {verb} by {name} {extra}.",
        f"{name} said the {noun} {verb} {extra}.",
        f"A {noun} {verb} {extra}, according to {name}.",
    ]
    return rng.choice(forms)


def make_text(rng: random.Random, sentences: int) -> str:
    return " ".join(make_sentence(rng) for _ in range(sentences))


def token_spans(text: str):
    """Char ranges of token-aligned word groups to sample title pieces from."""
    import titlesmith

    tokens = titlesmith.segment(text).tokens
    spans = []
    for start in range(len(tokens)):
        for length in (1, 2, 3, 4, 5, 6, 7):
            if start + length > len(tokens):
                break
            spans.append((tokens[start].char_offset, tokens[start + length - 1].end))
    return spans


def decomposable_title(rng: random.Random, text: str) -> str:
    spans = token_spans(text)
    pieces = [text[a:b] for a, b in (rng.choice(spans) for _ in range(rng.randint(1, 4)))]
    return "".join(pieces).strip() or text.split()[0]


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    rng = random.Random(12345)

    docs = []
    # Decomposable: titles stitched from token-aligned text spans.
    for i in range(90):
        text = make_text(rng, rng.randint(4, 8))
        title = decomposable_title(rng, text)
        docs.append((f"dec-{i:03d}", title, text))
    # Non-decomposable: one or two headline-ese words the text never contains.
    for i in range(110):
        text = make_text(rng, rng.randint(4, 8))
        base = decomposable_title(rng, text)
        words = rng.sample(MISSING_WORDS, rng.randint(1, 2))
        parts = base.split(" ")
        for w in words:
            parts.insert(rng.randint(0, len(parts)), w if rng.random() < 0.7 else w.capitalize())
        docs.append((f"mis-{i:03d}", " ".join(parts), text))
    # Unicode-heavy documents, some decomposable.
    for i in range(20):
        text = make_text(rng, 3) + " Der Fluß erreichte 4,5 Meter über Null. "
        text += "Ævar Þór wrote about the café on Rue de l'Église."
        if i % 2 == 0:
            title = decomposable_title(rng, text)
        else:
            title = "naïve " + rng.choice(MISSING_WORDS) + " " + decomposable_title(rng, text)
        docs.append((f"uni-{i:03d}", title, text))

    sources = [f"source-{i % 40}.example.com" for i in range(len(docs))]
    with open(FIXTURES / "corpus.jsonl", "w", encoding="utf-8") as f:
        for (doc_id, title, text), source in zip(docs, sources):
            f.write(
                json.dumps(
                    {
                        "id": doc_id,
                        "source": source,
                        "published_at": "2019-01-15",
                        "title": title,
                        "text": text,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )

    # Hand-built 6-document corpus for exact dictionary construction checks.
    dict_docs = [
        ("d1", "Mayor seeks new votes", "The mayor wants new votes from the city."),
        ("d2", "City seeks calm after storm", "Officials called for calm after the storm hit the city."),
        ("d3", "Union head says pay increases", "The union leader said pay will rise next year."),
        ("d4", "Bank says head of trading quits", "A top executive is leaving the bank, a spokesman says."),
        ("d5", "Seeks better deal for workers", "Workers want a better deal, the union stated."),
        ("d6", "head head Head lines", "The column lines up nicely."),
    ]
    with open(FIXTURES / "dict_corpus.jsonl", "w", encoding="utf-8") as f:
        for doc_id, title, text in dict_docs:
            f.write(
                json.dumps(
                    {
                        "id": doc_id,
                        "source": "fixture.example.com",
                        "published_at": "2019-01-15",
                        "title": title,
                        "text": text,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )

    # Growth fixture: 3 docs decompose bare, 2 more need "seeks" (dict rank 1),
    # 3 more need "union" (dict rank 2).
    growth_docs = [
        ("g1", "The bridge opened on Monday", "The bridge opened on Monday after repairs."),
        ("g2", "Storm closed the harbor", "Storm winds closed the harbor for two days."),
        ("g3", "Museum funded at last", "The Museum funded at last by the city council."),
        ("g4", "Mayor seeks votes", "The city Mayor hopes for votes in the spring election."),
        ("g5", "Council seeks new budget", "The Council drafted a new budget for schools."),
        ("g6", "Workers union rejects offer", "The Workers group rejects the latest offer."),
        ("g7", "Rail union delays trains", "The Rail strike delays trains across the region."),
        ("g8", "Port union backs deal", "Dockers at the Port decided and backs the deal now."),
    ]
    with open(FIXTURES / "growth_corpus.jsonl", "w", encoding="utf-8") as f:
        for doc_id, title, text in growth_docs:
            f.write(
                json.dumps(
                    {
                        "id": doc_id,
                        "source": "growth.example.com",
                        "published_at": "2019-01-15",
                        "title": title,
                        "text": text,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    with open(FIXTURES / "growth_dict.tsv", "w", encoding="utf-8") as f:
        f.write("seeks\t10\nunion\t5\n")

    print(f"wrote fixtures to {FIXTURES}")


if __name__ == "__main__":
    main()
