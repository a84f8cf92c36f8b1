import re

import pytest

from titlesmith.corpus import Document
from titlesmith.dictionary import Dictionary, build_dictionary, growth_curve


def _doc(doc_id, title, text):
    return Document(doc_id, "s.example.com", "2019-01-01", title, text)


def test_hand_built_fixture_exact(dict_corpus):
    # Hand-computed per the construction steps: counts of cased title words
    # missing from their own text are
    #   Mayor 1, seeks 2, City 1, Union 1, head 4, says 1, Bank 1, of 1,
    #   trading 1, quits 1, Seeks 1, for 1, workers 1, Head 1, increases 1.
    # With a lowercase threshold of 2, "seeks" (2) and "head" (4) absorb
    # their cased variants; remaining cased words are dropped.
    d = build_dictionary(dict_corpus, min_lowercase_count=2, top_n=9)
    assert d.entries == (
        ("head", 5),
        ("seeks", 3),
        ("for", 1),
        ("increases", 1),
        ("of", 1),
        ("quits", 1),
        ("says", 1),
        ("trading", 1),
        ("workers", 1),
    )


def test_case_merge_threshold_behavior():
    # "Says" twice, "says" once, all missing from their texts.
    docs = [
        _doc("a", "Says one", "one thing happened."),
        _doc("b", "Says two", "two things happened."),
        _doc("c", "says three", "three things happened."),
    ]
    low = build_dictionary(docs, min_lowercase_count=1, top_n=10)
    assert ("says", 3) in low.entries
    assert not any(w == "Says" for w, _ in low.entries)

    high = build_dictionary(docs, min_lowercase_count=2, top_n=10)
    # Below threshold: no merge, the cased variant is dropped at the filter.
    assert ("says", 1) in high.entries


def test_membership_is_case_sensitive_at_counting():
    docs = [_doc("a", "Mayor speaks", "the mayor speaks loudly.")]
    d = build_dictionary(docs, min_lowercase_count=1, top_n=10)
    # "Mayor" is missing case-sensitively but is cased, so it is dropped.
    assert len(d) == 0 or "mayor" not in [w for w, _ in d.entries]


def test_all_title_words_in_text_yields_empty():
    docs = [_doc("a", "the storm", "the storm passed.")]
    d = build_dictionary(docs, min_lowercase_count=1, top_n=10)
    assert d.entries == ()


def test_purity_and_ordering(fixture_corpus):
    d = build_dictionary(fixture_corpus, min_lowercase_count=1, top_n=50)
    counts = [c for _, c in d.entries]
    assert counts == sorted(counts, reverse=True)
    for word, count in d.entries:
        assert word == word.lower()
        assert re.fullmatch(r"[^\W\d_]+", word)
        assert count >= 1
    # Equal counts are ordered lexicographically.
    for (w1, c1), (w2, c2) in zip(d.entries, d.entries[1:]):
        if c1 == c2:
            assert w1 < w2


def test_empty_corpus_errors():
    with pytest.raises(ValueError):
        build_dictionary([], min_lowercase_count=1, top_n=5)


def test_tsv_round_trip(tmp_path, dict_corpus):
    d = build_dictionary(dict_corpus, min_lowercase_count=2, top_n=9)
    path = tmp_path / "dict.tsv"
    d.save_tsv(path)
    assert Dictionary.load_tsv(path).entries == d.entries
    # Rerun is byte-identical.
    first = path.read_bytes()
    d.save_tsv(path)
    assert path.read_bytes() == first


# -- growth curve ------------------------------------------------------------


def test_growth_fixture_exact(growth_corpus, fixtures_dir):
    d = Dictionary.load_tsv(fixtures_dir / "growth_dict.tsv")
    points = growth_curve(growth_corpus, d, [0, 1, 2])
    assert [p.decomposable_docs for p in points] == [3, 5, 8]
    assert points[0].decomposable_ratio_vs_no_dict == 1.0
    assert points[1].decomposable_ratio_vs_no_dict == pytest.approx(5 / 3)
    assert [p.samples_from_dict for p in points] == [0, 2, 5]


def test_growth_monotonicity(fixture_corpus):
    d = build_dictionary(fixture_corpus, min_lowercase_count=1, top_n=50)
    points = growth_curve(fixture_corpus, d, [0, 1, 5, 10, 50])
    docs_counts = [p.decomposable_docs for p in points]
    dict_samples = [p.samples_from_dict for p in points]
    assert docs_counts == sorted(docs_counts)
    assert dict_samples == sorted(dict_samples)
    assert points[0].decomposable_ratio_vs_no_dict == 1.0


def test_growth_prefix_consistency(growth_corpus, fixtures_dir):
    d = Dictionary.load_tsv(fixtures_dir / "growth_dict.tsv")
    points_direct = growth_curve(growth_corpus, d.prefix(1), [0, 1])
    points_full = growth_curve(growth_corpus, d, [0, 1])
    assert [p.decomposable_docs for p in points_direct] == [
        p.decomposable_docs for p in points_full
    ]


def test_growth_rejects_unsorted_and_oversized(growth_corpus, fixtures_dir):
    d = Dictionary.load_tsv(fixtures_dir / "growth_dict.tsv")
    with pytest.raises(ValueError):
        growth_curve(growth_corpus, d, [1, 0])
    with pytest.raises(ValueError):
        growth_curve(growth_corpus, d, [0, 3])
