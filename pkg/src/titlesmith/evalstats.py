"""Double-resampling bootstrap over evaluators and documents, score
comparison distributions, and Krippendorff's alpha for interval data."""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

SCORE_TIERS = 5  # 0 = Very Bad ... 4 = Very Good
OK_SCORE = 2
BAD_SCORE = 1


class TitleKind(Enum):
    REAL = "real"
    GENERATED = "generated"


@dataclass(frozen=True)
class ScoreRecord:
    evaluator_id: str
    doc_id: str
    title_kind: TitleKind
    score: int

    def to_record(self) -> dict:
        return {
            "evaluator_id": self.evaluator_id,
            "doc_id": self.doc_id,
            "title_kind": self.title_kind.value,
            "score": self.score,
        }

    @classmethod
    def from_record(cls, record: dict) -> "ScoreRecord":
        score = int(record["score"])
        if not 0 <= score < SCORE_TIERS:
            raise ValueError(f"score out of range: {score}")
        return cls(
            evaluator_id=str(record["evaluator_id"]),
            doc_id=str(record["doc_id"]),
            title_kind=TitleKind(record["title_kind"]),
            score=score,
        )


class ScoreMatrix:
    """Dense evaluator x document score arrays per title kind, NaN = missing."""

    def __init__(self, records: Iterable[ScoreRecord]):
        records = list(records)
        self.evaluators = sorted({r.evaluator_id for r in records})
        self.docs = sorted({r.doc_id for r in records})
        if not self.evaluators or not self.docs:
            raise ValueError("score matrix needs at least one evaluator and one document")
        e_index = {e: i for i, e in enumerate(self.evaluators)}
        d_index = {d: i for i, d in enumerate(self.docs)}
        shape = (len(self.evaluators), len(self.docs))
        self.real = np.full(shape, np.nan)
        self.generated = np.full(shape, np.nan)
        seen = set()
        for r in records:
            key = (r.evaluator_id, r.doc_id, r.title_kind)
            if key in seen:
                raise ValueError(f"duplicate score record: {key}")
            seen.add(key)
            target = self.real if r.title_kind is TitleKind.REAL else self.generated
            target[e_index[r.evaluator_id], d_index[r.doc_id]] = r.score

    def kind_array(self, kind: TitleKind) -> np.ndarray:
        return self.real if kind is TitleKind.REAL else self.generated


def read_scores_jsonl(f) -> List[ScoreRecord]:
    records = []
    for line in f:
        line = line.strip()
        if line:
            records.append(ScoreRecord.from_record(json.loads(line)))
    return records


@dataclass(frozen=True)
class IntervalEstimate:
    median: float
    lo: float
    hi: float

    def to_record(self) -> dict:
        return {"median": self.median, "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class BootstrapSummary:
    n_resamples: int
    comparison: Dict[str, IntervalEstimate]           # worse / same / better
    scores: Dict[str, List[IntervalEstimate]]         # per kind, 5 tiers
    joint: Dict[str, IntervalEstimate]                # threshold-crossing rates
    pooled_comparison: Dict[str, float]
    pooled_joint: Dict[str, float]

    def to_record(self) -> dict:
        return {
            "n_resamples": self.n_resamples,
            "comparison": {k: v.to_record() for k, v in self.comparison.items()},
            "scores": {
                kind: [e.to_record() for e in tiers]
                for kind, tiers in self.scores.items()
            },
            "joint": {k: v.to_record() for k, v in self.joint.items()},
            "pooled_comparison": self.pooled_comparison,
            "pooled_joint": self.pooled_joint,
        }


# Per-resample statistics, laid out as one float row:
#   [worse, same, better,
#    real tier 0..4, generated tier 0..4,
#    real_ok_generated_bad, generated_ok_real_bad]
_STAT_WIDTH = 3 + 2 * SCORE_TIERS + 2


def _resample_indices(seed: int, resample: int, n_eval: int, n_docs: int):
    # Substream keyed by (seed, resample index): identical output no matter
    # how resamples are distributed over workers.
    rng = np.random.Generator(np.random.Philox(key=(seed << 64) + resample))
    e_idx = rng.integers(0, n_eval, size=n_eval)
    d_idx = rng.integers(0, n_docs, size=n_docs)
    return e_idx, d_idx


def _stats_for_batch(
    matrix: ScoreMatrix, seed: int, start: int, stop: int
) -> np.ndarray:
    n_eval = len(matrix.evaluators)
    n_docs = len(matrix.docs)
    batch = stop - start
    e_sel = np.empty((batch, n_eval), dtype=np.intp)
    d_sel = np.empty((batch, n_docs), dtype=np.intp)
    for i in range(batch):
        e_sel[i], d_sel[i] = _resample_indices(seed, start + i, n_eval, n_docs)

    real = matrix.real[e_sel[:, :, None], d_sel[:, None, :]]
    gen = matrix.generated[e_sel[:, :, None], d_sel[:, None, :]]

    out = np.zeros((batch, _STAT_WIDTH))
    axes = (1, 2)

    paired = ~np.isnan(real) & ~np.isnan(gen)
    n_pairs = paired.sum(axis=axes).astype(float)
    diff = gen - real
    with np.errstate(invalid="ignore"):
        out[:, 0] = np.where(paired, diff < 0, False).sum(axis=axes) / n_pairs
        out[:, 1] = np.where(paired, diff == 0, False).sum(axis=axes) / n_pairs
        out[:, 2] = np.where(paired, diff > 0, False).sum(axis=axes) / n_pairs
        out[:, 3 + 2 * SCORE_TIERS] = (
            np.where(paired, (real >= OK_SCORE) & (gen <= BAD_SCORE), False).sum(axis=axes)
            / n_pairs
        )
        out[:, 4 + 2 * SCORE_TIERS] = (
            np.where(paired, (gen >= OK_SCORE) & (real <= BAD_SCORE), False).sum(axis=axes)
            / n_pairs
        )
        for offset, arr in ((3, real), (3 + SCORE_TIERS, gen)):
            present = ~np.isnan(arr)
            n_present = present.sum(axis=axes).astype(float)
            for tier in range(SCORE_TIERS):
                out[:, offset + tier] = (
                    np.where(present, arr == tier, False).sum(axis=axes) / n_present
                )
    return out


def _nearest_rank(sorted_values: np.ndarray, pct: float) -> float:
    n = len(sorted_values)
    rank = max(1, math.ceil(pct / 100.0 * n))
    return float(sorted_values[rank - 1])


def _estimate(column: np.ndarray) -> IntervalEstimate:
    finite = np.sort(column[~np.isnan(column)])
    if len(finite) == 0:
        return IntervalEstimate(float("nan"), float("nan"), float("nan"))
    return IntervalEstimate(
        median=_nearest_rank(finite, 50.0),
        lo=_nearest_rank(finite, 2.5),
        hi=_nearest_rank(finite, 97.5),
    )


def bootstrap(
    matrix: ScoreMatrix,
    n_resamples: int,
    seed: int,
    n_workers: int = 1,
    batch_size: int = 1000,
) -> BootstrapSummary:
    """Each resample independently draws evaluators and documents with
    replacement; reported intervals are nearest-rank percentiles across
    resamples. Deterministic for a fixed seed, regardless of n_workers."""
    if n_resamples < 1:
        raise ValueError("n_resamples must be >= 1")

    bounds = [
        (start, min(start + batch_size, n_resamples))
        for start in range(0, n_resamples, batch_size)
    ]
    if n_workers <= 1:
        chunks = [_stats_for_batch(matrix, seed, lo, hi) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            chunks = list(
                pool.map(lambda b: _stats_for_batch(matrix, seed, b[0], b[1]), bounds)
            )
    stats = np.concatenate(chunks, axis=0)

    comparison = {
        "worse": _estimate(stats[:, 0]),
        "same": _estimate(stats[:, 1]),
        "better": _estimate(stats[:, 2]),
    }
    scores = {
        "real": [_estimate(stats[:, 3 + t]) for t in range(SCORE_TIERS)],
        "generated": [
            _estimate(stats[:, 3 + SCORE_TIERS + t]) for t in range(SCORE_TIERS)
        ],
    }
    joint = {
        "real_ok_generated_bad": _estimate(stats[:, 3 + 2 * SCORE_TIERS]),
        "generated_ok_real_bad": _estimate(stats[:, 4 + 2 * SCORE_TIERS]),
    }

    pooled = comparison_distribution(matrix)
    pooled_joint = _pooled_joint_rates(matrix)

    return BootstrapSummary(
        n_resamples=n_resamples,
        comparison=comparison,
        scores=scores,
        joint=joint,
        pooled_comparison=pooled,
        pooled_joint=pooled_joint,
    )


def comparison_distribution(matrix: ScoreMatrix) -> Dict[str, float]:
    """Pooled same-evaluator, same-document comparison of generated vs real
    scores, as normalized proportions over {worse, same, better}."""
    paired = ~np.isnan(matrix.real) & ~np.isnan(matrix.generated)
    n = int(paired.sum())
    if n == 0:
        raise ValueError("no (evaluator, doc) cells have both title kinds scored")
    diff = matrix.generated[paired] - matrix.real[paired]
    return {
        "worse": float((diff < 0).sum()) / n,
        "same": float((diff == 0).sum()) / n,
        "better": float((diff > 0).sum()) / n,
    }


def _pooled_joint_rates(matrix: ScoreMatrix) -> Dict[str, float]:
    paired = ~np.isnan(matrix.real) & ~np.isnan(matrix.generated)
    n = int(paired.sum())
    if n == 0:
        return {"real_ok_generated_bad": float("nan"), "generated_ok_real_bad": float("nan")}
    real = matrix.real[paired]
    gen = matrix.generated[paired]
    return {
        "real_ok_generated_bad": float(((real >= OK_SCORE) & (gen <= BAD_SCORE)).sum()) / n,
        "generated_ok_real_bad": float(((gen >= OK_SCORE) & (real <= BAD_SCORE)).sum()) / n,
    }


def krippendorff_alpha(values: Sequence[Tuple[str, str, float]]) -> float:
    """Interval-metric alpha, 1 - D_observed/D_expected with squared
    differences, from the coincidence matrix over pairable values.

    values: (unit, rater, value) triples; units with fewer than two ratings
    are excluded as unpairable.
    """
    by_unit: Dict[str, List[float]] = {}
    for unit, _rater, value in values:
        by_unit.setdefault(unit, []).append(float(value))
    pairable = {u: vs for u, vs in by_unit.items() if len(vs) >= 2}
    if len(pairable) < 2:
        raise ValueError("need at least 2 units with at least 2 ratings each")

    distinct = sorted({v for vs in pairable.values() for v in vs})
    v_index = {v: i for i, v in enumerate(distinct)}
    k = len(distinct)
    coincidence = np.zeros((k, k))
    for vs in pairable.values():
        m = len(vs)
        for a in vs:
            for b in vs:
                coincidence[v_index[a], v_index[b]] += 1.0 / (m - 1)
        for a in vs:
            coincidence[v_index[a], v_index[a]] -= 1.0 / (m - 1)

    n_c = coincidence.sum(axis=1)
    n_total = n_c.sum()
    vals = np.array(distinct)
    delta = (vals[:, None] - vals[None, :]) ** 2
    d_observed = (coincidence * delta).sum()
    d_expected = (np.outer(n_c, n_c) * delta).sum() / (n_total - 1)
    if d_expected == 0:
        # No value variation at all: perfect agreement by definition.
        return 1.0
    return float(1.0 - d_observed / d_expected)


def matrix_alpha_inputs(
    matrix: ScoreMatrix, kind: Optional[TitleKind] = None
) -> List[Tuple[str, str, float]]:
    """Flatten a score matrix into alpha triples; unit = (doc, kind) so the
    overall alpha treats real and generated titles as separate units."""
    triples = []
    kinds = [kind] if kind is not None else [TitleKind.REAL, TitleKind.GENERATED]
    for use_kind in kinds:
        arr = matrix.kind_array(use_kind)
        for i, evaluator in enumerate(matrix.evaluators):
            for j, doc in enumerate(matrix.docs):
                if not np.isnan(arr[i, j]):
                    triples.append((f"{doc}:{use_kind.value}", evaluator, arr[i, j]))
    return triples


def comparison_alpha_inputs(matrix: ScoreMatrix) -> List[Tuple[str, str, float]]:
    """Alpha triples for the per-document generated-minus-real sign rating."""
    triples = []
    for i, evaluator in enumerate(matrix.evaluators):
        for j, doc in enumerate(matrix.docs):
            r = matrix.real[i, j]
            g = matrix.generated[i, j]
            if not np.isnan(r) and not np.isnan(g):
                triples.append((doc, evaluator, float(np.sign(g - r))))
    return triples


@dataclass(frozen=True)
class DivergenceStats:
    exact_match_rate: float
    mean_real_answers: float
    mean_generated_answers: float
    training_title_repeat_rate: float

    def to_record(self) -> dict:
        return {
            "exact_match_rate": self.exact_match_rate,
            "mean_real_answers": self.mean_real_answers,
            "mean_generated_answers": self.mean_generated_answers,
            "training_title_repeat_rate": self.training_title_repeat_rate,
        }


def headline_divergence(
    pairs: Sequence[Tuple[str, str, int, int]],
    training_titles: frozenset = frozenset(),
) -> DivergenceStats:
    """pairs: (real_title, generated_title, real_answer_count,
    generated_answer_count) per document."""
    if not pairs:
        raise ValueError("pairs must be non-empty")
    n = len(pairs)
    exact = sum(1 for real, gen, _, _ in pairs if real == gen)
    repeats = sum(1 for _, gen, _, _ in pairs if gen in training_titles)
    return DivergenceStats(
        exact_match_rate=exact / n,
        mean_real_answers=sum(p[2] for p in pairs) / n,
        mean_generated_answers=sum(p[3] for p in pairs) / n,
        training_title_repeat_rate=repeats / n,
    )
