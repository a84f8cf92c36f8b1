"""titlesmith: extractive headline toolchain built on title decomposition."""

from .segment import Token, TokenKind, TokenizedText, segment
from .decompose import (
    Decomposition,
    SpanMatch,
    SpanOrigin,
    decomposability_rate,
    decompose,
    decompose_with_dictionary,
)
from .dictionary import DictGrowthPoint, Dictionary, build_dictionary, growth_curve
from .corpus import Document, iter_documents
from .dataset import (
    DatasetStats,
    TrainingSample,
    build_corpus_dataset,
    build_samples,
    export_squad_format,
)
from .generate import (
    GenerationStep,
    GenerationTrace,
    generate,
    lead_answerer,
    oracle_answerer,
    remote_answerer,
)

__all__ = [
    "Token",
    "TokenKind",
    "TokenizedText",
    "segment",
    "Decomposition",
    "SpanMatch",
    "SpanOrigin",
    "decompose",
    "decompose_with_dictionary",
    "decomposability_rate",
    "Dictionary",
    "DictGrowthPoint",
    "build_dictionary",
    "growth_curve",
    "Document",
    "iter_documents",
    "TrainingSample",
    "DatasetStats",
    "build_samples",
    "build_corpus_dataset",
    "export_squad_format",
    "GenerationStep",
    "GenerationTrace",
    "generate",
    "oracle_answerer",
    "lead_answerer",
    "remote_answerer",
]
