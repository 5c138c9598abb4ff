"""chrF evaluation with a compiled statistics kernel and pure-Python fallback."""

from ._backend import BACKEND
from .chrf import (
    ChrfParams,
    NgramStats,
    ScoreReport,
    corpus_chrf,
    macro_mean,
    ngram_profile,
    score_from_stats,
    sentence_chrf,
)


def backend_name() -> str:
    """Which n-gram kernel was selected at import ('compiled' or 'pure-python')."""
    return BACKEND


__all__ = [
    "ChrfParams",
    "NgramStats",
    "ScoreReport",
    "backend_name",
    "corpus_chrf",
    "macro_mean",
    "ngram_profile",
    "score_from_stats",
    "sentence_chrf",
]
