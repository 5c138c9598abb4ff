"""Parallel corpora: loading, normalization, auditing, and merging."""

from .types import (
    PROVENANCE_TAGS,
    AuditReport,
    Corpus,
    Manifest,
    SentencePair,
    ensure_language,
    pair_label,
    register_language,
    registered_languages,
)
from .io import load_corpus, load_parallel, load_table, save_corpus, save_parallel
from .normalize import (
    ReplacementReport,
    czn_normalize,
    czn_restore,
    default_superscript_table,
    detokenize,
    map_unsupported_punct,
)
from .ops import audit, merge

__all__ = [
    "PROVENANCE_TAGS",
    "AuditReport",
    "Corpus",
    "Manifest",
    "ReplacementReport",
    "SentencePair",
    "audit",
    "czn_normalize",
    "czn_restore",
    "default_superscript_table",
    "detokenize",
    "ensure_language",
    "load_corpus",
    "load_parallel",
    "load_table",
    "map_unsupported_punct",
    "merge",
    "pair_label",
    "register_language",
    "registered_languages",
    "save_corpus",
    "save_parallel",
]
