"""charmt: a desk-scale toolkit for multilingual character-level machine translation.

Covers the full pipeline: parallel-corpus ingestion and normalization, chrF
evaluation, character vocabulary with language tags, a small transformer
encoder-decoder with seeded training, temperature-based pair sampling,
beam-search decoding with model ensembling, backtranslation, checkpoint and
ensemble selection, ablations, and zero-shot evaluation.
"""

__version__ = "0.1.0"
