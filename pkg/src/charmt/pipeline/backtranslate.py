"""Backtranslation: expand a parallel corpus with synthetic pairs from
monolingual target-language text translated by a reverse model."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..corpus.ops import merge
from ..corpus.types import Corpus, Manifest, SentencePair
from ..decode import Scorer, translate_corpus
from ..errors import PairMismatch


@dataclass
class BacktransResult:
    corpus: Corpus
    manifest: Manifest
    synthetic: Corpus
    reverse_checkpoint: str
    errors: list[tuple[int, str]] = field(default_factory=list)


def backtranslate_expand(
    mono_lines: Sequence[str],
    mono_lang: str,
    reverse_scorers: Sequence[Scorer],
    base: Corpus,
    reverse_checkpoint: str = "backtrans-1",
    beam_size: int = 5,
    max_len: int = 200,
    jobs: int = 1,
) -> BacktransResult:
    """Translate monolingual lines back to the source language and merge.

    Synthetic pairs are (hypothesis, monolingual line) tagged 'backtrans';
    base pairs are preserved bit-exact. Segments whose hypothesis comes back
    empty (or fails) are dropped and reported, never aborting the batch. The
    reverse checkpoint id is carried in the result to tell different reverse
    model stages apart.
    """
    if base.pair[1] != mono_lang:
        raise PairMismatch(
            f"monolingual language {mono_lang!r} does not match base target {base.pair[1]!r}"
        )
    src_lang = base.pair[0]
    result = translate_corpus(
        reverse_scorers,
        list(mono_lines),
        src_lang,
        beam_size=beam_size,
        max_len=max_len,
        jobs=jobs,
    )
    errors = list(result.errors)
    failed = {i for i, _ in errors}
    synthetic_pairs = []
    for i, (hyp, mono) in enumerate(zip(result.hypotheses, mono_lines)):
        if i in failed:
            continue
        if not hyp.strip():
            errors.append((i, "empty hypothesis"))
            continue
        synthetic_pairs.append(
            SentencePair(source=hyp, target=mono, pair=base.pair, provenance="backtrans")
        )
    synthetic = Corpus(pair=base.pair, pairs=synthetic_pairs)
    merged, manifest = merge([base, synthetic])
    return BacktransResult(
        corpus=merged,
        manifest=manifest,
        synthetic=synthetic,
        reverse_checkpoint=reverse_checkpoint,
        errors=sorted(errors),
    )
