"""Corpus-level operations: duplicate/overlap auditing and provenance-aware merging."""

from __future__ import annotations

from collections import Counter
from typing import Sequence

from ..errors import PairMismatch
from .types import AuditReport, Corpus, Manifest, pair_label


def audit(corpora: Sequence[Corpus]) -> AuditReport:
    """Count exact within-corpus duplicates and pairwise cross-corpus overlaps.

    Equality is exact (source, target) string equality after NFC. The
    duplicate count for a corpus is its number of surplus pairs
    (len - distinct); overlaps count distinct shared pairs and are symmetric.
    """
    keysets = []
    duplicates = []
    for corpus in corpora:
        keys = Counter(sp.key() for sp in corpus)
        duplicates.append(len(corpus) - len(keys))
        keysets.append(set(keys))
    overlaps = {}
    for i in range(len(corpora)):
        for j in range(i + 1, len(corpora)):
            overlaps[(i, j)] = len(keysets[i] & keysets[j])
    return AuditReport(duplicates=duplicates, overlaps=overlaps)


def merge(corpora: Sequence[Corpus], dedup: bool = False) -> tuple[Corpus, Manifest]:
    """Concatenate same-pair corpora, optionally dropping exact duplicates.

    Order and per-pair provenance are preserved; when dedup is set the first
    occurrence of each (source, target) wins. Returns the merged corpus with
    the manifest describing it.
    """
    if not corpora:
        raise ValueError("merge requires at least one corpus")
    pair = corpora[0].pair
    for corpus in corpora[1:]:
        if corpus.pair != pair:
            raise PairMismatch(
                f"cannot merge {pair_label(corpus.pair)} into {pair_label(pair)}"
            )
    merged = []
    seen = set()
    for corpus in corpora:
        for sp in corpus:
            if dedup:
                key = sp.key()
                if key in seen:
                    continue
                seen.add(key)
            merged.append(sp)
    out = Corpus(pair=pair, pairs=merged)
    return out, Manifest.from_corpora([out])
