"""Pure-Python n-gram statistics kernel (fallback for the compiled one)."""

from __future__ import annotations

from collections import Counter


def pair_stats(hyp: str, ref: str, max_order: int) -> list[tuple[int, int, int]]:
    """Per-order (hypothesis total, reference total, matched) n-gram counts.

    Inputs must already be preprocessed (case, whitespace). Matching is
    multiset intersection: sum over n-grams of min(hyp count, ref count).
    """
    stats = []
    for n in range(1, max_order + 1):
        hyp_total = max(len(hyp) - n + 1, 0)
        ref_total = max(len(ref) - n + 1, 0)
        matched = 0
        if hyp_total and ref_total:
            hyp_counts = Counter(hyp[i : i + n] for i in range(hyp_total))
            ref_counts = Counter(ref[i : i + n] for i in range(ref_total))
            matched = sum(
                min(c, ref_counts[g]) for g, c in hyp_counts.items() if g in ref_counts
            )
        stats.append((hyp_total, ref_total, matched))
    return stats
