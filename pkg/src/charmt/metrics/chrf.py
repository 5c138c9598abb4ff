"""chrF scoring: character n-gram F-score with signature-compatible semantics.

Per order n, with matched count m, hypothesis total h and reference total r:

    P_n = m / h  (0 when h = 0),    R_n = m / r  (0 when r = 0)
    F_n = (1 + beta^2) * P_n * R_n / (beta^2 * P_n + R_n)   (0 when denom = 0)

With effective ordering the final score is 100 times the mean of F_n over
orders where the hypothesis or the reference contributed at least one
n-gram; otherwise the mean runs over all configured orders. Corpus scoring
sums the per-order counts over segments and applies the formula once to the
aggregate, not to per-sentence scores.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Mapping, Sequence

from .. import __version__
from ..errors import EmptySet, LengthMismatch
from ._backend import pair_stats


@dataclass(frozen=True)
class ChrfParams:
    """Scorer configuration; the defaults encode nc:6, nw:0, space:no, case:mixed, eff:yes."""

    char_order: int = 6
    word_order: int = 0
    beta: float = 2.0
    remove_whitespace: bool = True
    lowercase: bool = False
    effective_order: bool = True

    def __post_init__(self) -> None:
        if self.char_order < 1:
            raise ValueError("char_order must be >= 1")
        if self.word_order < 0:
            raise ValueError("word_order must be >= 0")
        if self.beta <= 0:
            raise ValueError("beta must be positive")

    def signature(self) -> str:
        return "|".join(
            [
                "nrefs:1",
                f"case:{'lc' if self.lowercase else 'mixed'}",
                f"eff:{'yes' if self.effective_order else 'no'}",
                f"nc:{self.char_order}",
                f"nw:{self.word_order}",
                f"space:{'no' if self.remove_whitespace else 'yes'}",
                f"version:{__version__}",
            ]
        )

    def _check_supported(self) -> None:
        # Word n-grams are config plumbing only; scoring is character-level.
        if self.word_order != 0:
            raise NotImplementedError("word n-gram scoring (nw > 0) is not implemented")


@dataclass
class NgramStats:
    """Per-order matched / hypothesis / reference n-gram counts (index 0 = order 1)."""

    hyp_total: list[int]
    ref_total: list[int]
    matched: list[int]

    def __post_init__(self) -> None:
        if not (len(self.hyp_total) == len(self.ref_total) == len(self.matched)):
            raise ValueError("per-order count lists must have equal length")
        for h, r, m in zip(self.hyp_total, self.ref_total, self.matched):
            if min(h, r, m) < 0 or m > min(h, r):
                raise ValueError("invalid n-gram counts: need 0 <= matched <= min(hyp, ref)")

    @classmethod
    def zeros(cls, order: int) -> "NgramStats":
        return cls([0] * order, [0] * order, [0] * order)

    @classmethod
    def of_pair(cls, hyp: str, ref: str, params: ChrfParams) -> "NgramStats":
        stats = pair_stats(_prepare(hyp, params), _prepare(ref, params), params.char_order)
        return cls([s[0] for s in stats], [s[1] for s in stats], [s[2] for s in stats])

    def add(self, other: "NgramStats") -> None:
        if len(self.hyp_total) != len(other.hyp_total):
            raise ValueError("cannot add stats of different orders")
        for i in range(len(self.hyp_total)):
            self.hyp_total[i] += other.hyp_total[i]
            self.ref_total[i] += other.ref_total[i]
            self.matched[i] += other.matched[i]


@dataclass
class ScoreReport:
    """A corpus-level score plus everything needed to reproduce it."""

    score: float
    params: ChrfParams
    signature: str
    segments: int

    def to_json_obj(self) -> dict:
        return {
            "score": round(self.score, 4),
            "signature": self.signature,
            "segments": self.segments,
            "params": asdict(self.params),
        }


def _prepare(text: str, params: ChrfParams) -> str:
    if params.lowercase:
        text = text.lower()
    if params.remove_whitespace:
        text = "".join(text.split())
    return text


def ngram_profile(text: str, params: ChrfParams = ChrfParams()) -> dict[int, Counter]:
    """Per-order multisets of character n-grams after preprocessing."""
    prepared = _prepare(text, params)
    profile: dict[int, Counter] = {}
    for n in range(1, params.char_order + 1):
        profile[n] = Counter(
            prepared[i : i + n] for i in range(max(len(prepared) - n + 1, 0))
        )
    return profile


def score_from_stats(stats: NgramStats, params: ChrfParams) -> float:
    """Apply the F formula to (possibly aggregated) per-order counts."""
    params._check_supported()
    beta2 = params.beta * params.beta
    total_f = 0.0
    effective = 0
    for h, r, m in zip(stats.hyp_total, stats.ref_total, stats.matched):
        prec = m / h if h > 0 else 0.0
        rec = m / r if r > 0 else 0.0
        denom = beta2 * prec + rec
        if denom > 0.0:
            total_f += (1.0 + beta2) * prec * rec / denom
        if h > 0 or r > 0:
            effective += 1
    if params.effective_order:
        return 100.0 * total_f / effective if effective else 0.0
    return 100.0 * total_f / len(stats.hyp_total)


def sentence_chrf(hyp: str, ref: str, params: ChrfParams = ChrfParams()) -> float:
    return score_from_stats(NgramStats.of_pair(hyp, ref, params), params)


def corpus_chrf(
    hyps: Sequence[str],
    refs: Sequence[str],
    params: ChrfParams = ChrfParams(),
    jobs: int = 1,
) -> ScoreReport:
    """Aggregate n-gram counts over all segments, then score the aggregate."""
    if len(hyps) != len(refs):
        raise LengthMismatch(f"{len(hyps)} hypotheses vs {len(refs)} references")
    params._check_supported()
    total = NgramStats.zeros(params.char_order)
    if jobs > 1 and len(hyps) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for stats in pool.map(
                lambda pair: NgramStats.of_pair(pair[0], pair[1], params),
                zip(hyps, refs),
            ):
                total.add(stats)
    else:
        for hyp, ref in zip(hyps, refs):
            total.add(NgramStats.of_pair(hyp, ref, params))
    return ScoreReport(
        score=score_from_stats(total, params),
        params=params,
        signature=params.signature(),
        segments=len(hyps),
    )


def macro_mean(scores: Mapping[str, float], include: Sequence[str] | None = None) -> float:
    """Unweighted mean over the included languages (all keys when unspecified)."""
    keys = list(scores) if include is None else list(include)
    missing = [k for k in keys if k not in scores]
    if missing:
        raise KeyError(f"languages not in scores: {missing}")
    if not keys:
        raise EmptySet("macro mean over an empty language set")
    return sum(scores[k] for k in keys) / len(keys)
