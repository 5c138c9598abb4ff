"""Zero-shot evaluation over multiparallel dev sets.

Because dev sets are aligned row-wise across languages, any (source, target)
direction can be scored by decoding one column with another column's target
tag, whether or not that direction was ever trained.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..decode import Scorer, translate_corpus
from ..errors import LengthMismatch
from ..metrics import ChrfParams, corpus_chrf
from ..corpus.types import pair_label


@dataclass
class ZeroShotReport:
    """One row, one column per direction (the trained one first, by convention)."""

    model: str
    directions: list[str]
    scores: dict[str, float]

    def to_json_obj(self) -> dict:
        return {
            "model": self.model,
            "directions": list(self.directions),
            "scores": {d: round(self.scores[d], 4) for d in self.directions},
        }


def zero_shot_eval(
    scorers: Sequence[Scorer],
    multiparallel: dict[str, Sequence[str]],
    directions: Sequence[tuple[str, str]],
    label: str = "model",
    params: ChrfParams = ChrfParams(),
    beam_size: int = 5,
    max_len: int = 200,
    jobs: int = 1,
) -> tuple[ZeroShotReport, dict[str, list[str]]]:
    """Score each direction's chrF; returns the report and the raw hypotheses."""
    lengths = {lang: len(rows) for lang, rows in multiparallel.items()}
    if len(set(lengths.values())) > 1:
        raise LengthMismatch(f"multiparallel columns differ in length: {lengths}")
    scores: dict[str, float] = {}
    hypotheses: dict[str, list[str]] = {}
    labels = []
    for src_lang, tgt_lang in directions:
        direction = pair_label((src_lang, tgt_lang))
        labels.append(direction)
        result = translate_corpus(
            scorers,
            list(multiparallel[src_lang]),
            tgt_lang,
            beam_size=beam_size,
            max_len=max_len,
            jobs=jobs,
        )
        hypotheses[direction] = result.hypotheses
        scores[direction] = corpus_chrf(
            result.hypotheses, list(multiparallel[tgt_lang]), params
        ).score
    return ZeroShotReport(model=label, directions=labels, scores=scores), hypotheses
