"""Checkpoint and ensemble selection over run records.

Strategies mirror the three submission styles: one best-mean checkpoint for
everything, the best single checkpoint per language, and per-language
ensembles adopted only on strict dev improvement over the baseline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..decode import EnsembleSpec, translate_with_spec
from ..metrics import ChrfParams, corpus_chrf, macro_mean
from .runs import RunRecord, Snapshot
from .training import DevSets


@dataclass
class Choice:
    """One selected artifact for one language, with the dev score justifying it."""

    language: str
    kind: str  # "checkpoint" | "ensemble"
    artifact: dict
    score: float

    def to_json_obj(self) -> dict:
        return {
            "language": self.language,
            "kind": self.kind,
            "artifact": self.artifact,
            "score": round(self.score, 4),
        }


@dataclass
class SelectionReport:
    strategy: str  # best_mean | best_per_language | ensemble
    choices: dict[str, Choice]
    mean: float
    notes: dict = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {
            "strategy": self.strategy,
            "choices": {
                lang: self.choices[lang].to_json_obj() for lang in sorted(self.choices)
            },
            "mean": round(self.mean, 4),
            "notes": self.notes,
        }


def _checkpoint_choice(run: RunRecord, snap: Snapshot, lang: str) -> Choice:
    return Choice(
        language=lang,
        kind="checkpoint",
        artifact={"run_id": run.run_id, "step": snap.step, "checkpoint": snap.checkpoint},
        score=snap.scores[lang],
    )


def _best_mean_snapshot(runs: Sequence[RunRecord]) -> tuple[RunRecord, Snapshot]:
    best: tuple[RunRecord, Snapshot] | None = None
    for run in runs:
        for snap in run.snapshots:
            if best is None or snap.mean > best[1].mean:  # ties keep the earliest
                best = (run, snap)
    if best is None:
        raise ValueError("selection needs at least one snapshot")
    return best


def select_best_mean(run: RunRecord) -> SelectionReport:
    """The snapshot maximizing mean dev chrF; ties go to the earliest step."""
    _, snap = _best_mean_snapshot([run])
    choices = {lang: _checkpoint_choice(run, snap, lang) for lang in snap.scores}
    return SelectionReport(
        strategy="best_mean",
        choices=choices,
        mean=snap.mean,
        notes={"step": snap.step},
    )


def select_best_per_language(runs: Sequence[RunRecord]) -> SelectionReport:
    """Per language, the (run, checkpoint) with the best dev chrF for it.

    Languages whose winner differs from the global best-mean snapshot are
    listed in the notes, since those are the ones worth submitting separately.
    """
    base_run, base_snap = _best_mean_snapshot(runs)
    choices: dict[str, Choice] = {}
    differs: list[str] = []
    for lang in sorted(base_snap.scores):
        winner: tuple[RunRecord, Snapshot] | None = None
        for run in runs:
            for snap in run.snapshots:
                if lang not in snap.scores:
                    continue
                if winner is None or snap.scores[lang] > winner[1].scores[lang]:
                    winner = (run, snap)
        assert winner is not None
        choices[lang] = _checkpoint_choice(winner[0], winner[1], lang)
        if (winner[0].run_id, winner[1].step) != (base_run.run_id, base_snap.step):
            differs.append(lang)
    return SelectionReport(
        strategy="best_per_language",
        choices=choices,
        mean=macro_mean({l: c.score for l, c in choices.items()}),
        notes={
            "differs_from_best_mean": differs,
            "best_mean_run": base_run.run_id,
            "best_mean_step": base_snap.step,
        },
    )


def pick_ensembles(
    candidates: Sequence[EnsembleSpec],
    baseline: SelectionReport,
    dev_sets: DevSets,
    eval_params: ChrfParams = ChrfParams(),
    jobs: int = 1,
) -> SelectionReport:
    """Adopt, per language, the best candidate ensemble only when it strictly
    beats the baseline's dev chrF; otherwise keep the baseline choice."""
    choices: dict[str, Choice] = {}
    adopted: list[str] = []
    for lang, base_choice in baseline.choices.items():
        if lang not in dev_sets:
            choices[lang] = base_choice
            continue
        srcs, refs = dev_sets[lang]
        best_choice = base_choice
        for idx, spec in enumerate(candidates):
            result = translate_with_spec(spec, list(srcs), lang, jobs=jobs)
            score = corpus_chrf(result.hypotheses, list(refs), eval_params).score
            if score > best_choice.score:
                best_choice = Choice(
                    language=lang,
                    kind="ensemble",
                    artifact={"candidate": idx, "spec": spec.to_json_obj()},
                    score=score,
                )
        choices[lang] = best_choice
        if best_choice.kind == "ensemble":
            adopted.append(lang)
    return SelectionReport(
        strategy="ensemble",
        choices=choices,
        mean=macro_mean({l: c.score for l, c in choices.items()}),
        notes={"adopted": adopted, "baseline_strategy": baseline.strategy},
    )
