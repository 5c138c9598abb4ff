"""Ablation runs: train one variant per toggle and compare at matched updates."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from ..codec import Vocabulary
from ..corpus.types import Corpus
from ..metrics import ChrfParams, macro_mean
from ..model.checkpoint import Checkpoint
from ..model.config import TrainConfig, TransformerShape
from dataclasses import replace

from .runs import RunRecord
from .training import DevSets, train_run


@dataclass(frozen=True)
class AblationToggle:
    """One training variant: restrict data, drop a source, re-init, or freeze."""

    name: str
    single_language: str | None = None
    exclude_provenance: tuple[str, ...] = ()
    random_init: bool = False
    freeze_scope: str | None = None


def apply_toggle(
    corpora: dict[str, Corpus], toggle: AblationToggle
) -> dict[str, Corpus]:
    out: dict[str, Corpus] = {}
    for label, corpus in corpora.items():
        if toggle.single_language and corpus.pair[1] != toggle.single_language:
            continue
        if toggle.exclude_provenance:
            pairs = [
                sp for sp in corpus if sp.provenance not in toggle.exclude_provenance
            ]
            if not pairs:
                continue
            corpus = Corpus(pair=corpus.pair, pairs=pairs)
        out[label] = corpus
    return out


def ablation_run(
    base_config: TrainConfig,
    toggles: Sequence[AblationToggle],
    corpora: dict[str, Corpus],
    dev_sets: DevSets,
    out_dir: str | Path,
    base_init: Checkpoint | None = None,
    shape: TransformerShape | None = None,
    vocab: Vocabulary | None = None,
    eval_params: ChrfParams = ChrfParams(),
    eval_max_len: int = 120,
) -> tuple[dict[str, RunRecord], dict]:
    """One run per toggle, all at base_config.max_updates, plus a comparison table.

    random_init variants start from seeded random parameters even when a
    pretrained base checkpoint is supplied.
    """
    out_dir = Path(out_dir)
    records: dict[str, RunRecord] = {}
    for toggle in toggles:
        config = base_config
        if toggle.freeze_scope is not None:
            config = replace(config, freeze_scope=toggle.freeze_scope)
        variant_corpora = apply_toggle(corpora, toggle)
        if not variant_corpora:
            raise ValueError(f"toggle {toggle.name!r} removes all training data")
        variant_dev = dev_sets
        if toggle.single_language:
            variant_dev = {toggle.single_language: dev_sets[toggle.single_language]}
        init = None if toggle.random_init else base_init
        record, _ = train_run(
            config,
            variant_corpora,
            variant_dev,
            out_dir / toggle.name,
            init=init,
            shape=shape,
            vocab=vocab,
            run_id=toggle.name,
            meta={"toggle": toggle.name},
            eval_params=eval_params,
            eval_max_len=eval_max_len,
        )
        records[toggle.name] = record
    table = comparison_table(records)
    return records, table


def comparison_table(records: dict[str, RunRecord]) -> dict:
    """Final-snapshot scores per variant, chrF to one decimal, matched updates."""
    steps = {name: rec.final_step() for name, rec in records.items()}
    if len(set(steps.values())) > 1:
        raise ValueError(f"ablation comparisons need matched update counts, got {steps}")
    rows = []
    for name, rec in records.items():
        snap = rec.snapshots[-1]
        rows.append(
            {
                "model": name,
                "scores": {lang: round(v, 1) for lang, v in sorted(snap.scores.items())},
                "mean": round(macro_mean(snap.scores), 1),
            }
        )
    return {"updates": next(iter(steps.values())), "rows": rows}
