"""Orchestrated training runs: sampling, validation, checkpointing, resumption.

Validation happens every valid_freq updates (and at the final update); each
validation decodes every language's dev set greedily, scores it with chrF,
writes a checkpoint carrying the generator states, then appends the snapshot
line. Resuming from the latest checkpoint replays identically to an
uninterrupted run.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

import numpy as np
import torch

from ..codec import Vocabulary, build_vocab
from ..corpus.types import Corpus, Manifest
from ..decode import ModelScorer, greedy_translate_batch
from ..errors import IncompatibleVocab, NonFiniteLoss
from ..metrics import ChrfParams, corpus_chrf
from ..model.checkpoint import Checkpoint, init_random, load_checkpoint, save_checkpoint
from ..model.config import TrainConfig, TransformerShape
from ..model.training import TrainState, make_batch, train_step
from ..sampler import draw_batch, pair_distribution
from .runs import RunRecord, Snapshot, append_snapshot, init_run_dir, latest_checkpoint, load_run, run_paths

DevSets = dict[str, tuple[Sequence[str], Sequence[str]]]


def _validate(
    state: TrainState, dev_sets: DevSets, eval_params: ChrfParams, eval_max_len: int
) -> dict[str, float]:
    scorer = ModelScorer(state.model, state.vocab)
    scores = {}
    for lang, (srcs, refs) in sorted(dev_sets.items()):
        hyps = greedy_translate_batch(scorer, list(srcs), lang, max_len=eval_max_len)
        scores[lang] = corpus_chrf(hyps, list(refs), eval_params).score
    return scores


def _save_state(
    state: TrainState, path: Path, rng: np.random.Generator, meta: dict
) -> None:
    meta = dict(meta)
    meta["numpy_rng"] = rng.bit_generator.state
    ckpt = state.to_checkpoint(
        meta=meta,
        extras={"torch_rng_state": torch.get_rng_state().to(torch.uint8)},
    )
    tmp = path.with_suffix(".tmp")
    save_checkpoint(ckpt, tmp)
    tmp.replace(path)


def train_run(
    config: TrainConfig,
    corpora: dict[str, Corpus],
    dev_sets: DevSets,
    run_dir: str | Path,
    init: Checkpoint | None = None,
    shape: TransformerShape | None = None,
    vocab: Vocabulary | None = None,
    run_id: str | None = None,
    meta: dict | None = None,
    eval_params: ChrfParams = ChrfParams(),
    eval_max_len: int = 120,
) -> tuple[RunRecord, list[Path]]:
    """Train to config.max_updates, resuming from run_dir when it has checkpoints."""
    paths = run_paths(run_dir)
    manifest = Manifest.from_corpora(list(corpora.values()))
    dist = pair_distribution(manifest, config.pair_temperature)
    resume_from = latest_checkpoint(run_dir)

    if resume_from is not None:
        ckpt = load_checkpoint(resume_from)
        state = TrainState(ckpt, config)
        rng = np.random.default_rng(config.seed)
        if "numpy_rng" in ckpt.meta:
            rng.bit_generator.state = ckpt.meta["numpy_rng"]
        if "torch_rng_state" in ckpt.extras:
            torch.set_rng_state(ckpt.extras["torch_rng_state"].to(torch.uint8))
        record = load_run(run_dir)
        # Heal the window between checkpoint write and snapshot append.
        pending = ckpt.meta.get("snapshot")
        if pending and all(s.step != pending["step"] for s in record.snapshots):
            append_snapshot(run_dir, Snapshot.from_json_obj(pending))
    else:
        if vocab is None:
            vocab = build_vocab(list(corpora.values()))
        if init is None:
            init = init_random(shape or TransformerShape(), vocab, config.seed)
        elif init.vocab.fingerprint() != vocab.fingerprint():
            raise IncompatibleVocab("init checkpoint vocabulary differs from the run vocabulary")
        run_meta = {
            "seed": config.seed,
            "torch_threads": torch.get_num_threads(),
            "distribution": dist.to_json_obj(),
            **(meta or {}),
        }
        init_run_dir(
            run_dir, run_id or Path(run_dir).name, config, manifest, run_meta
        )
        state = TrainState(init, config)
        torch.manual_seed(config.seed)
        rng = np.random.default_rng(config.seed)

    loss_window: list[float] = []
    while state.step < config.max_updates:
        batches = [
            make_batch(draw_batch(rng, corpora, dist, config.batch_size), state.vocab)
            for _ in range(config.update_freq)
        ]
        try:
            metrics = train_step(state, batches, config)
        except NonFiniteLoss:
            _save_state(
                state, paths["checkpoints"] / f"aborted-step-{state.step}.ckpt", rng, {}
            )
            raise
        loss_window.append(metrics.loss)
        if state.step % config.valid_freq == 0 or state.step == config.max_updates:
            scores = _validate(state, dev_sets, eval_params, eval_max_len)
            snapshot = Snapshot(
                step=state.step,
                scores=scores,
                loss=sum(loss_window) / len(loss_window),
                checkpoint=f"checkpoints/step-{state.step}.ckpt",
            )
            _save_state(
                state,
                paths["checkpoints"] / f"step-{state.step}.ckpt",
                rng,
                {"snapshot": snapshot.to_json_obj()},
            )
            append_snapshot(run_dir, snapshot)
            loss_window = []

    record = load_run(run_dir)
    checkpoints = sorted(
        paths["checkpoints"].glob("step-*.ckpt"),
        key=lambda p: int(p.stem.split("-")[1]),
    )
    return record, checkpoints
