"""Batching, parameter freezing, and the deterministic training update."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import torch

from ..codec import Vocabulary, encode_pair
from ..corpus.types import SentencePair
from ..errors import NonFiniteLoss
from .checkpoint import Checkpoint, model_from_checkpoint
from .config import TrainConfig, parse_freeze_scope
from .losses import label_smoothed_loss
from .schedule import lr_at


@dataclass
class Batch:
    """Padded id matrices with explicit padding marks (the marks are authoritative)."""

    src: torch.Tensor
    tgt_in: torch.Tensor
    tgt_out: torch.Tensor
    src_pad_mask: torch.Tensor
    tgt_pad_mask: torch.Tensor


def _pad_matrix(seqs: list[list[int]], pad_id: int) -> tuple[torch.Tensor, torch.Tensor]:
    width = max(len(s) for s in seqs)
    ids = torch.full((len(seqs), width), pad_id, dtype=torch.long)
    mask = torch.ones(len(seqs), width, dtype=torch.bool)
    for i, seq in enumerate(seqs):
        ids[i, : len(seq)] = torch.tensor(seq, dtype=torch.long)
        mask[i, : len(seq)] = False
    return ids, mask


def make_batch(pairs: Sequence[SentencePair], vocab: Vocabulary) -> Batch:
    encoded = [encode_pair(sp, vocab) for sp in pairs]
    src, src_mask = _pad_matrix([e[0] for e in encoded], vocab.pad_id)
    tgt_in, tgt_in_mask = _pad_matrix([e[1][:-1] for e in encoded], vocab.pad_id)
    tgt_out, _ = _pad_matrix([e[1][1:] for e in encoded], vocab.pad_id)
    return Batch(
        src=src,
        tgt_in=tgt_in,
        tgt_out=tgt_out,
        src_pad_mask=src_mask,
        tgt_pad_mask=tgt_in_mask,
    )


def apply_freeze(model, scope: str) -> None:
    kind, k = parse_freeze_scope(scope)
    if kind == "none":
        return
    if kind == "decoder_only":
        prefixes = ("decoder.",)
    else:
        layers = model.shape.decoder_layers
        first = max(0, layers - k)
        prefixes = tuple(f"decoder.layers.{i}." for i in range(first, layers))
    for name, param in model.named_parameters():
        if name.startswith(prefixes):
            param.requires_grad_(False)


@dataclass
class StepMetrics:
    step: int
    loss: float
    grad_norm: float
    lr: float


class TrainState:
    """Model + optimizer + step counter, rebuildable from a checkpoint."""

    def __init__(self, ckpt: Checkpoint, config: TrainConfig | None = None):
        self.config = config or ckpt.config or TrainConfig()
        self.vocab = ckpt.vocab
        self.shape = ckpt.shape
        self.step = ckpt.step
        self.model = model_from_checkpoint(ckpt, dropout=self.config.dropout)
        apply_freeze(self.model, self.config.freeze_scope)
        self.trainable = [
            (name, p) for name, p in self.model.named_parameters() if p.requires_grad
        ]
        self.optimizer = torch.optim.Adam(
            [p for _, p in self.trainable],
            lr=self.config.max_lr,
            betas=self.config.adam_betas,
            weight_decay=self.config.weight_decay,
        )
        self._load_optim(ckpt.optim)

    def _load_optim(self, stored: dict[str, torch.Tensor]) -> None:
        for name, param in self.trainable:
            if f"{name}.exp_avg" not in stored:
                continue
            self.optimizer.state[param] = {
                "step": stored[f"{name}.step"].clone(),
                "exp_avg": stored[f"{name}.exp_avg"].clone(),
                "exp_avg_sq": stored[f"{name}.exp_avg_sq"].clone(),
            }

    def _dump_optim(self) -> dict[str, torch.Tensor]:
        out: dict[str, torch.Tensor] = {}
        for name, param in self.trainable:
            state = self.optimizer.state.get(param)
            if not state:
                continue
            step = state["step"]
            if not torch.is_tensor(step):
                step = torch.tensor(float(step))
            out[f"{name}.step"] = step.detach().clone()
            out[f"{name}.exp_avg"] = state["exp_avg"].detach().clone()
            out[f"{name}.exp_avg_sq"] = state["exp_avg_sq"].detach().clone()
        return out

    def to_checkpoint(
        self, meta: dict | None = None, extras: dict[str, torch.Tensor] | None = None
    ) -> Checkpoint:
        return Checkpoint(
            params={k: v.detach().clone() for k, v in self.model.named_parameters()},
            optim=self._dump_optim(),
            step=self.step,
            vocab=self.vocab,
            shape=self.shape,
            config=self.config,
            meta=meta or {},
            extras=extras or {},
        )


def train_step(
    state: TrainState,
    batches: Batch | Sequence[Batch],
    config: TrainConfig | None = None,
) -> StepMetrics:
    """One optimizer update: update_freq accumulated batches, clip, Adam, schedule.

    Raises NonFiniteLoss before any parameter is touched, so the state stays
    usable (and checkpointable) on failure.
    """
    cfg = config or state.config
    if isinstance(batches, Batch):
        batches = [batches]
    if len(batches) != cfg.update_freq:
        raise ValueError(f"expected {cfg.update_freq} batches per update, got {len(batches)}")
    model = state.model
    model.train()
    opt = state.optimizer
    opt.zero_grad(set_to_none=True)
    total_loss = 0.0
    for batch in batches:
        logits = model(batch.src, batch.tgt_in, batch.src_pad_mask, batch.tgt_pad_mask)
        loss = label_smoothed_loss(
            logits,
            batch.tgt_out,
            cfg.label_smoothing,
            state.vocab.pad_id,
            mask=~batch.tgt_pad_mask,
        )
        if not torch.isfinite(loss):
            raise NonFiniteLoss(f"non-finite loss at step {state.step + 1}")
        (loss / len(batches)).backward()
        total_loss += loss.item()
    params = [p for _, p in state.trainable]
    torch.nn.utils.clip_grad_norm_(params, cfg.clip_norm)
    grad_norm = math.sqrt(
        sum(float(p.grad.double().pow(2).sum()) for p in params if p.grad is not None)
    )
    lr = lr_at(state.step + 1, cfg)
    for group in opt.param_groups:
        group["lr"] = lr
    opt.step()
    state.step += 1
    return StepMetrics(
        step=state.step, loss=total_loss / len(batches), grad_norm=grad_norm, lr=lr
    )
