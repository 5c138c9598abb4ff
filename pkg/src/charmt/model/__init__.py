"""Transformer model, loss, schedule, training step, and checkpointing."""

from .checkpoint import (
    Checkpoint,
    extend_embeddings,
    init_random,
    load_checkpoint,
    model_from_checkpoint,
    save_checkpoint,
)
from .config import TrainConfig, TransformerShape, desk_config, parse_freeze_scope
from .losses import label_smoothed_loss
from .schedule import lr_at
from .training import Batch, StepMetrics, TrainState, apply_freeze, make_batch, train_step
from .transformer import TransformerModel, init_parameters

__all__ = [
    "Batch",
    "Checkpoint",
    "StepMetrics",
    "TrainConfig",
    "TrainState",
    "TransformerModel",
    "TransformerShape",
    "apply_freeze",
    "desk_config",
    "extend_embeddings",
    "init_parameters",
    "init_random",
    "label_smoothed_loss",
    "load_checkpoint",
    "lr_at",
    "make_batch",
    "model_from_checkpoint",
    "parse_freeze_scope",
    "save_checkpoint",
    "train_step",
]
