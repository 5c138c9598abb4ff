"""Inverse square root learning-rate schedule with linear warmup."""

from __future__ import annotations

import math

from .config import TrainConfig


def lr_at(step: int, config: TrainConfig) -> float:
    """lr = max_lr * step/W during warmup, then max_lr * sqrt(W/step).

    Continuous at step = W, where both branches give max_lr.
    """
    if step < 1:
        raise ValueError("step counts from 1")
    warmup = config.warmup_steps
    if step <= warmup:
        return config.max_lr * (step / warmup)
    return config.max_lr * math.sqrt(warmup / step)
