"""Training configuration and model shape.

TrainConfig defaults are the full-scale recipe (inverse square root schedule,
warmup 10k, Adam(0.9, 0.98), label smoothing 0.1, clip norm 1e-6, pair
temperature 3, 1M updates). desk_config() scales the step-dependent values
down proportionally for laptop-scale runs and returns a record of every
override so run metadata can log them.
"""

from __future__ import annotations

import re
from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class TransformerShape:
    model_dim: int = 64
    ff_dim: int = 128
    heads: int = 4
    encoder_layers: int = 2
    decoder_layers: int = 2
    max_positions: int = 256

    def __post_init__(self) -> None:
        if self.model_dim % self.heads != 0:
            raise ValueError("model_dim must be divisible by heads")
        if min(self.encoder_layers, self.decoder_layers) < 1:
            raise ValueError("need at least one encoder and one decoder layer")

    def to_json_obj(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "TransformerShape":
        return cls(**obj)


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = 16
    update_freq: int = 1
    max_lr: float = 0.01
    schedule: str = "inverse_sqrt"
    warmup_steps: int = 10_000
    adam_betas: tuple[float, float] = (0.9, 0.98)
    label_smoothing: float = 0.1
    weight_decay: float = 0.0001
    dropout: float = 0.3
    clip_norm: float = 1e-6
    pair_temperature: float = 3.0
    max_updates: int = 1_000_000
    valid_freq: int = 40_000
    seed: int = 1
    freeze_scope: str = "none"

    def __post_init__(self) -> None:
        if min(self.max_lr, self.clip_norm, self.pair_temperature) <= 0:
            raise ValueError("rates and temperature must be positive")
        if not 0 <= self.label_smoothing < 1:
            raise ValueError("label_smoothing must be in [0, 1)")
        if self.warmup_steps < 1:
            raise ValueError("warmup_steps must be >= 1")
        if self.schedule != "inverse_sqrt":
            raise ValueError(f"unknown schedule {self.schedule!r}")
        parse_freeze_scope(self.freeze_scope)

    def to_json_obj(self) -> dict:
        obj = asdict(self)
        obj["adam_betas"] = list(self.adam_betas)
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "TrainConfig":
        obj = dict(obj)
        obj["adam_betas"] = tuple(obj.get("adam_betas", (0.9, 0.98)))
        return cls(**obj)


_LAST_K_RE = re.compile(r"^last_k_decoder_layers\((\d+)\)$")


def parse_freeze_scope(scope: str) -> tuple[str, int | None]:
    """'none' | 'decoder_only' | 'last_k_decoder_layers(k)' -> (kind, k)."""
    if scope in ("none", "decoder_only"):
        return scope, None
    match = _LAST_K_RE.match(scope)
    if match:
        k = int(match.group(1))
        if k < 1:
            raise ValueError("last_k_decoder_layers needs k >= 1")
        return "last_k_decoder_layers", k
    raise ValueError(f"unknown freeze scope {scope!r}")


def desk_config(scale: float = 0.002, **overrides) -> tuple[TrainConfig, dict]:
    """A laptop-scale profile: step counts scaled by `scale`, stability overrides.

    clip_norm 1e-6 and max_lr 0.01 come from the full-scale recipe where the
    optimizer's scale invariance absorbs them; at desk scale they are replaced
    by conventional values. Every override is returned for run metadata.
    """
    base = TrainConfig()
    desk = {
        "warmup_steps": max(1, round(base.warmup_steps * scale)),
        "max_updates": max(1, round(base.max_updates * scale)),
        "valid_freq": max(1, round(base.valid_freq * scale)),
        "clip_norm": 1.0,
        "max_lr": 0.003,
        "dropout": 0.1,
    }
    desk.update(overrides)
    record = {"profile": "desk", "scale": scale, "overrides": dict(desk)}
    return replace(base, **desk), record
