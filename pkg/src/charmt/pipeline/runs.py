"""Run records and the run directory layout.

A run directory contains config.json, manifest.json, snapshots.jsonl (one
validation snapshot per line), checkpoints/step-N.ckpt, and reports/.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from ..corpus.types import Manifest
from ..metrics import macro_mean
from ..model.config import TrainConfig


@dataclass
class Snapshot:
    """One validation point: per-language dev chrF, their mean, training loss."""

    step: int
    scores: dict[str, float]
    loss: float
    checkpoint: str
    mean: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        computed = macro_mean(self.scores)
        if self.mean is None:
            self.mean = computed
        elif abs(self.mean - computed) > 1e-9:
            raise ValueError("snapshot mean must equal the macro mean of its scores")

    def to_json_obj(self) -> dict:
        scores = {k: round(v, 4) for k, v in sorted(self.scores.items())}
        return {
            "step": self.step,
            "scores": scores,
            "mean": round(macro_mean(scores), 4),
            "loss": round(self.loss, 6),
            "checkpoint": self.checkpoint,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Snapshot":
        # The mean is recomputed from the stored (4-decimal) scores so the
        # self-consistency invariant holds exactly after a round trip.
        return cls(
            step=obj["step"],
            scores=dict(obj["scores"]),
            loss=obj["loss"],
            checkpoint=obj["checkpoint"],
        )


@dataclass
class RunRecord:
    run_id: str
    config: TrainConfig
    manifest: Manifest
    snapshots: list[Snapshot] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        steps = [s.step for s in self.snapshots]
        if steps != sorted(steps):
            raise ValueError("snapshots must be ordered by step")

    def final_step(self) -> int:
        return self.snapshots[-1].step if self.snapshots else 0

    def languages(self) -> list[str]:
        return sorted(self.snapshots[0].scores) if self.snapshots else []


def run_paths(run_dir: str | Path) -> dict[str, Path]:
    root = Path(run_dir)
    return {
        "root": root,
        "config": root / "config.json",
        "manifest": root / "manifest.json",
        "snapshots": root / "snapshots.jsonl",
        "checkpoints": root / "checkpoints",
        "reports": root / "reports",
    }


def init_run_dir(
    run_dir: str | Path, run_id: str, config: TrainConfig, manifest: Manifest, meta: dict
) -> None:
    paths = run_paths(run_dir)
    paths["root"].mkdir(parents=True, exist_ok=True)
    paths["checkpoints"].mkdir(exist_ok=True)
    paths["reports"].mkdir(exist_ok=True)
    paths["config"].write_text(
        json.dumps(
            {"run_id": run_id, "config": config.to_json_obj(), "meta": meta},
            indent=2,
            sort_keys=True,
        )
        + "\n",
        encoding="utf-8",
    )
    paths["manifest"].write_text(
        json.dumps(manifest.to_json_obj(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def append_snapshot(run_dir: str | Path, snapshot: Snapshot) -> None:
    with open(run_paths(run_dir)["snapshots"], "a", encoding="utf-8") as fh:
        fh.write(json.dumps(snapshot.to_json_obj(), sort_keys=True) + "\n")


def load_run(run_dir: str | Path) -> RunRecord:
    paths = run_paths(run_dir)
    cfg_obj = json.loads(paths["config"].read_text(encoding="utf-8"))
    manifest = Manifest.from_json_obj(
        json.loads(paths["manifest"].read_text(encoding="utf-8"))
    )
    snapshots: list[Snapshot] = []
    seen_steps: set[int] = set()
    if paths["snapshots"].exists():
        for line in paths["snapshots"].read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            snap = Snapshot.from_json_obj(json.loads(line))
            if snap.step in seen_steps:  # replayed validation after a resume
                continue
            seen_steps.add(snap.step)
            snapshots.append(snap)
    snapshots.sort(key=lambda s: s.step)
    return RunRecord(
        run_id=cfg_obj["run_id"],
        config=TrainConfig.from_json_obj(cfg_obj["config"]),
        manifest=manifest,
        snapshots=snapshots,
        meta=cfg_obj.get("meta", {}),
    )


_CKPT_RE = re.compile(r"^step-(\d+)\.ckpt$")


def latest_checkpoint(run_dir: str | Path) -> Path | None:
    ckpt_dir = run_paths(run_dir)["checkpoints"]
    if not ckpt_dir.is_dir():
        return None
    best: tuple[int, Path] | None = None
    for path in ckpt_dir.iterdir():
        match = _CKPT_RE.match(path.name)
        if match:
            step = int(match.group(1))
            if best is None or step > best[0]:
                best = (step, path)
    return best[1] if best else None
