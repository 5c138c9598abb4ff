"""Run orchestration: training, selection, backtranslation, ablations, zero-shot."""

from .ablation import AblationToggle, ablation_run, apply_toggle, comparison_table
from .backtranslate import BacktransResult, backtranslate_expand
from .runs import RunRecord, Snapshot, latest_checkpoint, load_run, run_paths
from .selection import Choice, SelectionReport, pick_ensembles, select_best_mean, select_best_per_language
from .training import train_run
from .zeroshot import ZeroShotReport, zero_shot_eval

__all__ = [
    "AblationToggle",
    "BacktransResult",
    "Choice",
    "RunRecord",
    "SelectionReport",
    "Snapshot",
    "ZeroShotReport",
    "ablation_run",
    "apply_toggle",
    "backtranslate_expand",
    "comparison_table",
    "latest_checkpoint",
    "load_run",
    "pick_ensembles",
    "run_paths",
    "select_best_mean",
    "select_best_per_language",
    "train_run",
    "zero_shot_eval",
]
