"""Training protocol, evaluation, transfer regimes, ensembling, and probes."""

from .ensemble import ensemble_predict, ensemble_proba_matrix
from .probe import PREMISE_PLACEHOLDER, blind_premises, hypothesis_only_probe
from .reporting import SeedAggregate, gain_table, multi_seed_report, write_gain_csv, write_metrics_json
from .training import (
    EvalReport,
    RunResult,
    TrainConfig,
    TrainingDivergedError,
    early_stop_trace,
    evaluate,
    report_from_confusion,
    train,
)
from .transfer import TRANSFER_MODES, TransferPlan, TransferResult, default_transfer_plan, transfer_run

__all__ = [
    "TrainConfig",
    "RunResult",
    "train",
    "evaluate",
    "EvalReport",
    "report_from_confusion",
    "early_stop_trace",
    "TrainingDivergedError",
    "TransferPlan",
    "TransferResult",
    "transfer_run",
    "default_transfer_plan",
    "TRANSFER_MODES",
    "ensemble_predict",
    "ensemble_proba_matrix",
    "hypothesis_only_probe",
    "blind_premises",
    "PREMISE_PLACEHOLDER",
    "multi_seed_report",
    "SeedAggregate",
    "gain_table",
    "write_gain_csv",
    "write_metrics_json",
]
