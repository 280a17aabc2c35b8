"""Training with early stopping on validation loss.

An epoch "improves" only when it strictly lowers the best validation
loss seen so far; ties count against patience. Training stops once
``patience`` consecutive epochs fail to improve, and the parameters are
restored to the best epoch's snapshot.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ..autodiff import AdamState, Tape, adam_step, ops
from ..data.batching import batchify, make_batch
from ..data.types import DatasetSplit, Vocabulary
from ..errors import ClinliError
from ..models.neural import NliModel


class TrainingDivergedError(ClinliError):
    def __init__(self, epoch: int, batch_index: int, value: float):
        self.epoch = epoch
        self.batch_index = batch_index
        super().__init__(f"non-finite loss {value!r} at epoch {epoch}, batch {batch_index}")


@dataclass
class TrainConfig:
    batch_size: int = 16
    max_epochs: int = 50
    patience: int = 5
    lr: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.patience < 1:
            raise ValueError("patience must be >= 1")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")


@dataclass
class RunResult:
    train_losses: list = field(default_factory=list)
    val_losses: list = field(default_factory=list)
    best_epoch: int = 0  # 1-based
    stopped_epoch: int = 0
    dev_accuracy: float | None = None
    test_accuracy: float | None = None
    precision: list = field(default_factory=list)
    recall: list = field(default_factory=list)
    confusion: list = field(default_factory=list)
    seed: int = 0
    wall_time: float = 0.0

    def metrics_dict(self) -> dict:
        """Deterministic metrics payload; wall time deliberately excluded."""
        return {
            "seed": self.seed,
            "train_losses": [round(v, 12) for v in self.train_losses],
            "val_losses": [round(v, 12) for v in self.val_losses],
            "best_epoch": self.best_epoch,
            "stopped_epoch": self.stopped_epoch,
            "dev_accuracy": self.dev_accuracy,
            "test_accuracy": self.test_accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "confusion": self.confusion,
        }


def early_stop_trace(val_losses, patience: int) -> tuple[int, int]:
    """(best_epoch, stop_epoch), 1-based, for a scripted loss sequence."""
    best = np.inf
    best_epoch = 0
    since = 0
    for epoch, loss in enumerate(val_losses, start=1):
        if loss < best:
            best = loss
            best_epoch = epoch
            since = 0
        else:
            since += 1
        if since >= patience:
            return best_epoch, epoch
    return best_epoch, len(val_losses)


def _dataset_loss(model: NliModel, batches, head: str) -> float:
    total, count = 0.0, 0
    for batch in batches:
        loss = ops.cross_entropy(model.forward(batch, head), batch.labels)
        total += loss.item() * len(batch)
        count += len(batch)
    return total / count


def train(
    model: NliModel,
    train_split: DatasetSplit,
    dev_split: DatasetSplit,
    vocab: Vocabulary,
    config: TrainConfig | None = None,
    head: str = "head",
    params: dict | None = None,
    test_split: DatasetSplit | None = None,
) -> RunResult:
    """Optimize ``params`` (default: trunk + head) with Adam; restore the best epoch.

    Deterministic for a fixed config and seed: batch order, updates, and
    the early-stopping decision depend only on them.
    """
    if len(train_split) == 0 or len(dev_split) == 0:
        raise ValueError("train and dev splits must be non-empty")
    config = config or TrainConfig()
    params = params if params is not None else model.trainable_params(head)
    state = AdamState(lr=config.lr)
    dev_batches = batchify(dev_split, config.batch_size, vocab)
    result = RunResult(seed=config.seed)
    started = time.perf_counter()

    best = np.inf
    since = 0
    snapshot: dict[str, np.ndarray] | None = None
    for epoch in range(1, config.max_epochs + 1):
        batches = batchify(train_split, config.batch_size, vocab, seed=config.seed * 100003 + epoch)
        epoch_loss, seen = 0.0, 0
        for batch_index, batch in enumerate(batches):
            for p in params.values():
                p.zero_grad()
            with Tape() as tape:
                loss = ops.cross_entropy(model.forward(batch, head), batch.labels)
            value = loss.item()
            if not np.isfinite(value):
                raise TrainingDivergedError(epoch, batch_index, value)
            tape.backward(loss)
            adam_step(params, state)
            epoch_loss += value * len(batch)
            seen += len(batch)
        result.train_losses.append(epoch_loss / seen)
        val = _dataset_loss(model, dev_batches, head)
        result.val_losses.append(val)
        if val < best:
            best = val
            result.best_epoch = epoch
            since = 0
            snapshot = {name: model.params[name].data.copy() for name in model.params}
        else:
            since += 1
        result.stopped_epoch = epoch
        if since >= config.patience:
            break

    if snapshot is not None:
        for name, data in snapshot.items():
            model.params[name].data = data
    dev_eval = evaluate(model, dev_split, vocab, batch_size=config.batch_size, head=head)
    result.dev_accuracy = dev_eval.accuracy
    result.precision = dev_eval.precision
    result.recall = dev_eval.recall
    result.confusion = dev_eval.confusion
    if test_split is not None and len(test_split) > 0:
        result.test_accuracy = evaluate(model, test_split, vocab, batch_size=config.batch_size, head=head).accuracy
    result.wall_time = time.perf_counter() - started
    return result


@dataclass
class EvalReport:
    accuracy: float
    precision: list
    recall: list
    confusion: list
    n: int


def evaluate(
    model: NliModel, split: DatasetSplit, vocab: Vocabulary, batch_size: int = 32, head: str = "head"
) -> EvalReport:
    """Accuracy, per-class precision/recall, and the 3x3 confusion matrix (rows = gold)."""
    if len(split) == 0:
        raise ValueError("cannot evaluate an empty split")
    confusion = np.zeros((3, 3), dtype=np.int64)
    for start in range(0, len(split), batch_size):
        batch = make_batch(split.pairs[start : start + batch_size], vocab)
        predicted = model.predict_proba(batch, head).argmax(axis=1)
        for gold, pred in zip(batch.labels, predicted):
            confusion[gold, pred] += 1
    return report_from_confusion(confusion)


def report_from_confusion(confusion: np.ndarray) -> EvalReport:
    confusion = np.asarray(confusion, dtype=np.int64)
    n = int(confusion.sum())
    accuracy = float(np.trace(confusion)) / n
    precision, recall = [], []
    for k in range(confusion.shape[0]):
        col = confusion[:, k].sum()
        row = confusion[k, :].sum()
        precision.append(float(confusion[k, k] / col) if col else 0.0)
        recall.append(float(confusion[k, k] / row) if row else 0.0)
    return EvalReport(accuracy=accuracy, precision=precision, recall=recall, confusion=confusion.tolist(), n=n)
