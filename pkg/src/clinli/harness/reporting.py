"""Multi-seed aggregation and gain tables."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .training import RunResult


@dataclass
class SeedAggregate:
    seeds: list
    accuracies: list
    mean_accuracy: float
    std_accuracy: float
    dev_accuracies: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "seeds": self.seeds,
            "accuracies": self.accuracies,
            "mean_accuracy": self.mean_accuracy,
            "std_accuracy": self.std_accuracy,
            "dev_accuracies": self.dev_accuracies,
        }


def multi_seed_report(run_fn, seeds) -> tuple[SeedAggregate, list[RunResult]]:
    """Run ``run_fn(seed)`` per seed and aggregate test (else dev) accuracy.

    The mean is the plain arithmetic mean; the deviation is the population
    standard deviation.
    """
    seeds = list(seeds)
    if not seeds:
        raise ValueError("need at least one seed")
    results = [run_fn(seed) for seed in seeds]
    accuracies = [r.test_accuracy if r.test_accuracy is not None else r.dev_accuracy for r in results]
    aggregate = SeedAggregate(
        seeds=seeds,
        accuracies=accuracies,
        mean_accuracy=float(np.mean(accuracies)),
        std_accuracy=float(np.std(accuracies)),
        dev_accuracies=[r.dev_accuracy for r in results],
    )
    return aggregate, results


def gain_table(variants: dict, baseline_mean: float) -> list[dict]:
    """Accuracy deltas against a named baseline, in percentage points.

    ``variants`` maps (source_domain, transfer_mode, model) keys to mean
    accuracies.
    """
    rows = []
    for (source_domain, mode, model_name), mean_acc in sorted(variants.items()):
        rows.append(
            {
                "source_domain": source_domain,
                "transfer_mode": mode,
                "model": model_name,
                "accuracy": round(mean_acc, 6),
                "gain": round((mean_acc - baseline_mean) * 100.0, 4),
            }
        )
    return rows


def write_gain_csv(rows, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["source_domain", "transfer_mode", "model", "accuracy", "gain"])
        writer.writeheader()
        writer.writerows(rows)


def write_metrics_json(result: RunResult, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(result.metrics_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
