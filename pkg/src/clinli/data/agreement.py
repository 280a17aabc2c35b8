"""Chance-corrected inter-annotator agreement."""

from __future__ import annotations

import numpy as np


def confusion_counts(labels_a, labels_b, categories=None) -> tuple[np.ndarray, list]:
    labels_a = list(labels_a)
    labels_b = list(labels_b)
    if len(labels_a) != len(labels_b):
        raise ValueError(f"label sequences differ in length: {len(labels_a)} vs {len(labels_b)}")
    if not labels_a:
        raise ValueError("empty label sequences")
    if categories is None:
        categories = sorted(set(labels_a) | set(labels_b), key=str)
    index = {c: i for i, c in enumerate(categories)}
    table = np.zeros((len(categories), len(categories)), dtype=np.int64)
    for a, b in zip(labels_a, labels_b):
        table[index[a], index[b]] += 1
    return table, list(categories)


def kappa_from_confusion(table: np.ndarray) -> float:
    table = np.asarray(table, dtype=np.float64)
    n = table.sum()
    if n == 0:
        raise ValueError("empty confusion table")
    p_observed = np.trace(table) / n
    p_expected = float((table.sum(axis=1) / n) @ (table.sum(axis=0) / n))
    if p_expected == 1.0:
        if p_observed == 1.0:
            return 1.0
        raise ValueError("degenerate marginals: expected agreement is 1 but observed is not")
    return (p_observed - p_expected) / (1.0 - p_expected)


def cohens_kappa(labels_a, labels_b) -> float:
    """kappa = (p_o - p_e) / (1 - p_e), p_e from marginal products."""
    table, _ = confusion_counts(labels_a, labels_b)
    return kappa_from_confusion(table)
