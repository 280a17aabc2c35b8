"""Prediction combination by probability summation."""

from __future__ import annotations

import numpy as np

from ..models.neural import Prediction


def ensemble_predict(predictions) -> Prediction:
    """Sum the distributions and renormalize.

    Ties break toward the lowest class index (argmax takes the first
    maximum), which is entailment < contradiction < neutral.
    """
    predictions = list(predictions)
    if not predictions:
        raise ValueError("ensemble needs at least one prediction")
    stacked = []
    for p in predictions:
        probs = p.probabilities if isinstance(p, Prediction) else np.asarray(p, dtype=np.float64)
        stacked.append(probs)
    width = stacked[0].shape[0]
    if any(p.shape != (width,) for p in stacked):
        raise ValueError("predictions disagree on the number of classes")
    total = np.sum(stacked, axis=0)
    return Prediction.from_probabilities(total / total.sum())


def ensemble_proba_matrix(matrices) -> np.ndarray:
    """Row-wise ensemble over aligned (N, K) probability matrices."""
    matrices = [np.asarray(m, dtype=np.float64) for m in matrices]
    if not matrices:
        raise ValueError("ensemble needs at least one prediction matrix")
    total = np.sum(matrices, axis=0)
    return total / total.sum(axis=1, keepdims=True)
