"""Multiclass gradient boosting with depth-limited regression trees.

Per round, one tree per class fits the softmax residual (one-hot minus
predicted probability); leaves take the usual multiclass Newton value
(K-1)/K * sum(residual) / sum(p*(1-p)). Scores start at the log class
priors, so a zero-round model predicts the priors. There is no row or
feature subsampling, so training is deterministic.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from .features import FEATURE_NAMES


@dataclass
class GbmConfig:
    rounds: int = 100
    depth: int = 3
    learning_rate: float = 0.1
    min_leaf: int = 1
    seed: int = 0  # reserved for subsampling variants; training is deterministic without it


def _softmax_rows(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _leaf_value(residual: np.ndarray, hessian: np.ndarray, n_classes: int) -> float:
    denom = hessian.sum()
    if denom <= 1e-12:
        return 0.0
    return float((n_classes - 1) / n_classes * residual.sum() / denom)


def _fit_tree(x, residual, hessian, depth, min_leaf, n_classes) -> dict:
    if depth == 0 or x.shape[0] < 2 * min_leaf:
        return {"leaf": _leaf_value(residual, hessian, n_classes)}
    feat, threshold, gain = kernels.best_split(x, residual, min_leaf)
    if feat < 0 or gain <= 0.0:
        return {"leaf": _leaf_value(residual, hessian, n_classes)}
    left = x[:, feat] <= threshold
    right = ~left
    return {
        "feature": int(feat),
        "threshold": float(threshold),
        "left": _fit_tree(x[left], residual[left], hessian[left], depth - 1, min_leaf, n_classes),
        "right": _fit_tree(x[right], residual[right], hessian[right], depth - 1, min_leaf, n_classes),
    }


def _tree_predict(tree: dict, x: np.ndarray) -> np.ndarray:
    out = np.zeros(x.shape[0])
    stack = [(tree, np.arange(x.shape[0]))]
    while stack:
        node, rows = stack.pop()
        if rows.size == 0:
            continue
        if "leaf" in node:
            out[rows] = node["leaf"]
            continue
        go_left = x[rows, node["feature"]] <= node["threshold"]
        stack.append((node["left"], rows[go_left]))
        stack.append((node["right"], rows[~go_left]))
    return out


def feature_manifest_hash(names=FEATURE_NAMES) -> str:
    return hashlib.sha256("\n".join(names).encode("utf-8")).hexdigest()


@dataclass
class GbmModel:
    config: GbmConfig
    n_features: int
    n_classes: int
    base_scores: np.ndarray  # (K,) log priors
    trees: list = field(default_factory=list)  # rounds x classes nested dicts
    train_losses: list = field(default_factory=list)
    feature_hash: str = ""

    def decision_scores(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim == 1:
            x = x[None, :]
        if x.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {x.shape[1]}")
        scores = np.tile(self.base_scores, (x.shape[0], 1))
        for round_trees in self.trees:
            for k, tree in enumerate(round_trees):
                scores[:, k] += self.config.learning_rate * _tree_predict(tree, x)
        return scores

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        return _softmax_rows(self.decision_scores(x))

    def predict(self, x: np.ndarray) -> np.ndarray:
        return self.predict_proba(x).argmax(axis=1)

    def save(self, path) -> None:
        payload = {
            "format": "clinli-gbm",
            "version": 1,
            "config": {
                "rounds": self.config.rounds,
                "depth": self.config.depth,
                "learning_rate": self.config.learning_rate,
                "min_leaf": self.config.min_leaf,
                "seed": self.config.seed,
            },
            "n_features": self.n_features,
            "n_classes": self.n_classes,
            "base_scores": self.base_scores.tolist(),
            "trees": self.trees,
            "train_losses": self.train_losses,
            "feature_hash": self.feature_hash,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)

    @classmethod
    def load(cls, path) -> "GbmModel":
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        if payload.get("format") != "clinli-gbm":
            raise ValueError(f"{path}: not a boosted-tree checkpoint")
        return cls(
            config=GbmConfig(**payload["config"]),
            n_features=payload["n_features"],
            n_classes=payload["n_classes"],
            base_scores=np.array(payload["base_scores"]),
            trees=payload["trees"],
            train_losses=payload["train_losses"],
            feature_hash=payload.get("feature_hash", ""),
        )


def gbm_train(features: np.ndarray, labels: np.ndarray, config: GbmConfig | None = None) -> GbmModel:
    config = config or GbmConfig()
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    classes = np.unique(y)
    if classes.size < 2:
        raise ValueError("training data contains a single class")
    n_classes = int(classes.max()) + 1
    n = x.shape[0]
    one_hot = np.zeros((n, n_classes))
    one_hot[np.arange(n), y] = 1.0
    priors = one_hot.mean(axis=0)
    base = np.log(np.clip(priors, 1e-12, None))

    model = GbmModel(
        config=config,
        n_features=x.shape[1],
        n_classes=n_classes,
        base_scores=base,
        feature_hash=feature_manifest_hash() if x.shape[1] == len(FEATURE_NAMES) else "",
    )
    scores = np.tile(base, (n, 1))
    for _ in range(config.rounds):
        probs = _softmax_rows(scores)
        model.train_losses.append(float(-np.log(np.clip(probs[np.arange(n), y], 1e-12, None)).mean()))
        round_trees = []
        for k in range(n_classes):
            residual = one_hot[:, k] - probs[:, k]
            hessian = probs[:, k] * (1.0 - probs[:, k])
            tree = _fit_tree(x, residual, hessian, config.depth, config.min_leaf, n_classes)
            round_trees.append(tree)
            scores[:, k] += config.learning_rate * _tree_predict(tree, x)
        model.trees.append(round_trees)
    probs = _softmax_rows(scores)
    model.train_losses.append(float(-np.log(np.clip(probs[np.arange(n), y], 1e-12, None)).mean()))
    return model
