"""Pull ontology-connected tokens together while anchoring to the originals.

Each full sweep visits nodes in lexicographic order and replaces the
vector in place with the exact minimizer of the local objective:

    q_i <- (alpha * q_hat_i + sum_j beta_ij * q_j) / (alpha + sum_j beta_ij)

Because edge weights are symmetric, every in-place update weakly decreases

    sum_i alpha * ||q_i - q_hat_i||^2  +  sum_(i,j) beta_ij * ||q_i - q_j||^2

(the second sum over each undirected edge once), so the recorded
objective trajectory is non-increasing. Tokens with no neighbors are
never touched.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import DataFormatError
from .matrix import EmbeddingMatrix


@dataclass
class RetrofitConfig:
    alpha: float = 1.0
    beta: float | str = "inverse-degree"  # uniform weight, or symmetric 1/max(deg_i, deg_j)
    iterations: int = 10

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be > 0")
        if isinstance(self.beta, str):
            if self.beta != "inverse-degree":
                raise ValueError(f"beta must be a number or 'inverse-degree', got {self.beta!r}")
        elif self.beta < 0:
            raise ValueError("beta must be >= 0")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")


def _clean_adjacency(adjacency: dict, vocab) -> dict[str, list[str]]:
    """Symmetrize, drop self-loops and out-of-matrix tokens, sort everything."""
    pairs = set()
    for token, neighbors in adjacency.items():
        if token not in vocab:
            continue
        for other in neighbors:
            if other == token or other not in vocab:
                continue
            pairs.add((min(token, other), max(token, other)))
    cleaned: dict[str, set[str]] = {}
    for a, b in pairs:
        cleaned.setdefault(a, set()).add(b)
        cleaned.setdefault(b, set()).add(a)
    return {t: sorted(ns) for t, ns in sorted(cleaned.items())}


def _edge_weight(config: RetrofitConfig, degree: dict[str, int], a: str, b: str) -> float:
    if config.beta == "inverse-degree":
        return 1.0 / max(degree[a], degree[b])
    return float(config.beta)


def retrofit_objective(
    matrix: EmbeddingMatrix, original: EmbeddingMatrix, adjacency: dict, config: RetrofitConfig | None = None
) -> float:
    config = config or RetrofitConfig()
    adj = _clean_adjacency(adjacency, matrix.index)
    degree = {t: len(ns) for t, ns in adj.items()}
    total = 0.0
    for token in adj:
        diff = matrix.lookup(token) - original.lookup(token)
        total += config.alpha * float(diff @ diff)
    for token, neighbors in adj.items():
        for other in neighbors:
            if other < token:
                continue  # each undirected edge once
            diff = matrix.lookup(token) - matrix.lookup(other)
            total += _edge_weight(config, degree, token, other) * float(diff @ diff)
    return total


def retrofit(matrix: EmbeddingMatrix, adjacency: dict, config: RetrofitConfig | None = None):
    """Returns (retrofitted matrix, per-sweep objective values).

    The first recorded value is the objective before any sweep.
    """
    config = config or RetrofitConfig()
    adj = _clean_adjacency(adjacency, matrix.index)
    degree = {t: len(ns) for t, ns in adj.items()}
    result = matrix.copy(provenance=(matrix.provenance + "->retrofit") if matrix.provenance else "retrofit")
    history = [retrofit_objective(result, matrix, adjacency, config)]
    anchors = {t: matrix.vectors[matrix.index[t]].copy() for t in adj}
    for _ in range(config.iterations):
        for token, neighbors in adj.items():
            weights = np.array([_edge_weight(config, degree, token, n) for n in neighbors])
            neighbor_vecs = np.stack([result.vectors[result.index[n]] for n in neighbors])
            numerator = config.alpha * anchors[token] + weights @ neighbor_vecs
            result.vectors[result.index[token]] = numerator / (config.alpha + weights.sum())
        history.append(retrofit_objective(result, matrix, adjacency, config))
    return result, history


def load_adjacency(path) -> dict[str, list[str]]:
    """JSON-lines adjacency: one {"token": ..., "neighbors": [...]} per line."""
    adjacency: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"invalid JSON: {exc.msg}", line=lineno) from None
            token = record.get("token")
            neighbors = record.get("neighbors")
            if not isinstance(token, str) or not isinstance(neighbors, list):
                raise DataFormatError("expected fields 'token' and 'neighbors'", line=lineno)
            adjacency.setdefault(token, [])
            adjacency[token].extend(str(n) for n in neighbors)
    return adjacency


def save_adjacency(adjacency: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for token in sorted(adjacency):
            fh.write(json.dumps({"token": token, "neighbors": sorted(set(adjacency[token]))}) + "\n")
