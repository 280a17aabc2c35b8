"""Attention weights derived from ontology path lengths instead of learning.

A premise position attends to a hypothesis position with raw score
exp(-lambda * l) where l is the shortest-path length between the concepts
covering the two positions (positions inside a multiword match share its
concept). Uncovered positions and unreachable concept pairs score zero.
Rows with any mass are normalized to sum to one; rows without stay
exactly all-zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ShapeError
from .graph import ConceptGraph
from .paths import shortest_path_len


@dataclass
class KbAttention:
    weights: np.ndarray  # (n, m), rows normalized or all-zero
    decay: float
    row_mask: np.ndarray  # (n,) bool, True where the row has mass


def _concept_per_position(tokens: list[str], graph: ConceptGraph) -> list[str | None]:
    covering: list[str | None] = [None] * len(tokens)
    for match in graph.match_concepts(tokens):
        for pos in range(match.start, match.end):
            covering[pos] = match.concept_id
    return covering


def kb_attention(
    premise_tokens: list[str],
    hypothesis_tokens: list[str],
    graph: ConceptGraph,
    decay: float = 1.0,
) -> tuple[KbAttention, KbAttention]:
    """Both directions: (premise -> hypothesis, hypothesis -> premise)."""
    if decay <= 0:
        raise ValueError("decay must be > 0")
    premise_concepts = _concept_per_position(premise_tokens, graph)
    hypothesis_concepts = _concept_per_position(hypothesis_tokens, graph)

    distances: dict[tuple[str, str], int | None] = {}

    def distance(a: str, b: str) -> int | None:
        key = (a, b) if a <= b else (b, a)
        if key not in distances:
            distances[key] = shortest_path_len(graph, key[0], key[1])
        return distances[key]

    scores = np.zeros((len(premise_tokens), len(hypothesis_tokens)))
    for i, ca in enumerate(premise_concepts):
        if ca is None:
            continue
        for j, cb in enumerate(hypothesis_concepts):
            if cb is None:
                continue
            d = distance(ca, cb)
            if d is not None:
                scores[i, j] = np.exp(-decay * d)

    def normalize(matrix: np.ndarray) -> KbAttention:
        mass = matrix.sum(axis=1)
        has_mass = mass > 0
        weights = np.zeros_like(matrix)
        weights[has_mass] = matrix[has_mass] / mass[has_mass, None]
        return KbAttention(weights=weights, decay=decay, row_mask=has_mass)

    return normalize(scores), normalize(scores.T.copy())


def kb_attend(attention: KbAttention, other_vectors: np.ndarray) -> np.ndarray:
    """Weighted sums of the other sentence's vectors; zero rows give zero vectors."""
    other_vectors = np.asarray(other_vectors, dtype=np.float64)
    if other_vectors.ndim != 2 or other_vectors.shape[0] != attention.weights.shape[1]:
        raise ShapeError("kb_attend", attention.weights.shape, other_vectors.shape)
    return attention.weights @ other_vectors
