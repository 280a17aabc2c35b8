"""Shortest paths over the concept graph and path-derived pair features."""

from __future__ import annotations

from collections import deque

import numpy as np

from ..data.types import DatasetSplit
from .graph import ConceptGraph

PATH_CAP = 8  # histogram buckets and feature sentinels clamp here; BFS stays exact
NO_PATH = "no_path"


def shortest_path_len(graph: ConceptGraph, c1: str, c2: str) -> int | None:
    """Breadth-first search over undirected edges; None when unreachable."""
    for cid in (c1, c2):
        if cid not in graph.concepts:
            raise KeyError(f"unknown concept {cid!r}")
    if c1 == c2:
        return 0
    seen = {c1}
    frontier = deque([(c1, 0)])
    while frontier:
        node, dist = frontier.popleft()
        for neighbor in graph.adjacency[node]:
            if neighbor == c2:
                return dist + 1
            if neighbor not in seen:
                seen.add(neighbor)
                frontier.append((neighbor, dist + 1))
    return None


def _pair_min_distance(graph: ConceptGraph, premise_ids, hypothesis_ids) -> int | None:
    best: int | None = None
    for a in premise_ids:
        for b in hypothesis_ids:
            d = shortest_path_len(graph, a, b)
            if d is not None and (best is None or d < best):
                best = d
                if best == 0:
                    return 0
    return best


def path_histogram(dataset: DatasetSplit, graph: ConceptGraph, cap: int = PATH_CAP) -> dict[str, int]:
    """Minimum premise-to-hypothesis concept distance per pair.

    Buckets "0".."{cap}" (longer paths clamp to the cap) plus "no_path"
    for pairs without concepts on either side or with no connecting path.
    """
    buckets = {str(k): 0 for k in range(cap + 1)}
    buckets[NO_PATH] = 0
    for pair in dataset.pairs:
        premise_ids = [m.concept_id for m in graph.match_concepts(pair.premise)]
        hypothesis_ids = [m.concept_id for m in graph.match_concepts(pair.hypothesis)]
        if not premise_ids or not hypothesis_ids:
            buckets[NO_PATH] += 1
            continue
        d = _pair_min_distance(graph, premise_ids, hypothesis_ids)
        if d is None:
            buckets[NO_PATH] += 1
        else:
            buckets[str(min(d, cap))] += 1
    return buckets


ONTOLOGY_FEATURE_NAMES = (
    "onto_premise_concepts",
    "onto_hypothesis_concepts",
    "onto_shared_concepts",
    "onto_min_path",
    "onto_max_path",
    "onto_mean_path",
    "onto_frac_hypothesis_reachable",
    "onto_frac_premise_reachable",
    "onto_pairs_within_one_hop",
    "onto_pairs_no_path",
)


def ontology_pair_features(premise_matches, hypothesis_matches, graph: ConceptGraph, cap: int = PATH_CAP) -> np.ndarray:
    """The 10 path-based features; see ONTOLOGY_FEATURE_NAMES for the order.

    Every cross (premise concept, hypothesis concept) pair contributes a
    distance, with unreachable pairs taking the sentinel cap+1; min, max,
    and mean run over those values and equal the sentinel when either side
    has no concepts.
    """
    premise_ids = [m.concept_id for m in premise_matches]
    hypothesis_ids = [m.concept_id for m in hypothesis_matches]
    sentinel = float(cap + 1)
    n_p, n_h = len(premise_ids), len(hypothesis_ids)
    shared = len(set(premise_ids) & set(hypothesis_ids))
    if n_p == 0 or n_h == 0:
        return np.array([n_p, n_h, shared, sentinel, sentinel, sentinel, 0.0, 0.0, 0.0, 0.0])

    values = []
    reachable_h: set[int] = set()
    reachable_p: set[int] = set()
    within_one = 0
    no_path = 0
    for i, a in enumerate(premise_ids):
        for j, b in enumerate(hypothesis_ids):
            d = shortest_path_len(graph, a, b)
            if d is None:
                values.append(sentinel)
                no_path += 1
            else:
                values.append(float(min(d, cap)))
                reachable_p.add(i)
                reachable_h.add(j)
                if d <= 1:
                    within_one += 1
    values = np.array(values)
    return np.array(
        [
            float(n_p),
            float(n_h),
            float(shared),
            float(values.min()),
            float(values.max()),
            float(values.mean()),
            len(reachable_h) / n_h,
            len(reachable_p) / n_p,
            float(within_one),
            float(no_path),
        ]
    )
