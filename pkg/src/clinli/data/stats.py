"""Dataset size and length statistics."""

from __future__ import annotations

import numpy as np

from .types import DatasetSplit


def _length_block(lengths: list[int], edges: list[int]) -> dict:
    arr = np.asarray(lengths, dtype=np.int64)
    histogram, _ = np.histogram(arr, bins=np.array(edges + [np.inf]))
    return {
        "mean": round(float(arr.mean()), 4),
        "max": int(arr.max()),
        "min": int(arr.min()),
        "histogram": {f">={edges[i]}": int(histogram[i]) for i in range(len(edges))},
    }


def dataset_stats(splits: list[DatasetSplit], bucket_edges: list[int] | None = None) -> dict:
    """Pair counts per split plus token-length statistics and histograms."""
    if not splits or all(len(s) == 0 for s in splits):
        raise ValueError("empty dataset")
    edges = bucket_edges if bucket_edges is not None else [0, 5, 10, 15, 20, 30, 50, 100]
    premise_lengths = []
    hypothesis_lengths = []
    report: dict = {"splits": {}}
    for split in splits:
        report["splits"][split.name] = len(split)
        premise_lengths.extend(len(p.premise) for p in split.pairs)
        hypothesis_lengths.extend(len(p.hypothesis) for p in split.pairs)
    report["premise_length"] = _length_block(premise_lengths, edges)
    report["hypothesis_length"] = _length_block(hypothesis_lengths, edges)
    label_counts: dict[str, int] = {}
    for split in splits:
        for pair in split.pairs:
            label_counts[pair.label] = label_counts.get(pair.label, 0) + 1
    report["labels"] = dict(sorted(label_counts.items()))
    return report
