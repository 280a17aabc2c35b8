"""Premise-disjoint train/dev/test splitting."""

from __future__ import annotations

import numpy as np

from .types import DatasetSplit, NLIPair

SPLIT_NAMES = ("train", "dev", "test")


def split_by_premise(pairs: list[NLIPair], ratios=(0.8, 0.1, 0.1), seed: int = 0) -> list[DatasetSplit]:
    """Assign whole premise groups to train/dev/test.

    The grouping key is the premise string, so no premise can straddle two
    splits. Group counts follow ``ratios`` by largest remainder.
    """
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {sum(ratios)}")
    groups: dict[str, list[NLIPair]] = {}
    for pair in pairs:
        groups.setdefault(pair.premise_text, []).append(pair)
    keys = sorted(groups)
    if len(keys) < len(SPLIT_NAMES):
        raise ValueError(f"need at least {len(SPLIT_NAMES)} distinct premises, got {len(keys)}")
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(keys))

    n = len(keys)
    quotas = [r * n for r in ratios]
    counts = [int(q) for q in quotas]
    remainders = sorted(range(len(ratios)), key=lambda i: quotas[i] - counts[i], reverse=True)
    for i in remainders:
        if sum(counts) == n:
            break
        counts[i] += 1
    # every split gets at least one group
    for i in range(len(counts)):
        while counts[i] == 0:
            donor = int(np.argmax(counts))
            counts[donor] -= 1
            counts[i] += 1

    splits = [DatasetSplit(name=name) for name in SPLIT_NAMES]
    cursor = 0
    for split, count in zip(splits, counts):
        for key_idx in order[cursor : cursor + count]:
            split.pairs.extend(groups[keys[key_idx]])
        cursor += count
    return splits
