"""Padded id batches for the neural models."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .types import PAD_INDEX, DatasetSplit, NLIPair, Vocabulary


@dataclass
class Batch:
    premise_ids: np.ndarray  # (B, Tp) int64
    premise_mask: np.ndarray  # (B, Tp) bool
    hypothesis_ids: np.ndarray  # (B, Th) int64
    hypothesis_mask: np.ndarray  # (B, Th) bool
    labels: np.ndarray  # (B,) int64
    pair_ids: list[str]
    premise_tokens: list[list[str]]
    hypothesis_tokens: list[list[str]]

    def __len__(self):
        return self.labels.shape[0]


def _pad(token_lists: list[list[str]], vocab: Vocabulary):
    max_len = max(len(t) for t in token_lists)
    ids = np.full((len(token_lists), max_len), PAD_INDEX, dtype=np.int64)
    mask = np.zeros((len(token_lists), max_len), dtype=bool)
    for row, tokens in enumerate(token_lists):
        for col, token in enumerate(tokens):
            ids[row, col] = vocab.index(token)
        mask[row, : len(tokens)] = True
    return ids, mask


def make_batch(pairs: list[NLIPair], vocab: Vocabulary) -> Batch:
    if not pairs:
        raise ValueError("cannot build a batch from zero pairs")
    premise_ids, premise_mask = _pad([p.premise for p in pairs], vocab)
    hyp_ids, hyp_mask = _pad([p.hypothesis for p in pairs], vocab)
    return Batch(
        premise_ids=premise_ids,
        premise_mask=premise_mask,
        hypothesis_ids=hyp_ids,
        hypothesis_mask=hyp_mask,
        labels=np.array([p.label_index for p in pairs], dtype=np.int64),
        pair_ids=[p.pair_id for p in pairs],
        premise_tokens=[list(p.premise) for p in pairs],
        hypothesis_tokens=[list(p.hypothesis) for p in pairs],
    )


def batchify(split: DatasetSplit, batch_size: int, vocab: Vocabulary, seed: int | None = None) -> list[Batch]:
    """Chunk a split into padded batches.

    With a seed the pair order is shuffled deterministically first;
    without one the split order is kept. Sequences are padded to the
    longest member of their own batch.
    """
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    pairs = list(split.pairs)
    if seed is not None:
        order = np.random.default_rng(seed).permutation(len(pairs))
        pairs = [pairs[i] for i in order]
    return [make_batch(pairs[i : i + batch_size], vocab) for i in range(0, len(pairs), batch_size)]
