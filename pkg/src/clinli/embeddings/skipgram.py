"""Skip-gram with negative sampling over word + character n-gram vectors.

A token's input representation is the sum of its word vector and its
hashed n-gram bucket vectors; the stored vector after training is that
same sum, and the bucket table is kept so unseen tokens compose from
their n-grams. All randomness (dynamic windows, negative draws) is
pre-drawn per epoch from a seeded generator, making runs bit-reproducible
for a fixed kernel backend.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import kernels
from .matrix import EmbeddingMatrix, SubwordIndex


@dataclass
class SkipgramConfig:
    dim: int = 50
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    lr: float = 0.05
    min_count: int = 1
    ngram_min: int = 3
    ngram_max: int = 6
    buckets: int = 2**17
    seed: int = 0

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.negatives < 1:
            raise ValueError("negatives must be >= 1")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")


class _TrainState:
    """Decomposed vectors carried across fine-tune stages."""

    def __init__(self, tokens, word_vecs, ngram_vecs, subword, counts):
        self.tokens = tokens
        self.index = {t: i for i, t in enumerate(tokens)}
        self.word_vecs = word_vecs
        self.ngram_vecs = ngram_vecs
        self.subword = subword
        self.counts = counts

    def compose(self) -> np.ndarray:
        out = self.word_vecs.copy()
        for i, token in enumerate(self.tokens):
            ids = self.subword.bucket_ids(token)
            if ids:
                out[i] += self.ngram_vecs[ids].sum(axis=0)
        return out


def _vocab_counts(corpus, min_count) -> dict[str, int]:
    counts: dict[str, int] = {}
    for sentence in corpus:
        for token in sentence:
            counts[token] = counts.get(token, 0) + 1
    return {t: c for t, c in sorted(counts.items()) if c >= min_count}


def _negative_table(counts: np.ndarray, size: int = 1 << 18) -> np.ndarray:
    weights = counts.astype(np.float64) ** 0.75
    weights /= weights.sum()
    boundaries = np.cumsum(weights) * size
    table = np.zeros(size, dtype=np.int64)
    prev = 0
    for idx, bound in enumerate(boundaries):
        end = min(size, int(round(bound)))
        table[prev:end] = idx
        prev = end
    table[prev:] = len(boundaries) - 1
    return table


def _flatten(corpus, index) -> tuple[np.ndarray, np.ndarray]:
    ids: list[int] = []
    offsets = [0]
    for sentence in corpus:
        kept = [index[t] for t in sentence if t in index]
        ids.extend(kept)
        offsets.append(len(ids))
    return np.array(ids, dtype=np.int64), np.array(offsets, dtype=np.int64)


def _ngram_csr(tokens, subword) -> tuple[np.ndarray, np.ndarray]:
    flat: list[int] = []
    offsets = [0]
    for token in tokens:
        flat.extend(subword.bucket_ids(token))
        offsets.append(len(flat))
    return np.array(flat, dtype=np.int64), np.array(offsets, dtype=np.int64)


def _run_epochs(state: _TrainState, corpus, config: SkipgramConfig, rng) -> list[float]:
    tokens_flat, offsets = _flatten(corpus, state.index)
    n_positions = tokens_flat.size
    if n_positions == 0 or config.epochs == 0:
        return []
    ngram_ids, ngram_offsets = _ngram_csr(state.tokens, state.subword)
    counts_arr = np.array([state.counts[t] for t in state.tokens], dtype=np.int64)
    table = _negative_table(counts_arr)
    out_vecs = np.zeros_like(state.word_vecs)
    total_steps = n_positions * config.epochs
    losses = []
    for epoch in range(config.epochs):
        windows = rng.integers(1, config.window + 1, size=n_positions).astype(np.int64)
        n_draws = n_positions * 2 * config.window * config.negatives
        neg_draws = table[rng.integers(0, table.size, size=n_draws)]
        loss_sum, n_pairs = kernels.sgns_epoch(
            tokens_flat,
            offsets,
            state.word_vecs,
            state.ngram_vecs,
            out_vecs,
            ngram_ids,
            ngram_offsets,
            windows,
            neg_draws,
            config.negatives,
            config.window,
            config.lr,
            config.lr * 1e-4,
            epoch * n_positions,
            total_steps,
        )
        losses.append(loss_sum / max(n_pairs, 1))
    return losses


def train_subword_skipgram(corpus, config: SkipgramConfig | None = None, name: str = "corpus"):
    """Train from scratch on a tokenized corpus; returns (matrix, epoch losses)."""
    config = config or SkipgramConfig()
    corpus = [s for s in corpus if s]
    if not corpus:
        raise ValueError("empty corpus")
    counts = _vocab_counts(corpus, config.min_count)
    if not counts:
        raise ValueError(f"no token reaches min_count={config.min_count}")
    tokens = list(counts)
    rng = np.random.default_rng(config.seed)
    subword = SubwordIndex(config.ngram_min, config.ngram_max, config.buckets)
    bound = 0.5 / config.dim
    word_vecs = rng.uniform(-bound, bound, size=(len(tokens), config.dim))
    ngram_vecs = rng.uniform(-bound, bound, size=(config.buckets, config.dim))
    state = _TrainState(tokens, word_vecs, ngram_vecs, subword, counts)
    losses = _run_epochs(state, corpus, config, rng)
    matrix = EmbeddingMatrix(
        tokens=tokens,
        vectors=state.compose(),
        provenance=name,
        subword=subword,
        ngram_vectors=state.ngram_vecs,
    )
    return matrix, losses


def fine_tune_chain(init: EmbeddingMatrix, corpora, config: SkipgramConfig | None = None):
    """Continue training ``init`` on each (name, sentences) corpus in order.

    The output vocabulary is the union of the initial vocabulary and every
    corpus vocabulary; tokens new to ``init`` start from its lookup
    (subword composition when available, hash-seeded random otherwise).
    With zero epochs the in-vocabulary vectors pass through bit-exactly.
    """
    config = config or SkipgramConfig()
    if config.dim != init.dim:
        raise ValueError(f"config dim {config.dim} does not match embedding dim {init.dim}")
    provenance = init.provenance or "init"
    corpora = list(corpora)
    if config.epochs == 0:
        # no-op chain: vectors pass through bit-exactly, vocabulary still unions
        matrix = init.copy()
        for stage_name, corpus in corpora:
            stage_counts = _vocab_counts([s for s in corpus if s], config.min_count)
            new = [t for t in stage_counts if t not in matrix.index]
            if new:
                extra = np.stack([matrix.lookup(t) for t in new])
                matrix = EmbeddingMatrix(
                    tokens=matrix.tokens + new,
                    vectors=np.concatenate([matrix.vectors, extra]),
                    provenance=matrix.provenance,
                    subword=matrix.subword,
                    ngram_vectors=matrix.ngram_vectors,
                )
            provenance = f"{provenance}->{stage_name}"
        matrix.provenance = provenance
        return matrix, [[] for _ in corpora]
    if init.subword is not None and init.ngram_vectors is not None:
        subword = init.subword
        ngram_vecs = init.ngram_vectors.copy()
        # stored vectors are word+ngram sums; recover the word part
        word_part = {}
        for token in init.tokens:
            ids = subword.bucket_ids(token)
            contribution = ngram_vecs[ids].sum(axis=0) if ids else 0.0
            word_part[token] = init.lookup(token) - contribution
    else:
        # plain matrix: treat stored vectors as word vectors over zero n-grams
        subword = SubwordIndex(config.ngram_min, config.ngram_max, config.buckets)
        ngram_vecs = np.zeros((config.buckets, config.dim))
        word_part = {token: init.lookup(token).copy() for token in init.tokens}

    tokens = list(init.tokens)
    counts: dict[str, int] = {t: 1 for t in tokens}
    rng = np.random.default_rng(config.seed)
    losses_per_stage = []
    for stage_name, corpus in corpora:
        corpus = [s for s in corpus if s]
        stage_counts = _vocab_counts(corpus, config.min_count)
        for token, count in stage_counts.items():
            if token not in counts:
                tokens.append(token)
                word_ids = subword.bucket_ids(token)
                contribution = ngram_vecs[word_ids].sum(axis=0) if word_ids else 0.0
                word_part[token] = init.lookup(token) - contribution
            counts[token] = counts.get(token, 0) + count
        word_vecs = np.stack([word_part[t] for t in tokens])
        state = _TrainState(tokens, word_vecs, ngram_vecs, subword, counts)
        losses_per_stage.append(_run_epochs(state, corpus, config, rng))
        for i, token in enumerate(tokens):
            word_part[token] = state.word_vecs[i]
        ngram_vecs = state.ngram_vecs
        provenance = f"{provenance}->{stage_name}"

    final_words = np.stack([word_part[t] for t in tokens]) if tokens else np.zeros((0, config.dim))
    state = _TrainState(tokens, final_words, ngram_vecs, subword, counts)
    matrix = EmbeddingMatrix(
        tokens=tokens,
        vectors=state.compose(),
        provenance=provenance,
        subword=subword,
        ngram_vectors=ngram_vecs,
    )
    return matrix, losses_per_stage
