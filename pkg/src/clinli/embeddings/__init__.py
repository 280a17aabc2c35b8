"""Word vectors: I/O, subword skip-gram training, fine-tune chains, retrofitting."""

from .matrix import EmbeddingMatrix, SubwordIndex, fnv1a32, load_vectors, save_vectors
from .retrofit import RetrofitConfig, load_adjacency, retrofit, retrofit_objective, save_adjacency
from .skipgram import SkipgramConfig, fine_tune_chain, train_subword_skipgram

__all__ = [
    "EmbeddingMatrix",
    "SubwordIndex",
    "fnv1a32",
    "load_vectors",
    "save_vectors",
    "SkipgramConfig",
    "train_subword_skipgram",
    "fine_tune_chain",
    "RetrofitConfig",
    "retrofit",
    "retrofit_objective",
    "load_adjacency",
    "save_adjacency",
]
