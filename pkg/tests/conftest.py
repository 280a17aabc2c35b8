import numpy as np
import pytest

from clinli.data.batching import make_batch
from clinli.data.synthetic import SynthSpec, generate_synthetic_dataset
from clinli.data.types import DatasetSplit, NLIPair, build_vocab
from clinli.ontology import demo_graph


@pytest.fixture(scope="session")
def graph():
    return demo_graph()


@pytest.fixture(scope="session")
def tiny_splits():
    return generate_synthetic_dataset(SynthSpec(sizes=(24, 6, 6), n_items=8, seed=2))


@pytest.fixture(scope="session")
def tiny_vocab(tiny_splits):
    return build_vocab(tiny_splits[0])


@pytest.fixture()
def random_pair_batch(tiny_vocab):
    """Two pairs with irregular random token sequences (no template structure)."""
    rng = np.random.default_rng(7)
    words = [f"w{i}" for i in range(30)]
    labels = ["entailment", "contradiction", "neutral"]

    def rand_pair(i):
        premise = [words[k] for k in rng.integers(0, 30, size=rng.integers(2, 5))]
        hypothesis = [words[k] for k in rng.integers(0, 30, size=rng.integers(2, 5))]
        return NLIPair(f"p{i}", premise, hypothesis, labels[i % 3])

    split = DatasetSplit("train", [rand_pair(i) for i in range(4)])
    vocab = build_vocab(split)
    return make_batch(split.pairs[:2], vocab), vocab
