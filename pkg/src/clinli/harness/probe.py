"""Premise-oblivious probe for annotation artifacts.

Replaces every premise with a fixed placeholder token and trains the
configured model on hypotheses alone. High accuracy means the hypotheses
leak their labels; chance-level accuracy means they do not.
"""

from __future__ import annotations

from ..data.types import DatasetSplit, NLIPair, build_vocab
from ..models.neural import ModelSpec, build_model
from .training import RunResult, TrainConfig, train

PREMISE_PLACEHOLDER = "∅premise"


def blind_premises(split: DatasetSplit) -> DatasetSplit:
    """Copy of ``split`` with every premise reduced to the placeholder token."""
    return DatasetSplit(
        name=split.name,
        pairs=[
            NLIPair(
                pair_id=p.pair_id,
                premise=[PREMISE_PLACEHOLDER],
                hypothesis=list(p.hypothesis),
                label=p.label,
            )
            for p in split.pairs
        ],
    )


def hypothesis_only_probe(
    spec: ModelSpec,
    splits: list[DatasetSplit],
    config: TrainConfig | None = None,
    embeddings=None,
    graph=None,
) -> RunResult:
    """Train on premise-blinded data; the returned test accuracy is the artifact measure."""
    train_split, dev_split, test_split = (blind_premises(s) for s in splits)
    vocab = build_vocab(train_split)
    model = build_model(spec, vocab, embeddings=embeddings, graph=graph)
    return train(model, train_split, dev_split, vocab, config, test_split=test_split)
