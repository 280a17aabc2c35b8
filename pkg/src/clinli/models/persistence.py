"""Model checkpoints: binary parameter container plus a JSON manifest.

The manifest carries everything needed to rebuild the model around the
parameters: architecture spec, label order, vocabulary, embedding
provenance, and declared heads. Parameter round-trips are bit-exact.
"""

from __future__ import annotations

import json
from pathlib import Path

from .. import LABELS
from ..autodiff import load_params, save_params
from ..data.types import PAD, UNK, Vocabulary
from ..ontology import ConceptGraph
from .neural import ModelSpec, NliModel, build_model

MANIFEST_NAME = "manifest.json"
PARAMS_NAME = "best.ckpt"


def save_model(model: NliModel, directory, params_name: str = PARAMS_NAME) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    save_params(directory / params_name, model.params)
    manifest = {
        "format": "clinli-model",
        "version": 1,
        "params_file": params_name,
        "spec": model.spec.to_dict(),
        "labels": list(LABELS),
        "vocabulary": model.vocab.tokens(),
        "embedding_provenance": model.embedding_provenance,
        "heads": {name: names for name, names in model.heads.items()},
    }
    with open(directory / MANIFEST_NAME, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh)


def load_model(directory, graph: ConceptGraph | None = None) -> NliModel:
    directory = Path(directory)
    with open(directory / MANIFEST_NAME, encoding="utf-8") as fh:
        manifest = json.load(fh)
    if manifest.get("format") != "clinli-model":
        raise ValueError(f"{directory}: not a model checkpoint")
    if manifest["labels"] != list(LABELS):
        raise ValueError(f"{directory}: label order {manifest['labels']} does not match {list(LABELS)}")
    spec = ModelSpec(**manifest["spec"])
    tokens = manifest["vocabulary"]
    if tokens[:2] != [PAD, UNK]:
        raise ValueError(f"{directory}: vocabulary does not start with reserved tokens")
    vocab = Vocabulary(tokens[2:])
    model = build_model(spec, vocab, graph=graph)
    for head in manifest["heads"]:
        model.add_head(head)
    values = load_params(directory / manifest.get("params_file", PARAMS_NAME))
    missing = sorted(set(model.params) - set(values))
    if missing:
        raise ValueError(f"{directory}: checkpoint missing parameters {missing}")
    for name, arr in values.items():
        if name not in model.params:
            raise ValueError(f"{directory}: unexpected parameter {name!r}")
        if model.params[name].data.shape != arr.shape:
            raise ValueError(
                f"{directory}: parameter {name!r} has shape {arr.shape}, expected {model.params[name].data.shape}"
            )
        model.params[name].data = arr
    model.embedding_provenance = manifest.get("embedding_provenance", "")
    return model
