"""Classifiers: three neural architectures, their ontology-attention variants, and the boosted-tree baseline."""

import json
from importlib import resources as importlib_resources

from .features import (
    DEFAULT_NEGATION_TERMS,
    FEATURE_NAMES,
    N_FEATURES,
    bleu,
    build_idf,
    count_negations,
    extract_feature_matrix,
    extract_features,
)
from .gbm import GbmConfig, GbmModel, feature_manifest_hash, gbm_train
from .neural import (
    ARCHITECTURES,
    BowModel,
    EsimModel,
    InferSentModel,
    ModelSpec,
    NliModel,
    Prediction,
    build_model,
)


def packaged_feature_manifest() -> list[str]:
    ref = importlib_resources.files("clinli.resources").joinpath("feature_manifest.json")
    return json.loads(ref.read_text(encoding="utf-8"))["features"]


__all__ = [
    "ModelSpec",
    "Prediction",
    "NliModel",
    "BowModel",
    "InferSentModel",
    "EsimModel",
    "build_model",
    "ARCHITECTURES",
    "FEATURE_NAMES",
    "N_FEATURES",
    "DEFAULT_NEGATION_TERMS",
    "bleu",
    "build_idf",
    "count_negations",
    "extract_features",
    "extract_feature_matrix",
    "GbmConfig",
    "GbmModel",
    "gbm_train",
    "feature_manifest_hash",
    "packaged_feature_manifest",
]
