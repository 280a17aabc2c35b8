"""clinli: a desk-scale clinical natural language inference workbench.

Sentence-pair classification (entailment / contradiction / neutral) with a
self-contained autodiff engine, corpus construction tooling, embedding
training, ontology-aware features and attention, and a reproducible
training harness. Label order is fixed everywhere:
entailment=0, contradiction=1, neutral=2.
"""

__version__ = "0.1.0"

LABELS = ("entailment", "contradiction", "neutral")
LABEL_TO_INDEX = {name: idx for idx, name in enumerate(LABELS)}
