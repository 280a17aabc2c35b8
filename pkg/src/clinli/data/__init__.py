"""Dataset representation, corpus construction, and batching."""

from .agreement import cohens_kappa, confusion_counts, kappa_from_confusion
from .annotation import (
    ANNOTATION_INSTRUCTIONS,
    JUDGMENT_TO_LABEL,
    DiscardEntry,
    ingest_annotations,
    judgments_to_labels,
    prepare_annotation_batch,
)
from .batching import Batch, batchify, make_batch
from .dataset_io import LoadReport, read_split, write_split
from .notes import NoteSection, segment_note_sections, split_sentences
from .splitting import split_by_premise
from .stats import dataset_stats
from .synthetic import SynthSpec, generate_synthetic_dataset
from .tokenizer import tokenize
from .types import (
    PAD,
    PAD_INDEX,
    UNK,
    UNK_INDEX,
    DatasetSplit,
    NLIPair,
    Vocabulary,
    build_vocab,
    check_premise_disjoint,
)

__all__ = [
    "tokenize",
    "NLIPair",
    "DatasetSplit",
    "Vocabulary",
    "build_vocab",
    "check_premise_disjoint",
    "PAD",
    "UNK",
    "PAD_INDEX",
    "UNK_INDEX",
    "read_split",
    "write_split",
    "LoadReport",
    "Batch",
    "batchify",
    "make_batch",
    "NoteSection",
    "segment_note_sections",
    "split_sentences",
    "prepare_annotation_batch",
    "ingest_annotations",
    "judgments_to_labels",
    "ANNOTATION_INSTRUCTIONS",
    "JUDGMENT_TO_LABEL",
    "DiscardEntry",
    "cohens_kappa",
    "confusion_counts",
    "kappa_from_confusion",
    "dataset_stats",
    "split_by_premise",
    "SynthSpec",
    "generate_synthetic_dataset",
]
