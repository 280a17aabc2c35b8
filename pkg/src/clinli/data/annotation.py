"""Annotation batch preparation and ingestion of completed records.

The prompt file is plain UTF-8, one block per sampled premise, blocks
separated by a blank line. Completed annotations come back as JSON-lines
with per-label hypothesis fields and an ``invalid`` flag for premises the
annotator judged unusable (de-identification debris and the like).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import DataFormatError
from .tokenizer import tokenize
from .types import NLIPair

ANNOTATION_INSTRUCTIONS = """\
You will be shown a sentence from the Past Medical History section of a \
de-identified clinical note. Using only this sentence, your knowledge about \
the field of medicine, and common sense:
- Write one alternate sentence that is definitely a true description of the \
patient. Example, for the sentence "Patient has type II diabetes" you could \
write "Patient suffers from a chronic condition"
- Write one alternate sentence that might be a true description of the \
patient. Example, for the sentence "Patient has type II diabetes" you could \
write "Patient has hypertension"
- Write one sentence that is definitely a false description of the patient. \
Example, for the sentence "Patient has type II diabetes" you could write \
"The patient's insulin levels are normal without any medications."
"""

# second-pass judgment vocabulary -> canonical label
JUDGMENT_TO_LABEL = {
    "definitely-true": "entailment",
    "maybe-true": "neutral",
    "definitely-false": "contradiction",
}


def judgments_to_labels(judgments) -> list[str]:
    """Map second-annotator judgments onto canonical labels for agreement scoring."""
    labels = []
    for judgment in judgments:
        key = str(judgment).strip().lower().replace(" ", "-")
        if key not in JUDGMENT_TO_LABEL:
            raise ValueError(f"unknown judgment {judgment!r}, expected one of {sorted(JUDGMENT_TO_LABEL)}")
        labels.append(JUDGMENT_TO_LABEL[key])
    return labels

_HYPOTHESIS_FIELDS = {
    "entailment": "hypothesis_entailment",
    "neutral": "hypothesis_neutral",
    "contradiction": "hypothesis_contradiction",
}


def prepare_annotation_batch(sentences: list[str], n: int, seed: int) -> str:
    """Sample ``n`` premises without replacement and emit the prompt file text."""
    if n > len(sentences):
        raise ValueError(f"requested {n} premises but only {len(sentences)} candidates")
    rng = np.random.default_rng(seed)
    chosen = rng.permutation(len(sentences))[:n]
    blocks = []
    for rank, idx in enumerate(chosen, start=1):
        blocks.append(f"{ANNOTATION_INSTRUCTIONS}\nPremise {rank} (id={idx}):\n{sentences[int(idx)]}\n")
    return "\n".join(blocks)


@dataclass
class DiscardEntry:
    premise_id: str
    reason: str


def ingest_annotations(lines) -> tuple[list[NLIPair], list[DiscardEntry]]:
    """Turn completed annotation records into labeled pairs.

    Each complete record yields exactly three pairs (one per label).
    Records flagged invalid yield none and are logged; a record missing a
    hypothesis is rejected with the missing field named.
    """
    pairs: list[NLIPair] = []
    discards: list[DiscardEntry] = []
    for lineno, line in enumerate(lines, start=1):
        if isinstance(line, str):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"invalid JSON: {exc.msg}", line=lineno) from None
        else:
            record = line
        premise_id = str(record.get("premise_id", f"premise-{lineno}"))
        if record.get("invalid"):
            discards.append(DiscardEntry(premise_id=premise_id, reason=str(record.get("reason", "flagged invalid"))))
            continue
        premise = record.get("premise", "")
        if not premise.strip():
            discards.append(DiscardEntry(premise_id=premise_id, reason="missing premise text"))
            continue
        missing = [field for field in _HYPOTHESIS_FIELDS.values() if not str(record.get(field, "")).strip()]
        if missing:
            discards.append(DiscardEntry(premise_id=premise_id, reason=f"missing {', '.join(missing)}"))
            continue
        for label, field in _HYPOTHESIS_FIELDS.items():
            pairs.append(
                NLIPair(
                    pair_id=f"{premise_id}#{label}",
                    premise=tokenize(premise),
                    hypothesis=tokenize(record[field]),
                    label=label,
                )
            )
    return pairs, discards
