"""JSON-lines dataset files.

One record per pair: ``gold_label``, ``sentence1`` (premise), ``sentence2``
(hypothesis), ``pairID``. Unknown fields are ignored, so SNLI/MultiNLI
release files load unchanged; their unlabeled records (gold_label "-") are
skipped and counted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .. import LABEL_TO_INDEX
from ..errors import DataFormatError
from .tokenizer import tokenize
from .types import DatasetSplit, NLIPair


@dataclass
class LoadReport:
    loaded: int
    skipped_unlabeled: int


def read_split(path, name: str = "train", with_report: bool = False):
    pairs = []
    skipped = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"invalid JSON: {exc.msg}", line=lineno) from None
            label = record.get("gold_label")
            if label == "-":
                skipped += 1
                continue
            if label not in LABEL_TO_INDEX:
                raise DataFormatError(f"unknown label {label!r}", line=lineno)
            for key in ("sentence1", "sentence2"):
                if not isinstance(record.get(key), str) or not record[key].strip():
                    raise DataFormatError(f"missing or empty {key}", line=lineno)
            pair_id = str(record.get("pairID", f"{name}-{lineno}"))
            pairs.append(
                NLIPair(
                    pair_id=pair_id,
                    premise=tokenize(record["sentence1"]),
                    hypothesis=tokenize(record["sentence2"]),
                    label=label,
                )
            )
    split = DatasetSplit(name=name, pairs=pairs)
    if with_report:
        return split, LoadReport(loaded=len(pairs), skipped_unlabeled=skipped)
    return split


def write_split(path, split: DatasetSplit) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for pair in split.pairs:
            record = {
                "gold_label": pair.label,
                "sentence1": pair.premise_text,
                "sentence2": pair.hypothesis_text,
                "pairID": pair.pair_id,
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
