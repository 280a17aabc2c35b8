"""Sentence-pair dataset types."""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import LABEL_TO_INDEX, LABELS

PAD, UNK = "<pad>", "<unk>"
PAD_INDEX, UNK_INDEX = 0, 1


@dataclass
class NLIPair:
    pair_id: str
    premise: list[str]
    hypothesis: list[str]
    label: str

    def __post_init__(self):
        if self.label not in LABEL_TO_INDEX:
            raise ValueError(f"unknown label {self.label!r}, expected one of {LABELS}")
        if not self.premise or not self.hypothesis:
            raise ValueError(f"pair {self.pair_id}: empty premise or hypothesis")

    @property
    def label_index(self) -> int:
        return LABEL_TO_INDEX[self.label]

    @property
    def premise_text(self) -> str:
        return " ".join(self.premise)

    @property
    def hypothesis_text(self) -> str:
        return " ".join(self.hypothesis)


@dataclass
class DatasetSplit:
    name: str
    pairs: list[NLIPair] = field(default_factory=list)

    def __len__(self):
        return len(self.pairs)

    def premises(self) -> set[str]:
        return {p.premise_text for p in self.pairs}


def check_premise_disjoint(*splits: DatasetSplit) -> None:
    """Raise if any premise string occurs in more than one split."""
    seen: dict[str, str] = {}
    for split in splits:
        for premise in split.premises():
            if premise in seen and seen[premise] != split.name:
                raise ValueError(
                    f"premise shared between splits {seen[premise]!r} and {split.name!r}: {premise[:60]!r}"
                )
            seen.setdefault(premise, split.name)


class Vocabulary:
    """token -> index map with reserved PAD=0 and UNK=1."""

    def __init__(self, tokens=()):
        self._index = {PAD: PAD_INDEX, UNK: UNK_INDEX}
        self._tokens = [PAD, UNK]
        for token in tokens:
            self.add(token)

    def add(self, token: str) -> int:
        if token not in self._index:
            self._index[token] = len(self._tokens)
            self._tokens.append(token)
        return self._index[token]

    def index(self, token: str) -> int:
        return self._index.get(token, UNK_INDEX)

    def token(self, index: int) -> str:
        return self._tokens[index]

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def __len__(self) -> int:
        return len(self._tokens)

    def tokens(self) -> list[str]:
        return list(self._tokens)


def build_vocab(train: DatasetSplit, min_count: int = 1) -> Vocabulary:
    """Vocabulary over the train split only; dev/test-only tokens map to UNK."""
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    counts: dict[str, int] = {}
    for pair in train.pairs:
        for token in pair.premise + pair.hypothesis:
            counts[token] = counts.get(token, 0) + 1
    vocab = Vocabulary()
    for token in sorted(counts):
        if counts[token] >= min_count:
            vocab.add(token)
    return vocab
