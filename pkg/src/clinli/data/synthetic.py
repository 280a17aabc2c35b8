"""Synthetic clinical-style sentence-pair generator for tests and demos.

Items form a cyclic vocabulary: item ``i`` has a designated equivalent
(``i+1``) and a designated opposite (``i+2``). An entailment hypothesis
names the equivalent, a plain contradiction the opposite, and a neutral
hypothesis an unrelated item, so the gold label is a deterministic
function of the item pair and nothing about the hypothesis alone gives
the label away.

With ``planted_artifact=True`` the hypotheses leak the label instead:
every contradiction hypothesis contains a negation token (and only
contradictions do), while neutral hypotheses carry the domain's hedge
word. That reproduces the annotation-artifact situation a
premise-oblivious probe is supposed to detect.

Two template sets ("a", "b") with disjoint phrasing and their own item
prefix act as separate domains for transfer experiments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tokenizer import tokenize
from .types import DatasetSplit, NLIPair

_TEMPLATE_SETS = {
    "a": {
        "premise": (
            "the patient has {x} .",
            "history of {x} noted on admission .",
            "patient presents with {x} .",
            "exam this morning shows {x} .",
            "assessment : {x} , stable overnight .",
            "known {x} followed by the clinic .",
        ),
        "entailment": "the patient has {x} .",
        "contradiction": "the patient has {x} .",
        "contradiction_negated": "the patient does not have {x} .",
        "neutral": "the patient has {x} .",
        "neutral_hedged": "the patient possibly has {x} .",
        "hedge": "possibly",
    },
    "b": {
        "premise": (
            "admission workup revealed {x} .",
            "chart documents ongoing {x} .",
            "she was seen last week for {x} .",
            "impression : {x} confirmed .",
            "prior records mention {x} twice .",
            "consult note lists {x} among findings .",
        ),
        "entailment": "the patient has {x} .",
        "contradiction": "the patient has {x} .",
        "contradiction_negated": "the patient does not have {x} .",
        "neutral": "the patient has {x} .",
        "neutral_hedged": "the patient perhaps has {x} .",
        "hedge": "perhaps",
    },
}


@dataclass
class SynthSpec:
    sizes: tuple = (96, 24, 24)  # train/dev/test pair counts, each divisible by 3
    n_items: int = 12
    template_set: str = "a"
    item_prefix: str = ""
    planted_artifact: bool = False
    seed: int = 0

    def __post_init__(self):
        if len(self.sizes) != 3 or any(s % 3 != 0 or s <= 0 for s in self.sizes):
            raise ValueError(f"sizes must be three positive multiples of 3, got {self.sizes}")
        if self.template_set not in _TEMPLATE_SETS:
            raise ValueError(f"template_set must be one of {sorted(_TEMPLATE_SETS)}")
        if self.n_items < 5:
            raise ValueError("need at least 5 items for distinct equivalent/opposite/unrelated roles")


def _items(spec: SynthSpec) -> list[str]:
    prefix = spec.item_prefix or f"cond{spec.template_set}"
    return [f"{prefix}{i}" for i in range(spec.n_items)]


def generate_synthetic_dataset(spec: SynthSpec) -> list[DatasetSplit]:
    """Build premise-disjoint train/dev/test splits with deterministic labels."""
    templates = _TEMPLATE_SETS[spec.template_set]
    items = _items(spec)
    m = spec.n_items
    rng = np.random.default_rng(spec.seed)

    candidates = [(tpl, i) for tpl in templates["premise"] for i in range(m)]
    needed = sum(spec.sizes) // 3
    if needed > len(candidates):
        raise ValueError(
            f"{needed} premises requested but only {len(candidates)} template/item combinations exist"
        )
    order = rng.permutation(len(candidates))[:needed]

    splits = [DatasetSplit(name=name) for name in ("train", "dev", "test")]
    quotas = [s // 3 for s in spec.sizes]
    cursor = 0
    for split, quota in zip(splits, quotas):
        for k in range(cursor, cursor + quota):
            tpl, i = candidates[order[k]]
            premise = tpl.format(x=items[i])
            equivalent = items[(i + 1) % m]
            opposite = items[(i + 2) % m]
            forbidden = {i, (i + 1) % m, (i + 2) % m}
            unrelated = items[_draw_excluding(rng, m, forbidden)]
            if spec.planted_artifact:
                hypotheses = {
                    "entailment": templates["entailment"].format(x=equivalent),
                    "contradiction": templates["contradiction_negated"].format(x=items[i]),
                    "neutral": templates["neutral_hedged"].format(x=unrelated),
                }
            else:
                hypotheses = {
                    "entailment": templates["entailment"].format(x=equivalent),
                    "contradiction": templates["contradiction"].format(x=opposite),
                    "neutral": templates["neutral"].format(x=unrelated),
                }
            for label, hypothesis in hypotheses.items():
                split.pairs.append(
                    NLIPair(
                        pair_id=f"synth-{spec.template_set}-{k}#{label}",
                        premise=tokenize(premise),
                        hypothesis=tokenize(hypothesis),
                        label=label,
                    )
                )
        cursor += quota
    return splits


def _draw_excluding(rng: np.random.Generator, m: int, forbidden: set) -> int:
    allowed = [i for i in range(m) if i not in forbidden]
    return allowed[int(rng.integers(len(allowed)))]
