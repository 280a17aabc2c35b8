import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clinli.data import read_split, write_split
from clinli.data.types import DatasetSplit, NLIPair
from clinli.errors import DataFormatError

token = st.text(alphabet="abcdefghij0123456789", min_size=1, max_size=6)
token_list = st.lists(token, min_size=1, max_size=8)
label = st.sampled_from(["entailment", "contradiction", "neutral"])


def pair_strategy(idx):
    return st.builds(
        lambda p, h, lbl: NLIPair(pair_id=f"pair-{idx}", premise=p, hypothesis=h, label=lbl),
        token_list,
        token_list,
        label,
    )


def test_round_trip_three_pairs(tmp_path):
    split = DatasetSplit(
        "train",
        [
            NLIPair("a", ["no", "cp", "."], ["has", "angina"], "contradiction"),
            NLIPair("b", ["stable"], ["pt", "stable"], "entailment"),
            NLIPair("c", ["fever", "noted"], ["possible", "infection"], "neutral"),
        ],
    )
    path = tmp_path / "pairs.jsonl"
    write_split(path, split)
    loaded = read_split(path, name="train")
    assert [p.pair_id for p in loaded.pairs] == ["a", "b", "c"]
    for original, parsed in zip(split.pairs, loaded.pairs):
        assert parsed.premise == original.premise
        assert parsed.hypothesis == original.hypothesis
        assert parsed.label == original.label


def test_unknown_label_reports_line_number(tmp_path):
    path = tmp_path / "bad.jsonl"
    rows = [
        {"gold_label": "entailment", "sentence1": "a", "sentence2": "b", "pairID": "1"},
        {"gold_label": "maybe", "sentence1": "a", "sentence2": "b", "pairID": "2"},
    ]
    path.write_text("\n".join(json.dumps(r) for r in rows))
    with pytest.raises(DataFormatError) as err:
        read_split(path)
    assert err.value.line == 2
    assert "maybe" in str(err.value)


def test_unlabeled_convention_skipped_with_count(tmp_path):
    path = tmp_path / "snli.jsonl"
    rows = [
        {"gold_label": "-", "sentence1": "a", "sentence2": "b", "pairID": "1", "captionID": "x"},
        {"gold_label": "neutral", "sentence1": "a cat", "sentence2": "a pet", "pairID": "2", "extra": 5},
    ]
    path.write_text("\n".join(json.dumps(r) for r in rows))
    split, report = read_split(path, with_report=True)
    assert report.skipped_unlabeled == 1
    assert report.loaded == 1
    assert split.pairs[0].pair_id == "2"


def test_malformed_json_reports_line_number(tmp_path):
    path = tmp_path / "broken.jsonl"
    path.write_text('{"gold_label": "neutral", "sentence1": "a", "sentence2": "b"}\n{oops\n')
    with pytest.raises(DataFormatError) as err:
        read_split(path)
    assert err.value.line == 2


def test_missing_sentence_rejected(tmp_path):
    path = tmp_path / "missing.jsonl"
    path.write_text(json.dumps({"gold_label": "neutral", "sentence1": "a"}) + "\n")
    with pytest.raises(DataFormatError):
        read_split(path)


@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=12, unique=True).flatmap(
    lambda ids: st.tuples(*[pair_strategy(i) for i in ids])
))
@settings(max_examples=40, deadline=None)
def test_write_read_identity_property(tmp_path_factory, pairs):
    split = DatasetSplit("train", list(pairs))
    path = tmp_path_factory.mktemp("io") / "pairs.jsonl"
    write_split(path, split)
    loaded = read_split(path, name="train")
    assert len(loaded) == len(split)
    for original, parsed in zip(split.pairs, loaded.pairs):
        assert parsed.pair_id == original.pair_id
        assert parsed.premise == original.premise
        assert parsed.hypothesis == original.hypothesis
        assert parsed.label == original.label
