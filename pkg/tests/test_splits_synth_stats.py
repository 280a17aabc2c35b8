import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clinli.data import (
    SynthSpec,
    batchify,
    build_vocab,
    check_premise_disjoint,
    dataset_stats,
    generate_synthetic_dataset,
    split_by_premise,
    write_split,
)
from clinli.data.types import PAD_INDEX, UNK_INDEX, DatasetSplit, NLIPair, Vocabulary


def make_pairs(n_premises, pairs_per_premise=3):
    pairs = []
    labels = ["entailment", "contradiction", "neutral"]
    for i in range(n_premises):
        for j in range(pairs_per_premise):
            pairs.append(
                NLIPair(f"{i}-{j}", [f"premise{i}", "tokens"], [f"hyp{i}{j}"], labels[j % 3])
            )
    return pairs


class TestSplitByPremise:
    def test_group_counts_follow_ratios(self):
        splits = split_by_premise(make_pairs(10), ratios=(0.8, 0.1, 0.1), seed=0)
        premise_counts = [len(s.premises()) for s in splits]
        assert premise_counts == [8, 1, 1]
        assert [len(s) for s in splits] == [24, 3, 3]

    def test_shared_premise_never_straddles(self):
        splits = split_by_premise(make_pairs(7), seed=3)
        check_premise_disjoint(*splits)

    def test_same_seed_identical_assignment(self):
        a = split_by_premise(make_pairs(9), seed=5)
        b = split_by_premise(make_pairs(9), seed=5)
        assert [[p.pair_id for p in s.pairs] for s in a] == [[p.pair_id for p in s.pairs] for s in b]

    def test_too_few_premises_rejected(self):
        with pytest.raises(ValueError):
            split_by_premise(make_pairs(2), seed=0)

    def test_bad_ratios_rejected(self):
        with pytest.raises(ValueError):
            split_by_premise(make_pairs(5), ratios=(0.5, 0.2, 0.2), seed=0)

    @given(st.integers(3, 40), st.integers(0, 2**31 - 1))
    @settings(max_examples=60, deadline=None)
    def test_disjoint_for_all_seeds(self, n_premises, seed):
        splits = split_by_premise(make_pairs(n_premises, pairs_per_premise=2), seed=seed)
        check_premise_disjoint(*splits)
        assert sum(len(s) for s in splits) == n_premises * 2


class TestSynthetic:
    def test_exact_sizes_and_disjoint(self):
        splits = generate_synthetic_dataset(SynthSpec(sizes=(96, 24, 24), seed=0))
        assert [len(s) for s in splits] == [96, 24, 24]
        check_premise_disjoint(*splits)

    def test_planted_negation_iff_contradiction(self):
        splits = generate_synthetic_dataset(SynthSpec(sizes=(96, 24, 24), planted_artifact=True, seed=1))
        for split in splits:
            for pair in split.pairs:
                has_negation = "not" in pair.hypothesis
                assert has_negation == (pair.label == "contradiction")

    def test_same_seed_bit_identical_files(self, tmp_path):
        for run in ("a", "b"):
            splits = generate_synthetic_dataset(SynthSpec(sizes=(24, 6, 6), n_items=8, seed=9))
            for split in splits:
                write_split(tmp_path / f"{run}-{split.name}.jsonl", split)
        for name in ("train", "dev", "test"):
            assert (tmp_path / f"a-{name}.jsonl").read_bytes() == (tmp_path / f"b-{name}.jsonl").read_bytes()

    def test_sizes_must_be_multiples_of_three(self):
        with pytest.raises(ValueError):
            SynthSpec(sizes=(10, 3, 3))

    def test_labels_balanced(self):
        splits = generate_synthetic_dataset(SynthSpec(sizes=(30, 6, 6), n_items=8, seed=2))
        for split in splits:
            counts = {}
            for pair in split.pairs:
                counts[pair.label] = counts.get(pair.label, 0) + 1
            assert len(set(counts.values())) == 1


class TestStats:
    def test_single_pair_lengths(self):
        split = DatasetSplit("train", [NLIPair("x", ["a", "b", "c", "d"], ["e"], "neutral")])
        report = dataset_stats([split])
        assert report["premise_length"]["mean"] == 4.0
        assert report["premise_length"]["max"] == 4
        assert report["hypothesis_length"]["mean"] == 1.0
        assert report["splits"] == {"train": 1}

    def test_empty_dataset_rejected(self):
        with pytest.raises(ValueError):
            dataset_stats([DatasetSplit("train", [])])

    def test_histogram_buckets_configurable(self):
        split = DatasetSplit("train", [NLIPair("x", ["a"] * 7, ["b"] * 2, "neutral")])
        report = dataset_stats([split], bucket_edges=[0, 5])
        assert report["premise_length"]["histogram"] == {">=0": 0, ">=5": 1}


class TestVocabBatch:
    def test_min_count_threshold(self):
        split = DatasetSplit(
            "train",
            [
                NLIPair("1", ["a", "a"], ["a"], "neutral"),
                NLIPair("2", ["b"], ["c"], "neutral"),
            ],
        )
        vocab = build_vocab(split, min_count=2)
        assert "a" in vocab and "b" not in vocab
        assert vocab.index("b") == UNK_INDEX

    def test_reserved_indices(self):
        vocab = Vocabulary(["tok"])
        assert vocab.index("<pad>") == PAD_INDEX == 0
        assert vocab.index("<unk>") == UNK_INDEX == 1
        assert vocab.index("never-seen") == UNK_INDEX

    def test_padding_and_masks(self, tiny_splits, tiny_vocab):
        batches = batchify(tiny_splits[0], 8, tiny_vocab)
        batch = batches[0]
        lengths = batch.premise_mask.sum(axis=1)
        assert batch.premise_ids.shape[1] == lengths.max()
        padded = batch.premise_ids[~batch.premise_mask]
        assert np.all(padded == PAD_INDEX)

    def test_batch_order_deterministic_given_seed(self, tiny_splits, tiny_vocab):
        a = batchify(tiny_splits[0], 4, tiny_vocab, seed=11)
        b = batchify(tiny_splits[0], 4, tiny_vocab, seed=11)
        assert [x.pair_ids for x in a] == [y.pair_ids for y in b]
        c = batchify(tiny_splits[0], 4, tiny_vocab, seed=12)
        assert [x.pair_ids for x in a] != [z.pair_ids for z in c]

    def test_batch_size_one_no_padding(self, tiny_splits, tiny_vocab):
        batches = batchify(tiny_splits[0], 1, tiny_vocab)
        for batch in batches:
            assert batch.premise_mask.all()
            assert batch.hypothesis_mask.all()
