import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clinli.data.agreement import cohens_kappa, confusion_counts, kappa_from_confusion
from clinli.data.annotation import ingest_annotations, judgments_to_labels, prepare_annotation_batch


def record(premise_id, premise="Patient has type II diabetes", invalid=False, drop=None):
    row = {
        "premise_id": premise_id,
        "premise": premise,
        "hypothesis_entailment": "Patient suffers from a chronic condition",
        "hypothesis_neutral": "Patient has hypertension",
        "hypothesis_contradiction": "Insulin levels are normal without medications",
        "annotator_id": "clin-1",
        "invalid": invalid,
    }
    if drop:
        row.pop(drop)
    return json.dumps(row)


class TestPrompts:
    def test_all_candidates_emitted_when_n_equals_count(self):
        sentences = [f"sentence {i}" for i in range(100)]
        text = prepare_annotation_batch(sentences, 100, seed=5)
        assert all(s in text for s in sentences)

    def test_same_seed_identical_output(self):
        sentences = [f"premise {i}" for i in range(30)]
        assert prepare_annotation_batch(sentences, 10, seed=3) == prepare_annotation_batch(sentences, 10, seed=3)

    def test_different_seed_changes_order(self):
        sentences = [f"premise {i}" for i in range(30)]
        assert prepare_annotation_batch(sentences, 10, seed=3) != prepare_annotation_batch(sentences, 10, seed=4)

    def test_prompt_contains_the_three_instructions(self):
        text = prepare_annotation_batch(["one premise"], 1, seed=0)
        assert "definitely" in text and "true" in text
        assert "might be" in text
        assert "false" in text
        assert text.count("Write one") == 3  # one bullet per label

    def test_n_too_large_rejected(self):
        with pytest.raises(ValueError):
            prepare_annotation_batch(["only one"], 2, seed=0)


class TestIngest:
    def test_complete_record_yields_three_labeled_pairs(self):
        pairs, discards = ingest_annotations([record("p1")])
        assert len(pairs) == 3 and not discards
        assert sorted(p.label for p in pairs) == ["contradiction", "entailment", "neutral"]
        assert all(p.premise == pairs[0].premise for p in pairs)

    def test_invalid_premise_discarded_with_reason(self):
        pairs, discards = ingest_annotations([record("p1", invalid=True)])
        assert pairs == []
        assert len(discards) == 1 and discards[0].premise_id == "p1"

    def test_missing_hypothesis_rejected_naming_field(self):
        pairs, discards = ingest_annotations([record("p1", drop="hypothesis_neutral")])
        assert pairs == []
        assert "hypothesis_neutral" in discards[0].reason

    def test_discard_arithmetic_three_pairs_per_kept_record(self):
        # 200 premises, 16 judged invalid -> 184 records -> 552 pairs
        records = [record(f"p{i}", invalid=(i < 16)) for i in range(200)]
        pairs, discards = ingest_annotations(records)
        assert len(discards) == 16
        assert len(pairs) == 184 * 3 == 552


class TestKappa:
    def test_identical_sequences(self):
        assert cohens_kappa(list("abcabc"), list("abcabc")) == 1.0

    def test_constructed_confusion_table(self):
        table = np.array([[20, 5, 0], [10, 15, 5], [0, 5, 40]])
        # direct formula evaluation: p_o = 0.75, p_e = 0.3525
        kappa = kappa_from_confusion(table)
        assert abs(kappa - 0.3975 / 0.6475) < 1e-12
        assert abs(kappa - 0.6139) < 1e-4

    def test_random_labels_near_zero(self):
        rng = np.random.default_rng(12)
        a = rng.integers(0, 3, size=10000)
        b = rng.integers(0, 3, size=10000)
        assert abs(cohens_kappa(a.tolist(), b.tolist())) < 0.05

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            cohens_kappa([], [])

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            cohens_kappa(["a"], ["a", "b"])

    def test_degenerate_marginals(self):
        assert cohens_kappa(["x", "x"], ["x", "x"]) == 1.0

    @given(st.lists(st.tuples(st.sampled_from("abc"), st.sampled_from("abc")), min_size=2, max_size=60))
    @settings(max_examples=80, deadline=None)
    def test_symmetry_and_relabeling_invariance(self, paired):
        a = [x for x, _ in paired]
        b = [y for _, y in paired]
        try:
            forward = cohens_kappa(a, b)
        except ValueError:
            return  # degenerate marginals with disagreement
        assert abs(forward - cohens_kappa(b, a)) < 1e-12
        relabel = {"a": "z", "b": "q", "c": "m"}
        assert abs(forward - cohens_kappa([relabel[x] for x in a], [relabel[y] for y in b])) < 1e-12

    def test_confusion_counts_shape(self):
        table, cats = confusion_counts(["a", "b"], ["b", "b"])
        assert table.sum() == 2 and cats == ["a", "b"]

    def test_judgment_mapping_feeds_agreement(self):
        intended = ["entailment", "neutral", "contradiction", "entailment"]
        second_pass = ["Definitely true", "maybe-true", "definitely-false", "maybe-true"]
        relabeled = judgments_to_labels(second_pass)
        assert relabeled == ["entailment", "neutral", "contradiction", "neutral"]
        assert cohens_kappa(intended, relabeled) < 1.0

    def test_unknown_judgment_rejected(self):
        with pytest.raises(ValueError):
            judgments_to_labels(["probably"])
