import math

import numpy as np
import pytest

from clinli.data.types import DatasetSplit, NLIPair
from clinli.embeddings import EmbeddingMatrix
from clinli.models import (
    FEATURE_NAMES,
    GbmConfig,
    GbmModel,
    N_FEATURES,
    bleu,
    build_idf,
    count_negations,
    extract_features,
    feature_manifest_hash,
    gbm_train,
    packaged_feature_manifest,
)


@pytest.fixture(scope="module")
def embeddings():
    rng = np.random.default_rng(0)
    tokens = ["the", "patient", "has", "no", "cp", "pneumonia", "angina", "."]
    return EmbeddingMatrix(tokens, rng.normal(size=(len(tokens), 8)))


@pytest.fixture(scope="module")
def idf():
    split = DatasetSplit(
        "train",
        [
            NLIPair("1", ["the", "patient", "has", "pneumonia"], ["lung", "disease"], "entailment"),
            NLIPair("2", ["no", "cp", "or", "fevers"], ["patient", "has", "angina"], "contradiction"),
        ],
    )
    return build_idf(split)


class TestBleu:
    def test_identical_sentences(self):
        assert bleu(["a", "b", "c"], ["a", "b", "c"]) == 1.0

    def test_brevity_penalty_case(self):
        # p1 = 3/3, p2 = 2/2, brevity = exp(1 - 4/3)
        assert bleu(["a", "b", "c"], ["a", "b", "c", "d"]) == pytest.approx(math.exp(1 - 4 / 3))

    def test_no_overlap_is_zero(self):
        assert bleu(["a", "b"], ["c", "d"]) == 0.0

    def test_single_token_candidate_uses_unigrams_only(self):
        assert bleu(["a"], ["a", "b"]) == pytest.approx(math.exp(1 - 2 / 1))

    def test_empty_candidate(self):
        assert bleu([], ["a"]) == 0.0


class TestNegation:
    def test_single_tokens_counted(self):
        assert count_negations(["no", "cp", "not", "never"]) == 3

    def test_multiword_term(self):
        assert count_negations(["patient", "free", "of", "pain"]) == 1

    def test_contraction(self):
        assert count_negations(["does", "n't", "smoke"]) == 1


class TestFeatureVector:
    def test_length_exactly_35(self, embeddings, idf, graph):
        pair = NLIPair("x", ["the", "patient", "has", "pneumonia"], ["no", "cp"], "neutral")
        vector = extract_features(pair, embeddings, graph, idf)
        assert vector.shape == (35,)
        assert N_FEATURES == 35 and len(FEATURE_NAMES) == 35

    def test_identical_sentences_reference_values(self, embeddings, idf, graph):
        tokens = ["the", "patient", "has", "pneumonia"]
        pair = NLIPair("same", list(tokens), list(tokens), "entailment")
        named = dict(zip(FEATURE_NAMES, extract_features(pair, embeddings, graph, idf)))
        assert named["bleu_premise_to_hypothesis"] == 1.0
        assert named["bleu_hypothesis_to_premise"] == 1.0
        assert named["levenshtein_char"] == 0.0
        assert named["levenshtein_token"] == 0.0
        assert named["tfidf_cosine"] == pytest.approx(1.0)
        assert named["jaccard_token"] == 1.0
        assert named["len_ratio"] == 1.0
        assert named["embed_mean_cosine"] == pytest.approx(1.0)

    def test_levenshtein_matches_dp_oracle(self):
        def dp(a, b):
            table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
            for i in range(len(a) + 1):
                table[i][0] = i
            for j in range(len(b) + 1):
                table[0][j] = j
            for i in range(1, len(a) + 1):
                for j in range(1, len(b) + 1):
                    table[i][j] = min(
                        table[i - 1][j] + 1,
                        table[i][j - 1] + 1,
                        table[i - 1][j - 1] + (a[i - 1] != b[j - 1]),
                    )
            return table[len(a)][len(b)]

        from clinli import kernels

        assert dp("kitten", "sitting") == 3
        a = np.frombuffer("kitten".encode("utf-32-le"), dtype=np.int32).astype(np.int64)
        b = np.frombuffer("sitting".encode("utf-32-le"), dtype=np.int32).astype(np.int64)
        assert kernels.levenshtein(a, b) == 3

        rng = np.random.default_rng(1)
        for _ in range(25):
            s = "".join(rng.choice(list("abcd"), size=rng.integers(0, 9)))
            t = "".join(rng.choice(list("abcd"), size=rng.integers(0, 9)))
            sa = np.frombuffer(s.encode("utf-32-le"), dtype=np.int32).astype(np.int64)
            tb = np.frombuffer(t.encode("utf-32-le"), dtype=np.int32).astype(np.int64)
            assert kernels.levenshtein(sa, tb) == dp(s, t)

    def test_deterministic_and_total_on_odd_input(self, embeddings, idf, graph):
        pair = NLIPair("odd", ["zzzz", "13.3", "%"], ["unseen-token"], "neutral")
        a = extract_features(pair, embeddings, graph, idf)
        b = extract_features(pair, embeddings, graph, idf)
        assert np.array_equal(a, b)
        assert np.isfinite(a).all()

    def test_manifest_matches_code(self):
        assert packaged_feature_manifest() == list(FEATURE_NAMES)


class TestGbm:
    def test_linearly_separable_reaches_full_accuracy(self):
        rng = np.random.default_rng(5)
        x = rng.normal(size=(120, 2))
        y = (x[:, 0] + x[:, 1] > 0).astype(np.int64)
        model = gbm_train(x, y, GbmConfig(rounds=50, depth=3))
        assert (model.predict(x) == y).mean() == 1.0

    def test_train_loss_non_increasing(self):
        rng = np.random.default_rng(6)
        x = rng.normal(size=(90, 4))
        y = rng.integers(0, 3, size=90)
        model = gbm_train(x, y, GbmConfig(rounds=30))
        diffs = np.diff(model.train_losses)
        assert np.all(diffs <= 1e-9)

    def test_constant_features_predict_priors(self):
        x = np.ones((30, 4))
        y = np.array([0] * 15 + [1] * 10 + [2] * 5)
        model = gbm_train(x, y, GbmConfig(rounds=10))
        np.testing.assert_allclose(model.predict_proba(x[:1])[0], [0.5, 1 / 3, 1 / 6], atol=1e-12)

    def test_zero_round_model_is_priors(self):
        x = np.random.default_rng(0).normal(size=(30, 3))
        y = np.array([0] * 10 + [1] * 10 + [2] * 10)
        model = gbm_train(x, y, GbmConfig(rounds=0))
        np.testing.assert_allclose(model.predict_proba(x)[0], [1 / 3, 1 / 3, 1 / 3], atol=1e-12)

    def test_single_class_rejected(self):
        with pytest.raises(ValueError):
            gbm_train(np.ones((10, 2)), np.zeros(10, dtype=np.int64))

    def test_wrong_feature_count_rejected(self):
        rng = np.random.default_rng(7)
        model = gbm_train(rng.normal(size=(30, 5)), rng.integers(0, 2, size=30), GbmConfig(rounds=3))
        with pytest.raises(ValueError):
            model.predict_proba(np.ones((1, 4)))

    def test_prediction_distribution_normalized(self):
        rng = np.random.default_rng(8)
        model = gbm_train(rng.normal(size=(60, 3)), rng.integers(0, 3, size=60), GbmConfig(rounds=5))
        probs = model.predict_proba(rng.normal(size=(9, 3)))
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-9)

    def test_deterministic_training(self):
        rng = np.random.default_rng(9)
        x = rng.normal(size=(50, 4))
        y = rng.integers(0, 3, size=50)
        a = gbm_train(x, y, GbmConfig(rounds=8))
        b = gbm_train(x, y, GbmConfig(rounds=8))
        assert a.trees == b.trees

    def test_save_load_round_trip(self, tmp_path):
        rng = np.random.default_rng(10)
        x = rng.normal(size=(40, 35))
        y = rng.integers(0, 3, size=40)
        model = gbm_train(x, y, GbmConfig(rounds=4))
        assert model.feature_hash == feature_manifest_hash()
        model.save(tmp_path / "gbm.json")
        loaded = GbmModel.load(tmp_path / "gbm.json")
        np.testing.assert_array_equal(loaded.predict_proba(x), model.predict_proba(x))
