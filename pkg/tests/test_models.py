import numpy as np
import pytest

from clinli.autodiff import ops
from clinli.data.batching import make_batch
from clinli.data.types import DatasetSplit, NLIPair, build_vocab
from clinli.errors import ConfigError
from clinli.models import ModelSpec, build_model
from clinli.models.persistence import load_model, save_model


def pairs_for(premises, hypotheses, labels):
    return [
        NLIPair(f"p{i}", premise, hypothesis, label)
        for i, (premise, hypothesis, label) in enumerate(zip(premises, hypotheses, labels))
    ]


@pytest.fixture()
def word_split():
    premises = [["alpha", "beta", "gamma"], ["delta", "beta"], ["epsilon", "zeta", "eta", "theta"]]
    hypotheses = [["beta", "gamma"], ["alpha"], ["zeta", "theta"]]
    labels = ["entailment", "contradiction", "neutral"]
    return DatasetSplit("train", pairs_for(premises, hypotheses, labels))


def tiny_spec(arch, kb=False, seed=0):
    return ModelSpec(architecture=arch, kb_attention=kb, embedding_dim=6, hidden=4, mlp_hidden=(8,), seed=seed)


class TestPredictionContracts:
    @pytest.mark.parametrize("arch", ["bow", "infersent", "esim"])
    def test_distributions_sum_to_one(self, arch, word_split):
        vocab = build_vocab(word_split)
        model = build_model(tiny_spec(arch), vocab)
        batch = make_batch(word_split.pairs, vocab)
        probs = model.predict_proba(batch)
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-9)
        assert (probs >= 0).all()

    def test_kb_without_graph_rejected(self, word_split):
        vocab = build_vocab(word_split)
        with pytest.raises(ConfigError):
            build_model(tiny_spec("esim", kb=True), vocab)


class TestBow:
    def test_zero_embeddings_uniform_output(self, word_split):
        vocab = build_vocab(word_split)
        model = build_model(tiny_spec("bow"), vocab)
        for tensor in model.params.values():
            tensor.data = np.zeros_like(tensor.data)
        batch = make_batch(word_split.pairs, vocab)
        probs = model.predict_proba(batch)
        np.testing.assert_allclose(probs, 1 / 3, atol=1e-12)

    def test_token_order_invariance_exact(self, word_split):
        vocab = build_vocab(word_split)
        model = build_model(tiny_spec("bow", seed=3), vocab)
        base = make_batch([NLIPair("a", ["alpha", "beta", "gamma"], ["beta"], "neutral")], vocab)
        permuted = make_batch([NLIPair("a", ["gamma", "alpha", "beta"], ["beta"], "neutral")], vocab)
        np.testing.assert_array_equal(model.predict_proba(base), model.predict_proba(permuted))


class TestInferSent:
    def test_identical_sentences_zero_absdiff_block(self, word_split):
        vocab = build_vocab(word_split)
        model = build_model(tiny_spec("infersent", seed=1), vocab)
        pair = NLIPair("same", ["alpha", "beta"], ["alpha", "beta"], "entailment")
        batch = make_batch([pair], vocab)
        combined = model._combine(batch)
        hidden2 = 2 * model.spec.hidden
        abs_block = combined.data[:, 2 * hidden2 : 3 * hidden2]
        np.testing.assert_array_equal(abs_block, np.zeros_like(abs_block))

    def test_combination_width_is_eight_hidden(self, word_split):
        vocab = build_vocab(word_split)
        spec = ModelSpec(architecture="infersent", embedding_dim=6, hidden=64, mlp_hidden=(8,), seed=0)
        model = build_model(spec, vocab)
        batch = make_batch(word_split.pairs[:1], vocab)
        assert model._combine(batch).shape == (1, 512)

    def test_kb_doubles_encoder_length(self, word_split, graph, monkeypatch):
        from clinli.models import neural

        vocab = build_vocab(word_split)
        model = build_model(tiny_spec("infersent", kb=True), vocab, graph=graph)
        batch = make_batch(word_split.pairs[:1], vocab)
        seen = []
        real = neural.bilstm_encode

        def spy(x, mask, fwd, bwd):
            seen.append(x.shape[1])
            return real(x, mask, fwd, bwd)

        monkeypatch.setattr(neural, "bilstm_encode", spy)
        combined = model._combine(batch)
        assert seen == [2 * batch.premise_ids.shape[1], 2 * batch.hypothesis_ids.shape[1]]
        assert combined.shape == (1, 8 * model.spec.hidden)


class TestEsim:
    def test_single_token_attention_copies_state(self, word_split):
        vocab = build_vocab(word_split)
        model = build_model(tiny_spec("esim", seed=2), vocab)
        pair = NLIPair("one", ["alpha"], ["beta"], "neutral")
        batch = make_batch([pair], vocab)
        from clinli.autodiff import bilstm_encode

        e_p = ops.embedding(model.embedding, batch.premise_ids)
        e_h = ops.embedding(model.embedding, batch.hypothesis_ids)
        a_bar = bilstm_encode(e_p, batch.premise_mask, model.enc_fwd, model.enc_bwd)
        b_bar = bilstm_encode(e_h, batch.hypothesis_mask, model.enc_fwd, model.enc_bwd)
        energy = ops.matmul(a_bar, ops.transpose_last2(b_bar))
        attn = ops.softmax(energy, mask=batch.hypothesis_mask[:, None, :])
        attended = ops.matmul(attn, b_bar)
        np.testing.assert_allclose(attended.data[0, 0], b_bar.data[0, 0], atol=1e-12)

    def test_orthogonal_states_give_uniform_attention(self):
        logits = ops.const(np.zeros((1, 2, 3)))
        attn = ops.softmax(logits, mask=np.array([[[True, True, True]]]))
        np.testing.assert_allclose(attn.data, 1 / 3, atol=1e-12)

    def test_enhancement_width_with_kb(self, word_split, graph):
        vocab = build_vocab(word_split)
        model = build_model(tiny_spec("esim", kb=True), vocab, graph=graph)
        assert model.proj_w.shape[0] == 10 * model.spec.hidden
        plain = build_model(tiny_spec("esim"), vocab)
        assert plain.proj_w.shape[0] == 8 * model.spec.hidden

    def test_empty_graph_kb_block_is_zero(self, word_split):
        from clinli.ontology import ConceptGraph

        vocab = build_vocab(word_split)
        model = build_model(tiny_spec("esim", kb=True), vocab, graph=ConceptGraph())
        batch = make_batch(word_split.pairs[:2], vocab)
        w_p, w_h = model._kb_weights(batch)
        assert not w_p.any() and not w_h.any()
        probs = model.predict_proba(batch)
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-9)


class TestPaddingInvariance:
    @pytest.mark.parametrize("arch,kb", [("bow", False), ("infersent", False), ("infersent", True), ("esim", False), ("esim", True)])
    def test_output_unchanged_by_batch_padding(self, arch, kb, word_split, graph):
        vocab = build_vocab(word_split)
        model = build_model(tiny_spec(arch, kb=kb, seed=4), vocab, graph=graph if kb else None)
        short = word_split.pairs[1]  # shortest premise
        alone = make_batch([short], vocab)
        padded = make_batch([short, word_split.pairs[2]], vocab)  # longer mate forces padding
        solo_probs = model.predict_proba(alone)[0]
        padded_probs = model.predict_proba(padded)[0]
        np.testing.assert_allclose(solo_probs, padded_probs, atol=1e-9)


class TestPersistence:
    def test_round_trip_preserves_predictions(self, word_split, tmp_path, graph):
        vocab = build_vocab(word_split)
        model = build_model(tiny_spec("esim", kb=True, seed=5), vocab, graph=graph)
        model.add_head("target")
        batch = make_batch(word_split.pairs, vocab)
        expected = model.predict_proba(batch)
        save_model(model, tmp_path / "ckpt")
        reloaded = load_model(tmp_path / "ckpt", graph=graph)
        np.testing.assert_array_equal(reloaded.predict_proba(batch), expected)
        assert set(reloaded.heads) == {"head", "target"}

    def test_parameter_bytes_identical(self, word_split, tmp_path):
        vocab = build_vocab(word_split)
        model = build_model(tiny_spec("bow"), vocab)
        save_model(model, tmp_path / "ckpt")
        reloaded = load_model(tmp_path / "ckpt")
        for name, tensor in model.params.items():
            assert reloaded.params[name].data.tobytes() == tensor.data.tobytes()
