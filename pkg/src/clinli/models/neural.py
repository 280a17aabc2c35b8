"""The neural sentence-pair classifiers.

Three architectures over shared plumbing:

* ``bow``: sentence vector = masked sum of token embeddings; the premise
  and hypothesis vectors are concatenated into the classifier.
* ``infersent``: one shared bidirectional LSTM encodes both sentences,
  masked max-pooling gives p and h, and the classifier sees
  [p, h, |p-h|, p*h].
* ``esim``: encoder LSTM, dot-product inter-sentence attention, an
  enhancement block [x, x~, x-x~, x*x~] projected through relu, a
  composition LSTM, then masked mean+max pooling of both sentences.

Setting ``kb_attention`` plugs ontology-path attention in: InferSent
appends the knowledge-attended vectors along the time axis at the
embedding level; ESIM widens the enhancement block with the
knowledge-attended encoder states so the classifier can weigh learned
against ontology-directed attention.

Every model exposes named heads (classifier MLPs) so transfer runs can
keep per-domain heads over one shared trunk.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..autodiff import LSTMParams, Tensor, bilstm_encode, init_lstm, ops, parameter
from ..data.batching import Batch
from ..data.types import PAD_INDEX, Vocabulary
from ..errors import ConfigError
from ..ontology import ConceptGraph, kb_attention

ARCHITECTURES = ("bow", "infersent", "esim")


@dataclass
class ModelSpec:
    architecture: str = "infersent"
    kb_attention: bool = False
    embedding_dim: int = 50
    hidden: int = 64
    mlp_hidden: tuple = (128,)
    kb_decay: float = 1.0
    dropout: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.architecture not in ARCHITECTURES:
            raise ConfigError(f"architecture must be one of {ARCHITECTURES}, got {self.architecture!r}")
        if self.hidden < 1 or self.embedding_dim < 1:
            raise ConfigError("hidden and embedding_dim must be >= 1")
        self.mlp_hidden = tuple(int(h) for h in self.mlp_hidden)

    def to_dict(self) -> dict:
        return {
            "architecture": self.architecture,
            "kb_attention": self.kb_attention,
            "embedding_dim": self.embedding_dim,
            "hidden": self.hidden,
            "mlp_hidden": list(self.mlp_hidden),
            "kb_decay": self.kb_decay,
            "dropout": self.dropout,
            "seed": self.seed,
        }


@dataclass
class Prediction:
    probabilities: np.ndarray  # (3,), non-negative, sums to 1
    label_index: int

    @classmethod
    def from_probabilities(cls, probs: np.ndarray) -> "Prediction":
        probs = np.asarray(probs, dtype=np.float64)
        return cls(probabilities=probs, label_index=int(np.argmax(probs)))


def _linear_init(rng, fan_in: int, fan_out: int, prefix: str) -> tuple[Tensor, Tensor]:
    bound = 1.0 / np.sqrt(fan_in)
    w = parameter(rng.uniform(-bound, bound, size=(fan_in, fan_out)), f"{prefix}.w")
    b = parameter(np.zeros(fan_out), f"{prefix}.b")
    return w, b


def _softmax_rows(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


class NliModel:
    """Shared trunk + named classifier heads."""

    def __init__(self, spec: ModelSpec, vocab: Vocabulary, embeddings=None, graph: ConceptGraph | None = None):
        if spec.kb_attention and graph is None:
            raise ConfigError("kb_attention requires a concept graph")
        self.spec = spec
        self.vocab = vocab
        self.graph = graph
        self.params: dict[str, Tensor] = {}
        self.heads: dict[str, list[str]] = {}
        self._kb_cache: dict[tuple, tuple[np.ndarray, np.ndarray]] = {}
        rng = np.random.default_rng(spec.seed)
        self._build_trunk(rng, embeddings)
        self.add_head("head", rng)

    # -- construction -------------------------------------------------------

    def _register(self, tensor: Tensor) -> Tensor:
        self.params[tensor.name] = tensor
        return tensor

    def _register_lstm(self, lstm: LSTMParams) -> LSTMParams:
        for t in lstm.tensors().values():
            self._register(t)
        return lstm

    def _build_embedding(self, rng, embeddings) -> None:
        dim = self.spec.embedding_dim
        table = np.zeros((len(self.vocab), dim))
        for idx, token in enumerate(self.vocab.tokens()):
            if idx == PAD_INDEX:
                continue
            if embeddings is not None:
                vec = embeddings.lookup(token)
                if vec.shape[0] != dim:
                    raise ConfigError(
                        f"embedding dim mismatch: spec wants {dim}, vectors have {vec.shape[0]}"
                    )
                table[idx] = vec
            else:
                table[idx] = rng.uniform(-0.5 / dim, 0.5 / dim, size=dim)
        self.embedding = self._register(parameter(table, "embedding"))
        self.embedding_provenance = getattr(embeddings, "provenance", "") if embeddings is not None else "random"

    def _build_trunk(self, rng, embeddings) -> None:
        raise NotImplementedError

    def _combined_dim(self) -> int:
        raise NotImplementedError

    def add_head(self, name: str, rng=None) -> None:
        """A head is the classifier MLP applied to the combination vector."""
        if name in self.heads:
            return
        rng = rng or np.random.default_rng(self.spec.seed + 1000 + len(self.heads))
        names: list[str] = []
        width = self._combined_dim()
        for k, hidden in enumerate(self.spec.mlp_hidden):
            w, b = _linear_init(rng, width, hidden, f"head.{name}.mlp{k}")
            self._register(w), self._register(b)
            names.extend([w.name, b.name])
            width = hidden
        w, b = _linear_init(rng, width, 3, f"head.{name}.out")
        self._register(w), self._register(b)
        names.extend([w.name, b.name])
        self.heads[name] = names

    def head_param_names(self, name: str = "head") -> list[str]:
        return list(self.heads[name])

    def shared_param_names(self) -> list[str]:
        head_names = {p for names in self.heads.values() for p in names}
        return [n for n in self.params if n not in head_names]

    def trainable_params(self, head: str = "head") -> dict[str, Tensor]:
        names = self.shared_param_names() + self.head_param_names(head)
        return {n: self.params[n] for n in names}

    # -- forward ------------------------------------------------------------

    def _classifier(self, z: Tensor, head: str) -> Tensor:
        names = self.heads[head]
        out = z
        for k in range(len(self.spec.mlp_hidden)):
            w, b = self.params[names[2 * k]], self.params[names[2 * k + 1]]
            out = ops.relu(ops.add(ops.matmul(out, w), b))
        w, b = self.params[names[-2]], self.params[names[-1]]
        return ops.add(ops.matmul(out, w), b)

    def _combine(self, batch: Batch) -> Tensor:
        raise NotImplementedError

    def forward(self, batch: Batch, head: str = "head") -> Tensor:
        """Logits (B, 3). Record on a Tape around this call to train."""
        return self._classifier(self._combine(batch), head)

    def predict_proba(self, batch: Batch, head: str = "head") -> np.ndarray:
        return _softmax_rows(self.forward(batch, head).data)

    def predict(self, batch: Batch, head: str = "head") -> list[Prediction]:
        return [Prediction.from_probabilities(p) for p in self.predict_proba(batch, head)]

    # -- kb attention plumbing ----------------------------------------------

    def _kb_weights(self, batch: Batch) -> tuple[np.ndarray, np.ndarray]:
        """Padded (B, Tp, Th) and (B, Th, Tp) ontology attention weights."""
        b, tp = batch.premise_ids.shape
        th = batch.hypothesis_ids.shape[1]
        w_p = np.zeros((b, tp, th))
        w_h = np.zeros((b, th, tp))
        for row in range(b):
            key = (tuple(batch.premise_tokens[row]), tuple(batch.hypothesis_tokens[row]))
            cached = self._kb_cache.get(key)
            if cached is None:
                fwd, bwd = kb_attention(key[0], key[1], self.graph, self.spec.kb_decay)
                cached = (fwd.weights, bwd.weights)
                self._kb_cache[key] = cached
            np_, nh = cached[0].shape
            w_p[row, :np_, :nh] = cached[0]
            w_h[row, :nh, :np_] = cached[1]
        return w_p, w_h

    def _maybe_dropout(self, x: Tensor, salt: int) -> Tensor:
        if self.spec.dropout > 0.0:
            return ops.dropout(x, self.spec.dropout, self.spec.seed * 7919 + salt)
        return x


class BowModel(NliModel):
    def _build_trunk(self, rng, embeddings) -> None:
        self._build_embedding(rng, embeddings)

    def _combined_dim(self) -> int:
        return 2 * self.spec.embedding_dim

    def _combine(self, batch: Batch) -> Tensor:
        e_p = ops.embedding(self.embedding, batch.premise_ids)
        e_h = ops.embedding(self.embedding, batch.hypothesis_ids)
        p = ops.sum_pool_time(e_p, batch.premise_mask)
        h = ops.sum_pool_time(e_h, batch.hypothesis_mask)
        return self._maybe_dropout(ops.concat([p, h], axis=-1), salt=1)


class InferSentModel(NliModel):
    def _build_trunk(self, rng, embeddings) -> None:
        self._build_embedding(rng, embeddings)
        dim, hidden = self.spec.embedding_dim, self.spec.hidden
        self.enc_fwd = self._register_lstm(init_lstm(dim, hidden, rng, "encoder.fwd"))
        self.enc_bwd = self._register_lstm(init_lstm(dim, hidden, rng, "encoder.bwd"))

    def _combined_dim(self) -> int:
        return 8 * self.spec.hidden

    def _encode(self, embedded: Tensor, mask: np.ndarray) -> Tensor:
        enc = bilstm_encode(embedded, mask, self.enc_fwd, self.enc_bwd)
        return ops.max_pool_time(enc, mask)

    def _combine(self, batch: Batch) -> Tensor:
        e_p = ops.embedding(self.embedding, batch.premise_ids)
        e_h = ops.embedding(self.embedding, batch.hypothesis_ids)
        mask_p, mask_h = batch.premise_mask, batch.hypothesis_mask
        if self.spec.kb_attention:
            w_p, w_h = self._kb_weights(batch)
            attended_p = ops.matmul(ops.const(w_p), e_h)
            attended_h = ops.matmul(ops.const(w_h), e_p)
            # append along time; appended positions inherit the source mask
            e_p = ops.concat([e_p, attended_p], axis=1)
            e_h = ops.concat([e_h, attended_h], axis=1)
            mask_p = np.concatenate([mask_p, mask_p], axis=1)
            mask_h = np.concatenate([mask_h, mask_h], axis=1)
        p = self._encode(e_p, mask_p)
        h = self._encode(e_h, mask_h)
        z = ops.concat([p, h, ops.absolute(ops.sub(p, h)), ops.mul(p, h)], axis=-1)
        return self._maybe_dropout(z, salt=2)


class EsimModel(NliModel):
    def _build_trunk(self, rng, embeddings) -> None:
        self._build_embedding(rng, embeddings)
        dim, hidden = self.spec.embedding_dim, self.spec.hidden
        self.enc_fwd = self._register_lstm(init_lstm(dim, hidden, rng, "encoder.fwd"))
        self.enc_bwd = self._register_lstm(init_lstm(dim, hidden, rng, "encoder.bwd"))
        enhance_width = (10 if self.spec.kb_attention else 8) * hidden
        self.proj_w, self.proj_b = _linear_init(rng, enhance_width, hidden, "projection")
        self._register(self.proj_w), self._register(self.proj_b)
        self.comp_fwd = self._register_lstm(init_lstm(hidden, hidden, rng, "composition.fwd"))
        self.comp_bwd = self._register_lstm(init_lstm(hidden, hidden, rng, "composition.bwd"))

    def _combined_dim(self) -> int:
        return 8 * self.spec.hidden

    def _combine(self, batch: Batch) -> Tensor:
        e_p = ops.embedding(self.embedding, batch.premise_ids)
        e_h = ops.embedding(self.embedding, batch.hypothesis_ids)
        mask_p, mask_h = batch.premise_mask, batch.hypothesis_mask
        a_bar = bilstm_encode(e_p, mask_p, self.enc_fwd, self.enc_bwd)
        b_bar = bilstm_encode(e_h, mask_h, self.enc_fwd, self.enc_bwd)

        energy = ops.matmul(a_bar, ops.transpose_last2(b_bar))  # (B, Tp, Th)
        attn_p = ops.softmax(energy, mask=mask_h[:, None, :])
        a_tilde = ops.matmul(attn_p, b_bar)
        attn_h = ops.softmax(ops.transpose_last2(energy), mask=mask_p[:, None, :])
        b_tilde = ops.matmul(attn_h, a_bar)

        blocks_a = [a_bar, a_tilde, ops.sub(a_bar, a_tilde), ops.mul(a_bar, a_tilde)]
        blocks_b = [b_bar, b_tilde, ops.sub(b_bar, b_tilde), ops.mul(b_bar, b_tilde)]
        if self.spec.kb_attention:
            w_p, w_h = self._kb_weights(batch)
            blocks_a.append(ops.matmul(ops.const(w_p), b_bar))
            blocks_b.append(ops.matmul(ops.const(w_h), a_bar))
        m_a = ops.concat(blocks_a, axis=-1)
        m_b = ops.concat(blocks_b, axis=-1)

        proj_a = ops.relu(ops.add(ops.matmul(m_a, self.proj_w), self.proj_b))
        proj_b = ops.relu(ops.add(ops.matmul(m_b, self.proj_w), self.proj_b))
        comp_a = bilstm_encode(proj_a, mask_p, self.comp_fwd, self.comp_bwd)
        comp_b = bilstm_encode(proj_b, mask_h, self.comp_fwd, self.comp_bwd)

        v = ops.concat(
            [
                ops.mean_pool_time(comp_a, mask_p),
                ops.max_pool_time(comp_a, mask_p),
                ops.mean_pool_time(comp_b, mask_h),
                ops.max_pool_time(comp_b, mask_h),
            ],
            axis=-1,
        )
        return self._maybe_dropout(v, salt=3)


_MODEL_CLASSES = {"bow": BowModel, "infersent": InferSentModel, "esim": EsimModel}


def build_model(spec: ModelSpec, vocab: Vocabulary, embeddings=None, graph: ConceptGraph | None = None) -> NliModel:
    return _MODEL_CLASSES[spec.architecture](spec, vocab, embeddings=embeddings, graph=graph)
