"""LSTM cell and the bidirectional encoder used by every recurrent model."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ClinliError, ShapeError
from . import ops
from .tensor import Tensor, parameter


class EmptySequenceError(ClinliError):
    pass


GATE_ORDER = ("input", "forget", "candidate", "output")


@dataclass
class LSTMParams:
    """Fused gate parameters, columns ordered input/forget/candidate/output."""

    w: Tensor  # (input_dim, 4*hidden)
    u: Tensor  # (hidden, 4*hidden)
    b: Tensor  # (4*hidden,)

    @property
    def hidden(self) -> int:
        return self.u.shape[0]

    def tensors(self) -> dict[str, Tensor]:
        return {self.w.name: self.w, self.u.name: self.u, self.b.name: self.b}


def init_lstm(input_dim: int, hidden: int, rng: np.random.Generator, prefix: str) -> LSTMParams:
    """Uniform init in [-1/sqrt(hidden), +1/sqrt(hidden)]; forget-gate bias 1.0."""
    bound = 1.0 / np.sqrt(hidden)
    w = rng.uniform(-bound, bound, size=(input_dim, 4 * hidden))
    u = rng.uniform(-bound, bound, size=(hidden, 4 * hidden))
    b = np.zeros(4 * hidden)
    b[hidden : 2 * hidden] = 1.0
    return LSTMParams(
        w=parameter(w, f"{prefix}.w"),
        u=parameter(u, f"{prefix}.u"),
        b=parameter(b, f"{prefix}.b"),
    )


def lstm_cell_step(x: Tensor, h_prev: Tensor, c_prev: Tensor, params: LSTMParams):
    """One cell step: gates from sigmoid, candidate from tanh.

    c = f * c_prev + i * g and h = o * tanh(c).
    """
    hidden = params.hidden
    if x.shape[-1] != params.w.shape[0] or h_prev.shape[-1] != hidden or c_prev.shape[-1] != hidden:
        raise ShapeError("lstm_cell_step", x.shape, h_prev.shape, c_prev.shape, params.w.shape)
    z = ops.add(ops.add(ops.matmul(x, params.w), ops.matmul(h_prev, params.u)), params.b)
    zi, zf, zg, zo = ops.split_cols(z, 4)
    i = ops.sigmoid(zi)
    f = ops.sigmoid(zf)
    g = ops.tanh(zg)
    o = ops.sigmoid(zo)
    c = ops.add(ops.mul(f, c_prev), ops.mul(i, g))
    h = ops.mul(o, ops.tanh(c))
    return h, c


def _directional_pass(x: Tensor, mask: np.ndarray, params: LSTMParams, reverse: bool):
    batch, steps, _ = x.shape
    hidden = params.hidden
    h = ops.const(np.zeros((batch, hidden)))
    c = ops.const(np.zeros((batch, hidden)))
    outputs: list[Tensor | None] = [None] * steps
    order = range(steps - 1, -1, -1) if reverse else range(steps)
    for t in order:
        x_t = ops.time_slice(x, t)
        h_new, c_new = lstm_cell_step(x_t, h, c, params)
        m = ops.const(mask[:, t : t + 1].astype(np.float64))
        inv = ops.const(1.0 - mask[:, t : t + 1].astype(np.float64))
        # state carries through padding; the emitted state at a pad is zero
        h = ops.add(ops.mul(m, h_new), ops.mul(inv, h))
        c = ops.add(ops.mul(m, c_new), ops.mul(inv, c))
        outputs[t] = ops.mul(m, h_new)
    return outputs


def bilstm_encode(x: Tensor, mask: np.ndarray, fwd: LSTMParams, bwd: LSTMParams) -> Tensor:
    """Encode (batch, time, dim) into (batch, time, 2*hidden).

    Timestep t concatenates the forward state at t with the backward state
    at t; padded timesteps come out all-zero and never perturb the states
    at valid positions, so trailing padding cannot change the encoding.
    """
    if x.ndim != 3:
        raise ShapeError("bilstm_encode", x.shape, detail="expected (batch, time, dim)")
    if x.shape[1] < 1:
        raise EmptySequenceError("bilstm_encode: zero-length sequence")
    mask = np.asarray(mask)
    if mask.shape != x.shape[:2]:
        raise ShapeError("bilstm_encode", x.shape, mask.shape)
    fwd_out = _directional_pass(x, mask, fwd, reverse=False)
    bwd_out = _directional_pass(x, mask, bwd, reverse=True)
    per_step = [ops.concat([f, b], axis=-1) for f, b in zip(fwd_out, bwd_out)]
    return ops.stack_time(per_step)
