"""The differentiable primitive catalog.

All primitives take and return :class:`Tensor`; masks and index arrays are
plain numpy arrays (never differentiated). Outputs are finite whenever
inputs are finite: softmax and the cross-entropy loss subtract the row max
before exponentiating, and the sigmoid is evaluated piecewise.
"""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError
from .tensor import Tensor, active_tape


def _make(data, inputs, backward_fn) -> Tensor:
    out = Tensor(data, requires_grad=any(t.requires_grad for t in inputs))
    tape = active_tape()
    if out.requires_grad and tape is not None:
        tape.record(out, backward_fn)
    return out


def _unbroadcast(grad: np.ndarray, shape: tuple) -> np.ndarray:
    """Sum ``grad`` down to ``shape``, inverting numpy broadcasting."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, dim in enumerate(shape):
        if dim == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def const(data) -> Tensor:
    return Tensor(data, requires_grad=False)


# ---------------------------------------------------------------------------
# elementwise arithmetic


def add(a: Tensor, b: Tensor) -> Tensor:
    try:
        data = a.data + b.data
    except ValueError:
        raise ShapeError("add", a.shape, b.shape) from None

    def backward(g):
        if a.requires_grad:
            a.accumulate_grad(_unbroadcast(g, a.shape))
        if b.requires_grad:
            b.accumulate_grad(_unbroadcast(g, b.shape))

    return _make(data, (a, b), backward)


def sub(a: Tensor, b: Tensor) -> Tensor:
    try:
        data = a.data - b.data
    except ValueError:
        raise ShapeError("sub", a.shape, b.shape) from None

    def backward(g):
        if a.requires_grad:
            a.accumulate_grad(_unbroadcast(g, a.shape))
        if b.requires_grad:
            b.accumulate_grad(_unbroadcast(-g, b.shape))

    return _make(data, (a, b), backward)


def mul(a: Tensor, b: Tensor) -> Tensor:
    try:
        data = a.data * b.data
    except ValueError:
        raise ShapeError("mul", a.shape, b.shape) from None
    a_data, b_data = a.data, b.data

    def backward(g):
        if a.requires_grad:
            a.accumulate_grad(_unbroadcast(g * b_data, a.shape))
        if b.requires_grad:
            b.accumulate_grad(_unbroadcast(g * a_data, b.shape))

    return _make(data, (a, b), backward)


def absolute(a: Tensor) -> Tensor:
    data = np.abs(a.data)
    sign = np.sign(a.data)

    def backward(g):
        if a.requires_grad:
            a.accumulate_grad(g * sign)

    return _make(data, (a,), backward)


# ---------------------------------------------------------------------------
# activations


def relu(a: Tensor) -> Tensor:
    data = np.maximum(a.data, 0.0)
    gate = (a.data > 0.0).astype(np.float64)

    def backward(g):
        if a.requires_grad:
            a.accumulate_grad(g * gate)

    return _make(data, (a,), backward)


def tanh(a: Tensor) -> Tensor:
    data = np.tanh(a.data)

    def backward(g):
        if a.requires_grad:
            a.accumulate_grad(g * (1.0 - data * data))

    return _make(data, (a,), backward)


def _sigmoid_stable(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    e = np.exp(x[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def sigmoid(a: Tensor) -> Tensor:
    data = _sigmoid_stable(a.data)

    def backward(g):
        if a.requires_grad:
            a.accumulate_grad(g * data * (1.0 - data))

    return _make(data, (a,), backward)


# ---------------------------------------------------------------------------
# matrix product and layout


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.ndim < 2 or b.ndim < 2 or a.shape[-1] != b.shape[-2]:
        raise ShapeError("matmul", a.shape, b.shape)
    try:
        data = np.matmul(a.data, b.data)
    except ValueError:
        raise ShapeError("matmul", a.shape, b.shape) from None
    a_data, b_data = a.data, b.data

    def backward(g):
        if a.requires_grad:
            ga = np.matmul(g, np.swapaxes(b_data, -1, -2))
            a.accumulate_grad(_unbroadcast(ga, a.shape))
        if b.requires_grad:
            gb = np.matmul(np.swapaxes(a_data, -1, -2), g)
            b.accumulate_grad(_unbroadcast(gb, b.shape))

    return _make(data, (a, b), backward)


def transpose_last2(a: Tensor) -> Tensor:
    if a.ndim < 2:
        raise ShapeError("transpose_last2", a.shape)
    data = np.swapaxes(a.data, -1, -2)

    def backward(g):
        if a.requires_grad:
            a.accumulate_grad(np.swapaxes(g, -1, -2))

    return _make(data, (a,), backward)


def reshape(a: Tensor, shape) -> Tensor:
    old = a.shape
    data = a.data.reshape(shape)

    def backward(g):
        if a.requires_grad:
            a.accumulate_grad(g.reshape(old))

    return _make(data, (a,), backward)


def concat(tensors, axis: int) -> Tensor:
    tensors = list(tensors)
    try:
        data = np.concatenate([t.data for t in tensors], axis=axis)
    except ValueError:
        raise ShapeError("concat", *[t.shape for t in tensors]) from None
    sizes = [t.shape[axis] for t in tensors]
    splits = np.cumsum(sizes)[:-1]

    def backward(g):
        pieces = np.split(g, splits, axis=axis)
        for t, piece in zip(tensors, pieces):
            if t.requires_grad:
                t.accumulate_grad(piece)

    return _make(data, tuple(tensors), backward)


def split_cols(a: Tensor, k: int):
    """Split the last axis into ``k`` equal tensors."""
    if a.shape[-1] % k != 0:
        raise ShapeError("split_cols", a.shape, detail=f"last axis not divisible by {k}")
    width = a.shape[-1] // k
    outs = []
    for idx in range(k):
        lo, hi = idx * width, (idx + 1) * width
        piece = a.data[..., lo:hi]

        def backward(g, lo=lo, hi=hi):
            if a.requires_grad:
                full = np.zeros_like(a.data)
                full[..., lo:hi] = g
                a.accumulate_grad(full)

        outs.append(_make(piece, (a,), backward))
    return outs


def time_slice(a: Tensor, t: int) -> Tensor:
    """Select timestep ``t`` from a (batch, time, dim) tensor."""
    if a.ndim != 3:
        raise ShapeError("time_slice", a.shape, detail="expected (batch, time, dim)")
    data = a.data[:, t, :]

    def backward(g):
        if a.requires_grad:
            full = np.zeros_like(a.data)
            full[:, t, :] = g
            a.accumulate_grad(full)

    return _make(data, (a,), backward)


def stack_time(tensors) -> Tensor:
    """Stack (batch, dim) tensors into (batch, time, dim)."""
    tensors = list(tensors)
    data = np.stack([t.data for t in tensors], axis=1)

    def backward(g):
        for idx, t in enumerate(tensors):
            if t.requires_grad:
                t.accumulate_grad(g[:, idx, :])

    return _make(data, tuple(tensors), backward)


# ---------------------------------------------------------------------------
# softmax, pooling, lookup, loss


def softmax(a: Tensor, mask: np.ndarray | None = None) -> Tensor:
    """Row softmax along the last axis.

    ``mask`` is boolean, broadcastable to ``a``; masked positions receive
    exactly zero probability and rows with no valid position come out
    all-zero.
    """
    x = a.data
    if mask is None:
        valid = np.ones_like(x, dtype=bool)
    else:
        try:
            valid = np.broadcast_to(np.asarray(mask, dtype=bool), x.shape)
        except ValueError:
            raise ShapeError("softmax", a.shape, np.asarray(mask).shape) from None
    shifted = np.where(valid, x, -np.inf)
    row_max = shifted.max(axis=-1, keepdims=True)
    any_valid = valid.any(axis=-1, keepdims=True)
    row_max = np.where(any_valid, row_max, 0.0)
    e = np.exp(shifted - row_max)
    e = np.where(valid, e, 0.0)
    denom = e.sum(axis=-1, keepdims=True)
    data = np.divide(e, denom, out=np.zeros_like(e), where=denom > 0)

    def backward(g):
        if a.requires_grad:
            inner = (g * data).sum(axis=-1, keepdims=True)
            a.accumulate_grad(data * (g - inner))

    return _make(data, (a,), backward)


def _check_time_mask(name, x: Tensor, mask: np.ndarray) -> np.ndarray:
    mask = np.asarray(mask)
    if x.ndim != 3 or mask.shape != x.shape[:2]:
        raise ShapeError(name, x.shape, mask.shape, detail="expected (B,T,H) with (B,T) mask")
    mask = mask.astype(bool)
    if not mask.any(axis=1).all():
        raise ShapeError(name, x.shape, mask.shape, detail="a sequence has no valid timestep")
    return mask


def max_pool_time(a: Tensor, mask: np.ndarray) -> Tensor:
    """Masked max over the time axis of (batch, time, dim)."""
    mask = _check_time_mask("max_pool_time", a, mask)
    neg = np.where(mask[:, :, None], a.data, -np.inf)
    arg = neg.argmax(axis=1)  # (B, H); first max wins, deterministic
    data = np.take_along_axis(a.data, arg[:, None, :], axis=1)[:, 0, :]

    def backward(g):
        if a.requires_grad:
            full = np.zeros_like(a.data)
            np.put_along_axis(full, arg[:, None, :], g[:, None, :], axis=1)
            a.accumulate_grad(full)

    return _make(data, (a,), backward)


def mean_pool_time(a: Tensor, mask: np.ndarray) -> Tensor:
    """Masked mean over the time axis of (batch, time, dim)."""
    mask = _check_time_mask("mean_pool_time", a, mask)
    m = mask.astype(np.float64)
    count = m.sum(axis=1, keepdims=True)  # (B, 1)
    data = (a.data * m[:, :, None]).sum(axis=1) / count

    def backward(g):
        if a.requires_grad:
            a.accumulate_grad(g[:, None, :] * (m / count)[:, :, None])

    return _make(data, (a,), backward)


def sum_pool_time(a: Tensor, mask: np.ndarray) -> Tensor:
    """Masked sum over the time axis of (batch, time, dim)."""
    mask = _check_time_mask("sum_pool_time", a, mask)
    m = mask.astype(np.float64)
    data = (a.data * m[:, :, None]).sum(axis=1)

    def backward(g):
        if a.requires_grad:
            a.accumulate_grad(g[:, None, :] * m[:, :, None])

    return _make(data, (a,), backward)


def embedding(weights: Tensor, ids: np.ndarray) -> Tensor:
    """Row lookup: (vocab, dim) weights gathered by an integer id array."""
    ids = np.asarray(ids)
    if weights.ndim != 2:
        raise ShapeError("embedding", weights.shape, detail="weights must be 2-D")
    if ids.size and (ids.min() < 0 or ids.max() >= weights.shape[0]):
        raise ShapeError("embedding", weights.shape, ids.shape, detail="id out of range")
    data = weights.data[ids]

    def backward(g):
        if weights.requires_grad:
            full = np.zeros_like(weights.data)
            np.add.at(full, ids.ravel(), g.reshape(-1, weights.shape[1]))
            weights.accumulate_grad(full)

    return _make(data, (weights,), backward)


def cross_entropy(logits: Tensor, labels: np.ndarray) -> Tensor:
    """Mean softmax cross-entropy; ``labels`` are integer class indices."""
    labels = np.asarray(labels)
    if logits.ndim != 2 or labels.shape != (logits.shape[0],):
        raise ShapeError("cross_entropy", logits.shape, labels.shape)
    z = logits.data
    zmax = z.max(axis=1, keepdims=True)
    shifted = z - zmax
    lse = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    logp = shifted - lse
    n = z.shape[0]
    data = -logp[np.arange(n), labels].mean()
    probs = np.exp(logp)

    def backward(g):
        if logits.requires_grad:
            grad = probs.copy()
            grad[np.arange(n), labels] -= 1.0
            logits.accumulate_grad(grad * (float(g) / n))

    return _make(data, (logits,), backward)


def dropout(a: Tensor, p: float, seed: int) -> Tensor:
    """Inverted dropout with a deterministic seeded mask. ``p=0`` is identity."""
    if not 0.0 <= p < 1.0:
        raise ShapeError("dropout", a.shape, detail=f"rate {p} outside [0, 1)")
    if p == 0.0:
        return a
    rng = np.random.default_rng(seed)
    keep = (rng.random(a.shape) >= p).astype(np.float64) / (1.0 - p)
    data = a.data * keep

    def backward(g):
        if a.requires_grad:
            a.accumulate_grad(g * keep)

    return _make(data, (a,), backward)
