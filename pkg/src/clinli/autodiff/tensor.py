"""Dense float64 tensors and the operation tape for reverse-mode gradients.

Every differentiable primitive records a backward closure on the active
``Tape``. Records are appended in execution order (hence topologically
sorted), and ``Tape.backward`` replays them in exact reverse order,
accumulating gradients additively into ``Tensor.grad``. Two backward
passes over identical inputs produce bit-identical gradients: traversal
order is the list order and every accumulation is a plain ``+=``.
"""

from __future__ import annotations

import numpy as np

from ..errors import ClinliError


class TapeError(ClinliError):
    """Backward called on a tensor the tape never produced, or a non-scalar."""


class Tensor:
    """A dense multi-dimensional value, optionally tracking gradients.

    ``grad`` stays ``None`` until the first accumulation; it always has the
    same shape as ``data``.
    """

    __slots__ = ("data", "requires_grad", "grad", "name")

    def __init__(self, data, requires_grad: bool = False, name: str | None = None):
        self.data = np.asarray(data, dtype=np.float64)
        self.requires_grad = bool(requires_grad)
        self.grad: np.ndarray | None = None
        self.name = name

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    @property
    def size(self):
        return self.data.size

    def item(self) -> float:
        if self.data.size != 1:
            raise TapeError(f"item() on tensor of shape {self.data.shape}")
        return float(self.data.reshape(()))

    def accumulate_grad(self, g: np.ndarray) -> None:
        if self.grad is None:
            self.grad = np.zeros_like(self.data)
        self.grad += g

    def zero_grad(self) -> None:
        self.grad = None

    def __repr__(self):
        tag = f" name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.data.shape}, requires_grad={self.requires_grad}{tag})"


class Tape:
    """Ordered record of executed operations.

    Use as a context manager around a forward pass; primitives register
    themselves when any input requires gradients.
    """

    def __init__(self):
        self._records: list[tuple[Tensor, callable]] = []
        self._produced: set[int] = set()

    def __enter__(self) -> "Tape":
        _TAPE_STACK.append(self)
        return self

    def __exit__(self, exc_type, exc, tb):
        popped = _TAPE_STACK.pop()
        assert popped is self
        return False

    def __len__(self):
        return len(self._records)

    def record(self, output: Tensor, backward_fn) -> None:
        self._records.append((output, backward_fn))
        self._produced.add(id(output))

    def backward(self, loss: Tensor) -> None:
        """Populate ``grad`` on every tensor that the scalar ``loss`` depends on."""
        if loss.data.size != 1:
            raise TapeError(f"backward requires a scalar loss, got shape {loss.data.shape}")
        if id(loss) not in self._produced:
            raise TapeError("loss tensor was not produced on this tape")
        loss.accumulate_grad(np.ones_like(loss.data))
        for output, backward_fn in reversed(self._records):
            if output.grad is not None:
                backward_fn(output.grad)


_TAPE_STACK: list[Tape] = []


def active_tape() -> Tape | None:
    return _TAPE_STACK[-1] if _TAPE_STACK else None


def parameter(data, name: str) -> Tensor:
    """A named trainable tensor."""
    return Tensor(data, requires_grad=True, name=name)
