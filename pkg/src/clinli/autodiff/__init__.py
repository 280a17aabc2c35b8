"""Reverse-mode automatic differentiation engine (float64, CPU)."""

from . import ops
from .checkpoint import CheckpointError, load_params, save_params
from .gradcheck import GradCheckReport, grad_check
from .optim import AdamState, NonFiniteGradientError, adam_step
from .rnn import EmptySequenceError, LSTMParams, bilstm_encode, init_lstm, lstm_cell_step
from .tensor import Tape, TapeError, Tensor, active_tape, parameter

__all__ = [
    "ops",
    "Tensor",
    "Tape",
    "TapeError",
    "active_tape",
    "parameter",
    "LSTMParams",
    "init_lstm",
    "lstm_cell_step",
    "bilstm_encode",
    "EmptySequenceError",
    "AdamState",
    "adam_step",
    "NonFiniteGradientError",
    "grad_check",
    "GradCheckReport",
    "save_params",
    "load_params",
    "CheckpointError",
]
