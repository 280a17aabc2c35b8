"""Hot numeric kernels with two interchangeable backends.

The inner loops that dominate runtime (skip-gram training sweeps, edit
distance DP, boosting split search) exist twice: a numba ``@njit`` version
and a plain numpy/python reference version with identical semantics.

Backend selection:
  * default: numba if importable, reference otherwise
  * ``CLINLI_NO_NUMBA=1`` in the environment forces the reference path

``benchmarks/bench_kernels.py`` times the two paths against each other.
"""

import os

from . import _reference

_FORCE_REFERENCE = os.environ.get("CLINLI_NO_NUMBA", "") == "1"

if not _FORCE_REFERENCE:
    try:
        from . import _jit as _impl

        _BACKEND = "numba"
    except ImportError:
        _impl = _reference
        _BACKEND = "numpy"
else:
    _impl = _reference
    _BACKEND = "numpy"


def active_backend() -> str:
    """Name of the backend the kernels dispatch to ('numba' or 'numpy')."""
    return _BACKEND


levenshtein = _impl.levenshtein
sgns_epoch = _impl.sgns_epoch
best_split = _impl.best_split

# reference implementations stay importable for cross-checking
reference = _reference
