"""Finite-difference verification of analytic gradients."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor import Tape, Tensor


@dataclass
class ParamReport:
    name: str
    max_rel_error: float
    checked: int


@dataclass
class GradCheckReport:
    params: list
    tolerance: float

    @property
    def max_rel_error(self) -> float:
        return float(max((p.max_rel_error for p in self.params), default=0.0))

    @property
    def passed(self) -> bool:
        return bool(self.max_rel_error < self.tolerance)

    def summary(self) -> str:
        lines = [
            f"{'PASS' if p.max_rel_error < self.tolerance else 'FAIL'} "
            f"{p.name}: max rel err {p.max_rel_error:.3e} over {p.checked} components"
            for p in self.params
        ]
        lines.append(f"overall max rel err {self.max_rel_error:.3e} (tolerance {self.tolerance:g})")
        return "\n".join(lines)


def grad_check(
    closure,
    params: dict[str, Tensor],
    h: float = 1e-5,
    tolerance: float = 1e-4,
    sample: int | None = None,
    seed: int = 0,
) -> GradCheckReport:
    """Compare the taped gradient of ``closure()`` against central differences.

    ``closure`` must be deterministic and return a scalar Tensor. When
    ``sample`` is given, only that many randomly chosen components per
    parameter are perturbed; otherwise every component is checked.
    """
    for p in params.values():
        p.zero_grad()
    with Tape() as tape:
        loss = closure()
    tape.backward(loss)
    analytic = {name: (p.grad.copy() if p.grad is not None else np.zeros_like(p.data)) for name, p in params.items()}

    rng = np.random.default_rng(seed)
    reports = []
    for name, p in params.items():
        flat = p.data.reshape(-1)
        n = flat.size
        if sample is not None and sample < n:
            idx = rng.choice(n, size=sample, replace=False)
        else:
            idx = np.arange(n)
        worst = 0.0
        a_flat = analytic[name].reshape(-1)
        for i in idx:
            orig = flat[i]
            flat[i] = orig + h
            f_plus = closure().item()
            flat[i] = orig - h
            f_minus = closure().item()
            flat[i] = orig
            numeric = (f_plus - f_minus) / (2.0 * h)
            # the absolute floor keeps FD roundoff (~1e-16/h) from dominating
            # components whose true gradient is near zero
            err = abs(a_flat[i] - numeric) / max(1e-5, abs(a_flat[i]) + abs(numeric))
            worst = max(worst, float(err))
        reports.append(ParamReport(name=name, max_rel_error=worst, checked=len(idx)))
    return GradCheckReport(params=reports, tolerance=tolerance)
