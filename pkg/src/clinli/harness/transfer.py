"""Direct, sequential, and multi-target transfer between domains.

Multi-target keeps one shared trunk with per-domain classifier heads:
phase 1 trains trunk + source head on the source domain (the target head
is untouched, bit for bit); phase 2 trains trunk + target head on the
target domain (the source head is untouched); target predictions use
trunk + target head only.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..data.types import DatasetSplit, Vocabulary
from ..errors import ConfigError
from ..models.neural import NliModel
from .training import EvalReport, RunResult, TrainConfig, evaluate, train

TRANSFER_MODES = ("direct", "sequential", "multi-target")


@dataclass
class TransferPlan:
    shared: list
    source_head: list
    target_head: list

    def validate(self, model: NliModel) -> None:
        claimed = set(self.shared) | set(self.source_head) | set(self.target_head)
        actual = set(model.params)
        if claimed != actual:
            missing = sorted(actual - claimed)
            extra = sorted(claimed - actual)
            raise ConfigError(f"plan does not partition parameters (missing={missing}, extra={extra})")
        if len(self.shared) + len(self.source_head) + len(self.target_head) != len(claimed):
            raise ConfigError("plan groups overlap")


def default_transfer_plan(model: NliModel) -> TransferPlan:
    """Shared trunk (embeddings, encoders, attention, projection) with MLP heads per domain.

    The model's default head doubles as the source head so the plan
    partitions every parameter exactly once.
    """
    model.add_head("target")
    return TransferPlan(
        shared=model.shared_param_names(),
        source_head=model.head_param_names("head"),
        target_head=model.head_param_names("target"),
    )


@dataclass
class TransferResult:
    mode: str
    source_result: RunResult | None
    target_result: RunResult | None
    target_test: EvalReport


def transfer_run(
    mode: str,
    model: NliModel,
    source: list[DatasetSplit],
    target: list[DatasetSplit],
    vocab: Vocabulary,
    config: TrainConfig | None = None,
    plan: TransferPlan | None = None,
    carry_optimizer: bool = False,
) -> TransferResult:
    """Run one transfer regime; ``source`` and ``target`` are (train, dev, test) triples.

    The vocabulary must cover both domains (the union vocabulary is built
    by the caller). ``carry_optimizer`` is accepted for sequential runs
    but the default resets Adam state at the fine-tuning boundary.
    """
    if mode not in TRANSFER_MODES:
        raise ConfigError(f"mode must be one of {TRANSFER_MODES}, got {mode!r}")
    config = config or TrainConfig()
    src_train, src_dev, _ = source
    tgt_train, tgt_dev, tgt_test = target

    if mode == "direct":
        source_result = train(model, src_train, src_dev, vocab, config)
        return TransferResult(
            mode=mode,
            source_result=source_result,
            target_result=None,
            target_test=evaluate(model, tgt_test, vocab, batch_size=config.batch_size),
        )

    if mode == "sequential":
        source_result = train(model, src_train, src_dev, vocab, config)
        # fine-tune every parameter on the target domain; fresh Adam state
        target_result = train(model, tgt_train, tgt_dev, vocab, config)
        return TransferResult(
            mode=mode,
            source_result=source_result,
            target_result=target_result,
            target_test=evaluate(model, tgt_test, vocab, batch_size=config.batch_size),
        )

    # multi-target
    if plan is None:
        raise ConfigError("multi-target transfer requires a TransferPlan")
    plan.validate(model)
    source_head = next(h for h, names in model.heads.items() if set(names) == set(plan.source_head))
    target_head = next(h for h, names in model.heads.items() if set(names) == set(plan.target_head))
    shared = {n: model.params[n] for n in plan.shared}
    source_params = {**shared, **{n: model.params[n] for n in plan.source_head}}
    target_params = {**shared, **{n: model.params[n] for n in plan.target_head}}
    source_result = train(model, src_train, src_dev, vocab, config, head=source_head, params=source_params)
    target_result = train(model, tgt_train, tgt_dev, vocab, config, head=target_head, params=target_params)
    return TransferResult(
        mode=mode,
        source_result=source_result,
        target_result=target_result,
        target_test=evaluate(model, tgt_test, vocab, batch_size=config.batch_size, head=target_head),
    )
