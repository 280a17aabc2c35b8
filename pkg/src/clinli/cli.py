"""Command-line entry point.

Every subcommand is driven by a JSON config file plus ``--set key=value``
overrides, writes its artifacts (and a resolved-config.json snapshot)
into ``--out``, and logs to stderr only. Exit codes: 0 success, 1 runtime
failure, 2 config/validation error.

``clinli describe <subcommand>`` prints the config schema (keys, types,
defaults, help) straight from the registry, so help text cannot drift
from validation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import LABELS
from .data import (
    SynthSpec,
    batchify,
    dataset_stats,
    generate_synthetic_dataset,
    ingest_annotations,
    prepare_annotation_batch,
    read_split,
    segment_note_sections,
    split_by_premise,
    split_sentences,
    write_split,
)
from .data.types import DatasetSplit, build_vocab
from .embeddings import (
    RetrofitConfig,
    SkipgramConfig,
    fine_tune_chain,
    load_adjacency,
    load_vectors,
    retrofit,
    save_vectors,
    train_subword_skipgram,
)
from .errors import ClinliError, ConfigError, DataFormatError
from .harness import (
    TrainConfig,
    default_transfer_plan,
    ensemble_proba_matrix,
    evaluate,
    gain_table,
    hypothesis_only_probe,
    multi_seed_report,
    train,
    transfer_run,
    write_gain_csv,
)
from .models import ModelSpec, build_model
from .models.persistence import load_model, save_model
from .ontology import lexical_adjacency, load_graph, path_histogram, shortest_path_len
from .autodiff import grad_check, ops
from .data.tokenizer import tokenize

REQUIRED = object()


@dataclass
class Field:
    kind: str  # int | float | bool | str | list | number-or-str
    default: object = REQUIRED
    help: str = ""


_MODEL_FIELDS = {
    "architecture": Field("str", "infersent", "bow, infersent, or esim"),
    "kb_attention": Field("bool", False, "use ontology-path attention (needs graph)"),
    "graph": Field("str", None, "concept graph JSONL for kb_attention / features"),
    "embeddings": Field("str", None, "pretrained vectors (text format) for initialization"),
    "embedding_dim": Field("int", 50, "token embedding width"),
    "hidden": Field("int", 64, "LSTM hidden size"),
    "mlp_hidden": Field("list", [128], "classifier hidden layer sizes"),
    "kb_decay": Field("float", 1.0, "path-length decay for ontology attention"),
    "dropout": Field("float", 0.0, "dropout rate (deterministic seeded masks)"),
    "min_count": Field("int", 1, "vocabulary frequency threshold (train split only)"),
}

_TRAIN_FIELDS = {
    "batch_size": Field("int", 16, "pairs per batch"),
    "max_epochs": Field("int", 50, "epoch cap"),
    "patience": Field("int", 5, "early stop after this many non-improving epochs"),
    "lr": Field("float", 1e-3, "Adam learning rate"),
    "seeds": Field("list", [0, 1, 2, 3, 4, 5], "one training run per seed"),
}

_EMBED_TRAIN_FIELDS = {
    "dim": Field("int", 50, "vector width"),
    "window": Field("int", 5, "max context window (sampled per position)"),
    "negatives": Field("int", 5, "negative samples per context"),
    "epochs": Field("int", 5, "training sweeps"),
    "lr": Field("float", 0.05, "starting learning rate (linear decay)"),
    "min_count": Field("int", 1, "drop rarer tokens"),
    "ngram_min": Field("int", 3, "shortest character n-gram"),
    "ngram_max": Field("int", 6, "longest character n-gram"),
    "buckets": Field("int", 2**17, "hashed n-gram bucket count"),
    "seed": Field("int", 0, "rng seed"),
}

SCHEMAS: dict[str, dict[str, Field]] = {
    "data-segment": {
        "notes": Field("str", REQUIRED, "JSONL of {note_id, text}"),
    },
    "data-split-sentences": {
        "sections": Field("str", REQUIRED, "JSONL of {note_id, header, body} from data-segment"),
        "section_filter": Field("str", "past_medical_history", "keep only this canonical section (empty = all)"),
    },
    "data-sample-prompts": {
        "sentences": Field("str", REQUIRED, "candidate premises, one per line"),
        "n": Field("int", REQUIRED, "how many premises to sample (without replacement)"),
        "seed": Field("int", 0, "sampling seed"),
    },
    "data-ingest": {
        "annotations": Field("str", REQUIRED, "completed annotation records (JSONL)"),
    },
    "data-stats": {
        "train": Field("str", REQUIRED, "train pairs JSONL"),
        "dev": Field("str", None, "dev pairs JSONL"),
        "test": Field("str", None, "test pairs JSONL"),
        "buckets": Field("list", [0, 5, 10, 15, 20, 30, 50, 100], "histogram bucket lower edges"),
    },
    "data-synth": {
        "train_size": Field("int", 96, "train pairs (multiple of 3)"),
        "dev_size": Field("int", 24, "dev pairs (multiple of 3)"),
        "test_size": Field("int", 24, "test pairs (multiple of 3)"),
        "n_items": Field("int", 12, "size of the synthetic condition vocabulary"),
        "template_set": Field("str", "a", "domain template set: a or b"),
        "item_prefix": Field("str", "", "token prefix for condition names"),
        "planted_artifact": Field("bool", False, "leak labels into hypotheses (negation marks contradiction)"),
        "seed": Field("int", 0, "generation seed"),
    },
    "data-split": {
        "pairs": Field("str", REQUIRED, "pairs JSONL to split premise-disjointly"),
        "train_ratio": Field("float", 0.8, "share of premise groups for train"),
        "dev_ratio": Field("float", 0.1, "share for dev"),
        "test_ratio": Field("float", 0.1, "share for test"),
        "seed": Field("int", 0, "assignment seed"),
    },
    "embed-train": {
        "corpus": Field("str", REQUIRED, "training text, one sentence per line"),
        **_EMBED_TRAIN_FIELDS,
    },
    "embed-finetune": {
        "init_vectors": Field("str", REQUIRED, "starting vectors (text format)"),
        "corpora": Field("list", REQUIRED, "corpus files to fine-tune on, in order"),
        **_EMBED_TRAIN_FIELDS,
    },
    "embed-retrofit": {
        "vectors": Field("str", REQUIRED, "vectors to retrofit (text format)"),
        "adjacency": Field("str", None, "token adjacency JSONL ({token, neighbors})"),
        "graph_file": Field("str", None, "concept graph JSONL; derives token adjacency when no adjacency file"),
        "alpha": Field("float", 1.0, "anchor weight toward the original vectors"),
        "beta": Field("number-or-str", "inverse-degree", "edge weight: number or 'inverse-degree'"),
        "iterations": Field("int", 10, "full sweeps"),
    },
    "kb-match": {
        "graph": Field("str", REQUIRED, "concept graph JSONL"),
        "dataset": Field("str", REQUIRED, "pairs JSONL to tag"),
    },
    "kb-paths": {
        "graph": Field("str", REQUIRED, "concept graph JSONL"),
        "concept_pairs": Field("list", REQUIRED, "list of [concept_id, concept_id]"),
    },
    "kb-histogram": {
        "graph": Field("str", REQUIRED, "concept graph JSONL"),
        "dataset": Field("str", REQUIRED, "pairs JSONL"),
        "cap": Field("int", 8, "clamp path lengths here"),
    },
    "train": {
        "train": Field("str", REQUIRED, "train pairs JSONL"),
        "dev": Field("str", REQUIRED, "dev pairs JSONL"),
        "test": Field("str", None, "test pairs JSONL"),
        **_MODEL_FIELDS,
        **_TRAIN_FIELDS,
    },
    "transfer": {
        "mode": Field("str", REQUIRED, "direct, sequential, or multi-target"),
        "source_train": Field("str", REQUIRED, "source-domain train JSONL"),
        "source_dev": Field("str", REQUIRED, "source-domain dev JSONL"),
        "target_train": Field("str", REQUIRED, "target-domain train JSONL"),
        "target_dev": Field("str", REQUIRED, "target-domain dev JSONL"),
        "target_test": Field("str", REQUIRED, "target-domain test JSONL"),
        **_MODEL_FIELDS,
        **_TRAIN_FIELDS,
    },
    "eval": {
        "checkpoint": Field("str", REQUIRED, "model checkpoint directory"),
        "dataset": Field("str", REQUIRED, "pairs JSONL to score"),
        "head": Field("str", "head", "classifier head to use"),
        "graph": Field("str", None, "concept graph (required for kb models)"),
    },
    "ensemble": {
        "predictions": Field("list", REQUIRED, "prediction JSONL files to combine"),
        "dataset": Field("str", None, "pairs JSONL with gold labels for metrics"),
    },
    "probe-hypothesis-only": {
        "train": Field("str", REQUIRED, "train pairs JSONL"),
        "dev": Field("str", REQUIRED, "dev pairs JSONL"),
        "test": Field("str", REQUIRED, "test pairs JSONL"),
        "architecture": Field("str", "bow", "probe classifier architecture"),
        "embedding_dim": Field("int", 50, "token embedding width"),
        "hidden": Field("int", 64, "LSTM hidden size"),
        "mlp_hidden": Field("list", [128], "classifier hidden layer sizes"),
        "batch_size": Field("int", 16, "pairs per batch"),
        "max_epochs": Field("int", 50, "epoch cap"),
        "patience": Field("int", 5, "early stopping patience"),
        "lr": Field("float", 1e-3, "Adam learning rate"),
        "seed": Field("int", 0, "run seed"),
    },
    "report-gains": {
        "baseline": Field("str", REQUIRED, "aggregate.json of the baseline run"),
        "runs": Field("list", REQUIRED, "list of {source_domain, transfer_mode, model, aggregate}"),
    },
    "grad-check": {
        "architecture": Field("str", "esim", "architecture to verify"),
        "kb_attention": Field("bool", False, "include ontology attention"),
        "embedding_dim": Field("int", 6, "tiny embedding width"),
        "hidden": Field("int", 4, "tiny hidden size"),
        "sample": Field("int", 8, "components checked per parameter"),
        "tolerance": Field("float", 1e-4, "max relative error allowed"),
        "step": Field("float", 1e-6, "finite-difference perturbation"),
        "seed": Field("int", 0, "instance seed"),
    },
}


# ---------------------------------------------------------------------------
# config plumbing


def _coerce(key: str, field: Field, value):
    kind = field.kind
    if value is None and field.default is None:
        return None
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"config key {key!r} expects an integer, got {value!r}")
        return value
    if kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"config key {key!r} expects a number, got {value!r}")
        return float(value)
    if kind == "bool":
        if not isinstance(value, bool):
            raise ConfigError(f"config key {key!r} expects true/false, got {value!r}")
        return value
    if kind == "str":
        if not isinstance(value, str):
            raise ConfigError(f"config key {key!r} expects a string, got {value!r}")
        return value
    if kind == "list":
        if not isinstance(value, list):
            raise ConfigError(f"config key {key!r} expects a list, got {value!r}")
        return value
    if kind == "number-or-str":
        if isinstance(value, bool) or not isinstance(value, (int, float, str)):
            raise ConfigError(f"config key {key!r} expects a number or string, got {value!r}")
        return value
    raise ConfigError(f"unknown field kind {kind!r} for {key!r}")


def resolve_config(subcommand: str, raw: dict) -> dict:
    schema = SCHEMAS[subcommand]
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(f"unknown config key {unknown[0]!r} for {subcommand} (valid: {', '.join(sorted(schema))})")
    resolved = {}
    for key, field in schema.items():
        if key in raw:
            resolved[key] = _coerce(key, field, raw[key])
        elif field.default is REQUIRED:
            raise ConfigError(f"missing required config key {key!r} for {subcommand}")
        else:
            resolved[key] = field.default
    return resolved


def _apply_override(config: dict, assignment: str) -> None:
    if "=" not in assignment:
        raise ConfigError(f"override {assignment!r} is not key=value")
    key, _, raw_value = assignment.partition("=")
    try:
        value = json.loads(raw_value)
    except json.JSONDecodeError:
        value = raw_value
    node = config
    parts = key.split(".")
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(f"override {key!r} descends into a non-object")
    node[parts[-1]] = value


ARTIFACTS = {
    "data-segment": ["sections.jsonl"],
    "data-split-sentences": ["sentences.txt"],
    "data-sample-prompts": ["prompts.txt"],
    "data-ingest": ["pairs.jsonl", "discards.jsonl"],
    "data-stats": ["stats.json"],
    "data-synth": ["train.jsonl", "dev.jsonl", "test.jsonl"],
    "data-split": ["train.jsonl", "dev.jsonl", "test.jsonl"],
    "embed-train": ["vectors.txt", "training.json"],
    "embed-finetune": ["vectors.txt", "training.json"],
    "embed-retrofit": ["vectors.txt", "objective.json"],
    "kb-match": ["matches.jsonl"],
    "kb-paths": ["paths.json"],
    "kb-histogram": ["histogram.json"],
    "train": ["<seed>/metrics.json", "<seed>/best.ckpt", "<seed>/predictions.jsonl", "aggregate.json"],
    "transfer": ["<seed>/metrics.json", "<seed>/best.ckpt", "aggregate.json"],
    "eval": ["metrics.json", "predictions.jsonl"],
    "ensemble": ["predictions.jsonl", "metrics.json"],
    "probe-hypothesis-only": ["metrics.json"],
    "report-gains": ["gains.csv", "gains.json"],
    "grad-check": ["gradcheck.json"],
}


def describe(subcommand: str) -> str:
    if subcommand not in SCHEMAS:
        raise ConfigError(f"unknown subcommand {subcommand!r}; valid: {', '.join(sorted(SCHEMAS))}")
    lines = [
        f"clinli {subcommand}",
        "flags: --config FILE.json, --set KEY=VALUE (repeatable), --out DIR (required)",
        "config keys:",
    ]
    for key, field in SCHEMAS[subcommand].items():
        default = "(required)" if field.default is REQUIRED else f"default {field.default!r}"
        lines.append(f"  {key} [{field.kind}] {default} - {field.help}")
    lines.append("artifacts: " + ", ".join(ARTIFACTS[subcommand]) + " (plus resolved-config.json)")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# shared helpers


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def _write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_datasets(config, keys) -> list[DatasetSplit]:
    splits = []
    for name, key in keys:
        path = config[key]
        splits.append(read_split(path, name=name) if path else None)
    return splits


def _model_spec_from(config, seed: int) -> ModelSpec:
    return ModelSpec(
        architecture=config["architecture"],
        kb_attention=config["kb_attention"],
        embedding_dim=config["embedding_dim"],
        hidden=config["hidden"],
        mlp_hidden=tuple(config["mlp_hidden"]),
        kb_decay=config["kb_decay"],
        dropout=config["dropout"],
        seed=seed,
    )


def _train_config_from(config, seed: int) -> TrainConfig:
    return TrainConfig(
        batch_size=config["batch_size"],
        max_epochs=config["max_epochs"],
        patience=config["patience"],
        lr=config["lr"],
        seed=seed,
    )


def _load_model_inputs(config):
    graph = load_graph(config["graph"]) if config.get("graph") else None
    vectors = load_vectors(config["embeddings"]) if config.get("embeddings") else None
    if config.get("kb_attention") and graph is None:
        raise ConfigError("kb_attention=true requires the 'graph' config key")
    return graph, vectors


def _write_predictions(path: Path, pair_ids, probabilities) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for pair_id, probs in zip(pair_ids, probabilities):
            record = {
                "pairID": pair_id,
                "probabilities": [float(p) for p in probs],
                "label": LABELS[int(np.argmax(probs))],
            }
            fh.write(json.dumps(record) + "\n")


def _predict_split(model, split, vocab, head="head", batch_size=64):
    probs = []
    ids = []
    for batch in batchify(split, batch_size, vocab):
        probs.append(model.predict_proba(batch, head))
        ids.extend(batch.pair_ids)
    return ids, np.concatenate(probs, axis=0)


def _skipgram_config(config) -> SkipgramConfig:
    return SkipgramConfig(
        dim=config["dim"],
        window=config["window"],
        negatives=config["negatives"],
        epochs=config["epochs"],
        lr=config["lr"],
        min_count=config["min_count"],
        ngram_min=config["ngram_min"],
        ngram_max=config["ngram_max"],
        buckets=config["buckets"],
        seed=config["seed"],
    )


def _read_corpus(path) -> list[list[str]]:
    with open(path, encoding="utf-8") as fh:
        return [tokenize(line.strip()) for line in fh if line.strip()]


# ---------------------------------------------------------------------------
# handlers


def _cmd_data_segment(config, out: Path) -> None:
    count = 0
    with open(config["notes"], encoding="utf-8") as fh, open(out / "sections.jsonl", "w", encoding="utf-8") as dst:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"invalid JSON: {exc.msg}", line=lineno) from None
            for section in segment_note_sections(record.get("text", ""), str(record.get("note_id", lineno))):
                dst.write(
                    json.dumps({"note_id": section.note_id, "header": section.header, "body": section.body}) + "\n"
                )
                count += 1
    _log(f"wrote {count} sections")


def _cmd_data_split_sentences(config, out: Path) -> None:
    wanted = config["section_filter"]
    count = 0
    with open(config["sections"], encoding="utf-8") as fh, open(out / "sentences.txt", "w", encoding="utf-8") as dst:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"invalid JSON: {exc.msg}", line=lineno) from None
            if wanted and record.get("header") != wanted:
                continue
            for sentence in split_sentences(record.get("body", "")):
                flat = " ".join(sentence.split())
                if flat:
                    dst.write(flat + "\n")
                    count += 1
    _log(f"wrote {count} sentences")


def _cmd_data_sample_prompts(config, out: Path) -> None:
    with open(config["sentences"], encoding="utf-8") as fh:
        sentences = [line.strip() for line in fh if line.strip()]
    text = prepare_annotation_batch(sentences, config["n"], config["seed"])
    (out / "prompts.txt").write_text(text, encoding="utf-8")
    _log(f"wrote prompts for {config['n']} premises")


def _cmd_data_ingest(config, out: Path) -> None:
    with open(config["annotations"], encoding="utf-8") as fh:
        pairs, discards = ingest_annotations(fh)
    write_split(out / "pairs.jsonl", DatasetSplit("ingested", pairs))
    with open(out / "discards.jsonl", "w", encoding="utf-8") as fh:
        for entry in discards:
            fh.write(json.dumps({"premise_id": entry.premise_id, "reason": entry.reason}) + "\n")
    _log(f"ingested {len(pairs)} pairs, discarded {len(discards)} records")


def _cmd_data_stats(config, out: Path) -> None:
    splits = []
    for name in ("train", "dev", "test"):
        if config[name]:
            splits.append(read_split(config[name], name=name))
    report = dataset_stats(splits, bucket_edges=list(config["buckets"]))
    _write_json(out / "stats.json", report)
    _log(f"stats over {sum(report['splits'].values())} pairs")


def _cmd_data_synth(config, out: Path) -> None:
    spec = SynthSpec(
        sizes=(config["train_size"], config["dev_size"], config["test_size"]),
        n_items=config["n_items"],
        template_set=config["template_set"],
        item_prefix=config["item_prefix"],
        planted_artifact=config["planted_artifact"],
        seed=config["seed"],
    )
    for split in generate_synthetic_dataset(spec):
        write_split(out / f"{split.name}.jsonl", split)
    _log(f"wrote synthetic dataset {spec.sizes}")


def _cmd_data_split(config, out: Path) -> None:
    pairs = read_split(config["pairs"], name="all").pairs
    ratios = (config["train_ratio"], config["dev_ratio"], config["test_ratio"])
    for split in split_by_premise(pairs, ratios=ratios, seed=config["seed"]):
        write_split(out / f"{split.name}.jsonl", split)
    _log(f"split {len(pairs)} pairs premise-disjointly")


def _cmd_embed_train(config, out: Path) -> None:
    corpus = _read_corpus(config["corpus"])
    matrix, losses = train_subword_skipgram(corpus, _skipgram_config(config), name=Path(config["corpus"]).stem)
    save_vectors(matrix, out / "vectors.txt")
    _write_json(out / "training.json", {"epoch_losses": losses, "provenance": matrix.provenance})
    _log(f"trained {len(matrix)} vectors, dim {matrix.dim}")


def _cmd_embed_finetune(config, out: Path) -> None:
    init = load_vectors(config["init_vectors"], provenance=Path(config["init_vectors"]).stem)
    corpora = [(Path(p).stem, _read_corpus(p)) for p in config["corpora"]]
    sg = _skipgram_config(config)
    if sg.dim != init.dim:
        sg = SkipgramConfig(**{**sg.__dict__, "dim": init.dim})
    matrix, losses = fine_tune_chain(init, corpora, sg)
    save_vectors(matrix, out / "vectors.txt")
    _write_json(out / "training.json", {"stage_losses": losses, "provenance": matrix.provenance})
    _log(f"fine-tuned chain {matrix.provenance}")


def _cmd_embed_retrofit(config, out: Path) -> None:
    matrix = load_vectors(config["vectors"])
    if config["adjacency"]:
        adjacency = load_adjacency(config["adjacency"])
    elif config["graph_file"]:
        adjacency = lexical_adjacency(load_graph(config["graph_file"]))
    else:
        raise ConfigError("embed-retrofit needs 'adjacency' or 'graph_file'")
    cfg = RetrofitConfig(alpha=config["alpha"], beta=config["beta"], iterations=config["iterations"])
    result, history = retrofit(matrix, adjacency, cfg)
    save_vectors(result, out / "vectors.txt")
    _write_json(out / "objective.json", {"objective_per_sweep": history})
    _log(f"retrofit objective {history[0]:.6f} -> {history[-1]:.6f}")


def _cmd_kb_match(config, out: Path) -> None:
    graph = load_graph(config["graph"])
    split = read_split(config["dataset"], name="dataset")
    with open(out / "matches.jsonl", "w", encoding="utf-8") as fh:
        for pair in split.pairs:
            record = {
                "pairID": pair.pair_id,
                "premise_matches": [
                    {"start": m.start, "end": m.end, "concept": m.concept_id}
                    for m in graph.match_concepts(pair.premise)
                ],
                "hypothesis_matches": [
                    {"start": m.start, "end": m.end, "concept": m.concept_id}
                    for m in graph.match_concepts(pair.hypothesis)
                ],
            }
            fh.write(json.dumps(record) + "\n")
    _log(f"tagged {len(split)} pairs")


def _cmd_kb_paths(config, out: Path) -> None:
    graph = load_graph(config["graph"])
    results = {}
    for entry in config["concept_pairs"]:
        if not isinstance(entry, list) or len(entry) != 2:
            raise ConfigError(f"concept_pairs entries must be [id, id], got {entry!r}")
        a, b = entry
        results[f"{a}|{b}"] = shortest_path_len(graph, a, b)
    _write_json(out / "paths.json", results)
    _log(f"computed {len(results)} path lengths")


def _cmd_kb_histogram(config, out: Path) -> None:
    graph = load_graph(config["graph"])
    split = read_split(config["dataset"], name="dataset")
    histogram = path_histogram(split, graph, cap=config["cap"])
    _write_json(out / "histogram.json", histogram)
    _log(f"histogram over {len(split)} pairs")


def _cmd_train(config, out: Path) -> None:
    train_split = read_split(config["train"], name="train")
    dev_split = read_split(config["dev"], name="dev")
    test_split = read_split(config["test"], name="test") if config["test"] else None
    graph, vectors = _load_model_inputs(config)
    vocab = build_vocab(train_split, min_count=config["min_count"])

    def run(seed: int):
        model = build_model(_model_spec_from(config, seed), vocab, embeddings=vectors, graph=graph)
        result = train(
            model, train_split, dev_split, vocab, _train_config_from(config, seed), test_split=test_split
        )
        seed_dir = out / str(seed)
        save_model(model, seed_dir)
        _write_json(seed_dir / "metrics.json", result.metrics_dict())
        _write_json(seed_dir / "run_info.json", {"wall_time_seconds": result.wall_time})
        eval_split = test_split if test_split is not None else dev_split
        ids, probs = _predict_split(model, eval_split, vocab)
        _write_predictions(seed_dir / "predictions.jsonl", ids, probs)
        return result

    aggregate, _ = multi_seed_report(run, config["seeds"])
    _write_json(out / "aggregate.json", aggregate.to_dict())
    _log(f"mean accuracy {aggregate.mean_accuracy:.4f} over {len(aggregate.seeds)} seeds")


def _cmd_transfer(config, out: Path) -> None:
    source = [
        read_split(config["source_train"], name="train"),
        read_split(config["source_dev"], name="dev"),
        DatasetSplit("test"),
    ]
    target = [
        read_split(config["target_train"], name="train"),
        read_split(config["target_dev"], name="dev"),
        read_split(config["target_test"], name="test"),
    ]
    graph, vectors = _load_model_inputs(config)
    union = DatasetSplit("train", source[0].pairs + target[0].pairs)
    vocab = build_vocab(union, min_count=config["min_count"])
    mode = config["mode"]

    def run(seed: int):
        model = build_model(_model_spec_from(config, seed), vocab, embeddings=vectors, graph=graph)
        plan = default_transfer_plan(model) if mode == "multi-target" else None
        outcome = transfer_run(mode, model, source, target, vocab, _train_config_from(config, seed), plan=plan)
        seed_dir = out / str(seed)
        save_model(model, seed_dir)
        result = outcome.target_result if outcome.target_result is not None else outcome.source_result
        result.test_accuracy = outcome.target_test.accuracy
        result.confusion = outcome.target_test.confusion
        result.precision = outcome.target_test.precision
        result.recall = outcome.target_test.recall
        _write_json(seed_dir / "metrics.json", result.metrics_dict())
        _write_json(seed_dir / "run_info.json", {"wall_time_seconds": result.wall_time, "mode": mode})
        return result

    aggregate, _ = multi_seed_report(run, config["seeds"])
    _write_json(out / "aggregate.json", {**aggregate.to_dict(), "mode": mode})
    _log(f"{mode} transfer: mean target accuracy {aggregate.mean_accuracy:.4f}")


def _cmd_eval(config, out: Path) -> None:
    graph = load_graph(config["graph"]) if config["graph"] else None
    model = load_model(config["checkpoint"], graph=graph)
    split = read_split(config["dataset"], name="eval")
    report = evaluate(model, split, model.vocab, head=config["head"])
    _write_json(
        out / "metrics.json",
        {
            "accuracy": report.accuracy,
            "precision": report.precision,
            "recall": report.recall,
            "confusion": report.confusion,
            "n": report.n,
        },
    )
    ids, probs = _predict_split(model, split, model.vocab, head=config["head"])
    _write_predictions(out / "predictions.jsonl", ids, probs)
    _log(f"accuracy {report.accuracy:.4f} on {report.n} pairs")


def _cmd_ensemble(config, out: Path) -> None:
    runs = []
    for path in config["predictions"]:
        rows = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    record = json.loads(line)
                    rows[record["pairID"]] = record["probabilities"]
        runs.append(rows)
    ids = sorted(runs[0])
    for k, rows in enumerate(runs[1:], start=2):
        if sorted(rows) != ids:
            raise ConfigError(f"prediction file #{k} covers different pairIDs")
    matrices = [np.array([rows[i] for i in ids]) for rows in runs]
    combined = ensemble_proba_matrix(matrices)
    _write_predictions(out / "predictions.jsonl", ids, combined)
    if config["dataset"]:
        split = read_split(config["dataset"], name="eval")
        gold = {p.pair_id: p.label_index for p in split.pairs}
        missing = [i for i in ids if i not in gold]
        if missing:
            raise ConfigError(f"dataset lacks gold labels for {missing[:3]}...")
        predicted = combined.argmax(axis=1)
        accuracy = float(np.mean([gold[i] == p for i, p in zip(ids, predicted)]))
        _write_json(out / "metrics.json", {"accuracy": accuracy, "n": len(ids), "models": len(runs)})
        _log(f"ensemble accuracy {accuracy:.4f}")
    else:
        _log(f"ensembled {len(runs)} prediction files over {len(ids)} pairs")


def _cmd_probe(config, out: Path) -> None:
    splits = [
        read_split(config["train"], name="train"),
        read_split(config["dev"], name="dev"),
        read_split(config["test"], name="test"),
    ]
    spec = ModelSpec(
        architecture=config["architecture"],
        embedding_dim=config["embedding_dim"],
        hidden=config["hidden"],
        mlp_hidden=tuple(config["mlp_hidden"]),
        seed=config["seed"],
    )
    cfg = TrainConfig(
        batch_size=config["batch_size"],
        max_epochs=config["max_epochs"],
        patience=config["patience"],
        lr=config["lr"],
        seed=config["seed"],
    )
    result = hypothesis_only_probe(spec, splits, cfg)
    _write_json(out / "metrics.json", result.metrics_dict())
    _write_json(out / "run_info.json", {"wall_time_seconds": result.wall_time})
    _log(f"hypothesis-only test accuracy {result.test_accuracy:.4f}")


def _cmd_report_gains(config, out: Path) -> None:
    with open(config["baseline"], encoding="utf-8") as fh:
        baseline = json.load(fh)["mean_accuracy"]
    variants = {}
    for entry in config["runs"]:
        for key in ("source_domain", "transfer_mode", "model", "aggregate"):
            if key not in entry:
                raise ConfigError(f"report-gains run entry missing {key!r}: {entry!r}")
        with open(entry["aggregate"], encoding="utf-8") as fh:
            mean = json.load(fh)["mean_accuracy"]
        variants[(entry["source_domain"], entry["transfer_mode"], entry["model"])] = mean
    rows = gain_table(variants, baseline)
    write_gain_csv(rows, out / "gains.csv")
    _write_json(out / "gains.json", {"baseline_mean": baseline, "rows": rows})
    _log(f"wrote gain table with {len(rows)} rows (baseline {baseline:.4f})")


def _cmd_grad_check(config, out: Path) -> None:
    from .data.synthetic import SynthSpec as _SynthSpec
    from .data.synthetic import generate_synthetic_dataset as _generate
    from .data.batching import make_batch
    from .ontology import demo_graph

    splits = _generate(_SynthSpec(sizes=(9, 3, 3), n_items=6, seed=config["seed"]))
    vocab = build_vocab(splits[0])
    graph = demo_graph() if config["kb_attention"] else None
    spec = ModelSpec(
        architecture=config["architecture"],
        kb_attention=config["kb_attention"],
        embedding_dim=config["embedding_dim"],
        hidden=config["hidden"],
        mlp_hidden=(8,),
        seed=config["seed"],
    )
    model = build_model(spec, vocab, graph=graph)
    rng = np.random.default_rng(config["seed"] + 17)
    for p in model.params.values():
        p.data = rng.normal(scale=0.4, size=p.data.shape)
    batch = make_batch(splits[0].pairs[:2], vocab)

    def closure():
        return ops.cross_entropy(model.forward(batch), batch.labels)

    report = grad_check(
        closure,
        model.trainable_params(),
        h=config["step"],
        tolerance=config["tolerance"],
        sample=config["sample"],
        seed=config["seed"],
    )
    _write_json(
        out / "gradcheck.json",
        {
            "passed": report.passed,
            "max_rel_error": report.max_rel_error,
            "tolerance": report.tolerance,
            "per_parameter": {p.name: p.max_rel_error for p in report.params},
        },
    )
    _log(report.summary())
    if not report.passed:
        raise ClinliError(f"gradient check failed: max rel error {report.max_rel_error:.3e}")


_HANDLERS = {
    "data-segment": _cmd_data_segment,
    "data-split-sentences": _cmd_data_split_sentences,
    "data-sample-prompts": _cmd_data_sample_prompts,
    "data-ingest": _cmd_data_ingest,
    "data-stats": _cmd_data_stats,
    "data-synth": _cmd_data_synth,
    "data-split": _cmd_data_split,
    "embed-train": _cmd_embed_train,
    "embed-finetune": _cmd_embed_finetune,
    "embed-retrofit": _cmd_embed_retrofit,
    "kb-match": _cmd_kb_match,
    "kb-paths": _cmd_kb_paths,
    "kb-histogram": _cmd_kb_histogram,
    "train": _cmd_train,
    "transfer": _cmd_transfer,
    "eval": _cmd_eval,
    "ensemble": _cmd_ensemble,
    "probe-hypothesis-only": _cmd_probe,
    "report-gains": _cmd_report_gains,
    "grad-check": _cmd_grad_check,
}

assert set(_HANDLERS) == set(SCHEMAS)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="clinli", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand")
    describe_parser = sub.add_parser("describe", help="show a subcommand's config schema")
    describe_parser.add_argument("name")
    for name in SCHEMAS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="config override")
        p.add_argument("--out", required=True, help="output directory")
    args = parser.parse_args(argv)

    if args.subcommand is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        if args.subcommand == "describe":
            print(describe(args.name))
            return 0
        raw: dict = {}
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                raw = json.load(fh)
            if not isinstance(raw, dict):
                raise ConfigError(f"{args.config}: config must be a JSON object")
        for assignment in args.set:
            _apply_override(raw, assignment)
        config = resolve_config(args.subcommand, raw)
    except ConfigError as exc:
        _log(f"config error: {exc}")
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        _log(f"config error: {exc}")
        return 2

    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "resolved-config.json", {"subcommand": args.subcommand, "config": config})
        _HANDLERS[args.subcommand](config, out)
        return 0
    except ConfigError as exc:
        _log(f"config error: {exc}")
        return 2
    except ClinliError as exc:
        _log(f"error: {exc}")
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        _log(f"error: {type(exc).__name__}: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
