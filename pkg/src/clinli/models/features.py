"""The 35 hand-crafted features for the boosted-tree baseline.

Feature order is frozen; FEATURE_NAMES is the single source of truth and
is mirrored by the packaged feature manifest. Degenerate inputs follow
documented sentinels: cosine against a zero vector is 0, ontology path
statistics use the cap+1 sentinel, and BLEU skips n-gram orders the
candidate is too short to have.
"""

from __future__ import annotations

import math
from collections import Counter

import numpy as np

from .. import kernels
from ..data.types import DatasetSplit, NLIPair
from ..ontology import ONTOLOGY_FEATURE_NAMES, ConceptGraph, ontology_pair_features

DEFAULT_NEGATION_TERMS = ("no", "not", "n't", "denies", "denied", "without", "negative", "never", "free of")

FEATURE_NAMES = (
    "bleu_premise_to_hypothesis",
    "bleu_hypothesis_to_premise",
    "len_premise",
    "len_hypothesis",
    "len_abs_diff",
    "len_min",
    "len_max",
    "len_ratio",
    "negation_premise",
    "negation_hypothesis",
    "negation_abs_diff",
    "negation_one_side",
    "tfidf_cosine",
    "tfidf_euclidean",
    "tfidf_manhattan",
    "levenshtein_char",
    "levenshtein_token",
    "jaccard_token",
    "levenshtein_char_normalized",
    "embed_mean_cosine",
    "embed_mean_euclidean",
    "embed_mean_manhattan",
    "embed_max_cosine",
    "embed_max_euclidean",
    "embed_max_manhattan",
) + ONTOLOGY_FEATURE_NAMES

N_FEATURES = len(FEATURE_NAMES)


def bleu(candidate: list[str], reference: list[str], max_n: int = 2) -> float:
    """Unsmoothed BLEU with clipped n-gram precision up to ``max_n``.

    Orders longer than the candidate are skipped; any zero precision on a
    remaining order gives 0. Brevity penalty exp(1 - r/c) applies when the
    candidate is shorter than the reference.
    """
    if not candidate:
        return 0.0
    log_precisions = []
    for n in range(1, max_n + 1):
        cand_ngrams = Counter(tuple(candidate[i : i + n]) for i in range(len(candidate) - n + 1))
        if not cand_ngrams:
            continue
        ref_ngrams = Counter(tuple(reference[i : i + n]) for i in range(len(reference) - n + 1))
        clipped = sum(min(count, ref_ngrams[gram]) for gram, count in cand_ngrams.items())
        total = sum(cand_ngrams.values())
        if clipped == 0:
            return 0.0
        log_precisions.append(math.log(clipped / total))
    if not log_precisions:
        return 0.0
    geo_mean = math.exp(sum(log_precisions) / len(log_precisions))
    c, r = len(candidate), len(reference)
    brevity = 1.0 if c > r else math.exp(1.0 - r / c)
    return brevity * geo_mean


def build_idf(train: DatasetSplit) -> dict[str, float]:
    """Smoothed inverse document frequency over train sentences (premises and hypotheses)."""
    df: Counter = Counter()
    n_docs = 0
    for pair in train.pairs:
        for sentence in (pair.premise, pair.hypothesis):
            n_docs += 1
            df.update(set(sentence))
    idf = {token: math.log((1 + n_docs) / (1 + count)) + 1.0 for token, count in df.items()}
    idf["__default__"] = math.log(1 + n_docs) + 1.0
    return idf


def _tfidf_vector(tokens: list[str], idf: dict[str, float]) -> dict[str, float]:
    default = idf.get("__default__", 1.0)
    counts = Counter(tokens)
    return {t: c * idf.get(t, default) for t, c in counts.items()}


def _sparse_distances(a: dict[str, float], b: dict[str, float]) -> tuple[float, float, float]:
    keys = set(a) | set(b)
    av = np.array([a.get(k, 0.0) for k in sorted(keys)])
    bv = np.array([b.get(k, 0.0) for k in sorted(keys)])
    return _dense_distances(av, bv)


def _dense_distances(av: np.ndarray, bv: np.ndarray) -> tuple[float, float, float]:
    na, nb = np.linalg.norm(av), np.linalg.norm(bv)
    cosine = float(av @ bv / (na * nb)) if na > 0 and nb > 0 else 0.0
    return cosine, float(np.linalg.norm(av - bv)), float(np.abs(av - bv).sum())


def count_negations(tokens: list[str], terms=DEFAULT_NEGATION_TERMS) -> int:
    single = {t for t in terms if " " not in t}
    multi = [tuple(t.split()) for t in terms if " " in t]
    count = sum(1 for t in tokens if t in single)
    for gram in multi:
        count += sum(1 for i in range(len(tokens) - len(gram) + 1) if tuple(tokens[i : i + len(gram)]) == gram)
    return count


def _token_ids(tokens: list[str], table: dict[str, int]) -> np.ndarray:
    return np.array([table.setdefault(t, len(table)) for t in tokens], dtype=np.int64)


def extract_features(
    pair: NLIPair,
    embeddings,
    graph: ConceptGraph,
    idf: dict[str, float],
    negation_terms=DEFAULT_NEGATION_TERMS,
) -> np.ndarray:
    """The frozen 35-feature vector for one premise/hypothesis pair."""
    p, h = pair.premise, pair.hypothesis
    values = [bleu(p, h), bleu(h, p)]

    lp, lh = len(p), len(h)
    values += [float(lp), float(lh), float(abs(lp - lh)), float(min(lp, lh)), float(max(lp, lh)), min(lp, lh) / max(lp, lh)]

    neg_p, neg_h = count_negations(p, negation_terms), count_negations(h, negation_terms)
    values += [float(neg_p), float(neg_h), float(abs(neg_p - neg_h)), 1.0 if (neg_p > 0) != (neg_h > 0) else 0.0]

    values += list(_sparse_distances(_tfidf_vector(p, idf), _tfidf_vector(h, idf)))

    chars_p = np.frombuffer(" ".join(p).encode("utf-32-le"), dtype=np.int32).astype(np.int64)
    chars_h = np.frombuffer(" ".join(h).encode("utf-32-le"), dtype=np.int32).astype(np.int64)
    char_lev = kernels.levenshtein(chars_p, chars_h)
    table: dict[str, int] = {}
    token_lev = kernels.levenshtein(_token_ids(p, table), _token_ids(h, table))
    set_p, set_h = set(p), set(h)
    jaccard = len(set_p & set_h) / len(set_p | set_h) if set_p | set_h else 1.0
    max_chars = max(len(" ".join(p)), len(" ".join(h)))
    values += [float(char_lev), float(token_lev), jaccard, char_lev / max_chars if max_chars else 0.0]

    vec_p = np.stack([embeddings.lookup(t) for t in p])
    vec_h = np.stack([embeddings.lookup(t) for t in h])
    values += list(_dense_distances(vec_p.mean(axis=0), vec_h.mean(axis=0)))
    values += list(_dense_distances(vec_p.max(axis=0), vec_h.max(axis=0)))

    values += list(ontology_pair_features(graph.match_concepts(p), graph.match_concepts(h), graph))

    out = np.array(values, dtype=np.float64)
    assert out.shape == (N_FEATURES,), out.shape
    return out


def extract_feature_matrix(split: DatasetSplit, embeddings, graph, idf, negation_terms=DEFAULT_NEGATION_TERMS):
    x = np.stack([extract_features(p, embeddings, graph, idf, negation_terms) for p in split.pairs])
    y = np.array([p.label_index for p in split.pairs], dtype=np.int64)
    return x, y
