"""Word vector storage, text-format I/O, and total lookup.

Out-of-vocabulary tokens resolve through character n-gram composition when
the matrix carries a subword index, and otherwise to a deterministic
random vector seeded by the token's own hash, cached so repeated lookups
agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataFormatError

_FNV_OFFSET = 2166136261
_FNV_PRIME = 16777619


def fnv1a32(data: str) -> int:
    """32-bit FNV-1a over utf-8 bytes; stable across runs and platforms."""
    h = _FNV_OFFSET
    for byte in data.encode("utf-8"):
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFF
    return h


@dataclass(frozen=True)
class SubwordIndex:
    ngram_min: int = 3
    ngram_max: int = 6
    buckets: int = 2**17
    hash_name: str = "fnv1a32"

    def ngrams(self, token: str) -> list[str]:
        padded = f"<{token}>"
        out = []
        for n in range(self.ngram_min, self.ngram_max + 1):
            for start in range(0, len(padded) - n + 1):
                out.append(padded[start : start + n])
        return out

    def bucket_ids(self, token: str) -> list[int]:
        return [fnv1a32(gram) % self.buckets for gram in self.ngrams(token)]


class EmbeddingMatrix:
    """Vocabulary-indexed dense vectors with a provenance tag."""

    def __init__(
        self,
        tokens: list[str],
        vectors: np.ndarray,
        provenance: str = "",
        subword: SubwordIndex | None = None,
        ngram_vectors: np.ndarray | None = None,
    ):
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] != len(tokens):
            raise ValueError(f"vectors shape {vectors.shape} does not match {len(tokens)} tokens")
        if not np.all(np.isfinite(vectors)):
            raise ValueError("non-finite embedding values")
        self.tokens = list(tokens)
        self.index = {t: i for i, t in enumerate(self.tokens)}
        if len(self.index) != len(self.tokens):
            raise ValueError("duplicate tokens in embedding vocabulary")
        self.vectors = vectors
        self.provenance = provenance
        self.subword = subword
        self.ngram_vectors = None if ngram_vectors is None else np.asarray(ngram_vectors, dtype=np.float64)
        self._oov_cache: dict[str, np.ndarray] = {}

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def __len__(self) -> int:
        return len(self.tokens)

    def lookup(self, token: str) -> np.ndarray:
        if token in self.index:
            return self.vectors[self.index[token]]
        if token in self._oov_cache:
            return self._oov_cache[token]
        if self.subword is not None and self.ngram_vectors is not None:
            ids = self.subword.bucket_ids(token)
            vec = self.ngram_vectors[ids].sum(axis=0) if ids else np.zeros(self.dim)
        else:
            rng = np.random.default_rng(fnv1a32(token))
            vec = rng.uniform(-0.5 / self.dim, 0.5 / self.dim, size=self.dim)
        self._oov_cache[token] = vec
        return vec

    def copy(self, provenance: str | None = None) -> "EmbeddingMatrix":
        return EmbeddingMatrix(
            tokens=list(self.tokens),
            vectors=self.vectors.copy(),
            provenance=self.provenance if provenance is None else provenance,
            subword=self.subword,
            ngram_vectors=None if self.ngram_vectors is None else self.ngram_vectors.copy(),
        )


def save_vectors(matrix: EmbeddingMatrix, path, header: bool = True, decimals: int = 8) -> None:
    """Text format: optional "count dim" header, then "token v1 ... vD" lines.

    Values are fixed-point with ``decimals`` places (default 8), so a
    round trip is exact to 0.5e-8 per component.
    """
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(f"{len(matrix)} {matrix.dim}\n")
        for token, row in zip(matrix.tokens, matrix.vectors):
            fh.write(token + " " + " ".join(f"{v:.{decimals}f}" for v in row) + "\n")


def load_vectors(path, provenance: str | None = None) -> EmbeddingMatrix:
    tokens: list[str] = []
    rows: list[np.ndarray] = []
    dim = None
    declared = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split(" ")
            parts = [p for p in parts if p]
            if not parts:
                continue
            if lineno == 1 and len(parts) == 2:
                try:
                    declared = (int(parts[0]), int(parts[1]))
                    continue
                except ValueError:
                    pass  # ordinary first line of a headerless file
            token = parts[0]
            try:
                values = np.array([float(v) for v in parts[1:]], dtype=np.float64)
            except ValueError:
                raise DataFormatError(f"non-numeric vector component for token {token!r}", line=lineno) from None
            if dim is None:
                dim = values.size
                if dim < 1:
                    raise DataFormatError(f"token {token!r} has no vector components", line=lineno)
            elif values.size != dim:
                raise DataFormatError(
                    f"token {token!r} has {values.size} components, expected {dim}", line=lineno
                )
            tokens.append(token)
            rows.append(values)
    if not tokens:
        raise DataFormatError("no vectors found", line=1)
    if declared is not None:
        if declared[0] != len(tokens):
            raise DataFormatError(f"header declares {declared[0]} vectors but file has {len(tokens)}", line=1)
        if declared[1] != dim:
            raise DataFormatError(f"header declares dim {declared[1]} but vectors have dim {dim}", line=1)
    name = provenance if provenance is not None else str(path)
    return EmbeddingMatrix(tokens=tokens, vectors=np.stack(rows), provenance=name)
