"""Concept graph storage and dictionary concept tagging.

Concepts carry surface forms (token sequences) and a semantic type; edges
are typed but treated as undirected for path queries. The JSON-lines
format holds one concept per line:

    {"id": ..., "name": ..., "synonyms": [...], "semantic_type": ...,
     "edges": [{"to": ..., "relation": ...}]}

A flat TSV loader (id/name/type plus an edge file) is provided for
terminology dumps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import DataFormatError
from ..data.tokenizer import tokenize


@dataclass
class Concept:
    concept_id: str
    name: str
    synonyms: list[str] = field(default_factory=list)
    semantic_type: str = ""

    def surface_forms(self) -> list[tuple[str, ...]]:
        forms = []
        seen = set()
        for text in [self.name, *self.synonyms]:
            tokens = tuple(tokenize(text))
            if tokens and tokens not in seen:
                seen.add(tokens)
                forms.append(tokens)
        return forms


@dataclass
class ConceptMatch:
    start: int
    end: int  # exclusive
    concept_id: str
    surface: tuple[str, ...]


class ConceptGraph:
    def __init__(self):
        self.concepts: dict[str, Concept] = {}
        self.adjacency: dict[str, dict[str, str]] = {}  # id -> neighbor id -> relation
        self._trie: dict | None = None

    def add_concept(self, concept: Concept) -> None:
        if concept.concept_id in self.concepts:
            raise ValueError(f"duplicate concept id {concept.concept_id!r}")
        self.concepts[concept.concept_id] = concept
        self.adjacency.setdefault(concept.concept_id, {})
        self._trie = None

    def add_edge(self, a: str, b: str, relation: str = "related") -> None:
        for cid in (a, b):
            if cid not in self.concepts:
                raise ValueError(f"edge {a!r}->{b!r} references unknown concept {cid!r}")
        if a == b:
            return
        self.adjacency[a][b] = relation
        self.adjacency[b].setdefault(a, relation)

    def neighbors(self, concept_id: str) -> list[str]:
        if concept_id not in self.concepts:
            raise KeyError(f"unknown concept {concept_id!r}")
        return sorted(self.adjacency[concept_id])

    def degree(self, concept_id: str) -> int:
        return len(self.adjacency[concept_id])

    def __len__(self):
        return len(self.concepts)

    # -- surface matching ---------------------------------------------------

    def _surface_trie(self) -> dict:
        """token -> ... -> {None: [concept ids]} over every surface form."""
        if self._trie is None:
            trie: dict = {}
            for cid in sorted(self.concepts):
                for form in self.concepts[cid].surface_forms():
                    node = trie
                    for token in form:
                        node = node.setdefault(token, {})
                    node.setdefault(None, []).append(cid)
            self._trie = trie
        return self._trie

    def match_concepts(self, tokens: list[str]) -> list[ConceptMatch]:
        """Left-to-right longest-match tagging; matches never overlap.

        Case folding happens through the tokenizer's lowercasing; ties on
        length resolve to the lexicographically first concept id.
        """
        trie = self._surface_trie()
        matches: list[ConceptMatch] = []
        lowered = [t.lower() for t in tokens]
        i = 0
        n = len(lowered)
        while i < n:
            node = trie
            best: tuple[int, str, tuple[str, ...]] | None = None
            j = i
            while j < n and lowered[j] in node:
                node = node[lowered[j]]
                j += 1
                if None in node:
                    best = (j, node[None][0], tuple(lowered[i:j]))
            if best is None:
                i += 1
            else:
                end, cid, surface = best
                matches.append(ConceptMatch(start=i, end=end, concept_id=cid, surface=surface))
                i = end
        return matches


# -- I/O -------------------------------------------------------------------


def load_graph(path) -> ConceptGraph:
    graph = ConceptGraph()
    pending_edges: list[tuple[str, str, str, int]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"invalid JSON: {exc.msg}", line=lineno) from None
            if "id" not in record or "name" not in record:
                raise DataFormatError("concept needs 'id' and 'name'", line=lineno)
            concept = Concept(
                concept_id=str(record["id"]),
                name=str(record["name"]),
                synonyms=[str(s) for s in record.get("synonyms", [])],
                semantic_type=str(record.get("semantic_type", "")),
            )
            try:
                graph.add_concept(concept)
            except ValueError as exc:
                raise DataFormatError(str(exc), line=lineno) from None
            for edge in record.get("edges", []):
                pending_edges.append((concept.concept_id, str(edge["to"]), str(edge.get("relation", "related")), lineno))
    for a, b, relation, lineno in pending_edges:
        try:
            graph.add_edge(a, b, relation)
        except ValueError as exc:
            raise DataFormatError(str(exc), line=lineno) from None
    return graph


def save_graph(graph: ConceptGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for cid in sorted(graph.concepts):
            concept = graph.concepts[cid]
            record = {
                "id": concept.concept_id,
                "name": concept.name,
                "synonyms": concept.synonyms,
                "semantic_type": concept.semantic_type,
                "edges": [
                    {"to": other, "relation": graph.adjacency[cid][other]} for other in sorted(graph.adjacency[cid])
                ],
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def load_graph_tsv(concept_path, edge_path) -> ConceptGraph:
    """Flat loaders: concepts as "id<TAB>name<TAB>type", edges as "a<TAB>b<TAB>relation"."""
    graph = ConceptGraph()
    with open(concept_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise DataFormatError("expected id<TAB>name[<TAB>type]", line=lineno)
            graph.add_concept(
                Concept(
                    concept_id=parts[0],
                    name=parts[1],
                    semantic_type=parts[2] if len(parts) > 2 else "",
                )
            )
    with open(edge_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise DataFormatError("expected a<TAB>b[<TAB>relation]", line=lineno)
            try:
                graph.add_edge(parts[0], parts[1], parts[2] if len(parts) > 2 else "related")
            except ValueError as exc:
                raise DataFormatError(str(exc), line=lineno) from None
    return graph


def lexical_adjacency(graph: ConceptGraph) -> dict[str, list[str]]:
    """Token-level adjacency for retrofitting.

    Concepts joined by an edge connect their surface-form head tokens
    (last token of a multiword form); surface forms of one concept are
    connected to each other as synonyms.
    """

    def head_tokens(cid: str) -> list[str]:
        return sorted({form[-1] for form in graph.concepts[cid].surface_forms()})

    adjacency: dict[str, set[str]] = {}

    def connect(a: str, b: str) -> None:
        if a == b:
            return
        adjacency.setdefault(a, set()).add(b)
        adjacency.setdefault(b, set()).add(a)

    for cid in sorted(graph.concepts):
        heads = head_tokens(cid)
        for i, a in enumerate(heads):
            for b in heads[i + 1 :]:
                connect(a, b)
        for other in graph.neighbors(cid):
            for a in heads:
                for b in head_tokens(other):
                    connect(a, b)
    return {t: sorted(ns) for t, ns in sorted(adjacency.items())}
