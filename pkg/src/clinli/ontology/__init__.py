"""Concept graph, dictionary tagging, shortest paths, and path-based attention."""

from importlib import resources as importlib_resources

from .attention import KbAttention, kb_attend, kb_attention
from .graph import (
    Concept,
    ConceptGraph,
    ConceptMatch,
    lexical_adjacency,
    load_graph,
    load_graph_tsv,
    save_graph,
)
from .paths import (
    NO_PATH,
    ONTOLOGY_FEATURE_NAMES,
    PATH_CAP,
    ontology_pair_features,
    path_histogram,
    shortest_path_len,
)


def demo_graph() -> ConceptGraph:
    """The small bundled concept graph used in examples and tests."""
    ref = importlib_resources.files("clinli.resources").joinpath("demo_graph.jsonl")
    with importlib_resources.as_file(ref) as path:
        return load_graph(path)


__all__ = [
    "Concept",
    "ConceptGraph",
    "ConceptMatch",
    "load_graph",
    "save_graph",
    "load_graph_tsv",
    "lexical_adjacency",
    "shortest_path_len",
    "path_histogram",
    "ontology_pair_features",
    "ONTOLOGY_FEATURE_NAMES",
    "PATH_CAP",
    "NO_PATH",
    "KbAttention",
    "kb_attention",
    "kb_attend",
    "demo_graph",
]
