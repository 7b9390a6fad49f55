"""Triples, label normalization and directed labeled graphs."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

_WS = re.compile(r"\s+")


class MalformedTripleError(ValueError):
    """A triple with some, but not all, fields empty."""

    def __init__(self, index: int, triple: "Triple"):
        self.index = index
        self.triple = triple
        super().__init__(f"malformed triple at index {index}: {tuple(triple)!r}")


@dataclass(frozen=True)
class NormalizationConfig:
    lowercase: bool = True
    underscores_to_spaces: bool = True
    collapse_whitespace: bool = True
    trim: bool = True


DEFAULT_NORMALIZATION = NormalizationConfig()


def normalize_label(raw: str, cfg: NormalizationConfig = DEFAULT_NORMALIZATION) -> str:
    """Apply trim, lowercase, underscore replacement and whitespace collapse, in that order.

    With the default config the result is idempotent. Collapsing also strips
    the ends, since an underscore at an edge only becomes whitespace after
    the trim step has run.
    """
    s = raw
    if cfg.trim:
        s = s.strip()
    if cfg.lowercase:
        s = s.lower()
    if cfg.underscores_to_spaces:
        s = s.replace("_", " ")
    if cfg.collapse_whitespace:
        s = _WS.sub(" ", s)
        if cfg.trim:
            s = s.strip()
    return s


class Triple(NamedTuple):
    subject: str
    relation: str
    object: str

    def is_sentinel(self) -> bool:
        return not self.subject and not self.relation and not self.object

    def is_partial(self) -> bool:
        empty = sum(1 for f in self if not f)
        return 0 < empty < 3

    def normalized(self, cfg: NormalizationConfig = DEFAULT_NORMALIZATION) -> "Triple":
        return Triple(*(normalize_label(f, cfg) for f in self))


class Edge(NamedTuple):
    source: str
    relation: str
    target: str


@dataclass(frozen=True)
class KnowledgeGraph:
    nodes: frozenset[str] = field(default_factory=frozenset)
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "edges", frozenset(Edge(*e) for e in self.edges))
        for e in self.edges:
            if e.source not in self.nodes or e.target not in self.nodes:
                raise ValueError(f"edge {tuple(e)!r} has an endpoint outside the node set")

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str, str]]) -> "KnowledgeGraph":
        """Build a graph directly from already-normalized edges."""
        es = frozenset(Edge(*e) for e in edges)
        nodes = frozenset(n for e in es for n in (e.source, e.target))
        return cls(nodes, es)

    def is_empty(self) -> bool:
        return not self.nodes

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def __len__(self) -> int:
        return len(self.edges)


def graph_from_triples(
    triples: Iterable[tuple[str, str, str]],
    cfg: NormalizationConfig = DEFAULT_NORMALIZATION,
) -> KnowledgeGraph:
    """Normalize triples and collect them into a directed labeled graph.

    The all-empty sentinel ``("", "", "")`` is dropped, so a list made only
    of sentinels gives the empty graph. A triple with only some fields empty
    raises :class:`MalformedTripleError`.
    """
    edges = set()
    for i, t in enumerate(triples):
        t = Triple(*t).normalized(cfg)
        if t.is_sentinel():
            continue
        if t.is_partial():
            raise MalformedTripleError(i, t)
        edges.add(Edge(*t))
    return KnowledgeGraph.from_edges(edges)


def graphs_identical(g1: KnowledgeGraph, g2: KnowledgeGraph) -> bool:
    return g1.nodes == g2.nodes and g1.edges == g2.edges
