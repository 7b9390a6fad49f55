"""Exact triple-level (T-F1) and graph-level (G-F1) matching."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .graph import KnowledgeGraph, graphs_identical


@dataclass(frozen=True)
class TripleMatchScore:
    precision: float
    recall: float
    f1: float
    matched: int
    predicted_total: int
    gold_total: int

    @classmethod
    def from_counts(cls, matched: int, predicted_total: int, gold_total: int) -> "TripleMatchScore":
        # Two empty graphs agree perfectly; an empty side against a non-empty one scores 0.
        if predicted_total == 0 and gold_total == 0:
            return cls(1.0, 1.0, 1.0, 0, 0, 0)
        p = matched / predicted_total if predicted_total else 0.0
        r = matched / gold_total if gold_total else 0.0
        f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
        return cls(p, r, f1, matched, predicted_total, gold_total)


def triple_match(pred: KnowledgeGraph, gold: KnowledgeGraph) -> TripleMatchScore:
    matched = len(pred.edges & gold.edges)
    return TripleMatchScore.from_counts(matched, len(pred.edges), len(gold.edges))


def graph_match_fraction(pairs: Sequence[tuple[KnowledgeGraph, KnowledgeGraph]]) -> float:
    """Share of (pred, gold) pairs whose graphs are identical."""
    if not pairs:
        raise ValueError("graph_match_fraction needs at least one pair")
    return sum(1 for pred, gold in pairs if graphs_identical(pred, gold)) / len(pairs)
