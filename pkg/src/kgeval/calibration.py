"""Planted-error perturbations of gold graphs, for checking that metrics recover them."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .ged import DEFAULT_COSTS, CostModel, RateReport, ged, rates_from_path
from .graph import Edge, KnowledgeGraph


class PlanError(ValueError):
    pass


@dataclass(frozen=True)
class PerturbationPlan:
    seed: int = 0
    insertions: int = 0
    deletions: int = 0
    relabels: int = 0

    def validate(self, gold: KnowledgeGraph) -> None:
        if min(self.insertions, self.deletions, self.relabels) < 0:
            raise PlanError("perturbation counts must be non-negative")
        if self.deletions + self.relabels > len(gold.edges):
            raise PlanError(
                f"plan touches {self.deletions + self.relabels} edges but gold has {len(gold.edges)}"
            )


def _fresh(prefix: str, taken: set[str]) -> str:
    k = 0
    while f"{prefix}{k}" in taken:
        k += 1
    label = f"{prefix}{k}"
    taken.add(label)
    return label


def perturb(gold: KnowledgeGraph, plan: PerturbationPlan) -> tuple[KnowledgeGraph, RateReport]:
    """Apply ``plan`` to ``gold`` and return the prediction with its expected edge rates.

    Deleted and relabelled edges are drawn without overlap. Inserted edges and
    rewritten relations use labels absent from ``gold``, so each insertion is
    one hallucination and each relabel one hallucination plus one omission.
    """
    plan.validate(gold)
    rng = random.Random(plan.seed)
    edges = gold.sorted_edges()
    touched = rng.sample(edges, plan.deletions + plan.relabels)
    deleted = set(touched[: plan.deletions])
    relabelled = touched[plan.deletions:]

    taken = set(gold.nodes) | {e.relation for e in gold.edges}
    pred = set(edges) - deleted - set(relabelled)
    for e in relabelled:
        pred.add(Edge(e.source, _fresh("rel-", taken), e.target))
    for _ in range(plan.insertions):
        pred.add(Edge(_fresh("ent-", taken), _fresh("rel-", taken), _fresh("ent-", taken)))

    e = len(edges)
    expected = RateReport(
        h=plan.insertions + plan.relabels,
        o=plan.deletions + plan.relabels,
        n=e + plan.insertions + plan.relabels,
    )
    return KnowledgeGraph.from_edges(pred), expected


def recovery_check(
    gold: KnowledgeGraph,
    plan: PerturbationPlan,
    costs: CostModel = DEFAULT_COSTS,
    node_cap: int | None = None,
) -> bool:
    measured, expected = measure(gold, plan, costs, node_cap)
    return (measured.h, measured.o, measured.n) == (expected.h, expected.o, expected.n)


def measure(
    gold: KnowledgeGraph,
    plan: PerturbationPlan,
    costs: CostModel = DEFAULT_COSTS,
    node_cap: int | None = None,
) -> tuple[RateReport, RateReport]:
    pred, expected = perturb(gold, plan)
    cap = node_cap if node_cap is not None else max(len(gold.nodes), len(pred.nodes), 1)
    return rates_from_path(ged(pred, gold, costs, cap)), expected


def random_gold(n_nodes: int, seed: int = 0) -> KnowledgeGraph:
    """A connected gold graph with ``n_nodes`` unique entities and unique relations."""
    if n_nodes < 2:
        raise ValueError("a gold graph needs at least 2 nodes")
    rng = random.Random(seed)
    nodes = [f"entity {i}" for i in range(n_nodes)]
    edges = []
    for i in range(1, n_nodes):
        j = rng.randrange(i)
        src, dst = (nodes[i], nodes[j]) if rng.random() < 0.5 else (nodes[j], nodes[i])
        edges.append(Edge(src, f"relation {i}", dst))
    return KnowledgeGraph.from_edges(edges)
