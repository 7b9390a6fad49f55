"""Exact graph edit distance, optimal edit paths, and hallucination/omission rates.

Edit paths are oriented gold -> pred: a gold-only element is an omission
(priced by the ``*_delete`` costs) and a pred-only element is a hallucination
(priced by the ``*_insert`` costs).

The exact search is a depth-first branch and bound over node mappings. Gold
nodes are assigned in sorted label order, each to an unused pred node (in
sorted label order) or to nothing. Edge operations are charged as soon as
both endpoints of a gold/pred node pair are decided. The lower bound for the
unexplored part is the optimal label-multiset matching of the remaining
nodes plus the same for the remaining edge relations, which ignores graph
structure and is therefore admissible.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Literal, Optional, Sequence, Union

import numpy as np
from scipy.optimize import linear_sum_assignment

from .graph import Edge, KnowledgeGraph

Element = Union[str, Edge]
RateMode = Literal["edges", "nodes", "nodes_and_edges"]

DEFAULT_NODE_CAP = 12
_FORBIDDEN = 1e12
_EPS = 1e-9
BRUTE_FORCE_LIMIT = 6


class SizeExceededError(ValueError):
    pass


@dataclass(frozen=True)
class CostModel:
    node_insert: float = 1.0
    node_delete: float = 1.0
    node_substitute_equal: float = 0.0
    node_substitute_unequal: float = 1.0
    edge_insert: float = 1.0
    edge_delete: float = 1.0
    edge_substitute_equal: float = 0.0
    # Relation rewrites price as delete + insert, see edge_relabels_allowed.
    edge_substitute_unequal: float = 2.0

    def __post_init__(self) -> None:
        for name, value in vars(self).items():
            if not value >= 0:
                raise ValueError(f"{name} must be non-negative, got {value!r}")
        for kind in ("node", "edge"):
            eq = getattr(self, f"{kind}_substitute_equal")
            ne = getattr(self, f"{kind}_substitute_unequal")
            pair = getattr(self, f"{kind}_insert") + getattr(self, f"{kind}_delete")
            if eq > ne or eq > pair:
                raise ValueError(f"{kind}_substitute_equal must not exceed the other {kind} costs")
        if not self.node_substitute_unequal < self.node_insert + self.node_delete:
            raise ValueError("node_substitute_unequal must be < node_insert + node_delete")

    @property
    def edge_relabels_allowed(self) -> bool:
        """Unequal edge substitutions are used only when strictly cheaper than delete+insert."""
        return self.edge_substitute_unequal < self.edge_insert + self.edge_delete


DEFAULT_COSTS = CostModel()


@dataclass(frozen=True)
class EditPair:
    gold: Optional[Element] = None
    pred: Optional[Element] = None

    def __post_init__(self) -> None:
        if self.gold is None and self.pred is None:
            raise ValueError("an edit pair needs at least one side")

    @property
    def is_hallucination(self) -> bool:
        return self.gold is None

    @property
    def is_omission(self) -> bool:
        return self.pred is None


@dataclass(frozen=True)
class EditResult:
    cost: float
    node_pairs: tuple[EditPair, ...] = ()
    edge_pairs: tuple[EditPair, ...] = ()
    exact: bool = True


@dataclass(frozen=True)
class RateReport:
    h: int
    o: int
    n: int
    hall_rate: float = field(init=False)
    omis_rate: float = field(init=False)

    def __post_init__(self) -> None:
        if min(self.h, self.o, self.n) < 0 or self.h + self.o > self.n:
            raise ValueError(f"inconsistent counts h={self.h} o={self.o} n={self.n}")
        object.__setattr__(self, "hall_rate", self.h / self.n if self.n else 0.0)
        object.__setattr__(self, "omis_rate", self.o / self.n if self.n else 0.0)


@dataclass(frozen=True)
class LegacyRates:
    hall_fraction: float
    omis_fraction: float
    total_graphs: int


# ---------------------------------------------------------------------------
# pricing


def node_pair_cost(pair: EditPair, costs: CostModel) -> float:
    if pair.gold is None:
        return costs.node_insert
    if pair.pred is None:
        return costs.node_delete
    if pair.gold == pair.pred:
        return costs.node_substitute_equal
    return costs.node_substitute_unequal


def edge_pair_cost(pair: EditPair, costs: CostModel) -> float:
    if pair.gold is None:
        return costs.edge_insert
    if pair.pred is None:
        return costs.edge_delete
    if pair.gold.relation == pair.pred.relation:
        return costs.edge_substitute_equal
    return costs.edge_substitute_unequal


def path_cost(result: EditResult, costs: CostModel = DEFAULT_COSTS) -> float:
    """Re-price an edit path from its pairs."""
    return sum(node_pair_cost(p, costs) for p in result.node_pairs) + sum(
        edge_pair_cost(p, costs) for p in result.edge_pairs
    )


def _multiset_match_cost(
    gold: Counter, pred: Counter, eq: float, ne: float, delete: float, insert: float
) -> float:
    common = sum((gold & pred).values())
    a = sum(gold.values()) - common
    b = sum(pred.values()) - common
    m = min(a, b)
    return common * eq + m * min(ne, delete + insert) + (a - m) * delete + (b - m) * insert


# ---------------------------------------------------------------------------
# shared graph indexing


def _adjacency(g: KnowledgeGraph) -> dict[tuple[str, str], tuple[str, ...]]:
    adj: dict[tuple[str, str], list[str]] = {}
    for e in g.edges:
        adj.setdefault((e.source, e.target), []).append(e.relation)
    return {k: tuple(sorted(v)) for k, v in adj.items()}


def _group_pairs(
    gold_key: Optional[tuple[str, str]],
    gold_rels: Sequence[str],
    pred_key: Optional[tuple[str, str]],
    pred_rels: Sequence[str],
    costs: CostModel,
) -> tuple[float, list[EditPair]]:
    """Optimally align the parallel edges of one gold node pair with one pred node pair."""
    pairs: list[EditPair] = []
    pred_set = set(pred_rels)
    gold_set = set(gold_rels)
    gold_only = [r for r in gold_rels if r not in pred_set]
    pred_only = [r for r in pred_rels if r not in gold_set]
    cost = 0.0
    for r in gold_rels:
        if r in pred_set:
            pairs.append(EditPair(Edge(gold_key[0], r, gold_key[1]), Edge(pred_key[0], r, pred_key[1])))
            cost += costs.edge_substitute_equal
    k = min(len(gold_only), len(pred_only)) if costs.edge_relabels_allowed else 0
    for g, p in zip(gold_only[:k], pred_only[:k]):
        pairs.append(EditPair(Edge(gold_key[0], g, gold_key[1]), Edge(pred_key[0], p, pred_key[1])))
        cost += costs.edge_substitute_unequal
    for g in gold_only[k:]:
        pairs.append(EditPair(Edge(gold_key[0], g, gold_key[1]), None))
        cost += costs.edge_delete
    for p in pred_only[k:]:
        pairs.append(EditPair(None, Edge(pred_key[0], p, pred_key[1])))
        cost += costs.edge_insert
    return cost, pairs


def _pair_sort_key(p: EditPair):
    return (p.gold is None, p.gold or (), p.pred is None, p.pred or ())


def _result_from_mapping(
    gold: KnowledgeGraph,
    pred: KnowledgeGraph,
    mapping: dict[str, Optional[str]],
    costs: CostModel,
    exact: bool,
) -> EditResult:
    """Materialize the full edit path induced by a complete gold->pred node mapping."""
    g_adj = _adjacency(gold)
    p_adj = _adjacency(pred)
    node_pairs = [EditPair(u, mapping[u]) for u in sorted(gold.nodes)]
    used = {p for p in mapping.values() if p is not None}
    node_pairs += [EditPair(None, p) for p in sorted(pred.nodes - used)]

    edge_pairs: list[EditPair] = []
    seen_pred: set[tuple[str, str]] = set()
    for (u, w), rels in sorted(g_adj.items()):
        pu, pw = mapping[u], mapping[w]
        if pu is None or pw is None:
            edge_pairs += [EditPair(Edge(u, r, w), None) for r in rels]
            continue
        pkey = (pu, pw)
        seen_pred.add(pkey)
        _, ps = _group_pairs((u, w), rels, pkey, p_adj.get(pkey, ()), costs)
        edge_pairs += ps
    for pkey, rels in sorted(p_adj.items()):
        if pkey not in seen_pred:
            edge_pairs += [EditPair(None, Edge(pkey[0], r, pkey[1])) for r in rels]

    edge_pairs.sort(key=_pair_sort_key)
    result = EditResult(0.0, tuple(node_pairs), tuple(edge_pairs), exact)
    return EditResult(path_cost(result, costs), result.node_pairs, result.edge_pairs, exact)


# ---------------------------------------------------------------------------
# greedy upper bound


def _greedy_mapping(gold: KnowledgeGraph, pred: KnowledgeGraph) -> dict[str, Optional[str]]:
    mapping: dict[str, Optional[str]] = {}
    free_pred = sorted(pred.nodes - gold.nodes)
    rest = []
    for u in sorted(gold.nodes):
        if u in pred.nodes:
            mapping[u] = u
        else:
            rest.append(u)
    # Map remaining gold nodes to remaining pred nodes, preferring pairs that
    # share the most incident relation labels.
    g_rel = _incident_relations(gold)
    p_rel = _incident_relations(pred)
    for u in rest:
        if not free_pred:
            mapping[u] = None
            continue
        best = max(free_pred, key=lambda p: (sum((g_rel[u] & p_rel[p]).values()), [-ord(c) for c in p]))
        mapping[u] = best
        free_pred.remove(best)
    return mapping


def _incident_relations(g: KnowledgeGraph) -> dict[str, Counter]:
    rel: dict[str, Counter] = {n: Counter() for n in g.nodes}
    for e in g.edges:
        rel[e.source][("out", e.relation)] += 1
        rel[e.target][("in", e.relation)] += 1
    return rel


def greedy_ged(pred: KnowledgeGraph, gold: KnowledgeGraph, costs: CostModel = DEFAULT_COSTS) -> EditResult:
    """Deterministic label-matching upper bound; flagged ``exact=False``."""
    return _result_from_mapping(gold, pred, _greedy_mapping(gold, pred), costs, exact=False)


# ---------------------------------------------------------------------------
# exact search


class _Search:
    """DFS over gold->pred node mappings.

    In the default (fast) mode the visiting order is heuristic and every
    branch that cannot strictly beat the incumbent is cut; this yields the
    optimal cost. In ``lexicographic`` mode the search runs under a known
    optimal cost ``upper``: gold nodes and candidates are visited in sorted
    order, and among optimal leaves the one with the most matched edge pairs
    wins, earlier leaves winning ties.
    """

    def __init__(
        self,
        gold: KnowledgeGraph,
        pred: KnowledgeGraph,
        costs: CostModel,
        upper: float,
        lexicographic: bool = False,
    ):
        self.costs = costs
        self.lexicographic = lexicographic
        self.pred_order = sorted(pred.nodes)
        self.g_adj = _adjacency(gold)
        self.p_adj = _adjacency(pred)
        self.g_edges = sorted(gold.edges)
        self.p_edges = sorted(pred.edges)
        self.g_nbrs, self.g_out, self.g_in = _neighbourhoods(gold)
        self.p_nbrs, self.p_out, self.p_in = _neighbourhoods(pred)
        self.upper = upper
        self.best_cost = math.inf
        self.best_matched = -1
        self.best_mapping: Optional[dict[str, Optional[str]]] = None
        self.mapping: dict[str, Optional[str]] = {}
        self.used: set[str] = set()
        self.preimage: dict[str, str] = {}
        self.done = False
        if lexicographic:
            self.gold_order = sorted(gold.nodes)
            self.candidates = {u: self.pred_order for u in self.gold_order}
        else:
            degree: Counter = Counter()
            for e in gold.edges:
                degree[e.source] += 1
                degree[e.target] += 1
            self.gold_order = sorted(gold.nodes, key=lambda u: (-degree[u], u))
            g_rel = _incident_relations(gold)
            p_rel = _incident_relations(pred)
            self.candidates = {
                u: sorted(
                    self.pred_order,
                    key=lambda p: (p != u, -sum((g_rel[u] & p_rel[p]).values()), p),
                )
                for u in self.gold_order
            }

    def cheap_bound(self, depth: int) -> tuple[float, int]:
        """Label-multiset bound on remaining cost, and a cap on remaining edge matches."""
        c = self.costs
        rest_gold = self.gold_order[depth:]
        free_pred = [p for p in self.pred_order if p not in self.used]
        lb = _multiset_match_cost(
            Counter(rest_gold), Counter(free_pred),
            c.node_substitute_equal, c.node_substitute_unequal, c.node_delete, c.node_insert,
        )
        decided = self.mapping
        g_rest = Counter(e.relation for e in self.g_edges if e.source not in decided or e.target not in decided)
        p_rest = Counter(e.relation for e in self.p_edges if e.source not in self.used or e.target not in self.used)
        lb += _multiset_match_cost(
            g_rest, p_rest,
            c.edge_substitute_equal, c.edge_substitute_unequal, c.edge_delete, c.edge_insert,
        )
        if c.edge_relabels_allowed:
            cap = min(sum(g_rest.values()), sum(p_rest.values()))
        else:
            cap = sum((g_rest & p_rest).values())
        return lb, cap

    def branch_bound(self, depth: int) -> float:
        """Assignment bound over node stars.

        Edges to already-decided nodes (and self loops) are priced exactly for
        each candidate pairing; edges between two undecided nodes are priced
        half at each endpoint by a relation-multiset match.
        """
        c = self.costs
        rest = self.gold_order[depth:]
        free = [p for p in self.pred_order if p not in self.used]
        if not rest and not free:
            return 0.0
        rest_set, free_set = set(rest), set(free)
        mapping, preimage = self.mapping, self.preimage

        def star(out, inn, node, live):
            o = Counter(r for w, r in out[node] if w in live and w != node)
            i = Counter(r for w, r in inn[node] if w in live and w != node)
            return o, i

        def half_star(go, gi, po, pi):
            return 0.5 * (
                _multiset_match_cost(go, po, c.edge_substitute_equal, c.edge_substitute_unequal, c.edge_delete, c.edge_insert)
                + _multiset_match_cost(gi, pi, c.edge_substitute_equal, c.edge_substitute_unequal, c.edge_delete, c.edge_insert)
            )

        g_star = {u: star(self.g_out, self.g_in, u, rest_set) for u in rest}
        p_star = {p: star(self.p_out, self.p_in, p, free_set) for p in free}
        empty: Counter = Counter()
        n_r, n_f = len(rest), len(free)
        m = np.full((n_r + n_f, n_r + n_f), _FORBIDDEN)
        m[n_r:, n_f:] = 0.0
        for i, u in enumerate(rest):
            anchored = [x for x in self.g_nbrs[u] if x in mapping]
            deleted = sum(len(self.g_adj.get((u, x), ())) + len(self.g_adj.get((x, u), ())) for x in anchored)
            deleted += len(self.g_adj.get((u, u), ()))
            go, gi = g_star[u]
            m[i, n_f + i] = c.node_delete + deleted * c.edge_delete + half_star(go, gi, empty, empty)
            for j, p in enumerate(free):
                cost = c.node_substitute_equal if p == u else c.node_substitute_unequal
                xs = set(anchored)
                xs.update(preimage[q] for q in self.p_nbrs[p] if q in preimage)
                for x in xs:
                    q = mapping[x]
                    if q is None:
                        cost += (len(self.g_adj.get((u, x), ())) + len(self.g_adj.get((x, u), ()))) * c.edge_delete
                        continue
                    cost += _group_cost(self.g_adj.get((u, x), ()), self.p_adj.get((p, q), ()), c)[0]
                    cost += _group_cost(self.g_adj.get((x, u), ()), self.p_adj.get((q, p), ()), c)[0]
                cost += _group_cost(self.g_adj.get((u, u), ()), self.p_adj.get((p, p), ()), c)[0]
                po, pi = p_star[p]
                m[i, j] = cost + half_star(go, gi, po, pi)
        for j, p in enumerate(free):
            anchored_edges = sum(
                len(self.p_adj.get((p, q), ())) + len(self.p_adj.get((q, p), ()))
                for q in self.p_nbrs[p] if q in self.used
            )
            anchored_edges += len(self.p_adj.get((p, p), ()))
            po, pi = p_star[p]
            m[n_r + j, j] = c.node_insert + anchored_edges * c.edge_insert + half_star(empty, empty, po, pi)
        rows, cols = linear_sum_assignment(m)
        return float(m[rows, cols].sum())

    def step(self, u: str, p: Optional[str]) -> tuple[float, int]:
        """Cost and matched edge pairs settled by deciding ``u -> p``."""
        c = self.costs
        matched = 0
        if p is None:
            cost = c.node_delete
        elif p == u:
            cost = c.node_substitute_equal
        else:
            cost = c.node_substitute_unequal
        for w in itertools.chain(self.mapping, (u,)):
            pw = p if w == u else self.mapping[w]
            keys = [(u, w)] if w == u else [(u, w), (w, u)]
            for gk in keys:
                g_rels = self.g_adj.get(gk, ())
                if p is None or pw is None:
                    cost += len(g_rels) * c.edge_delete
                    continue
                pk = (p, pw) if gk[0] == u else (pw, p)
                p_rels = self.p_adj.get(pk, ())
                if g_rels or p_rels:
                    gc, gm = _group_cost(g_rels, p_rels, c)
                    cost += gc
                    matched += gm
        return cost, matched

    def leaf_cost(self) -> float:
        c = self.costs
        free = [p for p in self.pred_order if p not in self.used]
        cost = len(free) * c.node_insert
        cost += sum(c.edge_insert for e in self.p_edges if e.source not in self.used or e.target not in self.used)
        return cost

    def pruned(self, estimate: float, matched_cap: int) -> bool:
        if self.lexicographic:
            return estimate > self.upper + _EPS or matched_cap <= self.best_matched
        return estimate >= min(self.upper + _EPS, self.best_cost) - _EPS

    def run(self, depth: int = 0, acc: float = 0.0, acc_m: int = 0) -> None:
        if self.done:
            return
        if depth == len(self.gold_order):
            total = acc + self.leaf_cost()
            if self.lexicographic:
                if total <= self.upper + _EPS and acc_m > self.best_matched:
                    self.best_cost, self.best_matched = total, acc_m
                    self.best_mapping = dict(self.mapping)
                    self.done = acc_m >= self.match_cap
            elif total < self.best_cost - _EPS:
                self.best_cost = total
                self.best_mapping = dict(self.mapping)
            return
        u = self.gold_order[depth]
        for p in [q for q in self.candidates[u] if q not in self.used] + [None]:
            cost, matched = self.step(u, p)
            self.mapping[u] = p
            if p is not None:
                self.used.add(p)
                self.preimage[p] = u
            lb, cap = self.cheap_bound(depth + 1)
            here, here_m = acc + cost, acc_m + matched
            if not self.pruned(here + lb, here_m + cap) and not self.pruned(
                here + self.branch_bound(depth + 1), here_m + cap
            ):
                self.run(depth + 1, here, here_m)
            del self.mapping[u]
            if p is not None:
                self.used.discard(p)
                del self.preimage[p]

    def solve(self) -> None:
        self.match_cap = self.cheap_bound(0)[1]
        self.run()


def _neighbourhoods(g: KnowledgeGraph):
    nbrs: dict[str, set[str]] = {n: set() for n in g.nodes}
    out: dict[str, list[tuple[str, str]]] = {n: [] for n in g.nodes}
    inn: dict[str, list[tuple[str, str]]] = {n: [] for n in g.nodes}
    for e in g.edges:
        if e.source != e.target:
            nbrs[e.source].add(e.target)
            nbrs[e.target].add(e.source)
        out[e.source].append((e.target, e.relation))
        inn[e.target].append((e.source, e.relation))
    return nbrs, out, inn


def _group_cost(g_rels: Sequence[str], p_rels: Sequence[str], c: CostModel) -> tuple[float, int]:
    common = len(set(g_rels) & set(p_rels))
    a = len(g_rels) - common
    b = len(p_rels) - common
    k = min(a, b) if c.edge_relabels_allowed else 0
    cost = common * c.edge_substitute_equal + k * c.edge_substitute_unequal + (a - k) * c.edge_delete + (b - k) * c.edge_insert
    return cost, common + k


def ged(
    pred: KnowledgeGraph,
    gold: KnowledgeGraph,
    costs: CostModel = DEFAULT_COSTS,
    node_cap: int = DEFAULT_NODE_CAP,
) -> EditResult:
    """Graph edit distance and optimal edit path from ``pred`` to ``gold``.

    Among minimum-cost paths the one matching the most edge pairs is
    returned, and remaining ties go to the lexicographically first node
    mapping (gold labels ascending, candidates ascending, "unmapped" last).
    Graphs with more than ``node_cap`` nodes on either side get the greedy
    upper bound instead, with ``exact=False``.
    """
    if node_cap < 1:
        raise ValueError("node_cap must be >= 1")
    greedy = greedy_ged(pred, gold, costs)
    if max(len(pred.nodes), len(gold.nodes)) > node_cap:
        return greedy
    fast = _Search(gold, pred, costs, greedy.cost)
    fast.solve()
    optimum = fast.best_cost if fast.best_mapping is not None else greedy.cost
    lex = _Search(gold, pred, costs, optimum, lexicographic=True)
    lex.solve()
    assert lex.best_mapping is not None, "optimal leaf must be reachable"
    return _result_from_mapping(gold, pred, lex.best_mapping, costs, exact=True)


# ---------------------------------------------------------------------------
# brute-force oracle


def brute_force_ged(pred: KnowledgeGraph, gold: KnowledgeGraph, costs: CostModel = DEFAULT_COSTS) -> EditResult:
    """Exhaustive GED for graphs of at most six nodes; a test oracle.

    Every injective partial node mapping is enumerated, and the edge
    operations it induces are priced with a full linear assignment over all
    gold and pred edges (endpoint-inconsistent pairings forbidden).
    """
    if max(len(pred.nodes), len(gold.nodes)) > BRUTE_FORCE_LIMIT:
        raise SizeExceededError(f"brute_force_ged supports at most {BRUTE_FORCE_LIMIT} nodes per graph")

    g_nodes = sorted(gold.nodes)
    p_nodes = sorted(pred.nodes)
    g_edges = sorted(gold.edges)
    p_edges = sorted(pred.edges)
    ng, npr = len(g_edges), len(p_edges)
    big = 1e9

    best: Optional[tuple[float, dict, list, int]] = None
    choices = p_nodes + [None]
    for assignment in itertools.product(choices, repeat=len(g_nodes)):
        images = [p for p in assignment if p is not None]
        if len(images) != len(set(images)):
            continue
        mapping = dict(zip(g_nodes, assignment))
        node_cost = 0.0
        for u, p in mapping.items():
            node_cost += node_pair_cost(EditPair(u, p), costs)
        node_cost += costs.node_insert * (len(p_nodes) - len(images))
        if best is not None and node_cost > best[0] + _EPS:
            continue

        # (ng + npr) square matrix: real pairings, deletions, insertions, dummy-dummy.
        size = ng + npr
        if size == 0:
            edge_cost, edge_pairs = 0.0, []
        else:
            m = np.full((size, size), big)
            for i, ge in enumerate(g_edges):
                m[i, npr + i] = costs.edge_delete
                for j, pe in enumerate(p_edges):
                    if mapping[ge.source] == pe.source and mapping[ge.target] == pe.target:
                        if ge.relation == pe.relation:
                            m[i, j] = costs.edge_substitute_equal
                        elif costs.edge_relabels_allowed:
                            m[i, j] = costs.edge_substitute_unequal
            for j in range(npr):
                m[ng + j, j] = costs.edge_insert
            m[ng:, npr:] = 0.0
            rows, cols = linear_sum_assignment(m)
            edge_cost = float(m[rows, cols].sum())
            edge_pairs = []
            for i, j in zip(rows, cols):
                if i < ng and j < npr:
                    edge_pairs.append(EditPair(g_edges[i], p_edges[j]))
                elif i < ng:
                    edge_pairs.append(EditPair(g_edges[i], None))
                elif j < npr:
                    edge_pairs.append(EditPair(None, p_edges[j]))
        total = node_cost + edge_cost
        matched = sum(1 for p in edge_pairs if p.gold is not None and p.pred is not None)
        if best is None or total < best[0] - _EPS or (total <= best[0] + _EPS and matched > best[3]):
            best = (total, mapping, edge_pairs, matched)

    if best is None:
        return EditResult(0.0, (), (), True)
    total, mapping, edge_pairs, _ = best
    used = {p for p in mapping.values() if p is not None}
    node_pairs = [EditPair(u, mapping[u]) for u in g_nodes] + [EditPair(None, p) for p in p_nodes if p not in used]
    return EditResult(total, tuple(node_pairs), tuple(sorted(edge_pairs, key=_pair_sort_key)), True)


# ---------------------------------------------------------------------------
# rates


def rates_from_path(result: EditResult, mode: RateMode = "edges") -> RateReport:
    if mode == "edges":
        pairs: Iterable[EditPair] = result.edge_pairs
    elif mode == "nodes":
        pairs = result.node_pairs
    elif mode == "nodes_and_edges":
        pairs = itertools.chain(result.node_pairs, result.edge_pairs)
    else:
        raise ValueError(f"unknown rate mode {mode!r}")
    h = o = n = 0
    for p in pairs:
        n += 1
        h += p.gold is None
        o += p.pred is None
    return RateReport(h, o, n)


def legacy_rates(reports: Sequence[RateReport]) -> LegacyRates:
    """Fraction of graphs with at least one hallucination / omission."""
    if not reports:
        raise ValueError("legacy_rates needs at least one report")
    total = len(reports)
    hall = sum(1 for r in reports if r.h >= 1)
    omiss = sum(1 for r in reports if r.o >= 1)
    return LegacyRates(hall / total, omiss / total, total)
