import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgeval.ged import (
    CostModel,
    EditPair,
    RateReport,
    SizeExceededError,
    brute_force_ged,
    ged,
    greedy_ged,
    legacy_rates,
    path_cost,
    rates_from_path,
)
from kgeval.graph import Edge, KnowledgeGraph, graphs_identical

from conftest import G, random_graph, small_graphs

EMPTY = KnowledgeGraph()


def check_path(result, pred, gold):
    """Every element appears exactly once and edge pairs respect the node mapping."""
    golds = [p.gold for p in result.node_pairs if p.gold is not None]
    preds = [p.pred for p in result.node_pairs if p.pred is not None]
    assert sorted(golds) == sorted(gold.nodes)
    assert sorted(preds) == sorted(pred.nodes)
    gold_e = [p.gold for p in result.edge_pairs if p.gold is not None]
    pred_e = [p.pred for p in result.edge_pairs if p.pred is not None]
    assert sorted(gold_e) == sorted(gold.edges)
    assert sorted(pred_e) == sorted(pred.edges)
    mapping = {p.gold: p.pred for p in result.node_pairs if p.gold is not None}
    for p in result.edge_pairs:
        if p.gold is not None and p.pred is not None:
            assert mapping[p.gold.source] == p.pred.source
            assert mapping[p.gold.target] == p.pred.target


# --- worked examples --------------------------------------------------------


def test_identity():
    g = G(("a", "r", "b"), ("b", "s", "c"))
    r = ged(g, g)
    assert r.cost == 0 and r.exact
    assert all(p.gold == p.pred for p in r.node_pairs + r.edge_pairs)


def test_single_node_substitution():
    r = ged(G(("a", "r", "c")), G(("a", "r", "b")))
    assert r.cost == 1
    assert EditPair("b", "c") in r.node_pairs
    assert brute_force_ged(G(("a", "r", "c")), G(("a", "r", "b"))).cost == 1


def test_empty_prediction():
    gold = G(("a", "r", "b"))
    assert ged(EMPTY, gold).cost == 3
    assert brute_force_ged(EMPTY, gold).cost == 3


def test_brute_force_small_cases():
    assert brute_force_ged(EMPTY, EMPTY).cost == 0
    a = KnowledgeGraph(frozenset({"a"}))
    b = KnowledgeGraph(frozenset({"b"}))
    assert brute_force_ged(a, b).cost == 1


def test_brute_force_size_limit():
    big = G(*[(f"n{i}", "r", f"n{i + 1}") for i in range(7)])
    with pytest.raises(SizeExceededError):
        brute_force_ged(big, big)


def test_mixed_fixture(mixed_fixture):
    pred, gold = mixed_fixture
    oracle = brute_force_ged(pred, gold)
    assert oracle.cost == 6
    r = ged(pred, gold)
    assert r.cost == 6
    rate = rates_from_path(r)
    assert (rate.h, rate.o, rate.n) == (1, 2, 4)
    assert rate.hall_rate == 0.25 and rate.omis_rate == 0.5
    assert rates_from_path(oracle) == rate
    # Lexicographic tie-break among the equal-cost node mappings.
    assert EditPair("c", "x") in r.node_pairs and EditPair("d", "y") in r.node_pairs
    assert EditPair("e", None) in r.node_pairs


def test_fresh_extra_edge():
    gold = G(("a", "r", "b"), ("b", "s", "c"))
    pred = G(("a", "r", "b"), ("b", "s", "c"), ("u", "q", "v"))
    for result in (ged(pred, gold), brute_force_ged(pred, gold)):
        rate = rates_from_path(result)
        assert rate.n == 3 and rate.hall_rate == pytest.approx(1 / 3, abs=0) and rate.omis_rate == 0


def test_rates_identity_all_modes():
    g = G(("a", "r", "b"))
    for mode in ("edges", "nodes", "nodes_and_edges"):
        rate = rates_from_path(ged(g, g), mode)
        assert rate.hall_rate == 0 and rate.omis_rate == 0


def test_rates_modes_on_mixed_fixture(mixed_fixture):
    pred, gold = mixed_fixture
    r = ged(pred, gold)
    nodes = rates_from_path(r, "nodes")
    assert (nodes.h, nodes.o, nodes.n) == (0, 1, 5)
    both = rates_from_path(r, "nodes_and_edges")
    assert (both.h, both.o, both.n) == (1, 3, 9)
    with pytest.raises(ValueError):
        rates_from_path(r, "triples")


def test_empty_graphs_give_zero_rates():
    rate = rates_from_path(ged(EMPTY, EMPTY))
    assert rate == RateReport(0, 0, 0)
    assert rate.hall_rate == 0 and rate.omis_rate == 0


def test_legacy_rates():
    lr = legacy_rates([RateReport(0, 0, 2), RateReport(2, 0, 4)])
    assert (lr.hall_fraction, lr.omis_fraction, lr.total_graphs) == (0.5, 0.0, 2)
    assert legacy_rates([RateReport(0, 0, 3)] * 3).hall_fraction == 0
    lr = legacy_rates([RateReport(1, 1, 3)])
    assert (lr.hall_fraction, lr.omis_fraction) == (1.0, 1.0)
    with pytest.raises(ValueError):
        legacy_rates([])


def test_rate_report_invariants():
    with pytest.raises(ValueError):
        RateReport(2, 2, 3)
    with pytest.raises(ValueError):
        EditPair(None, None)


def test_cost_model_validation():
    with pytest.raises(ValueError):
        CostModel(node_insert=-1)
    with pytest.raises(ValueError):
        CostModel(node_substitute_unequal=2)
    assert not CostModel().edge_relabels_allowed
    assert CostModel(edge_substitute_unequal=1).edge_relabels_allowed


def test_relation_rewrite_is_delete_plus_insert():
    gold = G(("a", "r", "b"))
    pred = G(("a", "s", "b"))
    r = ged(pred, gold)
    assert r.cost == 2
    rate = rates_from_path(r)
    assert (rate.h, rate.o, rate.n) == (1, 1, 2)


def test_relabel_substitution_when_allowed():
    costs = CostModel(edge_substitute_unequal=1)
    gold = G(("a", "r", "b"))
    pred = G(("a", "s", "b"))
    r = ged(pred, gold, costs)
    assert r.cost == 1
    assert rates_from_path(r) == RateReport(0, 0, 1)


def test_parallel_edges_and_self_loops():
    gold = G(("a", "r", "b"), ("a", "s", "b"), ("a", "t", "a"))
    pred = G(("a", "r", "b"), ("a", "t", "a"), ("b", "t", "b"))
    r = ged(pred, gold)
    assert r.cost == brute_force_ged(pred, gold).cost == 2
    check_path(r, pred, gold)


def test_node_cap_fallback_is_flagged():
    gold = G(*[(f"n{i}", f"r{i}", f"n{i + 1}") for i in range(5)])
    pred = G(*[(f"n{i}", f"r{i}", f"n{i + 1}") for i in range(4)])
    approx = ged(pred, gold, node_cap=3)
    assert not approx.exact
    exact = ged(pred, gold)
    assert exact.exact and approx.cost >= exact.cost
    assert path_cost(approx) == approx.cost
    with pytest.raises(ValueError):
        ged(pred, gold, node_cap=0)


def test_isolated_nodes():
    gold = KnowledgeGraph(frozenset({"a", "b"}))
    pred = KnowledgeGraph(frozenset({"a", "c", "d"}))
    assert ged(pred, gold).cost == brute_force_ged(pred, gold).cost == 2


# --- properties ------------------------------------------------------------


def test_oracle_equivalence_random_4_nodes():
    rng = random.Random(1234)
    for _ in range(250):
        a, b = random_graph(rng, 4), random_graph(rng, 4)
        assert ged(a, b).cost == brute_force_ged(a, b).cost


@pytest.mark.parametrize("seed", range(3))
def test_oracle_equivalence_5_nodes_random_costs(seed):
    rng = random.Random(seed)
    for _ in range(25):
        ins, dele = rng.choice([1, 2, 3]), rng.choice([1, 2, 3])
        costs = CostModel(
            node_insert=ins,
            node_delete=dele,
            node_substitute_unequal=rng.choice([0.5, 1, ins + dele - 0.5]),
            edge_insert=rng.choice([1, 2]),
            edge_delete=rng.choice([1, 2]),
            edge_substitute_unequal=rng.choice([0.5, 1, 3, 5]),
        )
        a, b = random_graph(rng, 5, "abcdefg"), random_graph(rng, 5, "abcdefg")
        r = ged(a, b, costs)
        assert r.cost == pytest.approx(brute_force_ged(a, b, costs).cost, abs=1e-9)
        assert path_cost(r, costs) == pytest.approx(r.cost, abs=1e-9)


@given(small_graphs(), small_graphs())
def test_path_consistency(a, b):
    r = ged(a, b)
    assert path_cost(r) == r.cost
    check_path(r, a, b)


@given(small_graphs(), small_graphs())
def test_identical_iff_zero(a, b):
    assert graphs_identical(a, b) == (ged(a, b).cost == 0)


@given(small_graphs(max_nodes=5), small_graphs(max_nodes=5))
def test_symmetric_cost(a, b):
    assert ged(a, b).cost == ged(b, a).cost


def test_symmetric_counts_swap():
    rng = random.Random(7)
    for _ in range(200):
        a, b = random_graph(rng, 4, "abcdefghij", ("r", "s", "t", "u")), random_graph(rng, 4, "abcdefghij", ("r", "s", "t", "u"))
        ab, ba = rates_from_path(ged(a, b)), rates_from_path(ged(b, a))
        assert (ab.h, ab.o, ab.n) == (ba.o, ba.h, ba.n)


@settings(max_examples=60)
@given(small_graphs(), small_graphs(), small_graphs())
def test_triangle_inequality(a, b, c):
    assert ged(a, c).cost <= ged(a, b).cost + ged(b, c).cost


def test_greedy_is_upper_bound():
    rng = random.Random(5)
    for _ in range(100):
        a, b = random_graph(rng, 5, "abcdefg"), random_graph(rng, 5, "abcdefg")
        assert greedy_ged(a, b).cost >= ged(a, b).cost


def test_deterministic_paths():
    rng = random.Random(11)
    for _ in range(30):
        a, b = random_graph(rng, 8, "abcdefghijkl"), random_graph(rng, 8, "abcdefghijkl")
        assert ged(a, b) == ged(a, b)


def test_rate_recovery_small():
    gold = G(("a", "r1", "b"), ("b", "r2", "c"), ("c", "r3", "d"), ("d", "r4", "e"))
    edges = sorted(gold.edges)
    for m in range(len(edges) + 1):
        for dropped in itertools.combinations(edges, m):
            pred = KnowledgeGraph.from_edges(set(edges) - set(dropped))
            rate = rates_from_path(ged(pred, gold))
            assert rate.omis_rate == m / len(edges) and rate.hall_rate == 0
