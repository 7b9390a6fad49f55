import random

import pytest

from conftest import G
from kgeval.calibration import PerturbationPlan, PlanError, measure, perturb, random_gold, recovery_check
from kgeval.ged import brute_force_ged, rates_from_path


def test_random_gold_is_connected_tree_with_unique_labels():
    g = random_gold(9, seed=3)
    assert len(g.nodes) == 9 and len(g.edges) == 8
    assert len({e.relation for e in g.edges}) == 8
    seen, frontier = {"entity 0"}, ["entity 0"]
    while frontier:
        u = frontier.pop()
        for e in g.edges:
            for a, b in ((e.source, e.target), (e.target, e.source)):
                if a == u and b not in seen:
                    seen.add(b)
                    frontier.append(b)
    assert seen == g.nodes


def test_random_gold_deterministic():
    assert random_gold(7, 11) == random_gold(7, 11)
    with pytest.raises(ValueError):
        random_gold(1)


def test_perturb_counts_and_freshness():
    gold = random_gold(8, 1)
    pred, expected = perturb(gold, PerturbationPlan(5, insertions=2, deletions=2, relabels=1))
    assert len(pred.edges) == 7 - 2 - 1 + 1 + 2
    assert len(pred.edges & gold.edges) == 4
    new_rels = {e.relation for e in pred.edges} - {e.relation for e in gold.edges}
    assert len(new_rels) == 3
    assert (expected.h, expected.o, expected.n) == (3, 3, 10)


def test_plan_validation():
    gold = random_gold(4, 0)
    with pytest.raises(PlanError):
        perturb(gold, PerturbationPlan(deletions=3, relabels=1))
    with pytest.raises(PlanError):
        perturb(gold, PerturbationPlan(insertions=-1))


def test_plan_is_seeded():
    gold = random_gold(10, 2)
    plan = PerturbationPlan(seed=9, insertions=1, deletions=2, relabels=2)
    assert perturb(gold, plan) == perturb(gold, plan)


@pytest.mark.parametrize("seed", range(4))
@pytest.mark.parametrize("ins,dels,rel", [(1, 0, 0), (0, 2, 0), (0, 0, 1), (1, 1, 1), (0, 4, 0)])
def test_small_plans_agree_with_oracle(seed, ins, dels, rel):
    # A 4-cycle keeps the prediction within the brute-force size limit.
    gold = G(("p", "r0", "q"), ("q", "r1", "s"), ("s", "r2", "t"), ("t", "r3", "p"))
    plan = PerturbationPlan(seed, ins, dels, rel)
    pred, expected = perturb(gold, plan)
    oracle = rates_from_path(brute_force_ged(pred, gold))
    assert (oracle.h, oracle.o, oracle.n) == (expected.h, expected.o, expected.n)
    assert recovery_check(gold, plan)


def test_mixed_plans_recovered():
    rng = random.Random(42)
    for _ in range(100):
        n = rng.randint(3, 9)
        gold = random_gold(n, rng.randrange(10**6))
        e = n - 1
        dels = rng.randint(0, e)
        rel = rng.randint(0, e - dels)
        ins = rng.randint(0, 1)
        plan = PerturbationPlan(rng.randrange(10**6), ins, dels, rel)
        measured, expected = measure(gold, plan)
        assert (measured.h, measured.o, measured.n) == (expected.h, expected.o, expected.n), plan
