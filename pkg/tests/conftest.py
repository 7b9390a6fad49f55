import json
import random

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from kgeval.graph import Edge, KnowledgeGraph

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

NODE_ALPHABET = "abcdef"
REL_ALPHABET = ("r", "s", "t")


@st.composite
def small_graphs(draw, max_nodes=4, alphabet=NODE_ALPHABET, relations=REL_ALPHABET, max_edges=6):
    nodes = draw(st.lists(st.sampled_from(alphabet), min_size=0, max_size=max_nodes, unique=True))
    if not nodes:
        return KnowledgeGraph()
    edges = draw(
        st.lists(
            st.tuples(st.sampled_from(nodes), st.sampled_from(relations), st.sampled_from(nodes)),
            max_size=max_edges,
            unique=True,
        )
    )
    return KnowledgeGraph(frozenset(nodes), frozenset(Edge(*e) for e in edges))


def random_graph(rng: random.Random, max_nodes: int, alphabet=NODE_ALPHABET, relations=REL_ALPHABET, max_edges=None):
    n = rng.randint(0, max_nodes)
    nodes = rng.sample(list(alphabet), n)
    if not nodes:
        return KnowledgeGraph()
    m = rng.randint(0, max_edges if max_edges is not None else 2 * n)
    edges = {Edge(rng.choice(nodes), rng.choice(relations), rng.choice(nodes)) for _ in range(m)}
    return KnowledgeGraph(frozenset(nodes), frozenset(edges))


def G(*edges):
    return KnowledgeGraph.from_edges(edges)


@pytest.fixture
def mixed_fixture():
    """Gold with 3 edges; prediction keeps one, drops two, invents one."""
    gold = G(("a", "r1", "b"), ("a", "r2", "c"), ("d", "r3", "e"))
    pred = G(("a", "r1", "b"), ("x", "r4", "y"))
    return pred, gold


ENTITIES = ["Alan Bean", "Apollo 12", "NASA", "Wheeler, Texas", "Test pilot", "1932", "Sue Ragsdale", "Houston"]
RELATIONS = ["occupation", "crewMember", "operator", "birthPlace", "birthDate", "spouse", "almaMater"]


def synthetic_records(n: int, seed: int = 0) -> list[dict]:
    """JSON-lines style records with a spread of prediction failure modes."""
    rng = random.Random(seed)
    out = []
    for i in range(n):
        k = rng.randint(1, 4)
        gold = [[rng.choice(ENTITIES), rng.choice(RELATIONS), rng.choice(ENTITIES)] for _ in range(k)]
        pred = [list(t) for t in gold]
        style = i % 6
        if style == 1 and pred:
            pred.pop(rng.randrange(len(pred)))
        elif style == 2:
            pred.append([rng.choice(ENTITIES), rng.choice(RELATIONS), "Moon"])
        elif style == 3:
            pred[0][1] = pred[0][1].upper()
        elif style == 4:
            pred[0][1] = "job"
        rec = {"id": f"ex{i:04d}", "text": "", "gold_triples": gold}
        if i % 5 == 0:
            rec["predicted_triples"] = pred
        elif i % 7 == 0:
            rec["predicted_raw"] = "Sorry, I can't do that."
        else:
            body = json.dumps(pred)
            rec["predicted_raw"] = f"Here are the triples:\n```json\n{body}\n```" if i % 2 else body
        out.append(rec)
    return out


def write_jsonl(path, records) -> None:
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
