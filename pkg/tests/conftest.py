"""Shared fixtures and independent oracles used across the test suite.

The reachability helpers here deliberately avoid the library's own traversal
code: they are plain breadth-first walks over raw edge lists, so that the
engine can be checked against something that cannot share its bugs.
"""

import pytest

from kbir import (
    Entity,
    Facet,
    KbInputs,
    RelationCategory,
    RelationInstance,
    RelationType,
    ServiceState,
    load_dataset,
)

GENERIC_TYPE = RelationType(
    "HierarchicalRelation",
    RelationCategory.GENERIC_HIERARCHY,
    "broaderTermMember",
    "narrowerTermMember",
)

# Query texts exercised throughout the suite (service, CLI, acceptance).
METHODOLOGY_QUERY = "Methodology($TOPIC : isMethodOf, indexing : isAdopting)?"
USAGE_QUERY = "Usage($TOPIC : isInstrumentOf, indexing : isUsing)?"
PRODUCTION_QUERY = (
    "Production($TOPIC : isProducing, $PRODUCT : isProductOf),\n"
    "narrower-term(controlled_vocabularies, $PRODUCT)?"
)
PRODUCTION_INVERSE_QUERY = (
    "Production($TOPIC : isProductOf, $PRODUCT : isProducing),\n"
    "narrower-term(controlled_vocabularies, $PRODUCT)?"
)


def make_forest(rng, max_nodes=60, p_child=0.9):
    """Random generic forest; returns (kb, edges) with edges as (parent, child).

    Each node attaches to at most one earlier node, which guarantees a forest
    (no cycles, no polyhierarchy) by construction.
    """
    n = rng.randint(3, max_nodes)
    ids = ["n%03d" % i for i in range(n)]
    edges = []
    for i in range(1, n):
        if rng.random() < p_child:
            edges.append((ids[rng.randrange(i)], ids[i]))
    inputs = KbInputs(
        facets=(Facet("f", "Forest"),),
        entities=tuple(Entity(i, i, "f") for i in ids),
        relation_types=(GENERIC_TYPE,),
        relation_instances=tuple(
            RelationInstance("HierarchicalRelation", s, t) for s, t in edges
        ),
        composition_overrides={},
    )
    return inputs.build(), edges


def child_map(edges):
    out = {}
    for s, t in edges:
        out.setdefault(s, set()).add(t)
    return out


def parent_map(edges):
    return {t: s for s, t in edges}


def below(edges, start):
    """All nodes strictly below start (breadth-first over the raw edges)."""
    kids = child_map(edges)
    seen = set()
    frontier = [start]
    while frontier:
        nxt = []
        for node in frontier:
            for c in kids.get(node, ()):
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return seen


def above(edges, start):
    """All nodes strictly above start (walking the unique parent chain)."""
    parents = parent_map(edges)
    out = set()
    node = start
    while node in parents:
        node = parents[node]
        out.add(node)
    return out


def within_below(edges, start, k):
    """Nodes reachable downward in at most k steps, start included."""
    kids = child_map(edges)
    seen = {start}
    frontier = {start}
    for _ in range(k):
        frontier = {c for node in frontier for c in kids.get(node, set())} - seen
        if not frontier:
            break
        seen |= frontier
    return seen


def within_above(edges, start, k):
    """Nodes reachable upward in at most k steps, start included."""
    parents = parent_map(edges)
    out = {start}
    node = start
    for _ in range(k):
        if node not in parents:
            break
        node = parents[node]
        out.add(node)
    return out


@pytest.fixture(scope="session")
def asist():
    return load_dataset("asist")


@pytest.fixture(scope="session")
def asist_kb(asist):
    return asist[0]


@pytest.fixture(scope="session")
def asist_corpus(asist):
    return asist[1]


@pytest.fixture(scope="session")
def asist_state(asist):
    kb, corpus = asist
    return ServiceState.from_kb(kb, corpus)


@pytest.fixture(scope="session")
def songbirds():
    return load_dataset("songbirds")


@pytest.fixture(scope="session")
def songbirds_kb(songbirds):
    return songbirds[0]


def pytest_terminal_summary(terminalreporter):
    """Print one pass/fail line per acceptance criterion at the end of a run."""
    verdicts = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py::" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            if status == "passed" and getattr(report, "when", "call") != "call":
                continue
            if status == "passed":
                verdicts.setdefault(name, "PASS")
            else:
                verdicts[name] = "FAIL"
    if verdicts:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name in sorted(verdicts):
            terminalreporter.write_line("%s  %s" % (verdicts[name], name))
