import itertools
import random

import pytest

from leadertrack.graph import SnapshotGraph


def random_graph(rng: random.Random, n: int, p: float, t: int = 1) -> SnapshotGraph:
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    return SnapshotGraph.from_edges(edges, t=t, nodes=range(n))


def clique_edges(nodes):
    return list(itertools.combinations(nodes, 2))


def brute_force_maximal_cliques(g: SnapshotGraph) -> set[frozenset[int]]:
    nodes = sorted(g.nodes)
    adj = g.adjacency
    cliques = []
    for r in range(1, len(nodes) + 1):
        for combo in itertools.combinations(nodes, r):
            if all(b in adj[a] for a, b in itertools.combinations(combo, 2)):
                cliques.append(frozenset(combo))
    return {c for c in cliques if not any(c < d for d in cliques)}


@pytest.fixture
def rng():
    return random.Random(12345)


def plain_bron_kerbosch(g: SnapshotGraph) -> set[frozenset[int]]:
    """Textbook Bron-Kerbosch without pivoting or ordering, for graphs too big for subsets."""
    adj = g.adjacency
    out: set[frozenset[int]] = set()

    def rec(r, p, x):
        if not p and not x:
            out.add(frozenset(r))
            return
        for v in list(p):
            rec(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    rec(set(), set(g.nodes), set())
    return out


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
