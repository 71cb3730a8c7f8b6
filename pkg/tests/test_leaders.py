import itertools
import random

import pytest

from conftest import brute_force_maximal_cliques, clique_edges, plain_bron_kerbosch, random_graph
from leadertrack.errors import ContractViolation
from leadertrack.graph import SnapshotGraph
from leadertrack.leaders import LeaderSet, detect_leaders, find_anchor, is_clique


def definition_oracle(g, members, enumerate_cliques=brute_force_maximal_cliques):
    members = frozenset(members)
    anchor = min(members, key=lambda v: (-len(g.neighbors(v) & members), v))
    sub = g.subgraph(members)
    through = [c for c in enumerate_cliques(sub) if anchor in c]
    return anchor, frozenset.intersection(*through)


def test_triangle_community_all_leaders():
    g = SnapshotGraph.from_edges(clique_edges([0, 1, 2]))
    ls = detect_leaders(g, {0, 1, 2}, community_id=4)
    assert ls.anchor == 0
    assert ls.leaders == {0, 1, 2}
    assert ls.community_id == 4


def test_k4_with_pendant():
    a, b, c, d, e = range(5)
    g = SnapshotGraph.from_edges(clique_edges([a, b, c, d]) + [(d, e)])
    ls = detect_leaders(g, {a, b, c, d, e})
    assert ls.anchor == d
    assert ls.leaders == {d}


def test_search_restricted_to_members():
    # outside node 9 would form a bigger clique with the anchor's neighbours
    g = SnapshotGraph.from_edges(clique_edges([0, 1, 2]) + [(0, 9), (1, 9), (2, 9), (3, 0)])
    ls = detect_leaders(g, {0, 1, 2, 3})
    assert ls.anchor == 0
    assert ls.leaders == {0}
    assert detect_leaders(g, {0, 1, 2}).leaders == {0, 1, 2}


def test_singleton_and_disconnected_members():
    g = SnapshotGraph.from_edges([(0, 1)], nodes=[2])
    assert detect_leaders(g, {2}).leaders == {2}
    assert detect_leaders(g, {0, 2}).leaders == {0}


def test_errors():
    g = SnapshotGraph.from_edges([(0, 1)])
    with pytest.raises(ContractViolation):
        detect_leaders(g, set())
    with pytest.raises(ContractViolation):
        detect_leaders(g, {0, 5})
    with pytest.raises(ContractViolation):
        LeaderSet(frozenset({1}), 0)


def test_dense_planted_community_matches_definition():
    rng = random.Random(31)
    for _ in range(10):
        members = list(range(20))
        edges = [(u, v) for u, v in itertools.combinations(members, 2) if rng.random() < 0.9]
        edges += [(u, rng.randint(20, 40)) for u in members if rng.random() < 0.5]
        g = SnapshotGraph.from_edges(edges, nodes=range(41))
        ls = detect_leaders(g, members)
        anchor, leaders = definition_oracle(g, members, plain_bron_kerbosch)
        assert (ls.anchor, ls.leaders) == (anchor, leaders)


def test_random_communities_match_definition():
    rng = random.Random(8)
    for _ in range(150):
        g = random_graph(rng, rng.randint(1, 12), rng.choice([0.3, 0.6, 0.9]))
        members = [v for v in g if rng.random() < 0.7] or [0]
        ls = detect_leaders(g, members)
        assert (ls.anchor, ls.leaders) == definition_oracle(g, members)
        assert is_clique(g, ls.leaders)


def test_find_anchor_tie_break():
    g = SnapshotGraph.from_edges([(3, 4), (5, 6)])
    assert find_anchor(g, {3, 4, 5, 6}) == 3


def test_leader_set_iterates_sorted():
    ls = LeaderSet(frozenset({5, 1, 3}), 3)
    assert list(ls) == [1, 3, 5]
    assert 5 in ls and len(ls) == 3
