"""Modularity and a seeded Louvain clusterer.

Used to bootstrap the first snapshot, to cluster nodes left over after
leader-seeded expansion, and as the independent per-snapshot baseline.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import AbstractSet, Iterable, Sequence

from .errors import ContractViolation, UndefinedObjectiveError
from .graph import NodeId, SnapshotGraph


@dataclass
class StaticPartition:
    communities: list[frozenset[NodeId]]
    modularity: float
    # modularity after the singleton start and after each aggregation level
    history: list[float] = field(default_factory=list)


def _check_cover(nodes: AbstractSet[NodeId], partition: Sequence[AbstractSet[NodeId]]) -> None:
    seen: set[NodeId] = set()
    for c in partition:
        if seen & c:
            raise ContractViolation("partition communities overlap")
        seen |= c
    if seen != nodes:
        raise ContractViolation("partition does not cover the graph's node set exactly")


def modularity(g: SnapshotGraph, partition: Sequence[Iterable[NodeId]]) -> float:
    """Newman modularity ``sum_c e_c/m - (d_c / 2m)^2``."""
    parts = [frozenset(c) for c in partition]
    _check_cover(g.nodes, parts)
    m = g.m
    if m == 0:
        raise UndefinedObjectiveError("modularity is undefined for a graph without edges")
    adj = g.adjacency
    q = 0.0
    for c in parts:
        inside = 0
        total = 0
        for v in c:
            nbrs = adj[v]
            total += len(nbrs)
            inside += len(nbrs & c)
        q += (inside / 2) / m - (total / (2 * m)) ** 2
    return q


class _Level:
    """Weighted graph used internally between aggregation rounds."""

    def __init__(self, nbrs: list[dict[int, float]], loops: list[float]):
        self.nbrs = nbrs
        self.loops = loops
        self.k = [sum(w.values()) + 2 * loops[i] for i, w in enumerate(nbrs)]
        self.m2 = sum(self.k)

    def __len__(self) -> int:
        return len(self.nbrs)

    def modularity(self, comm: list[int]) -> float:
        inside: dict[int, float] = {}
        tot: dict[int, float] = {}
        for i, c in enumerate(comm):
            tot[c] = tot.get(c, 0.0) + self.k[i]
            w_in = 2 * self.loops[i]
            for j, w in self.nbrs[i].items():
                if comm[j] == c:
                    w_in += w
            inside[c] = inside.get(c, 0.0) + w_in
        return sum(inside[c] / self.m2 - (tot[c] / self.m2) ** 2 for c in tot)


def _move_nodes(level: _Level, rng: random.Random) -> tuple[list[int], bool]:
    n = len(level)
    comm = list(range(n))
    tot = list(level.k)
    m2 = level.m2
    order = list(range(n))
    rng.shuffle(order)
    moved_any = False
    improved = True
    while improved:
        improved = False
        for i in order:
            ki = level.k[i]
            if ki == 0:
                continue
            old = comm[i]
            links: dict[int, float] = {}
            for j, w in level.nbrs[i].items():
                c = comm[j]
                links[c] = links.get(c, 0.0) + w
            tot[old] -= ki
            best = old
            best_gain = links.get(old, 0.0) - tot[old] * ki / m2
            for c, w in links.items():
                gain = w - tot[c] * ki / m2
                if gain > best_gain + 1e-12:
                    best, best_gain = c, gain
            tot[best] += ki
            if best != old:
                comm[i] = best
                improved = True
                moved_any = True
    return comm, moved_any


def _aggregate(level: _Level, comm: list[int]) -> tuple[_Level, list[int]]:
    relabel: dict[int, int] = {}
    for c in comm:
        if c not in relabel:
            relabel[c] = len(relabel)
    dense = [relabel[c] for c in comm]
    size = len(relabel)
    nbrs: list[dict[int, float]] = [dict() for _ in range(size)]
    loops = [0.0] * size
    for i, ci in enumerate(dense):
        loops[ci] += level.loops[i]
        for j, w in level.nbrs[i].items():
            cj = dense[j]
            if ci == cj:
                # each internal edge is seen from both ends
                loops[ci] += w / 2
            else:
                nbrs[ci][cj] = nbrs[ci].get(cj, 0.0) + w
    return _Level(nbrs, loops), dense


def cluster_static(g: SnapshotGraph, seed: int = 0) -> StaticPartition:
    """Louvain: local node moves then aggregation, until no node moves.

    Node visit order at every level is shuffled by ``seed``. Modularity never
    decreases from one level to the next; ``history`` records it per level.
    """
    nodes = sorted(g.nodes)
    if not nodes:
        return StaticPartition([], 0.0, [])
    if g.m == 0:
        return StaticPartition([frozenset((v,)) for v in nodes], 0.0, [])

    index = {v: i for i, v in enumerate(nodes)}
    adj = g.adjacency
    level = _Level([{index[u]: 1.0 for u in adj[v]} for v in nodes], [0.0] * len(nodes))
    rng = random.Random(seed)
    membership = list(range(len(nodes)))
    history = [level.modularity(list(range(len(level))))]
    while True:
        comm, moved = _move_nodes(level, rng)
        if not moved:
            break
        history.append(level.modularity(comm))
        level, dense = _aggregate(level, comm)
        membership = [dense[c] for c in membership]

    groups: dict[int, list[NodeId]] = {}
    for v, c in zip(nodes, membership):
        groups.setdefault(c, []).append(v)
    communities = [frozenset(members) for members in groups.values()]
    communities.sort(key=min)
    return StaticPartition(communities, modularity(g, communities), history)


def cluster_leftovers(g: SnapshotGraph, unassigned: Iterable[NodeId], seed: int = 0) -> list[frozenset[NodeId]]:
    """Cluster the subgraph induced by ``unassigned``; isolated nodes stay alone."""
    unassigned = set(unassigned)
    if not unassigned:
        return []
    return cluster_static(g.subgraph(unassigned), seed).communities
