"""Maximal clique enumeration.

Bron-Kerbosch with Tomita pivoting, run from each vertex over a degeneracy
ordering (Eppstein, Loeffler & Strash). Works on plain adjacency mappings so
callers can enumerate inside induced subgraphs without building a
:class:`SnapshotGraph`.
"""

from __future__ import annotations

from typing import AbstractSet, Iterator, Mapping

from .graph import NodeId, SnapshotGraph

Adjacency = Mapping[NodeId, AbstractSet[NodeId]]


def degeneracy_order(adj: Adjacency) -> list[NodeId]:
    """Repeatedly remove a minimum-degree vertex (bucket queue, O(n + m))."""
    deg = {v: len(nbrs) for v, nbrs in adj.items()}
    if not deg:
        return []
    buckets: list[set[NodeId]] = [set() for _ in range(max(deg.values()) + 1)]
    for v, d in deg.items():
        buckets[d].add(v)
    order = []
    removed: set[NodeId] = set()
    lo = 0
    for _ in range(len(deg)):
        while not buckets[lo]:
            lo += 1
        v = min(buckets[lo])
        buckets[lo].discard(v)
        order.append(v)
        removed.add(v)
        for u in adj[v]:
            if u in removed:
                continue
            d = deg[u]
            buckets[d].discard(u)
            deg[u] = d - 1
            buckets[d - 1].add(u)
        lo = max(lo - 1, 0)
    return order


def _bk_pivot(
    adj: Adjacency, r: list[NodeId], p: set[NodeId], x: set[NodeId]
) -> Iterator[frozenset[NodeId]]:
    if not p and not x:
        yield frozenset(r)
        return
    pivot = max(p | x, key=lambda u: (len(p & adj[u]), -u))
    for v in sorted(p - adj[pivot]):
        nv = adj[v]
        r.append(v)
        yield from _bk_pivot(adj, r, p & nv, x & nv)
        r.pop()
        p.discard(v)
        x.add(v)


def iter_maximal_cliques(adj: Adjacency) -> Iterator[frozenset[NodeId]]:
    """Yield every maximal clique of ``adj`` exactly once."""
    order = degeneracy_order(adj)
    position = {v: i for i, v in enumerate(order)}
    for i, v in enumerate(order):
        later = {u for u in adj[v] if position[u] > i}
        earlier = {u for u in adj[v] if position[u] < i}
        yield from _bk_pivot(adj, [v], later, earlier)


def maximal_cliques(g: SnapshotGraph) -> set[frozenset[NodeId]]:
    return set(iter_maximal_cliques(g.adjacency))


def iter_cliques_through(adj: Adjacency, v: NodeId) -> Iterator[frozenset[NodeId]]:
    """Maximal cliques containing ``v``, enumerated on v's ego network only.

    A maximal clique through ``v`` is ``{v}`` plus a maximal clique of the
    subgraph induced by v's neighbours, so only that subgraph is searched.
    """
    nbrs = adj[v]
    if not nbrs:
        yield frozenset((v,))
        return
    sub = {u: adj[u] & nbrs for u in nbrs}
    for clique in iter_maximal_cliques(sub):
        yield clique | {v}


def maximal_cliques_containing(g: SnapshotGraph, v: NodeId) -> set[frozenset[NodeId]]:
    if v not in g:
        raise KeyError(f"node {v} not in snapshot t={g.t}")
    return set(iter_cliques_through(g.adjacency, v))
