"""Seed-centric local expansion driven by the index of connectivity.

For a community with ``eta`` internal edges and ``mu`` boundary edges the
objective is ``(eta - mu) / sqrt(eta + mu)``. Adding a node ``u`` with degree
``d`` and ``k`` neighbours inside the community moves the counts to
``(eta + k, mu + d - 2k)``, so candidates are scored without recounting.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import AbstractSet, Iterable, Mapping

from .errors import ContractViolation, UndefinedObjectiveError
from .graph import NodeId, SnapshotGraph


@dataclass(frozen=True)
class CommunityState:
    members: frozenset[NodeId]
    eta: int
    mu: int

    @property
    def ic(self) -> float:
        """Objective value, with the isolated (eta + mu == 0) case taken as 0."""
        if self.eta + self.mu == 0:
            return 0.0
        return index_of_connectivity(self)


@dataclass(frozen=True)
class ExpansionStep:
    node: NodeId
    eta: int
    mu: int
    ic: float


@dataclass
class ExpansionResult:
    """Expanded communities keyed by community id, possibly overlapping."""

    communities: dict[int, frozenset[NodeId]]
    unassigned: frozenset[NodeId]
    traces: dict[int, list[ExpansionStep]] = field(default_factory=dict)


def index_of_connectivity(s: CommunityState) -> float:
    total = s.eta + s.mu
    if total <= 0:
        raise UndefinedObjectiveError("index of connectivity is undefined when eta + mu = 0")
    return (s.eta - s.mu) / math.sqrt(total)


def incremental_ic(s: CommunityState, u: NodeId, d_u: int, in_u: int) -> tuple[int, int, float]:
    """Counts and objective after adding ``u`` to ``s``."""
    if u in s.members:
        raise ContractViolation(f"node {u} is already a member")
    if not 0 <= in_u <= d_u:
        raise ContractViolation(f"in-community degree {in_u} must lie in [0, degree={d_u}]")
    eta = s.eta + in_u
    mu = s.mu + d_u - 2 * in_u
    total = eta + mu
    if total == 0:
        raise UndefinedObjectiveError("index of connectivity is undefined when eta + mu = 0")
    return eta, mu, (eta - mu) / math.sqrt(total)


def count_edges(g: SnapshotGraph, members: AbstractSet[NodeId]) -> tuple[int, int]:
    """From-scratch ``(eta, mu)`` for ``members``."""
    adj = g.adjacency
    inside = boundary = 0
    for v in members:
        for u in adj[v]:
            if u in members:
                inside += 1
            else:
                boundary += 1
    return inside // 2, boundary


def expand(
    g: SnapshotGraph,
    seed: Iterable[NodeId],
    trace: list[ExpansionStep] | None = None,
) -> CommunityState:
    """Greedily grow ``seed`` while some frontier node strictly raises the objective.

    Each round scores every frontier node from cached in-community degrees and
    adds the best one (highest objective, then more internal links, then
    smallest id). Accepted additions are appended to ``trace`` if given.
    """
    members = set(seed)
    if not members:
        raise ContractViolation("expansion seed must be non-empty")
    adj = g.adjacency
    for v in members:
        if v not in adj:
            raise ContractViolation(f"seed node {v} not in snapshot t={g.t}")

    eta, mu = count_edges(g, members)
    ic = (eta - mu) / math.sqrt(eta + mu) if eta + mu else 0.0
    frontier: dict[NodeId, int] = {}
    for v in members:
        for u in adj[v]:
            if u not in members:
                frontier[u] = frontier.get(u, 0) + 1

    sqrt = math.sqrt
    while frontier:
        best = -1
        best_val = -math.inf
        best_k = 0
        for u, k in frontier.items():
            e2 = eta + k
            m2 = mu + len(adj[u]) - 2 * k
            val = (e2 - m2) / sqrt(e2 + m2)
            if val > best_val or (val == best_val and (k > best_k or (k == best_k and u < best))):
                best, best_val, best_k = u, val, k
        if best_val <= ic:
            break
        k = frontier.pop(best)
        eta += k
        mu += len(adj[best]) - 2 * k
        ic = best_val
        members.add(best)
        for u in adj[best]:
            if u not in members:
                frontier[u] = frontier.get(u, 0) + 1
        if trace is not None:
            trace.append(ExpansionStep(best, eta, mu, ic))
    return CommunityState(frozenset(members), eta, mu)


def expand_all(
    g: SnapshotGraph,
    seeds: Mapping[int, Iterable[NodeId]],
    threads: int = 1,
    keep_traces: bool = False,
) -> ExpansionResult:
    """Expand every seed independently; results are keyed and ordered by id."""
    ids = sorted(seeds)
    traces: dict[int, list[ExpansionStep]] = {cid: [] for cid in ids} if keep_traces else {}

    def run(cid: int) -> CommunityState:
        return expand(g, seeds[cid], traces.get(cid))

    if threads > 1 and len(ids) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            states = list(pool.map(run, ids))
    else:
        states = [run(cid) for cid in ids]

    communities = {cid: s.members for cid, s in zip(ids, states)}
    covered: set[NodeId] = set()
    for members in communities.values():
        covered |= members
    return ExpansionResult(communities, frozenset(g.nodes - covered), traces)


def hub_similarity(g: SnapshotGraph, u: NodeId, members: AbstractSet[NodeId]) -> float:
    """Jaccard overlap of u's neighbourhood with ``members`` (u itself excluded)."""
    nbrs = g.neighbors(u)
    others = members - {u} if u in members else members
    if not others:
        raise ContractViolation("hub similarity needs a non-empty member set besides the node")
    union = len(nbrs | others)
    return len(nbrs & others) / union


def resolve_memberships(
    g: SnapshotGraph, result: ExpansionResult
) -> tuple[dict[int, frozenset[NodeId]], frozenset[NodeId]]:
    """Keep each multiply-claimed node only in its most similar community.

    Similarity ties go to the larger community, then the smaller id. Scores
    use the communities as expanded, before any node is removed. Communities
    left empty are dropped.
    """
    claims: dict[NodeId, list[int]] = {}
    for cid in sorted(result.communities):
        for v in result.communities[cid]:
            claims.setdefault(v, []).append(cid)

    final = {cid: set(members) for cid, members in result.communities.items()}
    for v, cids in claims.items():
        if len(cids) < 2:
            continue
        best = max(
            cids,
            key=lambda c: (
                _similarity_or_zero(g, v, result.communities[c]),
                len(result.communities[c]),
                -c,
            ),
        )
        for c in cids:
            if c != best:
                final[c].discard(v)

    resolved = {cid: frozenset(m) for cid, m in sorted(final.items()) if m}
    return resolved, result.unassigned


def _similarity_or_zero(g: SnapshotGraph, v: NodeId, members: AbstractSet[NodeId]) -> float:
    # a community made of v alone shares nothing with v's neighbourhood
    if len(members) == 1:
        return 0.0
    return hub_similarity(g, v, members)
