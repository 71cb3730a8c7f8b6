"""Community leader detection.

The anchor of a community is its member with the highest in-community degree.
The leaders are the nodes shared by every maximal clique through the anchor,
searched inside the community only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import AbstractSet, Iterable

from .cliques import iter_cliques_through
from .errors import ContractViolation
from .graph import NodeId, SnapshotGraph


@dataclass(frozen=True)
class LeaderSet:
    leaders: frozenset[NodeId]
    anchor: NodeId
    community_id: int | None = None

    def __post_init__(self) -> None:
        if self.anchor not in self.leaders:
            raise ContractViolation("anchor must belong to its leader set")

    def __contains__(self, v: object) -> bool:
        return v in self.leaders

    def __len__(self) -> int:
        return len(self.leaders)

    def __iter__(self):
        return iter(sorted(self.leaders))


def find_anchor(g: SnapshotGraph, members: AbstractSet[NodeId]) -> NodeId:
    """Member with maximum in-community degree; ties go to the smallest id."""
    adj = g.adjacency
    return max(members, key=lambda v: (len(adj[v] & members), -v))


def detect_leaders(
    g: SnapshotGraph, members: Iterable[NodeId], community_id: int | None = None
) -> LeaderSet:
    members = frozenset(members)
    if not members:
        raise ContractViolation("cannot detect leaders of an empty community")
    adj = g.adjacency
    missing = [v for v in members if v not in adj]
    if missing:
        raise ContractViolation(f"members not in snapshot t={g.t}: {sorted(missing)[:5]}")

    anchor = find_anchor(g, members)
    ego = adj[anchor] & members
    local = {anchor: ego}
    for u in ego:
        local[u] = adj[u] & members

    common: set[NodeId] | None = None
    for clique in iter_cliques_through(local, anchor):
        common = set(clique) if common is None else common & clique
        if len(common) == 1:
            break
    return LeaderSet(frozenset(common), anchor, community_id)


def is_clique(g: SnapshotGraph, nodes: Iterable[NodeId]) -> bool:
    nodes = list(nodes)
    adj = g.adjacency
    return all(b in adj[a] for i, a in enumerate(nodes) for b in nodes[i + 1 :])
