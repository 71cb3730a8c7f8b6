"""Snapshot graphs, dynamic networks and timestamped edge-stream ingestion.

Nodes are interned to dense integers by a :class:`SymbolTable` shared by all
snapshots of one :class:`DynamicNetwork`, so the same external label maps to
the same node id at every timestep.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import AbstractSet, Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import ContractViolation, EmptyNetworkError

NodeId = int


class SymbolTable:
    """Bidirectional map between external labels and dense node ids."""

    def __init__(self, labels: Iterable[str] = ()):
        self._labels: list[str] = []
        self._ids: dict[str, NodeId] = {}
        for label in labels:
            self.intern(label)

    def intern(self, label: str) -> NodeId:
        label = str(label)
        node = self._ids.get(label)
        if node is None:
            node = len(self._labels)
            self._labels.append(label)
            self._ids[label] = node
        return node

    def id_of(self, label: str) -> NodeId:
        try:
            return self._ids[str(label)]
        except KeyError:
            raise KeyError(f"unknown node label {label!r}") from None

    def label(self, node: NodeId) -> str:
        return self._labels[node]

    def labels(self) -> list[str]:
        return list(self._labels)

    def __contains__(self, label: object) -> bool:
        return str(label) in self._ids

    def __len__(self) -> int:
        return len(self._labels)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SymbolTable) and self._labels == other._labels


class SnapshotGraph:
    """Immutable undirected simple graph for a single timestep.

    ``adjacency`` maps every present node to the frozenset of its neighbours.
    A node is present iff it is a key, so isolated nodes are allowed when
    built explicitly (e.g. ego networks, leftover subgraphs).
    """

    __slots__ = ("t", "_adj", "_m")

    def __init__(self, adjacency: Mapping[NodeId, Iterable[NodeId]], t: int = 1):
        adj: dict[NodeId, frozenset[NodeId]] = {}
        for v, nbrs in adjacency.items():
            adj[v] = frozenset(nbrs)
        half = 0
        for v, nbrs in adj.items():
            if v in nbrs:
                raise ContractViolation(f"self-loop on node {v}")
            for u in nbrs:
                if u not in adj or v not in adj[u]:
                    raise ContractViolation(f"adjacency not symmetric for edge ({v}, {u})")
            half += len(nbrs)
        self.t = t
        self._adj = adj
        self._m = half // 2

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[NodeId, NodeId]],
        t: int = 1,
        nodes: Iterable[NodeId] = (),
    ) -> "SnapshotGraph":
        adj: dict[NodeId, set[NodeId]] = {v: set() for v in nodes}
        for u, v in edges:
            if u == v:
                raise ContractViolation(f"self-loop on node {u}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        return cls(adj, t=t)

    @property
    def adjacency(self) -> Mapping[NodeId, frozenset[NodeId]]:
        return self._adj

    @property
    def m(self) -> int:
        return self._m

    @property
    def nodes(self) -> frozenset[NodeId]:
        return frozenset(self._adj)

    def __len__(self) -> int:
        return len(self._adj)

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __iter__(self) -> Iterator[NodeId]:
        return iter(self._adj)

    def neighbors(self, v: NodeId) -> frozenset[NodeId]:
        try:
            return self._adj[v]
        except KeyError:
            raise KeyError(f"node {v} not in snapshot t={self.t}") from None

    def edges(self) -> Iterator[tuple[NodeId, NodeId]]:
        """Yield each edge once as ``(u, v)`` with ``u < v``."""
        for u, nbrs in self._adj.items():
            for v in nbrs:
                if u < v:
                    yield u, v

    def sorted_edges(self) -> list[tuple[NodeId, NodeId]]:
        return sorted(self.edges())

    @classmethod
    def _trusted(cls, adj: dict[NodeId, frozenset[NodeId]], t: int) -> "SnapshotGraph":
        # caller guarantees a symmetric, loop-free adjacency of frozensets
        g = cls.__new__(cls)
        g.t = t
        g._adj = adj
        g._m = sum(len(nbrs) for nbrs in adj.values()) // 2
        return g

    def subgraph(self, nodes: Iterable[NodeId]) -> "SnapshotGraph":
        """Induced subgraph on ``nodes`` (which must all be present)."""
        keep = frozenset(nodes)
        adj = self._adj
        for v in keep:
            if v not in adj:
                raise KeyError(f"node {v} not in snapshot t={self.t}")
        return SnapshotGraph._trusted({v: adj[v] & keep for v in keep}, self.t)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SnapshotGraph) and self.t == other.t and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self.t, self._m, len(self._adj)))

    def __repr__(self) -> str:
        return f"SnapshotGraph(t={self.t}, n={len(self._adj)}, m={self._m})"


def degree(g: SnapshotGraph, v: NodeId) -> int:
    return len(g.neighbors(v))


def in_community_degree(g: SnapshotGraph, v: NodeId, members: AbstractSet[NodeId]) -> int:
    """Number of neighbours of ``v`` inside ``members``."""
    if v not in members:
        raise ContractViolation(f"node {v} is not a member of the given community")
    return len(g.neighbors(v) & members)


def ego_network(g: SnapshotGraph, v: NodeId) -> SnapshotGraph:
    return g.subgraph(g.neighbors(v) | {v})


@dataclass
class DynamicNetwork:
    """Time-ordered snapshots ``1..len(snapshots)`` sharing one symbol table."""

    snapshots: list[SnapshotGraph]
    symbols: SymbolTable = field(default_factory=SymbolTable)
    dropped_self_loops: int = 0

    def __post_init__(self) -> None:
        if not self.snapshots:
            raise ContractViolation("a dynamic network needs at least one snapshot")
        for i, g in enumerate(self.snapshots, start=1):
            if g.t != i:
                raise ContractViolation(f"snapshot at position {i} has t={g.t}")

    @property
    def delta(self) -> int:
        return len(self.snapshots)

    def __len__(self) -> int:
        return len(self.snapshots)

    def __getitem__(self, t: int) -> SnapshotGraph:
        """1-based snapshot access."""
        if not 1 <= t <= len(self.snapshots):
            raise IndexError(f"timestep {t} outside 1..{len(self.snapshots)}")
        return self.snapshots[t - 1]

    def __iter__(self) -> Iterator[SnapshotGraph]:
        return iter(self.snapshots)

    @classmethod
    def from_edge_lists(
        cls,
        edge_lists: Sequence[Iterable[tuple[Hashable, Hashable]]],
        symbols: SymbolTable | None = None,
    ) -> "DynamicNetwork":
        """Build from per-timestep lists of labelled edges. Duplicates collapse."""
        symbols = symbols if symbols is not None else SymbolTable()
        snapshots = []
        dropped = 0
        for t, edges in enumerate(edge_lists, start=1):
            pairs = set()
            for a, b in edges:
                u, v = symbols.intern(str(a)), symbols.intern(str(b))
                if u == v:
                    dropped += 1
                    continue
                pairs.add((min(u, v), max(u, v)))
            snapshots.append(SnapshotGraph.from_edges(sorted(pairs), t=t))
        return cls(snapshots, symbols, dropped)


@dataclass(frozen=True)
class TemporalEdgeRecord:
    src: str
    dst: str
    timestamp: int


def ingest_edge_stream(records: Sequence[TemporalEdgeRecord], window: int) -> DynamicNetwork:
    """Slice a timestamped edge stream into fixed-width snapshots.

    Windows are half-open ``[t0 + k*window, t0 + (k+1)*window)`` with ``t0`` the
    earliest timestamp, so the snapshot count is ``(span // window) + 1``.
    Windows without edges yield empty snapshots to keep time aligned.
    """
    if window <= 0:
        raise ContractViolation(f"window must be positive, got {window}")
    if not records:
        raise EmptyNetworkError("no edge records to ingest")

    symbols = SymbolTable()
    t0 = min(r.timestamp for r in records)
    buckets: dict[int, set[tuple[NodeId, NodeId]]] = defaultdict(set)
    dropped = 0
    for r in records:
        u, v = symbols.intern(r.src), symbols.intern(r.dst)
        if u == v:
            dropped += 1
            continue
        buckets[(r.timestamp - t0) // window].add((min(u, v), max(u, v)))
    if not buckets:
        raise EmptyNetworkError(f"all {dropped} records were self-loops; nothing left to ingest")

    count = (max(r.timestamp for r in records) - t0) // window + 1
    snapshots = [SnapshotGraph.from_edges(sorted(buckets.get(k, ())), t=k + 1) for k in range(count)]
    return DynamicNetwork(snapshots, symbols, dropped)
