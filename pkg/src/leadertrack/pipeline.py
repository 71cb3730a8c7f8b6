"""Leader-seeded incremental community tracking across snapshots.

The first snapshot is clustered statically. At every later snapshot each
community's surviving leaders are expanded, multiply-claimed nodes are
resolved, leftovers are clustered into newborn communities, and leaders are
recomputed on the final communities.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Iterable

from .errors import ContractViolation, InvariantError
from .expansion import ExpansionStep, expand_all, resolve_memberships
from .graph import DynamicNetwork, NodeId, SnapshotGraph
from .leaders import LeaderSet, detect_leaders, is_clique
from .static import cluster_leftovers, cluster_static

BORN = "BORN"
DISSOLVED = "DISSOLVED"


@dataclass(frozen=True)
class Community:
    cid: int
    members: frozenset[NodeId]
    leaders: LeaderSet

    @property
    def followers(self) -> frozenset[NodeId]:
        return self.members - self.leaders.leaders


@dataclass(frozen=True)
class Partition:
    t: int
    communities: tuple[Community, ...]

    @property
    def nodes(self) -> frozenset[NodeId]:
        out: set[NodeId] = set()
        for c in self.communities:
            out |= c.members
        return frozenset(out)

    def labels(self) -> dict[NodeId, int]:
        return {v: c.cid for c in self.communities for v in c.members}

    def by_id(self) -> dict[int, Community]:
        return {c.cid: c for c in self.communities}

    def leaders(self) -> frozenset[NodeId]:
        return frozenset(v for c in self.communities for v in c.leaders.leaders)

    def __len__(self) -> int:
        return len(self.communities)


@dataclass(frozen=True)
class Event:
    t: int
    cid: int
    kind: str
    members: frozenset[NodeId]


@dataclass
class CommunityTimeline:
    cid: int
    birth_t: int
    death_t: int | None = None
    members: dict[int, frozenset[NodeId]] = field(default_factory=dict)
    leaders: dict[int, frozenset[NodeId]] = field(default_factory=dict)


@dataclass
class StepResult:
    partition: Partition
    events: list[Event]
    next_id: int
    traces: dict[int, list[ExpansionStep]] = field(default_factory=dict)


@dataclass
class RunResult:
    partitions: list[Partition]
    timelines: list[CommunityTimeline]
    events: list[Event]
    seconds: list[float]
    traces: list[dict[int, list[ExpansionStep]]] = field(default_factory=list)


def _build(g: SnapshotGraph, groups: Iterable[tuple[int, frozenset[NodeId]]]) -> Partition:
    communities = tuple(
        Community(cid, members, detect_leaders(g, members, cid))
        for cid, members in sorted(groups, key=lambda item: item[0])
    )
    return Partition(g.t, communities)


def check_partition(g: SnapshotGraph, p: Partition) -> None:
    """Raise :class:`InvariantError` unless ``p`` is a valid partition of ``g``."""
    seen: set[NodeId] = set()
    ids: set[int] = set()
    for c in p.communities:
        if c.cid in ids:
            raise InvariantError(f"t={p.t}: duplicate community id {c.cid}")
        ids.add(c.cid)
        if not c.members:
            raise InvariantError(f"t={p.t}: community {c.cid} is empty")
        if seen & c.members:
            raise InvariantError(f"t={p.t}: community {c.cid} overlaps another")
        seen |= c.members
        leaders = c.leaders.leaders
        if not leaders or not leaders <= c.members:
            raise InvariantError(f"t={p.t}: community {c.cid} has invalid leaders")
        if not is_clique(g, leaders):
            raise InvariantError(f"t={p.t}: leaders of community {c.cid} do not form a clique")
    if seen != g.nodes:
        raise InvariantError(f"t={p.t}: partition does not cover the snapshot")


def bootstrap(g1: SnapshotGraph, seed: int = 0, first_id: int = 0) -> StepResult:
    static = cluster_static(g1, seed)
    groups = [(first_id + i, members) for i, members in enumerate(static.communities)]
    partition = _build(g1, groups)
    events = [Event(g1.t, c.cid, BORN, c.members) for c in partition.communities]
    return StepResult(partition, events, first_id + len(groups))


def step(
    g: SnapshotGraph,
    prev: Partition,
    seed: int = 0,
    next_id: int | None = None,
    threads: int = 1,
    keep_traces: bool = False,
) -> StepResult:
    if prev.t != g.t - 1:
        raise ContractViolation(f"previous partition is for t={prev.t}, snapshot is t={g.t}")
    if next_id is None:
        next_id = max((c.cid for c in prev.communities), default=-1) + 1

    events: list[Event] = []
    seeds: dict[int, frozenset[NodeId]] = {}
    for c in prev.communities:
        surviving = frozenset(v for v in c.leaders.leaders if v in g)
        if surviving:
            seeds[c.cid] = surviving
        else:
            events.append(Event(g.t, c.cid, DISSOLVED, c.members))

    expanded = expand_all(g, seeds, threads=threads, keep_traces=keep_traces)
    resolved, unassigned = resolve_memberships(g, expanded)

    prev_members = {c.cid: c.members for c in prev.communities}
    kept: dict[frozenset[NodeId], int] = {}
    for cid in sorted(seeds):
        members = resolved.get(cid)
        if not members:
            events.append(Event(g.t, cid, DISSOLVED, prev_members[cid]))
        elif members in kept:
            # identical member sets: the smaller id keeps the community
            events.append(Event(g.t, cid, DISSOLVED, prev_members[cid]))
        else:
            kept[members] = cid

    groups = [(cid, members) for members, cid in kept.items()]
    for members in cluster_leftovers(g, unassigned, seed):
        groups.append((next_id, members))
        events.append(Event(g.t, next_id, BORN, members))
        next_id += 1

    events.sort(key=lambda e: (e.kind != DISSOLVED, e.cid))
    return StepResult(_build(g, groups), events, next_id, expanded.traces)


def _empty_step(g: SnapshotGraph, prev: Partition, next_id: int) -> StepResult:
    events = [Event(g.t, c.cid, DISSOLVED, c.members) for c in prev.communities]
    return StepResult(Partition(g.t, ()), events, next_id)


def run(
    net: DynamicNetwork,
    seed: int = 0,
    threads: int = 1,
    check: bool = True,
    keep_traces: bool = False,
) -> RunResult:
    """Track communities through every snapshot of ``net``.

    Per-step clustering seeds are drawn from one generator seeded by ``seed``,
    so results depend only on ``(net, seed)``, never on ``threads``.
    """
    rng = random.Random(seed)
    partitions: list[Partition] = []
    events: list[Event] = []
    seconds: list[float] = []
    traces: list[dict[int, list[ExpansionStep]]] = []
    timelines: dict[int, CommunityTimeline] = {}
    next_id = 0

    for g in net:
        step_seed = rng.getrandbits(32)
        start = time.perf_counter()
        if not partitions:
            result = bootstrap(g, step_seed, next_id)
        elif len(g) == 0:
            result = _empty_step(g, partitions[-1], next_id)
        elif not partitions[-1].communities:
            result = bootstrap(g, step_seed, next_id)
        else:
            result = step(g, partitions[-1], step_seed, next_id, threads, keep_traces)
        seconds.append(time.perf_counter() - start)
        if check:
            check_partition(g, result.partition)

        next_id = result.next_id
        partitions.append(result.partition)
        events.extend(result.events)
        traces.append(result.traces)
        for e in result.events:
            if e.kind == BORN:
                timelines[e.cid] = CommunityTimeline(e.cid, e.t)
            else:
                timelines[e.cid].death_t = e.t
        for c in result.partition.communities:
            timelines[c.cid].members[g.t] = c.members
            timelines[c.cid].leaders[g.t] = c.leaders.leaders

    return RunResult(partitions, sorted(timelines.values(), key=lambda tl: tl.cid), events, seconds, traces)


def run_baseline(net: DynamicNetwork, seed: int = 0, check: bool = True) -> RunResult:
    """Cluster every snapshot independently with fresh ids at each step."""
    rng = random.Random(seed)
    partitions: list[Partition] = []
    seconds: list[float] = []
    next_id = 0
    for g in net:
        step_seed = rng.getrandbits(32)
        start = time.perf_counter()
        static = cluster_static(g, step_seed)
        seconds.append(time.perf_counter() - start)
        groups = [(next_id + i, members) for i, members in enumerate(static.communities)]
        next_id += len(groups)
        partition = _build(g, groups)
        if check:
            check_partition(g, partition)
        partitions.append(partition)
    return RunResult(partitions, [], [], seconds)
