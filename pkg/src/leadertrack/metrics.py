"""Partition similarity and leader/follower persistence measures.

NMI is ``2 I(A;B) / (H(A) + H(B))`` with natural logarithms; two single-cluster
partitions score 1.0. Series comparing partitions over different node sets
are computed on the nodes the two have in common.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

from .errors import ContractViolation
from .graph import DynamicNetwork, NodeId
from .pipeline import Partition

LabeledPartition = Mapping[Hashable, Hashable]


def _entropy(counts: Counter, n: int) -> float:
    return -sum(c / n * math.log(c / n) for c in counts.values())


def nmi(a: LabeledPartition, b: LabeledPartition) -> float:
    if not a:
        raise ContractViolation("NMI needs a non-empty node universe")
    if a.keys() != b.keys():
        raise ContractViolation("NMI arguments must label the same node universe")
    n = len(a)
    joint = Counter((a[v], b[v]) for v in a)
    ca = Counter(a.values())
    cb = Counter(b.values())
    ha = _entropy(ca, n)
    hb = _entropy(cb, n)
    if ha + hb == 0.0:
        return 1.0
    mi = 0.0
    for (x, y), nxy in joint.items():
        mi += nxy / n * math.log(nxy * n / (ca[x] * cb[y]))
    return min(max(2.0 * mi / (ha + hb), 0.0), 1.0)


def restricted_nmi(a: LabeledPartition, b: LabeledPartition) -> tuple[float | None, int]:
    """NMI over the shared nodes of ``a`` and ``b``; ``None`` if they share none."""
    shared = a.keys() & b.keys()
    if not shared:
        return None, 0
    return nmi({v: a[v] for v in shared}, {v: b[v] for v in shared}), len(shared)


def smoothness_series(partitions: Sequence[Partition]) -> list[float | None]:
    """Entry ``i`` compares ``partitions[i]`` with ``partitions[i + 1]``."""
    if len(partitions) < 2:
        raise ContractViolation("smoothness needs at least two partitions")
    labels = [p.labels() for p in partitions]
    return [restricted_nmi(labels[i], labels[i + 1])[0] for i in range(len(labels) - 1)]


def ground_truth_series(
    partitions: Sequence[Partition], truth: Sequence[LabeledPartition]
) -> list[float | None]:
    if len(partitions) != len(truth):
        raise ContractViolation(f"{len(partitions)} partitions but {len(truth)} ground-truth steps")
    return [restricted_nmi(p.labels(), gt)[0] for p, gt in zip(partitions, truth)]


@dataclass(frozen=True)
class PersistencePoint:
    t: int
    leader: float | None
    follower: float | None
    n_leaders: int
    n_followers: int


def persistence_from_nodes(
    partitions: Sequence[Partition], next_nodes: Sequence[frozenset[NodeId]]
) -> list[PersistencePoint]:
    """Share of leaders/followers at step t still present at t + 1."""
    out = []
    for p, present in zip(partitions, next_nodes):
        leaders = p.leaders()
        followers = p.nodes - leaders
        out.append(
            PersistencePoint(
                p.t,
                len(leaders & present) / len(leaders) if leaders else None,
                len(followers & present) / len(followers) if followers else None,
                len(leaders),
                len(followers),
            )
        )
    return out


def persistence_series(net: DynamicNetwork, partitions: Sequence[Partition]) -> list[PersistencePoint]:
    if len(partitions) != net.delta:
        raise ContractViolation("partitions must be aligned with the network's snapshots")
    return persistence_from_nodes(partitions[:-1], [g.nodes for g in net.snapshots[1:]])


def mean_defined(values: Sequence[float | None]) -> float:
    defined = [v for v in values if v is not None]
    if not defined:
        return math.nan
    return sum(defined) / len(defined)
