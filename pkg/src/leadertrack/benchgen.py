"""Synthetic dynamic networks with planted, evolving ground truth.

Two families:

* Markovian community edges over a static Erdos-Renyi background
  (``generate_kawadia``).
* Planted partitions with power-law community sizes whose membership evolves
  by one kind of event per run (``generate_events``): intermittent
  communities, expansion/contraction, birth/death, merge/split.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Iterator, Mapping

import numpy as np

from .errors import ConfigError
from .graph import DynamicNetwork, NodeId, SymbolTable

log = logging.getLogger(__name__)

EVENT_KINDS = ("none", "intermittent", "expand_contract", "birth_death", "merge_split")


@dataclass
class GroundTruth:
    """Per-timestep map from node label to community label."""

    steps: list[dict[str, str]]
    skipped_events: int = 0

    def __len__(self) -> int:
        return len(self.steps)

    def for_network(self, net: DynamicNetwork) -> list[dict[NodeId, str]]:
        """Re-key every step by the network's node ids."""
        out = []
        for labels in self.steps:
            out.append({net.symbols.id_of(v): c for v, c in labels.items() if v in net.symbols})
        return out

    def community_count(self, t: int) -> int:
        return len(set(self.steps[t - 1].values()))


def _from_mapping(cls, data: Mapping[str, Any]):
    names = {f.name for f in fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ConfigError(f"unknown {cls.__name__} keys: {sorted(unknown)}")
    return cls(**data)


@dataclass
class KawadiaConfig:
    n: int = 100
    n_communities: int = 20
    p_r: float = 0.05
    p_c: float = 0.2
    p: float = 0.4
    steps: int = 25
    seed: int = 0

    @property
    def q(self) -> float:
        """Birth probability that keeps the intra-community density at ``p_c``."""
        return self.p * self.p_c / (1 - self.p_c)

    @property
    def community_size(self) -> int:
        return self.n // self.n_communities

    def validate(self) -> None:
        if not 0 < self.p_c < 1:
            raise ConfigError(f"p_c must lie in (0, 1), got {self.p_c}")
        if not 0 <= self.p <= 1:
            raise ConfigError(f"p must lie in [0, 1], got {self.p}")
        if not 0 <= self.p_r < 1:
            raise ConfigError(f"p_r must lie in [0, 1), got {self.p_r}")
        if self.q > 1:
            raise ConfigError(f"derived q = p*p_c/(1-p_c) = {self.q} exceeds 1")
        if self.n_communities <= 0 or self.n % self.n_communities:
            raise ConfigError(f"n={self.n} is not divisible into {self.n_communities} equal communities")
        if self.steps < 1:
            raise ConfigError("steps must be at least 1")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "KawadiaConfig":
        return _from_mapping(cls, data)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _intra_pairs(cfg: KawadiaConfig) -> np.ndarray:
    s = cfg.community_size
    local = np.array([(i, j) for i in range(s) for j in range(i + 1, s)], dtype=np.int64).reshape(-1, 2)
    offsets = np.arange(cfg.n_communities, dtype=np.int64) * s
    return (local[None, :, :] + offsets[:, None, None]).reshape(-1, 2)


def kawadia_intra_states(cfg: KawadiaConfig, rng: np.random.Generator | None = None) -> Iterator[np.ndarray]:
    """Yield the boolean presence vector of every intra-community pair per step.

    Pairs are ordered as in ``_intra_pairs``. The first state is i.i.d.
    Bernoulli(p_c); each later one kills present edges with probability ``p``
    and revives absent ones with probability ``q``.
    """
    cfg.validate()
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    n_pairs = cfg.n_communities * cfg.community_size * (cfg.community_size - 1) // 2
    state = rng.random(n_pairs) < cfg.p_c
    yield state.copy()
    q = cfg.q
    for _ in range(cfg.steps - 1):
        u = rng.random(n_pairs)
        state = np.where(state, u >= cfg.p, u < q)
        yield state.copy()


def generate_kawadia(cfg: KawadiaConfig) -> tuple[DynamicNetwork, GroundTruth]:
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    n = cfg.n
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < cfg.p_r
    background = set(zip(iu[keep].tolist(), ju[keep].tolist()))
    pairs = _intra_pairs(cfg)

    symbols = SymbolTable(str(v) for v in range(n))
    labels = {str(v): str(v // cfg.community_size) for v in range(n)}
    edge_lists = []
    truth = []
    for state in kawadia_intra_states(cfg, rng):
        edges = background | set(map(tuple, pairs[state].tolist()))
        edges = sorted(edges)
        edge_lists.append([(str(a), str(b)) for a, b in edges])
        present = {str(v) for e in edges for v in e}
        truth.append({v: c for v, c in labels.items() if v in present})
    return DynamicNetwork.from_edge_lists(edge_lists, symbols), GroundTruth(truth)


@dataclass
class EventBenchConfig:
    event: str = "birth_death"
    n_nodes: int = 1000
    size_exponent: float = 2.5
    min_size: int = 10
    max_size: int = 50
    p_in: float = 0.3
    p_out: float = 0.001
    # node activity: persistent power-law weights scaling each node's edge odds
    activity_exponent: float | None = 2.5
    activity_max: float = 10.0
    steps: int = 15
    hide_fraction: float = 0.1
    event_count: int | None = None
    resize_fraction: float = 0.25
    pool_fraction: float = 0.1
    seed: int = 0

    def validate(self) -> None:
        if self.event not in EVENT_KINDS:
            raise ConfigError(f"event must be one of {EVENT_KINDS}, got {self.event!r}")
        for name in ("p_in", "p_out", "hide_fraction", "resize_fraction", "pool_fraction"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise ConfigError(f"{name} must lie in [0, 1], got {value}")
        if not 1 <= self.min_size <= self.max_size:
            raise ConfigError("need 1 <= min_size <= max_size")
        if self.size_exponent <= 1:
            raise ConfigError("size_exponent must exceed 1")
        if self.activity_exponent is not None and (self.activity_exponent <= 1 or self.activity_max < 1):
            raise ConfigError("activity_exponent must exceed 1 and activity_max must be >= 1")
        if self.steps < 1 or self.n_nodes < self.min_size:
            raise ConfigError("need steps >= 1 and n_nodes >= min_size")
        if self.event_count is not None and self.event_count < 0:
            raise ConfigError("event_count must be non-negative")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "EventBenchConfig":
        return _from_mapping(cls, data)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _power_law(rng: np.random.Generator, exponent: float, lo: float, hi: float, size: int | None = None):
    """Inverse-CDF sample of a density proportional to x**-exponent on [lo, hi]."""
    a = 1.0 - exponent
    u = rng.random(size)
    return (lo**a + u * (hi**a - lo**a)) ** (1.0 / a)


@dataclass
class _EventState:
    communities: dict[int, list[int]]
    pool: list[int]
    next_label: int
    skipped: int = 0
    hidden: set[int] = field(default_factory=set)


class _EventRunner:
    def __init__(self, cfg: EventBenchConfig):
        cfg.validate()
        self.cfg = cfg
        self.rng = np.random.default_rng(cfg.seed)
        n = cfg.n_nodes
        if cfg.activity_exponent is None:
            self.activity = np.ones(n)
        else:
            w = _power_law(self.rng, cfg.activity_exponent, 1.0, cfg.activity_max, n)
            self.activity = w / w.mean()

        nodes = self.rng.permutation(n).tolist()
        reserve = int(round(cfg.pool_fraction * n)) if cfg.event in ("expand_contract", "birth_death") else 0
        pool, assigned = nodes[:reserve], nodes[reserve:]
        communities: dict[int, list[int]] = {}
        start = 0
        while start < len(assigned):
            size = self._size()
            chunk = assigned[start : start + size]
            start += size
            if len(chunk) < cfg.min_size:
                pool.extend(chunk)
                break
            communities[len(communities)] = sorted(chunk)
        self.state = _EventState(communities, pool, len(communities))
        if cfg.event_count is not None:
            self.count = cfg.event_count
        else:
            self.count = max(1, int(round(0.04 * len(communities))))

    def _size(self) -> int:
        cfg = self.cfg
        return int(round(float(_power_law(self.rng, cfg.size_exponent, cfg.min_size, cfg.max_size))))

    def _pick(self, labels: list[int], k: int) -> list[int]:
        if k <= 0 or not labels:
            return []
        k = min(k, len(labels))
        return sorted(self.rng.choice(sorted(labels), size=k, replace=False).tolist())

    def _skip(self, what: str) -> None:
        self.state.skipped += 1
        log.warning("skipping infeasible %s event", what)

    def advance(self) -> None:
        kind = self.cfg.event
        if kind == "intermittent":
            self._intermittent()
        elif kind == "expand_contract":
            self._expand_contract()
        elif kind == "birth_death":
            self._birth_death()
        elif kind == "merge_split":
            self._merge_split()

    def _intermittent(self) -> None:
        labels = sorted(self.state.communities)
        k = int(round(self.cfg.hide_fraction * len(labels)))
        self.state.hidden = set(self._pick(labels, k))

    def _expand_contract(self) -> None:
        st = self.state
        for label in self._pick(list(st.communities), self.count):
            members = st.communities[label]
            delta = max(1, math.ceil(self.cfg.resize_fraction * len(members)))
            if self.rng.random() < 0.5:
                if not st.pool:
                    self._skip("expansion")
                    continue
                take = min(delta, len(st.pool))
                idx = set(self.rng.choice(len(st.pool), size=take, replace=False).tolist())
                members.extend(v for i, v in enumerate(st.pool) if i in idx)
                st.pool = [v for i, v in enumerate(st.pool) if i not in idx]
                members.sort()
            else:
                if len(members) - delta < 3:
                    self._skip("contraction")
                    continue
                idx = set(self.rng.choice(len(members), size=delta, replace=False).tolist())
                st.pool.extend(v for i, v in enumerate(members) if i in idx)
                st.communities[label] = [v for i, v in enumerate(members) if i not in idx]

    def _birth_death(self) -> None:
        st = self.state
        for label in self._pick(list(st.communities), self.count):
            st.pool.extend(st.communities.pop(label))
        for _ in range(self.count):
            size = self._size()
            if len(st.pool) < size:
                if len(st.pool) < self.cfg.min_size:
                    self._skip("birth")
                    continue
                size = len(st.pool)
            idx = set(self.rng.choice(len(st.pool), size=size, replace=False).tolist())
            st.communities[st.next_label] = sorted(v for i, v in enumerate(st.pool) if i in idx)
            st.pool = [v for i, v in enumerate(st.pool) if i not in idx]
            st.next_label += 1

    def _merge_split(self) -> None:
        st = self.state
        chosen = self._pick(list(st.communities), 2 * self.count)
        for _ in range(self.count - len(chosen) // 2):
            self._skip("merge")
        order = self.rng.permutation(len(chosen) - len(chosen) % 2).tolist()
        merged = set()
        for a, b in zip(order[0::2], order[1::2]):
            la, lb = chosen[a], chosen[b]
            st.communities[st.next_label] = sorted(st.communities.pop(la) + st.communities.pop(lb))
            merged.add(st.next_label)
            st.next_label += 1

        picked = self._pick([c for c in st.communities if c not in merged], self.count)
        for _ in range(self.count - len(picked)):
            self._skip("split")
        for label in picked:
            members = st.communities[label]
            if len(members) < 6:
                self._skip("split")
                continue
            perm = self.rng.permutation(len(members)).tolist()
            half = len(members) // 2
            del st.communities[label]
            st.communities[st.next_label] = sorted(members[i] for i in perm[:half])
            st.communities[st.next_label + 1] = sorted(members[i] for i in perm[half:])
            st.next_label += 2

    def snapshot(self) -> tuple[list[tuple[str, str]], dict[str, str]]:
        st = self.state
        visible = [(label, members) for label, members in sorted(st.communities.items()) if label not in st.hidden]
        nodes = np.array([v for _, members in visible for v in members], dtype=np.int64)
        labs = np.array([label for label, members in visible for _ in members], dtype=np.int64)
        if nodes.size < 2:
            return [], {}
        act = self.activity[nodes]
        prob = np.where(labs[:, None] == labs[None, :], self.cfg.p_in, self.cfg.p_out) * np.outer(act, act)
        iu, ju = np.triu_indices(nodes.size, 1)
        hit = self.rng.random(iu.size) < np.minimum(prob[iu, ju], 1.0)
        a, b = nodes[iu[hit]], nodes[ju[hit]]
        edges = sorted(zip(np.minimum(a, b).tolist(), np.maximum(a, b).tolist()))
        present = {v for e in edges for v in e}
        label_of = {int(v): int(c) for v, c in zip(nodes.tolist(), labs.tolist())}
        truth = {str(v): str(label_of[v]) for v in sorted(present)}
        return [(str(u), str(v)) for u, v in edges], truth


def generate_events(cfg: EventBenchConfig) -> tuple[DynamicNetwork, GroundTruth]:
    runner = _EventRunner(cfg)
    edge_lists = []
    truth = []
    for t in range(1, cfg.steps + 1):
        if t > 1:
            runner.advance()
        edges, labels = runner.snapshot()
        edge_lists.append(edges)
        truth.append(labels)
    return DynamicNetwork.from_edge_lists(edge_lists), GroundTruth(truth, runner.state.skipped)


def event_membership_history(cfg: EventBenchConfig) -> list[dict[int, list[int]]]:
    """Ground-truth community membership per step, including hidden and isolated nodes."""
    runner = _EventRunner(cfg)
    out = []
    for t in range(1, cfg.steps + 1):
        if t > 1:
            runner.advance()
        runner.snapshot()
        st = runner.state
        out.append({c: list(m) for c, m in st.communities.items() if c not in st.hidden})
    return out
