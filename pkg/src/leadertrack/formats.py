"""Reading and writing edge streams, snapshot directories, ground truth and partitions.

Formats
-------
stream           ``src dst timestamp`` per line, ``#`` comments ignored.
snapshot dir     ``snapshot_<t>.edges`` files, ``src dst`` per line.
ground truth     ``node community`` per line, either ``truth_<t>.txt`` per
                 snapshot or a single ``truth.txt`` for static membership.
partitions       ``t cid event n_leaders n_members leaders... | members...``
                 with the anchor listed first among the leaders, preceded by
                 a ``# steps <n>`` header. ``partitions.jsonl`` carries the same
                 records as JSON objects.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from .errors import ContractViolation, EmptyNetworkError, ParseError
from .graph import DynamicNetwork, NodeId, SymbolTable, TemporalEdgeRecord
from .leaders import LeaderSet
from .pipeline import BORN, DISSOLVED, Community, CommunityTimeline, Event, Partition

CONTINUED = "CONTINUED"
_SNAPSHOT_RE = re.compile(r"^snapshot_(\d+)\.edges$")
_TRUTH_RE = re.compile(r"^truth_(\d+)\.txt$")


def parse_stream(lines: Iterable[str], path: str | None = None) -> list[TemporalEdgeRecord]:
    records = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"expected 'src dst timestamp', got {len(parts)} fields", path, lineno)
        try:
            ts = int(parts[2])
        except ValueError:
            raise ParseError(f"timestamp {parts[2]!r} is not an integer", path, lineno) from None
        records.append(TemporalEdgeRecord(parts[0], parts[1], ts))
    return records


def read_stream(path: str | Path) -> list[TemporalEdgeRecord]:
    with open(path, encoding="utf-8") as fh:
        return parse_stream(fh, str(path))


def read_snapshot_dir(path: str | Path) -> DynamicNetwork:
    path = Path(path)
    files: dict[int, Path] = {}
    for entry in path.iterdir():
        match = _SNAPSHOT_RE.match(entry.name)
        if match:
            files[int(match.group(1))] = entry
    if not files:
        raise EmptyNetworkError(f"{path}: no snapshot_<t>.edges files")
    expected = list(range(1, len(files) + 1))
    if sorted(files) != expected:
        raise ParseError(f"snapshot indices must be 1..{len(files)}, found {sorted(files)}", str(path))

    edge_lists = []
    for t in expected:
        edges = []
        with open(files[t], encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split()
                if len(parts) != 2:
                    raise ParseError(f"expected 'src dst', got {len(parts)} fields", str(files[t]), lineno)
                edges.append((parts[0], parts[1]))
        edge_lists.append(edges)
    net = DynamicNetwork.from_edge_lists(edge_lists)
    if all(len(g) == 0 for g in net):
        raise EmptyNetworkError(f"{path}: every snapshot is empty")
    return net


def write_snapshot_dir(net: DynamicNetwork, path: str | Path) -> None:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    width = len(str(net.delta))
    label = net.symbols.label
    for g in net:
        rows = sorted((label(u), label(v)) if label(u) <= label(v) else (label(v), label(u)) for u, v in g.edges())
        with open(path / f"snapshot_{g.t:0{width}d}.edges", "w", encoding="utf-8") as fh:
            fh.writelines(f"{a} {b}\n" for a, b in rows)


def write_truth_dir(steps: Sequence[dict[str, str]], path: str | Path) -> None:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    width = len(str(len(steps)))
    for t, labels in enumerate(steps, start=1):
        with open(path / f"truth_{t:0{width}d}.txt", "w", encoding="utf-8") as fh:
            fh.writelines(f"{v} {c}\n" for v, c in sorted(labels.items(), key=lambda kv: _natural(kv[0])))


def _read_labels(path: Path) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"expected 'node community', got {len(parts)} fields", str(path), lineno)
            out[parts[0]] = parts[1]
    return out


def read_truth(path: str | Path, steps: int) -> list[dict[str, str]]:
    """Per-step truth from a directory (``truth_<t>.txt`` or ``truth.txt``) or one file."""
    path = Path(path)
    if path.is_file():
        return [_read_labels(path)] * steps
    files = {}
    for entry in path.iterdir():
        match = _TRUTH_RE.match(entry.name)
        if match:
            files[int(match.group(1))] = entry
    if files:
        if sorted(files) != list(range(1, steps + 1)):
            raise ParseError(f"expected truth files for steps 1..{steps}, found {sorted(files)}", str(path))
        return [_read_labels(files[t]) for t in range(1, steps + 1)]
    if (path / "truth.txt").exists():
        return [_read_labels(path / "truth.txt")] * steps
    raise ParseError("no ground-truth files found", str(path))


def _natural(label: str):
    return (0, int(label), "") if label.isdigit() else (1, 0, label)


def _community_rows(
    partitions: Sequence[Partition], events: Sequence[Event]
) -> Iterable[tuple[int, int, str, list[NodeId], list[NodeId]]]:
    born = {(e.t, e.cid) for e in events if e.kind == BORN}
    dissolved: dict[int, list[Event]] = {}
    for e in events:
        if e.kind == DISSOLVED:
            dissolved.setdefault(e.t, []).append(e)
    for p in partitions:
        for e in sorted(dissolved.get(p.t, []), key=lambda e: e.cid):
            yield p.t, e.cid, DISSOLVED, [], []
        for c in p.communities:
            kind = BORN if (p.t, c.cid) in born else CONTINUED
            leaders = [c.leaders.anchor] + sorted(c.leaders.leaders - {c.leaders.anchor})
            yield p.t, c.cid, kind, leaders, sorted(c.members)


def write_partitions(
    partitions: Sequence[Partition],
    events: Sequence[Event],
    symbols: SymbolTable,
    text_path: str | Path,
    json_path: str | Path | None = None,
) -> None:
    label = symbols.label
    jfh: TextIO | None = open(json_path, "w", encoding="utf-8") if json_path is not None else None
    try:
        with open(text_path, "w", encoding="utf-8") as fh:
            fh.write(f"# steps {len(partitions)}\n")
            for t, cid, kind, leaders, members in _community_rows(partitions, events):
                lead = [label(v) for v in leaders[:1]] + sorted((label(v) for v in leaders[1:]), key=_natural)
                mem = sorted((label(v) for v in members), key=_natural)
                fields = [str(t), str(cid), kind, str(len(lead)), str(len(mem)), *lead, "|", *mem]
                fh.write(" ".join(fields) + "\n")
                if jfh is not None:
                    record = {"t": t, "community_id": cid, "event": kind, "leader_ids": lead, "member_ids": mem}
                    jfh.write(json.dumps(record) + "\n")
    finally:
        if jfh is not None:
            jfh.close()


def read_partitions(path: str | Path, symbols: SymbolTable | None = None) -> tuple[list[Partition], SymbolTable]:
    """Parse a partitions text file back into per-step :class:`Partition` objects."""
    symbols = symbols if symbols is not None else SymbolTable()
    steps = None
    groups: dict[int, list[Community]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) == 2 and parts[0] == "steps":
                    steps = int(parts[1])
                continue
            parts = line.split()
            try:
                t, cid, kind = int(parts[0]), int(parts[1]), parts[2]
                n_lead, n_mem = int(parts[3]), int(parts[4])
            except (IndexError, ValueError):
                raise ParseError("malformed partition record", str(path), lineno) from None
            if len(parts) != 6 + n_lead + n_mem or parts[5 + n_lead] != "|":
                raise ParseError("leader/member counts do not match the record", str(path), lineno)
            if kind == DISSOLVED:
                groups.setdefault(t, [])
                continue
            leaders = [symbols.intern(v) for v in parts[5 : 5 + n_lead]]
            members = frozenset(symbols.intern(v) for v in parts[6 + n_lead :])
            if not leaders:
                raise ParseError("community without leaders", str(path), lineno)
            groups.setdefault(t, []).append(Community(cid, members, LeaderSet(frozenset(leaders), leaders[0], cid)))
    if steps is None:
        steps = max(groups, default=0)
    if steps < 1:
        raise ContractViolation(f"{path}: no partition records")
    partitions = [Partition(t, tuple(sorted(groups.get(t, []), key=lambda c: c.cid))) for t in range(1, steps + 1)]
    return partitions, symbols


def timelines_to_json(timelines: Sequence[CommunityTimeline], symbols: SymbolTable) -> list[dict]:
    label = symbols.label
    return [
        {
            "community_id": tl.cid,
            "birth_t": tl.birth_t,
            "death_t": tl.death_t,
            "members": {str(t): [label(v) for v in sorted(m)] for t, m in sorted(tl.members.items())},
            "leaders": {str(t): [label(v) for v in sorted(m)] for t, m in sorted(tl.leaders.items())},
        }
        for tl in timelines
    ]
