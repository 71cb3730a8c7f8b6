"""Command-line entry point: ``leadertrack {slice,generate,detect,baseline,eval}``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .benchgen import EventBenchConfig, KawadiaConfig, generate_events, generate_kawadia
from .errors import InvariantError, LeaderTrackError
from .formats import (
    read_partitions,
    read_snapshot_dir,
    read_stream,
    read_truth,
    timelines_to_json,
    write_partitions,
    write_snapshot_dir,
    write_truth_dir,
)
from .graph import DynamicNetwork, ingest_edge_stream
from .metrics import mean_defined, persistence_from_nodes, restricted_nmi
from .pipeline import run, run_baseline

log = logging.getLogger("leadertrack")

NMI_NOTE = "NMI = 2*I(A;B)/(H(A)+H(B)), natural log; restricted to shared nodes; two single-cluster partitions score 1"


class UsageError(LeaderTrackError):
    pass


def _fresh_dir(path: str) -> Path:
    out = Path(path)
    if out.exists() and (not out.is_dir() or any(out.iterdir())):
        raise UsageError(f"output directory {out} already exists and is not empty")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: Path, **fields: Any) -> None:
    manifest = {"tool": "leadertrack", "version": __version__, **fields}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _load_network(path: str, window: int | None) -> DynamicNetwork:
    p = Path(path)
    if p.is_dir():
        return read_snapshot_dir(p)
    if window is None:
        raise UsageError(f"{path} is an edge-stream file; --window is required")
    return ingest_edge_stream(read_stream(p), window)


def _write_timing(out: Path, seconds: Sequence[float]) -> None:
    with open(out / "timing.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "seconds"])
        for t, s in enumerate(seconds, start=1):
            writer.writerow([t, f"{s:.6f}"])
        writer.writerow(["total", f"{sum(seconds):.6f}"])


def cmd_slice(args: argparse.Namespace) -> int:
    net = ingest_edge_stream(read_stream(args.input), args.window)
    out = _fresh_dir(args.out)
    write_snapshot_dir(net, out)
    _write_manifest(
        out, command="slice", input=str(args.input), window=args.window,
        snapshots=net.delta, nodes=len(net.symbols), dropped_self_loops=net.dropped_self_loops,
    )
    print(f"wrote {net.delta} snapshots over {len(net.symbols)} nodes to {out}")
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    data = json.loads(Path(args.config).read_text(encoding="utf-8")) if args.config else {}
    if args.seed is not None:
        data["seed"] = args.seed
    if args.kind == "kawadia":
        cfg: KawadiaConfig | EventBenchConfig = KawadiaConfig.from_dict(data)
        net, truth = generate_kawadia(cfg)
    else:
        cfg = EventBenchConfig.from_dict(data)
        net, truth = generate_events(cfg)
    out = _fresh_dir(args.out)
    write_snapshot_dir(net, out)
    write_truth_dir(truth.steps, out)
    (out / "config.json").write_text(json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _write_manifest(
        out, command="generate", kind=args.kind, config=cfg.to_dict(), seed=cfg.seed,
        snapshots=net.delta, skipped_events=truth.skipped_events,
    )
    print(f"wrote {args.kind} benchmark with {net.delta} snapshots to {out}")
    return 0


def cmd_detect(args: argparse.Namespace) -> int:
    net = _load_network(args.input, args.window)
    threads = args.threads or os.cpu_count() or 1
    result = run(net, seed=args.seed, threads=threads, check=True)
    out = _fresh_dir(args.out)
    write_partitions(result.partitions, result.events, net.symbols, out / "partitions.txt", out / "partitions.jsonl")
    timelines = timelines_to_json(result.timelines, net.symbols)
    (out / "timelines.json").write_text(json.dumps(timelines, indent=1) + "\n", encoding="utf-8")
    _write_timing(out, result.seconds)
    _write_manifest(
        out, command="detect", input=str(args.input), window=args.window, seed=args.seed,
        threads=threads, snapshots=net.delta,
    )
    born = sum(1 for e in result.events if e.kind == "BORN")
    print(f"detected {len(result.timelines)} communities ({born} births) over {net.delta} snapshots "
          f"in {sum(result.seconds):.3f}s")
    return 0


def cmd_baseline(args: argparse.Namespace) -> int:
    net = _load_network(args.input, args.window)
    result = run_baseline(net, seed=args.seed, check=True)
    out = _fresh_dir(args.out)
    write_partitions(result.partitions, result.events, net.symbols, out / "partitions.txt", out / "partitions.jsonl")
    _write_timing(out, result.seconds)
    _write_manifest(out, command="baseline", input=str(args.input), window=args.window, seed=args.seed,
                    snapshots=net.delta)
    print(f"clustered {net.delta} snapshots independently in {sum(result.seconds):.3f}s")
    return 0


def evaluate(partitions_path: str | Path, truth_path: str | Path | None) -> list[tuple[int, str, float, int]]:
    """Metric rows ``(t, metric, value, universe_size)``; undefined entries are skipped."""
    partitions, symbols = read_partitions(partitions_path)
    labels = [p.labels() for p in partitions]
    rows: list[tuple[int, str, float, int]] = []
    for i in range(len(partitions) - 1):
        value, size = restricted_nmi(labels[i], labels[i + 1])
        if value is not None:
            rows.append((partitions[i].t, "smoothness", value, size))
    if truth_path is not None:
        truth = read_truth(truth_path, len(partitions))
        for p, lab, gt in zip(partitions, labels, truth):
            keyed = {symbols.intern(v): c for v, c in gt.items()}
            value, size = restricted_nmi(lab, keyed)
            if value is not None:
                rows.append((p.t, "ground_truth", value, size))
    points = persistence_from_nodes(partitions[:-1], [p.nodes for p in partitions[1:]])
    for pt in points:
        if pt.leader is not None:
            rows.append((pt.t, "leader_persistence", pt.leader, pt.n_leaders))
        if pt.follower is not None:
            rows.append((pt.t, "follower_persistence", pt.follower, pt.n_followers))
    rows.sort(key=lambda r: (r[1], r[0]))
    return rows


def cmd_eval(args: argparse.Namespace) -> int:
    out = _fresh_dir(args.out)
    summary = {}
    for i, path in enumerate(args.partitions):
        rows = evaluate(path, args.truth)
        name = "metrics.csv" if len(args.partitions) == 1 else f"metrics_{i + 1}.csv"
        with open(out / name, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "metric", "value", "universe_size"])
            for t, metric, value, size in rows:
                writer.writerow([t, metric, repr(value), size])
        means = {}
        for metric in sorted({r[1] for r in rows}):
            means[metric] = mean_defined([r[2] for r in rows if r[1] == metric])
        summary[name] = {"partitions": str(path), "means": means}
    _write_manifest(out, command="eval", partitions=[str(p) for p in args.partitions],
                    truth=str(args.truth) if args.truth else None, nmi=NMI_NOTE, summary=summary)
    for name, info in summary.items():
        print(name, " ".join(f"{k}={v:.4f}" for k, v in info["means"].items()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="leadertrack", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("slice", help="slice a timestamped edge stream into snapshot files")
    p.add_argument("input")
    p.add_argument("--window", type=int, required=True, help="window width in timestamp units")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("generate", help="generate a synthetic benchmark with ground truth")
    p.add_argument("kind", choices=["kawadia", "events"])
    p.add_argument("--config", help="JSON file of generator parameters")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    for name, func, text in (
        ("detect", cmd_detect, "track communities with leader-seeded incremental detection"),
        ("baseline", cmd_baseline, "cluster every snapshot independently"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("input", help="snapshot directory, or edge-stream file with --window")
        p.add_argument("--window", type=int)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", required=True)
        if name == "detect":
            p.add_argument("--threads", type=int, default=0, help="expansion workers (default: all cores)")
        p.set_defaults(func=func)

    p = sub.add_parser("eval", help="smoothness, ground-truth NMI and persistence series as CSV")
    p.add_argument("partitions", nargs="+")
    p.add_argument("--truth", help="ground-truth directory or file")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InvariantError as exc:
        print(f"error: invariant violated: {exc}", file=sys.stderr)
        return 3
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (LeaderTrackError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
