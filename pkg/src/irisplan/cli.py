"""Command-line entry point.

Examples::

    irisplan --scenario planar.json --mode iris --eps0 1 --p0 1 --f 0 --budget 30 --out runs/a
    irisplan --scenario five_vertex.json --mode oracle --out runs/five_vertex
    irisplan --scenario five_vertex.json --mode search-once --eps0 0.6667 --p0 0.5 --out runs/five_vertex

Writes ``anytime.csv``, ``plan.json`` and ``summary.json`` to ``--out``.
Exit status: 0 on success, 2 on configuration errors, 3 when the start
configuration is in collision.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .bitset import popcount, to_indices
from .clock import make_clock
from .driver import ApproxParams, AnytimeRecord, run
from .graph import ExplicitGraph
from .io import Scenario, ScenarioError, load
from .oracle import OracleGuardError, optimal_search
from .roadmap import InfeasibleStartError, Roadmap
from .search import near_optimal_search

CSV_HEADER = ["time_s", "iteration", "coverage_count", "coverage_fraction", "path_length", "roadmap_vertices"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3


class ConfigError(ValueError):
    pass


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="irisplan", description="Incremental inspection planning.")
    ap.add_argument("--scenario", required=True, help="scenario or explicit-graph JSON file")
    ap.add_argument("--mode", choices=["iris", "oracle", "search-once"], default="iris")
    ap.add_argument("--eps0", type=float, default=1.0, help="initial epsilon (default 1.0)")
    ap.add_argument("--p0", type=float, default=1.0, help="initial p (default 1.0)")
    ap.add_argument("--f", type=float, default=0.0, help="tightening factor (default 0)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--budget", type=float, default=30.0, help="time budget in clock seconds (default 30)")
    ap.add_argument("--batch", type=int, default=10, help="roadmap vertices added per iteration")
    ap.add_argument("--out", default="irisplan-out", help="output directory")
    ap.add_argument(
        "--clock",
        choices=["work", "wall"],
        default="work",
        help="'work' (default) charges counted operations and is reproducible; 'wall' uses real time",
    )
    ap.add_argument("--gamma", type=float, default=3.0, help="RRG connection-radius scale")
    ap.add_argument("--step", type=float, default=0.5, help="RRT steering step (rad)")
    ap.add_argument("--resolution", type=float, default=0.05, help="edge collision-check resolution (rad)")
    ap.add_argument("--trace", action="store_true", help="write search trace lines to trace.log")
    ap.add_argument("--snapshot", action="store_true", help="write the final roadmap to roadmap.json")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def _check_config(args) -> None:
    if args.eps0 < 0:
        raise ConfigError("--eps0 must be non-negative")
    if not 0 < args.p0 <= 1:
        raise ConfigError("--p0 must lie in (0, 1]")
    if not 0 <= args.f <= 1:
        raise ConfigError("--f must lie in [0, 1]")
    if not args.budget > 0:
        raise ConfigError("--budget must be positive")
    if args.batch < 1:
        raise ConfigError("--batch must be at least 1")


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, float) else str(x)


def write_outputs(out: Path, records: list[AnytimeRecord], plan: dict, summary: dict) -> None:
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "anytime.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in records:
            w.writerow(
                [_fmt(r.wall_time), r.iteration, r.coverage_count, _fmt(r.coverage_fraction), _fmt(r.path_length), r.roadmap_size]
            )
    (out / "plan.json").write_text(json.dumps(plan, indent=2) + "\n")
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")


def _summary(args, record: AnytimeRecord | None, total: int, extra: dict) -> dict:
    metrics = {
        "coverage_count": record.coverage_count if record else 0,
        "coverage_total": total,
        "coverage_fraction": record.coverage_fraction if record else 0.0,
        "path_length": record.path_length if record else None,
        "roadmap_vertices": record.roadmap_size if record else None,
        "time_s": record.wall_time if record else None,
        "iteration": record.iteration if record else None,
    }
    config = {
        k: getattr(args, k)
        for k in ("scenario", "mode", "eps0", "p0", "f", "seed", "budget", "batch", "clock", "gamma", "step", "resolution")
    }
    return {**metrics, **extra, "config": config}


def _graph_mode(args, graph: ExplicitGraph, clock) -> tuple[list[AnytimeRecord], dict, dict]:
    total = popcount(graph.covered)
    trace = [] if args.trace else None
    if args.mode == "oracle":
        path = optimal_search(graph, graph.start)
        extra = {}
    elif args.mode == "search-once":
        res = near_optimal_search(graph, graph.start, graph.covered, args.eps0, args.p0, clock=clock, trace=trace)
        if not res.found:
            raise ConfigError(f"search ended with status {res.status}")
        path = res.path
        extra = {"pap_length": res.pap.length, "pap_coverage": to_indices(res.pap.coverage), "expansions": res.stats.expansions}
    else:
        raise ConfigError("--mode iris needs a geometric scenario, not an explicit graph")
    c = popcount(path.coverage)
    rec = AnytimeRecord(clock.elapsed(), 1, c, c / total if total else 1.0, path.length, graph.n_vertices)
    plan = {
        "vertices": [graph.labels[v] for v in path.vertices],
        "length": path.length,
        "coverage": to_indices(path.coverage),
    }
    if trace is not None:
        _write_trace(Path(args.out), trace, graph.labels)
    return [rec], plan, _summary(args, rec, total, extra)


def _write_trace(out: Path, trace, labels=None) -> None:
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "trace.log", "w") as fh:
        for ev in trace:
            if labels is not None:
                ev = ev._replace(vertex=labels[ev.vertex])
            fh.write(f"{ev}\n")


def _plan_from_roadmap(roadmap: Roadmap, path) -> dict:
    if path is None:
        return {"vertices": [], "configurations": [], "length": None, "coverage": []}
    return {
        "vertices": list(path.vertices),
        "configurations": [roadmap.config(v).tolist() for v in path.vertices],
        "length": path.length,
        "coverage": to_indices(path.coverage),
    }


def _scenario_mode(args, sc: Scenario, clock):
    k = sc.workspace.n_poi
    if args.mode == "iris":
        result = run(
            sc.workspace,
            sc.robot,
            sc.start,
            ApproxParams(args.eps0, args.p0, args.f),
            seed=args.seed,
            time_budget=args.budget,
            batch=args.batch,
            clock=clock,
            gamma=args.gamma,
            step=args.step,
            resolution=args.resolution,
        )
        records = result.records
        plan = _plan_from_roadmap(result.roadmap, result.plan)
        extra = {
            "iterations": result.iterations,
            "final_roadmap_vertices": result.roadmap.n_vertices,
            "mean_episode_time_s": result.mean_episode_time if result.episode_times else None,
            "invalidated_edges": result.invalidated_edges,
            "final_epsilon": result.params.epsilon,
            "final_p": result.params.p,
        }
        roadmap = result.roadmap
    elif args.mode == "search-once":
        trace = [] if args.trace else None
        result = run(
            sc.workspace,
            sc.robot,
            sc.start,
            ApproxParams(args.eps0, args.p0, 0.0),
            seed=args.seed,
            time_budget=args.budget,
            batch=args.batch,
            clock=clock,
            max_iterations=1,
            gamma=args.gamma,
            step=args.step,
            resolution=args.resolution,
        )
        records = result.records
        plan = _plan_from_roadmap(result.roadmap, result.plan)
        extra = {"iterations": result.iterations, "invalidated_edges": result.invalidated_edges}
        roadmap = result.roadmap
        if trace is not None:
            near_optimal_search(roadmap, 0, roadmap.covered, args.eps0, args.p0, trace=trace)
            _write_trace(Path(args.out), trace)
    else:
        roadmap = Roadmap(
            sc.robot, sc.workspace, sc.start, seed=args.seed, gamma=args.gamma, step=args.step,
            resolution=args.resolution, clock=clock,
        )
        roadmap.grow(args.batch)
        path = optimal_search(roadmap, 0)
        c = popcount(path.coverage)
        records = [AnytimeRecord(clock.elapsed(), 1, c, c / k, path.length, roadmap.n_vertices)]
        plan = _plan_from_roadmap(roadmap, path)
        extra = {"note": "optimal over the unvalidated roadmap graph"}
    if args.snapshot:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        (Path(args.out) / "roadmap.json").write_text(json.dumps(roadmap.to_dict()) + "\n")
    return records, plan, _summary(args, records[-1] if records else None, k, extra)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        _check_config(args)
        loaded = load(args.scenario)
        clock = make_clock(args.clock)
        if isinstance(loaded, ExplicitGraph):
            records, plan, summary = _graph_mode(args, loaded, clock)
        else:
            records, plan, summary = _scenario_mode(args, loaded, clock)
    except InfeasibleStartError as exc:
        print(f"irisplan: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ConfigError, ScenarioError, OracleGuardError) as exc:
        print(f"irisplan: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_CONFIG
    write_outputs(Path(args.out), records, plan, summary)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
