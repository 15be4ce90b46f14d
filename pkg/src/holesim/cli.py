"""Command-line front end: single runs, experiment sweeps, and plots.

``holesim run`` executes one scenario and emits a CSV row (plus an optional
JSON-lines event trace), ``holesim sweep`` fans a Cartesian product of
node counts, failure percentages, protocols and seeds out over worker
processes, and ``holesim plot`` renders per-protocol mean +- stddev curves
from a results CSV into a deterministic SVG.

Exit codes: 0 success, 1 configuration/validation error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Optional

from .config import ConfigError, build_scenario, load_config, resolve
from .engine import ScenarioValidationError, run_scenario
from .metrics import compute_metrics
from .svgplot import line_chart

CSV_VERSION = "# holesim-results v1"
CSV_COLUMNS = [
    "scenario_id", "seed", "protocol", "n_nodes", "failure_pct",
    "avg_energy_j", "load_balance", "hole_cov_lifetime_s", "recovery_time_s",
    "network_lifetime_s", "holes_total", "holes_unrecovered",
    "final_coverage_ratio",
]


def _fmt(value: Optional[float]) -> str:
    if value is None:
        return ""
    return f"{value:.6f}"


def _row_from_result(resolved: dict[str, Any], stem: str, result) -> list[str]:
    m = compute_metrics(result)
    pct = resolved["failures.percent"]
    scenario_id = f"{stem}-n{resolved['nodes.count']}-f{pct:g}"
    return [
        scenario_id,
        str(resolved["sim.seed"]),
        resolved["sim.protocol"],
        str(resolved["nodes.count"]),
        f"{pct:g}",
        _fmt(m.avg_energy_consumed),
        _fmt(m.load_balance),
        _fmt(m.hole_coverage_lifetime),
        _fmt(m.mean_recovery_time),
        _fmt(m.network_lifetime),
        str(m.holes_total),
        str(m.holes_unrecovered),
        _fmt(m.final_coverage_ratio),
    ]


def _row_for(resolved: dict[str, Any], stem: str) -> list[str]:
    result = run_scenario(build_scenario(resolved))
    return _row_from_result(resolved, stem, result)


def _write_csv(rows: list[list[str]], out: Optional[str]) -> None:
    lines = [CSV_VERSION, ",".join(CSV_COLUMNS)]
    lines.extend(",".join(row) for row in rows)
    text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_run(args: argparse.Namespace) -> int:
    overrides: dict[str, Any] = {}
    if args.seed is not None:
        overrides["sim.seed"] = args.seed
    if args.protocol is not None:
        overrides["sim.protocol"] = args.protocol
    resolved = resolve(load_config(args.config), overrides)
    stem = Path(args.config).stem
    result = run_scenario(build_scenario(resolved), trace=bool(args.trace))
    if args.trace:
        with open(args.trace, "w") as fh:
            for entry in result.trace:
                fh.write(json.dumps(entry, sort_keys=True) + "\n")
    _write_csv([_row_from_result(resolved, stem, result)], args.out)
    return 0


def _sweep_task(task: tuple[dict[str, Any], str]) -> tuple[tuple, list[str]]:
    resolved, stem = task
    row = _row_for(resolved, stem)
    key = (resolved["sim.protocol"], resolved["nodes.count"],
           resolved["failures.percent"], resolved["sim.seed"])
    return key, row


def cmd_sweep(args: argparse.Namespace) -> int:
    base = load_config(args.config)
    stem = Path(args.config).stem
    if not args.nodes and not args.failures:
        raise ConfigError(["sweep needs at least one axis (--nodes or --failures)"])
    node_axis = [int(v) for v in args.nodes.split(",")] if args.nodes else [None]
    failure_axis = ([float(v) for v in args.failures.split(",")]
                    if args.failures else [None])
    protocols = args.protocols.split(",")
    base_resolved = resolve(base)
    seed0 = args.seed if args.seed is not None else base_resolved["sim.seed"]
    seeds = [seed0 + i for i in range(args.seeds)]

    tasks = []
    for protocol in protocols:
        for n in node_axis:
            for pct in failure_axis:
                for seed in seeds:
                    overrides: dict[str, Any] = {
                        "sim.protocol": protocol, "sim.seed": seed,
                    }
                    if n is not None:
                        overrides["nodes.count"] = n
                    if pct is not None:
                        overrides["failures.percent"] = pct
                    tasks.append((resolve(base, overrides), stem))

    jobs = args.jobs or int(os.environ.get("HOLESIM_JOBS", "1"))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            keyed = list(pool.map(_sweep_task, tasks, chunksize=1))
    else:
        keyed = [_sweep_task(t) for t in tasks]
    keyed.sort(key=lambda kr: kr[0])
    _write_csv([row for _, row in keyed], args.out)
    return 0


def _read_results(path: str) -> list[dict[str, str]]:
    with open(path) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def cmd_plot(args: argparse.Namespace) -> int:
    rows = _read_results(args.csv)
    if not rows:
        raise ConfigError([f"no data rows in {args.csv}"])
    x_col = "n_nodes" if args.x == "nodes" else "failure_pct"
    if args.metric not in rows[0]:
        available = ", ".join(sorted(rows[0]))
        raise ConfigError([f"metric {args.metric!r} not in CSV; available: {available}"])
    grouped: dict[tuple[str, float], list[float]] = {}
    for row in rows:
        if row[args.metric] == "":
            continue
        key = (row["protocol"], float(row[x_col]))
        grouped.setdefault(key, []).append(float(row[args.metric]))
    series: dict[str, list[tuple[float, float, float]]] = {}
    for (protocol, x), values in sorted(grouped.items()):
        mean = sum(values) / len(values)
        if len(values) > 1:
            var = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
            std = math.sqrt(var)
        else:
            std = 0.0
        series.setdefault(protocol, []).append((x, mean, std))
    x_label = "number of nodes" if args.x == "nodes" else "failed nodes (%)"
    svg = line_chart(
        title=f"{args.metric} vs {x_label}",
        x_label=x_label,
        y_label=args.metric,
        series=sorted(series.items()),
    )
    Path(args.out).write_text(svg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holesim",
        description="Coverage-hole prevention/repair simulator for clustered "
                    "wireless sensor networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a single scenario")
    p_run.add_argument("config", help="scenario TOML file")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--protocol", choices=["proposed", "baseline"], default=None)
    p_run.add_argument("--out", default=None, help="CSV output path (default stdout)")
    p_run.add_argument("--trace", default=None, help="write a JSON-lines event trace")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run an experiment grid")
    p_sweep.add_argument("config")
    p_sweep.add_argument("--nodes", default=None, help="comma list of node counts")
    p_sweep.add_argument("--failures", default=None, help="comma list of failure %%")
    p_sweep.add_argument("--seeds", type=int, default=25, help="seeds per point")
    p_sweep.add_argument("--seed", type=int, default=None, help="first seed")
    p_sweep.add_argument("--protocols", default="proposed,baseline")
    p_sweep.add_argument("--jobs", type=int, default=None,
                         help="worker processes (default $HOLESIM_JOBS or 1)")
    p_sweep.add_argument("--out", default=None)
    p_sweep.set_defaults(func=cmd_sweep)

    p_plot = sub.add_parser("plot", help="render mean +- stddev curves to SVG")
    p_plot.add_argument("csv")
    p_plot.add_argument("--metric", required=True)
    p_plot.add_argument("--x", choices=["nodes", "failures"], default="nodes")
    p_plot.add_argument("--out", required=True)
    p_plot.set_defaults(func=cmd_plot)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ScenarioValidationError) as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
