#!/usr/bin/env python3
"""Scan desk-preset parameter combinations for the directional criteria.

For each candidate parameter set, runs proposed-vs-baseline pairs over the
node sweep {50,100,150,200} and failure sweep {25,50,75} and reports the
per-pair win rates for energy, hole-coverage lifetime and Jain index, plus
energy monotonicity in the failure percentage.
"""

import itertools
import sys
from concurrent.futures import ProcessPoolExecutor

sys.path.insert(0, "src")

from holesim.config import build_scenario, load_config, preset_path, resolve
from holesim.engine import run_scenario
from holesim.metrics import compute_metrics

SEEDS = list(range(1, 11))
NODES = [50, 100, 150, 200]
FAILURES = [25.0, 50.0, 75.0]


def one(args):
    base, overrides = args
    resolved = resolve(base, overrides)
    m = compute_metrics(run_scenario(build_scenario(resolved)))
    life = m.hole_coverage_lifetime if m.hole_coverage_lifetime is not None else 0.0
    return (m.avg_energy_consumed, life, m.load_balance)


def evaluate(tweaks, pool):
    base = load_config(preset_path("desk"))
    tasks = []
    index = []
    for n in NODES:
        for seed in SEEDS:
            for proto in ("proposed", "baseline"):
                ov = dict(tweaks)
                ov.update({"nodes.count": n, "sim.seed": seed, "sim.protocol": proto})
                tasks.append((base, ov))
                index.append(("nodes", n, seed, proto))
    for pct in FAILURES:
        for seed in SEEDS:
            for proto in ("proposed", "baseline"):
                ov = dict(tweaks)
                ov.update({"failures.percent": pct, "sim.seed": seed,
                           "sim.protocol": proto})
                tasks.append((base, ov))
                index.append(("fail", pct, seed, proto))
    results = dict(zip(index, pool.map(one, tasks, chunksize=4)))

    def wins(axis, values):
        w = [0, 0, 0]
        total = 0
        for v in values:
            for seed in SEEDS:
                p = results[(axis, v, seed, "proposed")]
                b = results[(axis, v, seed, "baseline")]
                total += 1
                if p[0] < b[0]:
                    w[0] += 1
                if p[1] > b[1]:
                    w[1] += 1
                if p[2] > b[2]:
                    w[2] += 1
        return [x / total for x in w]

    node_wins = wins("nodes", NODES)
    fail_wins = wins("fail", FAILURES)
    mono = {}
    for proto in ("proposed", "baseline"):
        means = []
        for pct in FAILURES:
            vals = [results[("fail", pct, seed, proto)][0] for seed in SEEDS]
            means.append(sum(vals) / len(vals))
        mono[proto] = (means, all(means[i] <= means[i + 1] + 1e-12
                                  for i in range(len(means) - 1)))
    return node_wins, fail_wins, mono


def main():
    candidates = []
    for (sub, cell), (r_l, r_s), round_s in itertools.product(
            [(125.0, 5.0), (100.0, 10.0)],
            [(55.0, 100.0), (45.0, 90.0)],
            [10.0, 20.0]):
        candidates.append({
            "grid.subregion_m": sub,
            "grid.cell_m": cell,
            "prevention.zones_per_side": 1,
            "radii.r_l_m": r_l,
            "radii.r_s_m": r_s,
            "sim.round_s": round_s,
            "nodes.initial_j": 0.5,
            "energy.e_amp": 1e-10,
            "energy.move_j_per_m": 0.0005,
        })
    with ProcessPoolExecutor(2) as pool:
        for tweaks in candidates:
            node_wins, fail_wins, mono = evaluate(tweaks, pool)
            print(f"--- {tweaks}")
            print(f"  node sweep wins  (energy, lifetime, jain): "
                  f"{[round(w, 2) for w in node_wins]}")
            print(f"  fail sweep wins  (energy, lifetime, jain): "
                  f"{[round(w, 2) for w in fail_wins]}")
            for proto, (means, ok) in mono.items():
                print(f"  {proto} energy vs pct: "
                      f"{[round(m, 4) for m in means]} nondecreasing={ok}")
            sys.stdout.flush()


if __name__ == "__main__":
    main()
