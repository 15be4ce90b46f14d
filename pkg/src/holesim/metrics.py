"""Evaluation metrics computed from a finished run.

Covers the four comparison criteria (average energy consumption, load
balance, hole-coverage lifetime, recovery time) plus network lifetime and
the coverage-ratio series. Load balance is Jain's fairness index over
per-node consumed energy; network lifetime is the time of first static
node death (the run duration when none dies). All functions are pure
post-processing over immutable run output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .energy import EnergyLedger
from .engine import RunResult
from .protocol import HoleRecord


@dataclass
class RunMetrics:
    avg_energy_consumed: float
    load_balance: float
    hole_coverage_lifetime: Optional[float]
    mean_recovery_time: Optional[float]
    network_lifetime: float
    coverage_ratio_series: list[tuple[float, float]]
    holes_total: int
    holes_unrecovered: int
    final_coverage_ratio: float


def avg_energy(ledgers: Iterable[EnergyLedger]) -> float:
    """Mean consumed energy per deployed node, dead nodes included."""
    ledgers = list(ledgers)
    if not ledgers:
        raise ValueError("avg_energy over zero nodes is undefined")
    return sum(l.total_consumed for l in ledgers) / len(ledgers)


def load_balance(ledgers: Iterable[EnergyLedger]) -> float:
    """Jain fairness index over per-node consumed energy.

    (sum c)^2 / (n * sum c^2); equals 1 for perfectly equal consumption and
    1/n when a single node consumes everything. All-zero consumption counts
    as perfect balance by convention.
    """
    consumed = [l.total_consumed for l in ledgers]
    if not consumed:
        raise ValueError("load_balance over zero nodes is undefined")
    total = sum(consumed)
    if total == 0:
        return 1.0
    square_sum = sum(c * c for c in consumed)
    return (total * total) / (len(consumed) * square_sum)


def hole_coverage_lifetime(records: Iterable[HoleRecord],
                           duration: float) -> Optional[float]:
    """Mean time holes stayed covered, averaged over every hole.

    A recovered hole contributes its covered window (until reopening or the
    end of the run); an unrecovered hole contributes zero but still counts
    in the denominator. Returns None when no holes occurred at all.
    """
    n = 0
    covered_time = 0.0
    for rec in records:
        n += 1
        if rec.covered_at is not None:
            end = rec.reopened_at if rec.reopened_at is not None else duration
            covered_time += end - rec.covered_at
    if n == 0:
        return None
    return covered_time / n


def recovery_time(records: Iterable[HoleRecord]) -> Optional[float]:
    """Mean detection-to-coverage latency over recovered holes; None when
    nothing was recovered."""
    times = [rec.recovery_time for rec in records if rec.covered_at is not None]
    if not times:
        return None
    return sum(times) / len(times)


def network_lifetime(first_static_death: Optional[float], duration: float) -> float:
    """Time of first static node death; the full duration if none died."""
    return duration if first_static_death is None else first_static_death


def compute_metrics(result: RunResult) -> RunMetrics:
    ledgers = [n.ledger for n in result.nodes]
    unrecovered = sum(1 for r in result.records if r.covered_at is None)
    return RunMetrics(
        avg_energy_consumed=avg_energy(ledgers) if ledgers else 0.0,
        load_balance=load_balance(ledgers) if ledgers else 1.0,
        hole_coverage_lifetime=hole_coverage_lifetime(result.records, result.duration_s),
        mean_recovery_time=recovery_time(result.records),
        network_lifetime=network_lifetime(result.first_static_death, result.duration_s),
        coverage_ratio_series=result.coverage_series,
        holes_total=len(result.records),
        holes_unrecovered=unrecovered,
        final_coverage_ratio=result.final_coverage_ratio,
    )
