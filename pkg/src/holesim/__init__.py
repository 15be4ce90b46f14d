"""Discrete-event simulator of coverage-hole prevention and repair in
clustered wireless sensor networks with mobile backup nodes."""

from .energy import ChargeCategory, EnergyLedger, RadioModel, RadioModelKind
from .engine import RunResult, Scenario, Simulator, run_scenario
from .geometry import Cell, CoverageSets, GridSpec, Point
from .metrics import RunMetrics, compute_metrics
from .protocol import HoleRecord, NodeKind, RecoveryKind, SensorNode

__version__ = "0.1.0"

__all__ = [
    "Cell",
    "ChargeCategory",
    "CoverageSets",
    "EnergyLedger",
    "GridSpec",
    "HoleRecord",
    "NodeKind",
    "Point",
    "RadioModel",
    "RadioModelKind",
    "RecoveryKind",
    "RunMetrics",
    "RunResult",
    "Scenario",
    "SensorNode",
    "Simulator",
    "compute_metrics",
    "run_scenario",
    "__version__",
]
