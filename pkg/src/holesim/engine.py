"""Deterministic discrete-event engine driving the coverage protocols.

Events are processed in (time, sequence) order; the sequence number is
assigned at scheduling time, so equal-time events fire in the order they
were scheduled. A run is a pure function of its :class:`Scenario` — the
same scenario (seed included) always yields byte-identical output. Three
independent PRNG streams (placement, mobility, failures) are derived from
the master seed so that enabling one source of randomness never perturbs
the others.
"""

from __future__ import annotations

import copy
import enum
import hashlib
import heapq
import math
import random
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

from .energy import ChargeCategory, EnergyLedger, RadioModel, rx_energy, tx_energy
from .geometry import Cell, GridSpec, Point, cells_in_radius, coverage_sets, distance
from .protocol import (
    Cluster,
    CoverageProtocol,
    HoleRecord,
    MessageKind,
    NodeKind,
    RecoveryKind,
    SensorNode,
    hole_cells,
    make_protocol,
)

PRNG_NAME = "mt19937/sha256-derived-streams"


class EventKind(enum.Enum):
    ROUND_START = "round_start"
    TIMER_EXPIRY = "timer_expiry"
    MOBILE_ARRIVAL = "mobile_arrival"
    TARGET_SAMPLE = "target_sample"
    GLOBAL_UPDATE = "global_update"
    FAILURE_INJECTION = "failure_injection"
    SIM_END = "sim_end"


@dataclass(order=True)
class SimEvent:
    """Scheduler entry, ordered by (time, seq)."""

    time: float
    seq: int
    kind: EventKind = field(compare=False)
    payload: Any = field(compare=False, default=None)


@dataclass
class TargetState:
    """Random-waypoint walker: move to the waypoint, pause, pick a new one."""

    pos: Point
    waypoint: Point
    speed: float
    pause_left: float = 0.0


@dataclass
class MessageSizes:
    """Control and data message sizes in bytes."""

    hello_b: int = 64
    head_announce_b: int = 64
    energy_report_b: int = 64
    crisis_alert_b: int = 64
    help_request_b: int = 64
    mobile_dispatch_b: int = 64
    ql_broadcast_b: int = 64
    ql_per_cell_b: int = 2
    sink_report_b: int = 128
    data_packet_b: int = 512


@dataclass
class Scenario:
    """Everything that determines a run; two equal scenarios run identically."""

    grid: GridSpec
    radio: RadioModel
    duration_s: float
    seed: int
    protocol: str = "proposed"
    round_s: float = 10.0
    n_nodes: int = 0
    mobile_fraction: float = 0.2
    initial_j: float = 4.0
    r_l: float = 20.0
    r_s: float = 100.0
    msg: MessageSizes = field(default_factory=MessageSizes)
    prevention_zones_per_side: int = 2
    t_base_s: float = 1.0
    mobile_selection: str = "nearest"
    mobile_speed_mps: float = 5.0
    sink_pos: Optional[Point] = None
    target_count: int = 1
    sample_s: float = 1.0
    v_min: float = 1.0
    v_max: float = 10.0
    pause_s: float = 0.0
    global_update_s: float = 60.0
    failure_plan: tuple = ()
    idle_w: float = 1e-4
    sleep_w: float = 1e-5
    move_j_per_m: float = 0.0
    sense_j_per_event: float = 0.0
    explicit_nodes: Optional[list[SensorNode]] = None
    metadata: dict = field(default_factory=dict)

    def validate(self) -> list[str]:
        """All violated constraints, empty when the scenario is runnable."""
        p: list[str] = []
        if self.protocol not in ("proposed", "baseline"):
            p.append(f"protocol must be 'proposed' or 'baseline', got {self.protocol!r}")
        if self.duration_s <= 0:
            p.append(f"duration_s must be > 0, got {self.duration_s}")
        if self.round_s <= 0:
            p.append(f"round_s must be > 0, got {self.round_s}")
        if not (0 < self.r_l < self.r_s):
            p.append(f"need 0 < r_l < r_s, got r_l={self.r_l}, r_s={self.r_s}")
        if self.n_nodes < 0:
            p.append(f"n_nodes must be >= 0, got {self.n_nodes}")
        if not (0 <= self.mobile_fraction <= 1):
            p.append(f"mobile_fraction must be in [0,1], got {self.mobile_fraction}")
        if self.initial_j <= 0:
            p.append(f"initial_j must be > 0, got {self.initial_j}")
        if self.prevention_zones_per_side < 1:
            p.append("prevention_zones_per_side must be >= 1")
        if self.t_base_s <= 0:
            p.append(f"t_base_s must be > 0, got {self.t_base_s}")
        if self.mobile_selection not in ("nearest", "farthest"):
            p.append(f"mobile_selection must be nearest|farthest, got {self.mobile_selection!r}")
        if self.mobile_speed_mps <= 0:
            p.append(f"mobile_speed_mps must be > 0, got {self.mobile_speed_mps}")
        if self.target_count < 0:
            p.append(f"target_count must be >= 0, got {self.target_count}")
        if self.sample_s <= 0:
            p.append(f"sample_s must be > 0, got {self.sample_s}")
        if not (0 < self.v_min <= self.v_max):
            p.append(f"need 0 < v_min <= v_max, got {self.v_min}, {self.v_max}")
        if self.pause_s < 0:
            p.append(f"pause_s must be >= 0, got {self.pause_s}")
        if self.global_update_s <= 0:
            p.append(f"global_update_s must be > 0, got {self.global_update_s}")
        for t, pct in self.failure_plan:
            if not (0 <= pct <= 100):
                p.append(f"failure percent must be in [0,100], got {pct}")
            if not (0 <= t <= self.duration_s):
                p.append(f"failure time {t} outside [0, {self.duration_s}]")
        for name in ("idle_w", "sleep_w", "move_j_per_m", "sense_j_per_event"):
            if getattr(self, name) < 0:
                p.append(f"{name} must be >= 0")
        if self.sink_pos is not None:
            if not (0 <= self.sink_pos.x <= self.grid.width
                    and 0 <= self.sink_pos.y <= self.grid.height):
                p.append(f"sink position {self.sink_pos} outside the target area")
        if self.explicit_nodes is not None:
            seen = set()
            for i, node in enumerate(self.explicit_nodes):
                if node.id != i:
                    p.append(f"explicit node ids must be 0..n-1 in order, got {node.id} at {i}")
                if node.id in seen:
                    p.append(f"duplicate node id {node.id}")
                seen.add(node.id)
                if not (0 <= node.pos.x <= self.grid.width
                        and 0 <= node.pos.y <= self.grid.height):
                    p.append(f"node {node.id} at {node.pos} outside the target area")
        return p


class ScenarioValidationError(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("invalid scenario:\n  " + "\n  ".join(problems))


@dataclass
class RunResult:
    """Final state of a run, consumed by the metrics and CLI layers."""

    protocol: str
    seed: int
    duration_s: float
    nodes: list[SensorNode]
    records: list[HoleRecord]
    clusters: dict[int, Cluster]
    coverage_series: list[tuple[float, float]]
    first_static_death: Optional[float]
    rx_expected_j: float
    msg_counts: dict[str, int]
    events_processed: int
    metadata: dict
    trace: Optional[list[dict]] = None

    @property
    def final_coverage_ratio(self) -> float:
        return self.coverage_series[-1][1] if self.coverage_series else 0.0


def derive_stream(seed: int, name: str) -> random.Random:
    """Independent, platform-stable PRNG stream keyed by the master seed."""
    digest = hashlib.sha256(f"{seed}:{name}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def place_nodes(scenario: Scenario) -> list[SensorNode]:
    """Uniform i.i.d. placement of static then mobile nodes from the
    placement stream; mobiles start asleep with untouched batteries."""
    rng = derive_stream(scenario.seed, "placement")
    n_mobile = int(scenario.n_nodes * scenario.mobile_fraction + 1e-9)
    n_static = scenario.n_nodes - n_mobile
    nodes: list[SensorNode] = []
    for i in range(scenario.n_nodes):
        pos = Point(rng.uniform(0.0, scenario.grid.width),
                    rng.uniform(0.0, scenario.grid.height))
        mobile = i >= n_static
        nodes.append(SensorNode(
            id=i,
            kind=NodeKind.MOBILE if mobile else NodeKind.STATIC,
            pos=pos,
            ledger=EnergyLedger(scenario.initial_j),
            r_l_base=scenario.r_l,
            r_s=scenario.r_s,
            asleep=mobile,
        ))
    return nodes


def advance_target(state: TargetState, dt: float, rng: random.Random,
                   grid: GridSpec, v_min: float, v_max: float, pause_s: float) -> None:
    """Advance one random-waypoint walker by ``dt`` seconds in place."""
    remaining = dt
    while remaining > 1e-12:
        if state.pause_left > 0:
            used = min(state.pause_left, remaining)
            state.pause_left -= used
            remaining -= used
            if state.pause_left > 0:
                return
            state.waypoint = Point(rng.uniform(0.0, grid.width),
                                   rng.uniform(0.0, grid.height))
            state.speed = rng.uniform(v_min, v_max)
            continue
        d = distance(state.pos, state.waypoint)
        t_need = d / state.speed if state.speed > 0 else math.inf
        if t_need > remaining:
            frac = remaining * state.speed / d
            state.pos = Point(state.pos.x + (state.waypoint.x - state.pos.x) * frac,
                              state.pos.y + (state.waypoint.y - state.pos.y) * frac)
            return
        state.pos = state.waypoint
        remaining -= t_need
        if pause_s > 0:
            state.pause_left = pause_s
        else:
            state.waypoint = Point(rng.uniform(0.0, grid.width),
                                   rng.uniform(0.0, grid.height))
            state.speed = rng.uniform(v_min, v_max)


def inject_failures(nodes: list[SensorNode], percent: float,
                    rng: random.Random) -> list[int]:
    """Pick floor(percent% of alive static nodes) without replacement.

    Mobiles are never failed; returns the chosen ids sorted ascending."""
    alive_static = [n.id for n in nodes if n.kind is NodeKind.STATIC and n.alive]
    k = int(len(alive_static) * percent / 100.0 + 1e-9)
    return sorted(rng.sample(alive_static, k))


class CoverageMap:
    """Incremental cell -> covering-disk count over the whole grid."""

    __slots__ = ("counts", "n_covered")

    def __init__(self) -> None:
        self.counts: dict[Cell, int] = {}
        self.n_covered = 0

    def add(self, cells: Iterable[Cell]) -> None:
        counts = self.counts
        for c in cells:
            k = counts.get(c, 0)
            if k == 0:
                self.n_covered += 1
            counts[c] = k + 1

    def remove(self, cells: Iterable[Cell]) -> None:
        counts = self.counts
        for c in cells:
            k = counts[c] - 1
            if k == 0:
                del counts[c]
                self.n_covered -= 1
            else:
                counts[c] = k

    def covered(self, cell: Cell) -> bool:
        return cell in self.counts


class SpatialIndex:
    """Uniform-bucket index for range queries up to one bucket side."""

    def __init__(self, bucket_side: float) -> None:
        self.side = bucket_side
        self.buckets: dict[tuple[int, int], list[int]] = {}

    def _key(self, pos: Point) -> tuple[int, int]:
        return (int(pos.x / self.side), int(pos.y / self.side))

    def insert(self, node: SensorNode) -> None:
        self.buckets.setdefault(self._key(node.pos), []).append(node.id)

    def remove(self, node: SensorNode) -> None:
        key = self._key(node.pos)
        bucket = self.buckets.get(key)
        if bucket and node.id in bucket:
            bucket.remove(node.id)
            if not bucket:
                del self.buckets[key]

    def query_ids(self, pos: Point, radius: float) -> list[int]:
        """Candidate ids within ``radius`` (radius must not exceed the bucket
        side); caller still applies the exact distance filter."""
        bx, by = self._key(pos)
        out: list[int] = []
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                out.extend(self.buckets.get((bx + dx, by + dy), ()))
        out.sort()
        return out


class Simulator:
    """Single-threaded deterministic event loop around one scenario.

    All state is owned by the instance; independent Simulator objects never
    interact, so any number of runs may execute concurrently in separate
    processes or threads.
    """

    def __init__(self, scenario: Scenario, trace: bool = False):
        problems = scenario.validate()
        if problems:
            raise ScenarioValidationError(problems)
        self.cfg = scenario
        self.grid = scenario.grid
        self.radio = scenario.radio
        self.now = 0.0
        self._seq = 0
        self._heap: list[SimEvent] = []
        self._trace: Optional[list[dict]] = [] if trace else None
        self.protocol: CoverageProtocol = make_protocol(scenario.protocol)

        if scenario.explicit_nodes is not None:
            self.nodes = copy.deepcopy(scenario.explicit_nodes)
        else:
            self.nodes = place_nodes(scenario)
        self.sink = scenario.sink_pos or Point(self.grid.width / 2.0,
                                               self.grid.height / 2.0)
        self.clusters = {
            i: Cluster(id=i, bounds=self.grid.subregion_bounds(i))
            for i in range(self.grid.n_subregions)
        }
        self.records: dict[int, HoleRecord] = {}
        self.open_record_ids: set[int] = set()
        self._next_hole_id = 0
        self.covmap = CoverageMap()
        self.index = SpatialIndex(bucket_side=2.0 * scenario.r_s)
        self._cov_key: dict[int, tuple] = {}
        self._qhat_cache: dict[int, tuple] = {}
        self._covering: set[int] = set()
        self._raised_by_hole: dict[int, set[int]] = {}
        self._free_mobile_ids: set[int] = set()
        self._mobility_rng = derive_stream(scenario.seed, "mobility")
        self._failure_rng = derive_stream(scenario.seed, "failures")
        self.targets: list[TargetState] = []
        self.first_static_death: Optional[float] = None
        self.rx_expected_j = 0.0
        self.msg_counts: dict[str, int] = {}
        self.coverage_series: list[tuple[float, float]] = []
        self.events_processed = 0
        self._last_idle_t = 0.0

        for node in self.nodes:
            if node.sensing:
                self.refresh_coverage(node)
                self._start_covering(node)
            elif node.free_mobile:
                self._free_mobile_ids.add(node.id)
        self.refresh_cluster_membership()

    # -- scheduling ---------------------------------------------------------

    def schedule(self, time: float, kind: EventKind, payload: Any = None) -> None:
        if time < self.now:
            raise RuntimeError(f"event {kind} scheduled in the past: {time} < {self.now}")
        heapq.heappush(self._heap, SimEvent(time, self._seq, kind, payload))
        self._seq += 1

    def schedule_timer(self, node: SensorNode, record: HoleRecord, delay: float) -> None:
        record.timer_pending = True
        self.schedule(self.now + delay, EventKind.TIMER_EXPIRY,
                      (node.id, record.hole_id))

    def trace(self, event: str, **fields) -> None:
        if self._trace is not None:
            entry = {"t": round(self.now, 9), "event": event}
            entry.update(fields)
            self._trace.append(entry)

    # -- coverage bookkeeping ------------------------------------------------

    def refresh_coverage(self, node: SensorNode) -> None:
        key = (node.pos.x, node.pos.y, node.r_l_current)
        if self._cov_key.get(node.id) != key:
            node.coverage = coverage_sets(node.pos, node.r_l_current, node.r_s, self.grid)
            self._cov_key[node.id] = key
            node.coverage_version += 1

    def _start_covering(self, node: SensorNode) -> None:
        if node.id not in self._covering:
            self.covmap.add(node.coverage.q_l)
            self.index.insert(node)
            self._covering.add(node.id)

    def _stop_covering(self, node: SensorNode) -> None:
        if node.id in self._covering:
            self.covmap.remove(node.coverage.q_l)
            self.index.remove(node)
            self._covering.discard(node.id)

    def set_node_radius(self, node: SensorNode, new_r: float) -> None:
        if not (node.r_l_base <= new_r <= node.r_s):
            raise ValueError(f"radius {new_r} outside [{node.r_l_base}, {node.r_s}]")
        if new_r == node.r_l_current:
            return
        old_q_l = node.coverage.q_l
        node.r_l_current = new_r
        node.coverage = coverage_sets(node.pos, new_r, node.r_s, self.grid)
        self._cov_key[node.id] = (node.pos.x, node.pos.y, new_r)
        node.coverage_version += 1
        if node.id in self._covering:
            new_q_l = node.coverage.q_l
            self.covmap.add(new_q_l - old_q_l)
            self.covmap.remove(old_q_l - new_q_l)

    def mark_raised_for(self, node: SensorNode, hole_id: int) -> None:
        if node.raised_for is None:
            node.raised_for = hole_id
            self._raised_by_hole.setdefault(hole_id, set()).add(node.id)

    def restore_raised_ranges(self, hole_id: int) -> None:
        removed: set[Cell] = set()
        for nid in sorted(self._raised_by_hole.pop(hole_id, ())):
            node = self.nodes[nid]
            node.raised_for = None
            if node.sensing:
                old_q_l = node.coverage.q_l
                self.set_node_radius(node, node.r_l_base)
                removed |= old_q_l - node.coverage.q_l
                self.trace("range_restore", node=node.id, hole=hole_id)
        if removed:
            self._check_reopens(frozenset(removed))

    def neighbors_within(self, node: SensorNode, radius: float) -> list[SensorNode]:
        out = []
        for nid in self.index.query_ids(node.pos, radius):
            if nid == node.id:
                continue
            other = self.nodes[nid]
            if other.sensing and distance(node.pos, other.pos) <= radius:
                out.append(other)
        return out

    def detect_hole(self, node: SensorNode) -> set[Cell]:
        """Eq-style ring subtraction against the neighbors' advertised
        coverage, memoized on the participants' coverage versions."""
        if not node.coverage.q_l_minus_s:
            return set()
        sig = (node.coverage_version,
               tuple((nb.node_id, self.nodes[nb.node_id].coverage_version)
                     for nb in node.neighbor_table))
        cached = self._qhat_cache.get(node.id)
        if cached is not None and cached[0] == sig:
            return set(cached[1])
        q_hat = hole_cells(node.coverage, (nb.q_l for nb in node.neighbor_table))
        self._qhat_cache[node.id] = (sig, frozenset(q_hat))
        return q_hat

    def refresh_cluster_membership(self) -> None:
        for cluster in self.clusters.values():
            cluster.member_ids = []
        for node in self.nodes:
            if not node.alive:
                continue
            cid = self.grid.subregion_index(node.pos.x, node.pos.y)
            node.cluster_id = cid
            self.clusters[cid].member_ids.append(node.id)

    def free_mobiles(self) -> list[SensorNode]:
        return [self.nodes[i] for i in sorted(self._free_mobile_ids)]

    # -- hole records ---------------------------------------------------------

    def open_record(self, detector_id: Optional[int], cells: Iterable[Cell]) -> HoleRecord:
        record = HoleRecord(
            hole_id=self._next_hole_id,
            detecting_node=detector_id,
            cells=frozenset(cells),
            detected_at=self.now,
        )
        self._next_hole_id += 1
        self.records[record.hole_id] = record
        self.open_record_ids.add(record.hole_id)
        if detector_id is not None:
            self.nodes[detector_id].open_record_id = record.hole_id
        self.trace("hole_detected", hole=record.hole_id, node=detector_id,
                   cells=len(record.cells))
        return record

    def close_record(self, record: HoleRecord, kind: RecoveryKind) -> None:
        record.covered_at = self.now
        record.covered_by = kind
        self.open_record_ids.discard(record.hole_id)
        if record.detecting_node is not None:
            detector = self.nodes[record.detecting_node]
            if detector.open_record_id == record.hole_id:
                detector.open_record_id = None
        self.trace("hole_covered", hole=record.hole_id, by=kind.value,
                   after=round(self.now - record.detected_at, 9))

    def uncovered_cells(self, record: HoleRecord) -> list[Cell]:
        covered = self.covmap.covered
        return [c for c in record.cells if not covered(c)]

    def cells_uncovered_at_base(self, record: HoleRecord) -> list[Cell]:
        """Hole cells not covered when every node that raised its range for
        this hole is counted at its base radius instead."""
        rings = []
        for nid in sorted(self._raised_by_hole.get(record.hole_id, ())):
            node = self.nodes[nid]
            if node.id in self._covering:
                base = cells_in_radius(node.pos, node.r_l_base, self.grid)
                rings.append(node.coverage.q_l - base)
        counts = self.covmap.counts
        out = []
        for c in record.cells:
            k = counts.get(c, 0)
            for ring in rings:
                if c in ring:
                    k -= 1
            if k <= 0:
                out.append(c)
        return out

    def recheck_open_records(self, kind: RecoveryKind,
                             added: Optional[frozenset[Cell]] = None) -> None:
        """Close every open record whose cells are now all covered.

        ``added`` narrows the scan to records touching freshly covered
        cells; an open record not intersecting them still has the uncovered
        cell that kept it open, so skipping it is sound.
        """
        covered = self.covmap.covered
        for hid in sorted(self.open_record_ids):
            record = self.records[hid]
            if added is not None and not (record.cells & added):
                continue
            if all(covered(c) for c in record.cells):
                self.close_record(record, kind)

    def _check_reopens(self, removed: Optional[frozenset[Cell]] = None) -> None:
        covered = self.covmap.covered
        reopened = []
        for record in self.records.values():
            if (not record.recovered or record.reopened_at is not None
                    or record.covered_by is RecoveryKind.UNRECOVERED):
                continue
            probe = record.cells if removed is None else record.cells & removed
            if probe and any(not covered(c) for c in probe):
                reopened.append(record)
        for record in reopened:
            record.reopened_at = self.now
            detector = record.detecting_node
            if detector is not None and not self.nodes[detector].sensing:
                detector = None
            fresh = self.open_record(detector, record.cells)
            fresh.reopened_from = record.hole_id
            self.trace("hole_reopened", hole=record.hole_id, fresh=fresh.hole_id)
            self.protocol.on_hole_reopened(self, fresh)

    # -- energy and messaging -------------------------------------------------

    def charge_node(self, node: SensorNode, category: ChargeCategory,
                    amount: float) -> None:
        if not node.ledger.alive:
            return
        if not node.ledger.charge(category, amount):
            self._on_death(node)

    def _on_death(self, node: SensorNode) -> None:
        if node.kind is NodeKind.STATIC and self.first_static_death is None:
            self.first_static_death = self.now
        was_covering = node.id in self._covering
        self._stop_covering(node)
        node.coverage_version += 1
        self.trace("node_death", node=node.id, kind=node.kind.value)
        if was_covering:
            self._check_reopens(node.coverage.q_l)

    def _count(self, kind: MessageKind) -> None:
        self.msg_counts[kind.value] = self.msg_counts.get(kind.value, 0) + 1

    def send_broadcast(self, src: SensorNode, kind: MessageKind, bits: int,
                       radius: float) -> list[SensorNode]:
        self._count(kind)
        self.charge_node(src, ChargeCategory.TX, tx_energy(self.radio, bits, radius))
        receivers = self.neighbors_within(src, radius)
        cost = rx_energy(self.radio, bits)
        for node in receivers:
            self.rx_expected_j += cost
            self.charge_node(node, ChargeCategory.RX, cost)
        return receivers

    def send_unicast(self, src: SensorNode, kind: MessageKind, bits: int,
                     dst: SensorNode) -> bool:
        self._count(kind)
        d = distance(src.pos, dst.pos)
        self.charge_node(src, ChargeCategory.TX, tx_energy(self.radio, bits, d))
        eligible = dst.sensing or (kind is MessageKind.MOBILE_DISPATCH
                                   and dst.alive and dst.asleep)
        if eligible:
            cost = rx_energy(self.radio, bits)
            self.rx_expected_j += cost
            self.charge_node(dst, ChargeCategory.RX, cost)
        return eligible

    def send_multicast(self, src: SensorNode, kind: MessageKind, bits: int,
                       dst_ids: list[int]) -> None:
        self._count(kind)
        receivers = [self.nodes[i] for i in dst_ids if self.nodes[i].sensing]
        d = max((distance(src.pos, r.pos) for r in receivers), default=0.0)
        self.charge_node(src, ChargeCategory.TX, tx_energy(self.radio, bits, d))
        cost = rx_energy(self.radio, bits)
        for node in receivers:
            self.rx_expected_j += cost
            self.charge_node(node, ChargeCategory.RX, cost)

    def send_to_sink(self, src: SensorNode, kind: MessageKind, bits: int) -> None:
        self._count(kind)
        d = distance(src.pos, self.sink)
        self.charge_node(src, ChargeCategory.TX, tx_energy(self.radio, bits, d))

    def sink_send_to_node(self, kind: MessageKind, bits: int, dst: SensorNode) -> None:
        # The sink is mains-powered infrastructure; only the receiver pays.
        self._count(kind)
        eligible = dst.sensing or (kind is MessageKind.MOBILE_DISPATCH
                                   and dst.alive and dst.asleep)
        if eligible:
            cost = rx_energy(self.radio, bits)
            self.rx_expected_j += cost
            self.charge_node(dst, ChargeCategory.RX, cost)

    # -- mobiles ---------------------------------------------------------------

    def dispatch_mobile(self, mobile: SensorNode, target: Point, mission: tuple,
                        scope: Optional[RecoveryKind]) -> None:
        self._free_mobile_ids.discard(mobile.id)
        mobile.asleep = False
        mobile.traveling = True
        mobile.mission = mission
        mobile.dispatch_scope = scope
        mobile.dispatch_target = target
        mobile.travel_dist = distance(mobile.pos, target)
        eta = self.now + mobile.travel_dist / self.cfg.mobile_speed_mps
        self.schedule(eta, EventKind.MOBILE_ARRIVAL, mobile.id)
        self.trace("mobile_dispatch", mobile=mobile.id,
                   scope=scope.value if scope else "prevention",
                   mission=mission[0], x=round(target.x, 3), y=round(target.y, 3),
                   eta=round(eta, 6))

    def _handle_mobile_arrival(self, mobile: SensorNode) -> None:
        self.charge_node(mobile, ChargeCategory.MOVE,
                         mobile.travel_dist * self.cfg.move_j_per_m)
        mission = mobile.mission
        mobile.mission = None
        if mobile.alive:
            mobile.pos = mobile.dispatch_target
            mobile.traveling = False
            mobile.cluster_id = self.grid.subregion_index(mobile.pos.x, mobile.pos.y)
            self.refresh_coverage(mobile)
            self._start_covering(mobile)
            self.trace("mobile_arrival", mobile=mobile.id,
                       x=round(mobile.pos.x, 3), y=round(mobile.pos.y, 3))
            self.send_broadcast(mobile, MessageKind.HELLO,
                                8 * self.cfg.msg.hello_b, mobile.r_c)
        else:
            mobile.traveling = False
            self.trace("mobile_lost", mobile=mobile.id)
        self.protocol.on_mobile_arrival(self, mobile, mission)

    # -- idle power -------------------------------------------------------------

    def _charge_idle_to(self, t: float) -> None:
        dt = t - self._last_idle_t
        if dt <= 0:
            return
        self._last_idle_t = t
        idle = self.cfg.idle_w * dt
        sleep = self.cfg.sleep_w * dt
        for node in self.nodes:
            if not node.alive:
                continue
            if node.asleep:
                # Undispatched mobiles keep their batteries untouched; the
                # sleep rate applies only to nodes parked after deployment.
                if node.kind is not NodeKind.MOBILE:
                    self.charge_node(node, ChargeCategory.IDLE, sleep)
            else:
                self.charge_node(node, ChargeCategory.IDLE, idle)

    # -- main loop ----------------------------------------------------------------

    def run(self) -> RunResult:
        cfg = self.cfg
        self.schedule(cfg.duration_s, EventKind.SIM_END)
        t = 0.0
        while t < cfg.duration_s:
            self.schedule(t, EventKind.ROUND_START)
            t += cfg.round_s
        if cfg.target_count > 0:
            rng = self._mobility_rng
            for _ in range(cfg.target_count):
                pos = Point(rng.uniform(0.0, self.grid.width),
                            rng.uniform(0.0, self.grid.height))
                wp = Point(rng.uniform(0.0, self.grid.width),
                           rng.uniform(0.0, self.grid.height))
                self.targets.append(TargetState(pos, wp, rng.uniform(cfg.v_min, cfg.v_max)))
            t = cfg.sample_s
            while t < cfg.duration_s:
                self.schedule(t, EventKind.TARGET_SAMPLE)
                t += cfg.sample_s
        if self.protocol.uses_clusters:
            t = cfg.global_update_s
            while t < cfg.duration_s:
                self.schedule(t, EventKind.GLOBAL_UPDATE)
                t += cfg.global_update_s
        for ft, pct in cfg.failure_plan:
            self.schedule(ft, EventKind.FAILURE_INJECTION, pct)

        while self._heap:
            event = heapq.heappop(self._heap)
            self.now = event.time
            self.events_processed += 1
            if event.kind is EventKind.SIM_END:
                break
            handler = self._HANDLERS[event.kind]
            handler(self, event.payload)

        self._charge_idle_to(cfg.duration_s)
        for hid in sorted(self.open_record_ids):
            self.records[hid].covered_by = RecoveryKind.UNRECOVERED
        self.open_record_ids.clear()
        self.coverage_series.append((cfg.duration_s,
                                     self.covmap.n_covered / self.grid.n_cells))
        metadata = dict(cfg.metadata)
        metadata["prng"] = PRNG_NAME
        return RunResult(
            protocol=cfg.protocol,
            seed=cfg.seed,
            duration_s=cfg.duration_s,
            nodes=self.nodes,
            records=[self.records[h] for h in sorted(self.records)],
            clusters=self.clusters,
            coverage_series=self.coverage_series,
            first_static_death=self.first_static_death,
            rx_expected_j=self.rx_expected_j,
            msg_counts=self.msg_counts,
            events_processed=self.events_processed,
            metadata=metadata,
            trace=self._trace,
        )

    # -- event handlers ---------------------------------------------------------

    def _on_round_start(self, _payload) -> None:
        self._charge_idle_to(self.now)
        self.protocol.on_round_start(self)
        self.coverage_series.append((self.now,
                                     self.covmap.n_covered / self.grid.n_cells))

    def _on_timer_expiry(self, payload) -> None:
        node_id, hole_id = payload
        self.protocol.on_timer_expiry(self, self.nodes[node_id], self.records[hole_id])

    def _on_target_sample(self, _payload) -> None:
        cfg = self.cfg
        for target in self.targets:
            advance_target(target, cfg.sample_s, self._mobility_rng, self.grid,
                           cfg.v_min, cfg.v_max, cfg.pause_s)
            for nid in self.index.query_ids(target.pos, cfg.r_s):
                node = self.nodes[nid]
                if node.sensing and distance(node.pos, target.pos) <= node.r_l_current:
                    self.charge_node(node, ChargeCategory.SENSE, cfg.sense_j_per_event)
                    if node.alive:
                        self.protocol.on_detection(self, node, target.pos)

    def _on_global_update(self, _payload) -> None:
        self.protocol.on_global_update(self)

    def _on_failure_injection(self, percent) -> None:
        self._charge_idle_to(self.now)
        killed = inject_failures(self.nodes, percent, self._failure_rng)
        for nid in killed:
            node = self.nodes[nid]
            node.ledger.kill()
            self._on_death(node)
        self.trace("failure_injection", percent=percent, killed=len(killed))

    _HANDLERS = {
        EventKind.ROUND_START: _on_round_start,
        EventKind.TIMER_EXPIRY: _on_timer_expiry,
        EventKind.MOBILE_ARRIVAL: lambda self, payload: self._handle_mobile_arrival(
            self.nodes[payload]),
        EventKind.TARGET_SAMPLE: _on_target_sample,
        EventKind.GLOBAL_UPDATE: _on_global_update,
        EventKind.FAILURE_INJECTION: _on_failure_injection,
    }


def run_scenario(scenario: Scenario, trace: bool = False) -> RunResult:
    """Validate and execute one scenario; pure in the scenario contents."""
    return Simulator(scenario, trace=trace).run()
