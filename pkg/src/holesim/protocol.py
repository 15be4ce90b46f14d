"""Node and cluster state machines for hole prevention, detection and repair.

Two protocol variants share the same geometry and detection code path:

* ``ProposedProtocol`` — clustered, four phases per round (prevention,
  update, detection, coverage) with mobile backup nodes that are dispatched
  to crisis zones and unrecoverable holes.
* ``BaselineProtocol`` — no clustering and no mobiles; detecting nodes race
  to extend their sensing range with priority given to higher residual
  energy.

Both run inside the single-threaded deterministic engine; handlers never
block, and every delay is expressed as a scheduled future event.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, NamedTuple, Optional

from .energy import CRISIS_RATIO, ChargeCategory, EnergyLedger, zone_energy_ratio
from .geometry import (
    Cell,
    CoverageSets,
    GridSpec,
    Point,
    distance,
    farthest_uncovered_distance,
)


class NodeKind(enum.Enum):
    STATIC = "static"
    MOBILE = "mobile"


class MessageKind(enum.Enum):
    HELLO = "hello"
    HEAD_ANNOUNCE = "head_announce"
    QL_BROADCAST = "ql_broadcast"
    ENERGY_REPORT = "energy_report"
    CRISIS_ALERT = "crisis_alert"
    HOLE_DETECTED = "hole_detected"
    HELP_REQUEST = "help_request"
    MOBILE_DISPATCH = "mobile_dispatch"
    SINK_REPORT = "sink_report"
    DATA_PACKET = "data_packet"


class RecoveryKind(enum.Enum):
    RANGE_INCREASE = "range_increase"
    LOCAL_MOBILE = "local_mobile"
    CLUSTER_MOBILE = "cluster_mobile"
    NEIGHBOR_CLUSTER_MOBILE = "neighbor_cluster_mobile"
    UNRECOVERED = "unrecovered"


class NeighborInfo(NamedTuple):
    """Snapshot of one neighbor taken from its coverage broadcast."""

    node_id: int
    pos: Point
    q_l: frozenset[Cell]


@dataclass
class SensorNode:
    """One static or mobile sensor with its battery and coverage state."""

    id: int
    kind: NodeKind
    pos: Point
    ledger: EnergyLedger
    r_l_base: float
    r_s: float
    r_l_current: float = 0.0
    asleep: bool = False
    traveling: bool = False
    cluster_id: int = -1
    flag: bool = False              # mobile already used once
    coverage: Optional[CoverageSets] = None
    neighbor_table: list[NeighborInfo] = field(default_factory=list)
    raised_for: Optional[int] = None  # hole id this node raised its range for
    coverage_version: int = 0
    open_record_id: Optional[int] = None
    mission: Optional[tuple] = None
    dispatch_scope: Optional["RecoveryKind"] = None
    dispatch_target: Optional[Point] = None
    travel_dist: float = 0.0

    def __post_init__(self) -> None:
        if self.r_l_current == 0.0:
            self.r_l_current = self.r_l_base
        if not (0 < self.r_l_base <= self.r_l_current <= self.r_s):
            raise ValueError(
                f"node {self.id}: need 0 < r_l_base <= r_l_current <= r_s, "
                f"got {self.r_l_base}, {self.r_l_current}, {self.r_s}"
            )
        if self.kind is NodeKind.STATIC and (self.asleep or self.flag):
            raise ValueError(f"static node {self.id} cannot sleep or carry a flag")

    @property
    def alive(self) -> bool:
        return self.ledger.alive

    @property
    def r_c(self) -> float:
        return 2.0 * self.r_s

    @property
    def sensing(self) -> bool:
        """Actively covering cells and handling protocol traffic."""
        return self.alive and not self.asleep and not self.traveling

    @property
    def free_mobile(self) -> bool:
        return (self.kind is NodeKind.MOBILE and self.alive
                and self.asleep and not self.flag)


@dataclass
class Cluster:
    """A geographic sub-region with an elected head and an event counter."""

    id: int
    bounds: tuple[float, float, float, float]
    head_id: Optional[int] = None
    member_ids: list[int] = field(default_factory=list)
    event_counter: int = 0
    events_total: int = 0
    zone_pending: set[int] = field(default_factory=set)

    @property
    def centroid(self) -> Point:
        x0, y0, x1, y1 = self.bounds
        return Point((x0 + x1) / 2.0, (y0 + y1) / 2.0)

    def zone_bounds(self, zone: int, per_side: int) -> tuple[float, float, float, float]:
        x0, y0, x1, y1 = self.bounds
        w = (x1 - x0) / per_side
        h = (y1 - y0) / per_side
        zy, zx = divmod(zone, per_side)
        return (x0 + zx * w, y0 + zy * h, x0 + (zx + 1) * w, y0 + (zy + 1) * h)

    def zone_of(self, pos: Point, per_side: int) -> int:
        x0, y0, x1, y1 = self.bounds
        zx = min(per_side - 1, max(0, int((pos.x - x0) / ((x1 - x0) / per_side))))
        zy = min(per_side - 1, max(0, int((pos.y - y0) / ((y1 - y0) / per_side))))
        return zy * per_side + zx

    def zone_centroid(self, zone: int, per_side: int) -> Point:
        x0, y0, x1, y1 = self.zone_bounds(zone, per_side)
        return Point((x0 + x1) / 2.0, (y0 + y1) / 2.0)


@dataclass
class HoleRecord:
    """Lifecycle of one detected coverage hole, per detecting node."""

    hole_id: int
    detecting_node: Optional[int]
    cells: frozenset[Cell]
    detected_at: float
    covered_at: Optional[float] = None
    covered_by: Optional[RecoveryKind] = None
    reopened_at: Optional[float] = None
    reopened_from: Optional[int] = None
    timer_pending: bool = False
    escalation_pending: bool = False

    @property
    def open(self) -> bool:
        return self.covered_at is None and self.covered_by is None

    @property
    def recovered(self) -> bool:
        return self.covered_at is not None

    @property
    def recovery_time(self) -> Optional[float]:
        if self.covered_at is None:
            return None
        return self.covered_at - self.detected_at


class NoMobileAvailable(Exception):
    """Raised when every mobile candidate is already flagged as used."""


def hole_cells(own: CoverageSets, neighbor_qls: Iterable[frozenset[Cell]]) -> set[Cell]:
    """Cells of a node's extension ring left uncovered by every neighbor."""
    uncovered = set(own.q_l_minus_s)
    for q_l in neighbor_qls:
        if not uncovered:
            break
        uncovered -= q_l
    return uncovered


def coverage_timer_delay(t_base: float, hole_size: int) -> float:
    """Self-timer for a detecting node: the larger the hole, the sooner it acts."""
    return t_base / (1 + hole_size)


def baseline_timer_delay(t_base: float, residual: float, initial: float) -> float:
    """Baseline priority timer: more residual energy fires earlier."""
    if initial <= 0:
        return t_base
    return t_base * (1.0 - residual / initial)


def elect_heads(clusters: dict[int, Cluster], nodes: list[SensorNode]) -> dict[int, Optional[int]]:
    """Assign each cluster's head: the alive static member with the most
    residual energy, ties broken by lowest node id. Clusters without an
    alive static member are left headless.
    """
    assignment: dict[int, Optional[int]] = {}
    for cid in sorted(clusters):
        cluster = clusters[cid]
        best: Optional[SensorNode] = None
        for nid in cluster.member_ids:
            node = nodes[nid]
            if node.kind is not NodeKind.STATIC or not node.alive:
                continue
            if (best is None or node.ledger.residual > best.ledger.residual
                    or (node.ledger.residual == best.ledger.residual and node.id < best.id)):
                best = node
        cluster.head_id = best.id if best is not None else None
        assignment[cid] = cluster.head_id
    return assignment


def select_mobile(
    candidates: Iterable[SensorNode], target: Point, selection: str = "nearest"
) -> SensorNode:
    """Pick the mobile to send toward ``target`` and mark it as used.

    Only unflagged candidates are eligible; the winner is the closest one
    (``selection="farthest"`` inverts the criterion), ties broken by lowest
    id. The winner's flag is set so it is never selected again.
    """
    best: Optional[SensorNode] = None
    best_d = 0.0
    for node in candidates:
        if node.flag:
            continue
        d = distance(node.pos, target)
        if best is None:
            best, best_d = node, d
            continue
        if selection == "farthest":
            better = d > best_d or (d == best_d and node.id < best.id)
        else:
            better = d < best_d or (d == best_d and node.id < best.id)
        if better:
            best, best_d = node, d
    if best is None:
        raise NoMobileAvailable(f"no free mobile for target ({target.x}, {target.y})")
    best.flag = True
    return best


def crisis_zones(
    cluster: Cluster, nodes: list[SensorNode], per_side: int
) -> list[tuple[int, float]]:
    """Zones of a cluster whose residual-energy share is strictly below the
    crisis threshold, as (zone index, ratio) pairs in zone order.
    """
    zone_res = [0.0] * (per_side * per_side)
    cluster_res = 0.0
    for nid in cluster.member_ids:
        node = nodes[nid]
        if not node.sensing:
            continue
        res = node.ledger.residual
        cluster_res += res
        zone_res[cluster.zone_of(node.pos, per_side)] += res
    out = []
    for zone, res in enumerate(zone_res):
        ratio = zone_energy_ratio(res, cluster_res) if cluster_res >= res else 0.0
        if ratio < CRISIS_RATIO:
            out.append((zone, ratio))
    return out


def _centroid(cells: Iterable[Cell], grid: GridSpec) -> Point:
    xs = 0.0
    ys = 0.0
    n = 0
    for cell in sorted(cells):
        xs += (cell.ix + 0.5) * grid.cell_side
        ys += (cell.iy + 0.5) * grid.cell_side
        n += 1
    return Point(xs / n, ys / n)


class CoverageProtocol:
    """Shared update/detection machinery; subclasses add their repair policy."""

    name = "base"
    uses_clusters = False

    # -- round phases -----------------------------------------------------

    def on_round_start(self, sim) -> None:
        raise NotImplementedError

    def phase_update(self, sim) -> None:
        """Refresh every node's coverage sets, broadcast them, and rebuild
        neighbor tables from the broadcasts received this round."""
        sensing = [n for n in sim.nodes if n.sensing]
        for node in sensing:
            sim.refresh_coverage(node)
        heard: dict[int, list[SensorNode]] = {}
        for node in sensing:
            bits = 8 * (sim.cfg.msg.ql_broadcast_b
                        + sim.cfg.msg.ql_per_cell_b * len(node.coverage.q_l))
            # The communication range is shared, so the set that hears this
            # node is exactly the set it hears.
            heard[node.id] = sim.send_broadcast(node, MessageKind.QL_BROADCAST,
                                                bits, node.r_c)
        for node in sensing:
            node.neighbor_table = [
                NeighborInfo(nb.id, nb.pos, nb.coverage.q_l)
                for nb in heard.get(node.id, ()) if nb.sensing
            ]

    def phase_detect(self, sim) -> None:
        """Run the shared hole-detection rule on every sensing node and arm
        coverage timers for the holes found, in node-id order."""
        for node in (n for n in sim.nodes if n.sensing):
            q_hat = sim.detect_hole(node)
            node.coverage = replace(node.coverage, q_hat=frozenset(q_hat))
            if not q_hat:
                continue
            if node.open_record_id is not None:
                record = sim.records[node.open_record_id]
                if not record.timer_pending and not record.escalation_pending:
                    sim.schedule_timer(node, record, self.timer_delay(sim, node, q_hat))
                continue
            record = sim.open_record(node.id, q_hat)
            sim.schedule_timer(node, record, self.timer_delay(sim, node, q_hat))

    def timer_delay(self, sim, node: SensorNode, q_hat: set[Cell]) -> float:
        raise NotImplementedError

    # -- event handlers ----------------------------------------------------

    def on_timer_expiry(self, sim, node: SensorNode, record: HoleRecord) -> None:
        """Recheck the hole, then repair: range increase first, then (in the
        proposed protocol) the mobile-escalation ladder."""
        record.timer_pending = False
        if not record.open or record.escalation_pending:
            return
        if not node.sensing:
            return
        uncovered = sim.uncovered_cells(record)
        if not uncovered:
            sim.close_record(record, RecoveryKind.RANGE_INCREASE)
            return
        added = self._raise_range(sim, node, record, uncovered)
        if added:
            sim.recheck_open_records(RecoveryKind.RANGE_INCREASE, added)
        if record.open:
            self.escalate(sim, node, record)

    def _raise_range(self, sim, node: SensorNode, record: HoleRecord,
                     uncovered: Iterable[Cell]) -> Optional[frozenset[Cell]]:
        target_r = min(node.r_s, farthest_uncovered_distance(node.pos, uncovered, sim.grid))
        if target_r <= node.r_l_current:
            return None
        old_q_l = node.coverage.q_l
        sim.set_node_radius(node, target_r)
        sim.mark_raised_for(node, record.hole_id)
        sim.trace("range_increase", node=node.id, hole=record.hole_id,
                  r=round(target_r, 6))
        self.after_range_increase(sim, node)
        return node.coverage.q_l - old_q_l

    def after_range_increase(self, sim, node: SensorNode) -> None:
        pass

    def escalate(self, sim, node: SensorNode, record: HoleRecord) -> None:
        pass

    def on_mobile_arrival(self, sim, mobile: SensorNode, mission) -> None:
        pass

    def on_hole_reopened(self, sim, record: HoleRecord) -> None:
        if record.detecting_node is not None:
            node = sim.nodes[record.detecting_node]
            if node.sensing:
                sim.schedule_timer(node, record,
                                   self.timer_delay(sim, node, set(record.cells)))

    def on_detection(self, sim, node: SensorNode, target_pos: Point) -> None:
        raise NotImplementedError

    def on_global_update(self, sim) -> None:
        pass


class ProposedProtocol(CoverageProtocol):
    """Four-phase clustered protocol with mobile backup dispatch."""

    name = "proposed"
    uses_clusters = True

    def on_round_start(self, sim) -> None:
        sim.refresh_cluster_membership()
        self._elect_and_announce(sim)
        self.phase_update(sim)
        self.phase_prevention(sim)
        self.phase_detect(sim)
        self._sweep_orphan_records(sim)

    def timer_delay(self, sim, node: SensorNode, q_hat: set[Cell]) -> float:
        return coverage_timer_delay(sim.cfg.t_base_s, len(q_hat))

    def _elect_and_announce(self, sim) -> None:
        elect_heads(sim.clusters, sim.nodes)
        for cid in sorted(sim.clusters):
            cluster = sim.clusters[cid]
            if cluster.head_id is None:
                if cluster.member_ids:
                    sim.trace("headless_cluster", cluster=cid)
                continue
            head = sim.nodes[cluster.head_id]
            members = [nid for nid in cluster.member_ids
                       if nid != head.id and sim.nodes[nid].sensing]
            sim.send_multicast(head, MessageKind.HEAD_ANNOUNCE,
                               8 * sim.cfg.msg.head_announce_b, members)

    def phase_prevention(self, sim) -> None:
        """Members report residual energy; the head flags zones holding a
        sub-threshold share of the cluster total and asks the sink for a
        mobile per crisis zone."""
        per_side = sim.cfg.prevention_zones_per_side
        for cid in sorted(sim.clusters):
            cluster = sim.clusters[cid]
            if cluster.head_id is None:
                continue
            head = sim.nodes[cluster.head_id]
            for nid in cluster.member_ids:
                node = sim.nodes[nid]
                if nid == head.id or not node.sensing:
                    continue
                sim.send_unicast(node, MessageKind.ENERGY_REPORT,
                                 8 * sim.cfg.msg.energy_report_b, head)
            for zone, ratio in crisis_zones(cluster, sim.nodes, per_side):
                if zone in cluster.zone_pending:
                    continue
                sim.trace("crisis_zone", cluster=cid, zone=zone, ratio=round(ratio, 6))
                sim.send_to_sink(head, MessageKind.CRISIS_ALERT,
                                 8 * sim.cfg.msg.crisis_alert_b)
                target = cluster.zone_centroid(zone, per_side)
                try:
                    mobile = select_mobile(sim.free_mobiles(), target,
                                           sim.cfg.mobile_selection)
                except NoMobileAvailable:
                    sim.trace("no_mobile", reason="crisis", cluster=cid, zone=zone)
                    continue
                cluster.zone_pending.add(zone)
                sim.sink_send_to_node(MessageKind.MOBILE_DISPATCH,
                                      8 * sim.cfg.msg.mobile_dispatch_b, mobile)
                sim.dispatch_mobile(mobile, target, mission=("zone", cid, zone),
                                    scope=None)

    def _sweep_orphan_records(self, sim) -> None:
        # Reopened or detector-less holes are escalated by the cluster head
        # responsible for the area; live detectors retry via their own timers.
        for hid in sorted(sim.open_record_ids):
            record = sim.records[hid]
            if record.timer_pending or record.escalation_pending:
                continue
            detector = (sim.nodes[record.detecting_node]
                        if record.detecting_node is not None else None)
            if detector is not None and detector.sensing:
                continue
            target = _centroid(record.cells, sim.grid)
            cluster = sim.clusters[sim.grid.subregion_index(target.x, target.y)]
            if cluster.head_id is None:
                continue
            self._request_mobile(sim, sim.nodes[cluster.head_id], record,
                                 start_at_head=True)

    def escalate(self, sim, node: SensorNode, record: HoleRecord) -> None:
        self._request_mobile(sim, node, record, start_at_head=False)

    def _request_mobile(self, sim, requester: SensorNode, record: HoleRecord,
                        start_at_head: bool) -> None:
        """Escalation ladder: a free mobile near the requester, then any in
        the cluster via the head, then the adjacent clusters' mobiles. The
        dispatch target assumes range raises for this hole will be reverted
        once the mobile arrives."""
        remaining = sim.cells_uncovered_at_base(record)
        if not remaining:
            sim.close_record(record, RecoveryKind.RANGE_INCREASE)
            return
        target = _centroid(remaining, sim.grid)
        cluster = sim.clusters.get(requester.cluster_id)
        head = (sim.nodes[cluster.head_id]
                if cluster is not None and cluster.head_id is not None else None)

        if not start_at_head:
            local = [m for m in sim.free_mobiles()
                     if m.cluster_id == requester.cluster_id
                     and distance(m.pos, requester.pos) <= requester.r_c]
            if self._try_dispatch(sim, requester, local, target, record,
                                  RecoveryKind.LOCAL_MOBILE):
                return
            if head is None:
                sim.trace("no_mobile", reason="headless", hole=record.hole_id)
                return
            if requester.id != head.id:
                sim.send_unicast(requester, MessageKind.HELP_REQUEST,
                                 8 * sim.cfg.msg.help_request_b, head)
        if head is None:
            return

        in_cluster = [m for m in sim.free_mobiles() if m.cluster_id == cluster.id]
        if self._try_dispatch(sim, head, in_cluster, target, record,
                              RecoveryKind.CLUSTER_MOBILE):
            return

        pooled: list[SensorNode] = []
        for ncid in sim.grid.adjacent_subregions(cluster.id):
            neighbor = sim.clusters[ncid]
            if neighbor.head_id is None:
                continue
            sim.send_unicast(head, MessageKind.HELP_REQUEST,
                             8 * sim.cfg.msg.help_request_b, sim.nodes[neighbor.head_id])
            pooled.extend(m for m in sim.free_mobiles() if m.cluster_id == ncid)
        if self._try_dispatch_via_owner_head(sim, pooled, target, record):
            return
        sim.trace("no_mobile", reason="exhausted", hole=record.hole_id)

    def _try_dispatch(self, sim, sender: SensorNode, candidates: list[SensorNode],
                      target: Point, record: HoleRecord, scope: RecoveryKind) -> bool:
        try:
            mobile = select_mobile(candidates, target, sim.cfg.mobile_selection)
        except NoMobileAvailable:
            return False
        sim.send_unicast(sender, MessageKind.MOBILE_DISPATCH,
                         8 * sim.cfg.msg.mobile_dispatch_b, mobile)
        record.escalation_pending = True
        sim.dispatch_mobile(mobile, target, mission=("hole", record.hole_id), scope=scope)
        return True

    def _try_dispatch_via_owner_head(self, sim, candidates: list[SensorNode],
                                     target: Point, record: HoleRecord) -> bool:
        try:
            mobile = select_mobile(candidates, target, sim.cfg.mobile_selection)
        except NoMobileAvailable:
            return False
        owner = sim.clusters[mobile.cluster_id]
        sender = sim.nodes[owner.head_id] if owner.head_id is not None else None
        if sender is not None:
            sim.send_unicast(sender, MessageKind.MOBILE_DISPATCH,
                             8 * sim.cfg.msg.mobile_dispatch_b, mobile)
        record.escalation_pending = True
        sim.dispatch_mobile(mobile, target, mission=("hole", record.hole_id),
                            scope=RecoveryKind.NEIGHBOR_CLUSTER_MOBILE)
        return True

    def on_mobile_arrival(self, sim, mobile: SensorNode, mission) -> None:
        kind = mission[0]
        added = mobile.coverage.q_l if mobile.sensing else frozenset()
        if kind == "zone":
            _, cid, zone = mission
            sim.clusters[cid].zone_pending.discard(zone)
            sim.recheck_open_records(RecoveryKind.CLUSTER_MOBILE, added)
            return
        if kind == "preposition":
            sim.recheck_open_records(RecoveryKind.CLUSTER_MOBILE, added)
            return
        _, hole_id = mission
        record = sim.records[hole_id]
        record.escalation_pending = False
        scope = mobile.dispatch_scope or RecoveryKind.CLUSTER_MOBILE
        sim.restore_raised_ranges(hole_id)
        if not mobile.sensing:
            # Died in transit; the hole stays open and is retried next round.
            return
        if record.open:
            if sim.uncovered_cells(record):
                detector = (sim.nodes[record.detecting_node]
                            if record.detecting_node is not None else None)
                requester = detector if detector is not None and detector.sensing else mobile
                self._request_mobile(sim, requester, record,
                                     start_at_head=detector is None or not detector.sensing)
            else:
                sim.close_record(record, scope)
        sim.recheck_open_records(scope, added)

    def on_detection(self, sim, node: SensorNode, target_pos: Point) -> None:
        cluster = sim.clusters.get(node.cluster_id)
        if cluster is not None:
            cluster.event_counter += 1
            cluster.events_total += 1
        bits = 8 * sim.cfg.msg.data_packet_b
        if cluster is None or cluster.head_id is None:
            sim.send_to_sink(node, MessageKind.DATA_PACKET, bits)
        elif cluster.head_id != node.id:
            sim.send_unicast(node, MessageKind.DATA_PACKET, bits,
                             sim.nodes[cluster.head_id])

    def on_global_update(self, sim) -> None:
        """Heads report their event counters to the sink, which pre-positions
        free mobiles toward the high-load clusters and zeroes every counter.

        High-load means strictly above the mean count, so quiet periods and
        evenly spread traffic trigger no dispatch."""
        counters = []
        for cid in sorted(sim.clusters):
            cluster = sim.clusters[cid]
            if cluster.head_id is not None:
                head = sim.nodes[cluster.head_id]
                sim.send_to_sink(head, MessageKind.SINK_REPORT,
                                 8 * sim.cfg.msg.sink_report_b)
            counters.append((cid, cluster.event_counter))
        mean = sum(c for _, c in counters) / len(counters) if counters else 0.0
        ranked = sorted((-count, cid) for cid, count in counters if count > mean)
        for _, cid in ranked:
            target = sim.clusters[cid].centroid
            try:
                mobile = select_mobile(sim.free_mobiles(), target,
                                       sim.cfg.mobile_selection)
            except NoMobileAvailable:
                break
            sim.sink_send_to_node(MessageKind.MOBILE_DISPATCH,
                                  8 * sim.cfg.msg.mobile_dispatch_b, mobile)
            sim.dispatch_mobile(mobile, target, mission=("preposition", cid), scope=None)
        for cluster in sim.clusters.values():
            cluster.event_counter = 0


class BaselineProtocol(CoverageProtocol):
    """Static-node range extension with residual-energy priority; no
    clustering, no prevention phase and no mobiles."""

    name = "baseline"
    uses_clusters = False

    def on_round_start(self, sim) -> None:
        self.phase_update(sim)
        self.phase_probe(sim)
        self.phase_detect(sim)

    def phase_probe(self, sim) -> None:
        """Per-round presence probe broadcast across each node's sensing
        diameter; reaching farther costs more once the range is raised."""
        for node in (n for n in sim.nodes if n.sensing):
            sim.send_broadcast(node, MessageKind.HELLO, 8 * sim.cfg.msg.hello_b,
                               2.0 * node.r_l_current)

    def timer_delay(self, sim, node: SensorNode, q_hat: set[Cell]) -> float:
        return baseline_timer_delay(sim.cfg.t_base_s, node.ledger.residual,
                                    node.ledger.initial)

    def after_range_increase(self, sim, node: SensorNode) -> None:
        # Alert neighbors to the new range by re-broadcasting coverage.
        sim.refresh_coverage(node)
        bits = 8 * (sim.cfg.msg.ql_broadcast_b
                    + sim.cfg.msg.ql_per_cell_b * len(node.coverage.q_l))
        sim.send_broadcast(node, MessageKind.QL_BROADCAST, bits, node.r_c)

    def on_detection(self, sim, node: SensorNode, target_pos: Point) -> None:
        sim.send_to_sink(node, MessageKind.DATA_PACKET, 8 * sim.cfg.msg.data_packet_b)


def make_protocol(name: str) -> CoverageProtocol:
    if name == "proposed":
        return ProposedProtocol()
    if name == "baseline":
        return BaselineProtocol()
    raise ValueError(f"unknown protocol {name!r} (expected 'proposed' or 'baseline')")
