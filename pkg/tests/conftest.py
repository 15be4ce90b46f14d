"""Shared scenario builders for protocol and engine tests."""

import pytest

from holesim.energy import EnergyLedger, RadioModel, RadioModelKind
from holesim.engine import MessageSizes, Scenario
from holesim.geometry import GridSpec, Point
from holesim.protocol import NodeKind, SensorNode

# Zero-cost radio: isolates protocol behavior from energy bookkeeping.
FREE_RADIO = RadioModel(kind=RadioModelKind.SIMPLE, e_trans=0.0, e_amp=0.0,
                        e_recv=0.0)


def make_node(node_id, x, y, *, kind=NodeKind.STATIC, initial=4.0,
              r_l=10.0, r_s=30.0, asleep=None) -> SensorNode:
    return SensorNode(
        id=node_id,
        kind=kind,
        pos=Point(x, y),
        ledger=EnergyLedger(initial),
        r_l_base=r_l,
        r_s=r_s,
        asleep=(kind is NodeKind.MOBILE) if asleep is None else asleep,
    )


def make_scenario(nodes, *, protocol="proposed", duration=10.0, round_s=10.0,
                  grid=None, radio=FREE_RADIO, target_count=0, seed=1,
                  failure_plan=(), idle_w=0.0, move_j_per_m=0.0,
                  r_l=10.0, r_s=30.0, **kwargs) -> Scenario:
    if grid is None:
        grid = GridSpec(width=100.0, height=100.0, cell_side=10.0,
                        subregion_side=50.0)
    return Scenario(
        grid=grid,
        radio=radio,
        duration_s=duration,
        seed=seed,
        protocol=protocol,
        round_s=round_s,
        r_l=r_l,
        r_s=r_s,
        msg=MessageSizes(),
        target_count=target_count,
        failure_plan=tuple(failure_plan),
        idle_w=idle_w,
        move_j_per_m=move_j_per_m,
        explicit_nodes=list(nodes),
        **kwargs,
    )


@pytest.fixture
def grid100():
    return GridSpec(width=100.0, height=100.0, cell_side=10.0, subregion_side=50.0)
