"""Scenario configuration files: schema, defaults, and Scenario construction.

Scenario files are TOML with flat ``[section]`` tables. Every key has a
documented default except the run-defining ones (seed, duration, grid
dimensions, node count). Unknown sections or keys are hard errors so typos
never pass silently. ``resolve`` merges file values, overrides, and
defaults into a flat ``section.key`` dict that is echoed verbatim into run
metadata.
"""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Any, Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .energy import RadioModel, RadioModelKind
from .engine import MessageSizes, Scenario
from .geometry import GridSpec, Point

REQUIRED = object()

# section -> key -> (type, default, doc)
SCHEMA: dict[str, dict[str, tuple]] = {
    "sim": {
        "protocol": (str, "proposed", "proposed | baseline"),
        "duration_s": (float, REQUIRED, "simulated time"),
        "seed": (int, REQUIRED, "master 64-bit seed"),
        "round_s": (float, 10.0, "protocol round period"),
    },
    "grid": {
        "width_m": (float, REQUIRED, "target area width"),
        "height_m": (float, REQUIRED, "target area height"),
        "cell_m": (float, 10.0, "grid cell side"),
        "subregion_m": (float, 250.0, "cluster sub-region side"),
    },
    "nodes": {
        "count": (int, REQUIRED, "total deployed nodes"),
        "mobile_fraction": (float, 0.2, "fraction deployed as mobile backups"),
        "initial_j": (float, 4.0, "initial battery per node"),
    },
    "radii": {
        "r_l_m": (float, 20.0, "base sensing radius"),
        "r_s_m": (float, 100.0, "maximum sensing radius; comm range is twice this"),
    },
    "energy": {
        "model": (str, "simple", "simple | two_regime"),
        "e_elec": (float, 50e-9, "two-regime electronics J/bit"),
        "eps_fs": (float, 10e-12, "two-regime short-range amp J/bit/m^2"),
        "eps_mp": (float, 0.0013e-12, "two-regime long-range amp J/bit/m^4"),
        "d0": (float, 0.0, "regime crossover; 0 derives sqrt(eps_fs/eps_mp)"),
        "e_trans": (float, 0.02, "simple-model transmit J/bit"),
        "e_amp": (float, 0.01, "simple-model amplifier J/m^2"),
        "e_recv": (float, 0.01, "simple-model receive J/bit"),
        "idle_w": (float, 1e-4, "awake idle drain, watts"),
        "sleep_w": (float, 1e-5, "parked-asleep drain, watts (documented no-op: "
                                 "only undispatched mobiles sleep and they are exempt)"),
        "move_j_per_m": (float, 0.0, "mobile travel cost"),
        "sense_j_per_event": (float, 0.0, "cost per target detection"),
        "amp_per_bit": (bool, False, "scale the simple amplifier term by message bits"),
    },
    "messages": {
        "hello_b": (int, 64, "arrival announcement, bytes"),
        "head_announce_b": (int, 64, ""),
        "energy_report_b": (int, 64, ""),
        "crisis_alert_b": (int, 64, ""),
        "help_request_b": (int, 64, ""),
        "mobile_dispatch_b": (int, 64, ""),
        "ql_broadcast_b": (int, 64, "coverage broadcast base size"),
        "ql_per_cell_b": (int, 2, "extra bytes per advertised cell"),
        "sink_report_b": (int, 128, ""),
        "data_packet_b": (int, 512, "detection report payload"),
    },
    "prevention": {
        "zones_per_side": (int, 2, "cluster split into z x z energy zones"),
    },
    "cover": {
        "t_base_s": (float, 1.0, "coverage self-timer base"),
    },
    "mobile": {
        "selection": (str, "nearest", "nearest | farthest candidate mobile"),
        "speed_mps": (float, 5.0, "mobile travel speed"),
    },
    "sink": {
        "pos": (str, "center", "'center' or 'x,y' in meters"),
        "global_update_s": (float, 60.0, "sink reporting / pre-positioning period"),
    },
    "mobility": {
        "target_count": (int, 1, "moving targets"),
        "sample_s": (float, 1.0, "target sampling period"),
        "v_min_mps": (float, 1.0, ""),
        "v_max_mps": (float, 10.0, ""),
        "pause_s": (float, 0.0, "pause at each waypoint"),
    },
    "failures": {
        "percent": (float, 0.0, "static nodes failed at duration/2"),
        "plan": (list, [], "explicit [[time_s, percent], ...]; overrides percent"),
    },
}

# Keys whose toggling is a documented no-op under the shipped protocols.
DOCUMENTED_NO_OP_KEYS = {"energy.sleep_w"}

PRESET_DIR = Path(__file__).parent / "presets"


class ConfigError(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("invalid configuration:\n  " + "\n  ".join(problems))


def preset_path(name: str) -> Path:
    return PRESET_DIR / f"{name}.toml"


def load_config(path: str | Path) -> dict[str, Any]:
    """Read a TOML scenario file into a flat section.key dict.

    Rejects unknown sections and keys, listing every offender at once.
    """
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    problems: list[str] = []
    flat: dict[str, Any] = {}
    for section, table in raw.items():
        if section not in SCHEMA:
            problems.append(f"unknown section [{section}]")
            continue
        if not isinstance(table, dict):
            problems.append(f"[{section}] must be a table")
            continue
        for key, value in table.items():
            if key not in SCHEMA[section]:
                problems.append(f"unknown key {section}.{key}")
                continue
            flat[f"{section}.{key}"] = value
    if problems:
        raise ConfigError(problems)
    return flat


def resolve(flat: dict[str, Any], overrides: Optional[dict[str, Any]] = None) -> dict[str, Any]:
    """Merge file values with overrides and defaults; check types and
    presence of the required keys."""
    merged = dict(flat)
    if overrides:
        for key, value in overrides.items():
            section, _, name = key.partition(".")
            if section not in SCHEMA or name not in SCHEMA[section]:
                raise ConfigError([f"unknown override key {key}"])
            merged[key] = value
    problems: list[str] = []
    resolved: dict[str, Any] = {}
    for section, keys in SCHEMA.items():
        for name, (typ, default, _doc) in keys.items():
            full = f"{section}.{name}"
            if full in merged:
                value = merged[full]
                if typ is float and isinstance(value, int) and not isinstance(value, bool):
                    value = float(value)
                if typ is bool and not isinstance(value, bool):
                    problems.append(f"{full} must be a boolean, got {value!r}")
                    continue
                if typ in (int, float) and (isinstance(value, bool)
                                            or not isinstance(value, typ)):
                    problems.append(f"{full} must be {typ.__name__}, got {value!r}")
                    continue
                if typ is str and not isinstance(value, str):
                    problems.append(f"{full} must be a string, got {value!r}")
                    continue
                if typ is list and not isinstance(value, list):
                    problems.append(f"{full} must be an array, got {value!r}")
                    continue
                resolved[full] = value
            elif default is REQUIRED:
                problems.append(f"missing required key {full}")
            else:
                resolved[full] = default
    if problems:
        raise ConfigError(problems)
    return resolved


def _parse_sink(value: str, grid: GridSpec) -> Optional[Point]:
    if value == "center":
        return None
    try:
        x_str, y_str = value.split(",")
        return Point(float(x_str), float(y_str))
    except ValueError:
        raise ConfigError([f"sink.pos must be 'center' or 'x,y', got {value!r}"])


def build_scenario(resolved: dict[str, Any]) -> Scenario:
    """Construct a runnable Scenario from a resolved flat config."""
    try:
        grid = GridSpec(
            width=resolved["grid.width_m"],
            height=resolved["grid.height_m"],
            cell_side=resolved["grid.cell_m"],
            subregion_side=resolved["grid.subregion_m"],
        )
    except ValueError as exc:
        raise ConfigError([str(exc)])
    model_name = resolved["energy.model"]
    if model_name not in ("simple", "two_regime"):
        raise ConfigError([f"energy.model must be simple|two_regime, got {model_name!r}"])
    radio = RadioModel(
        kind=RadioModelKind.SIMPLE if model_name == "simple" else RadioModelKind.TWO_REGIME,
        e_elec=resolved["energy.e_elec"],
        eps_fs=resolved["energy.eps_fs"],
        eps_mp=resolved["energy.eps_mp"],
        d0=resolved["energy.d0"],
        e_trans=resolved["energy.e_trans"],
        e_amp=resolved["energy.e_amp"],
        e_recv=resolved["energy.e_recv"],
        amp_per_bit=resolved["energy.amp_per_bit"],
    )
    msg = MessageSizes(
        hello_b=resolved["messages.hello_b"],
        head_announce_b=resolved["messages.head_announce_b"],
        energy_report_b=resolved["messages.energy_report_b"],
        crisis_alert_b=resolved["messages.crisis_alert_b"],
        help_request_b=resolved["messages.help_request_b"],
        mobile_dispatch_b=resolved["messages.mobile_dispatch_b"],
        ql_broadcast_b=resolved["messages.ql_broadcast_b"],
        ql_per_cell_b=resolved["messages.ql_per_cell_b"],
        sink_report_b=resolved["messages.sink_report_b"],
        data_packet_b=resolved["messages.data_packet_b"],
    )
    duration = resolved["sim.duration_s"]
    plan_raw = resolved["failures.plan"]
    if plan_raw:
        plan = []
        for entry in plan_raw:
            if (not isinstance(entry, (list, tuple)) or len(entry) != 2
                    or not all(isinstance(v, (int, float)) for v in entry)):
                raise ConfigError([f"failures.plan entries must be [time, percent], got {entry!r}"])
            plan.append((float(entry[0]), float(entry[1])))
        failure_plan = tuple(plan)
    elif resolved["failures.percent"] > 0:
        failure_plan = ((duration / 2.0, resolved["failures.percent"]),)
    else:
        failure_plan = ()
    metadata = {key: _echo(value) for key, value in sorted(resolved.items())}
    return Scenario(
        grid=grid,
        radio=radio,
        duration_s=duration,
        seed=resolved["sim.seed"],
        protocol=resolved["sim.protocol"],
        round_s=resolved["sim.round_s"],
        n_nodes=resolved["nodes.count"],
        mobile_fraction=resolved["nodes.mobile_fraction"],
        initial_j=resolved["nodes.initial_j"],
        r_l=resolved["radii.r_l_m"],
        r_s=resolved["radii.r_s_m"],
        msg=msg,
        prevention_zones_per_side=resolved["prevention.zones_per_side"],
        t_base_s=resolved["cover.t_base_s"],
        mobile_selection=resolved["mobile.selection"],
        mobile_speed_mps=resolved["mobile.speed_mps"],
        sink_pos=_parse_sink(resolved["sink.pos"], grid),
        target_count=resolved["mobility.target_count"],
        sample_s=resolved["mobility.sample_s"],
        v_min=resolved["mobility.v_min_mps"],
        v_max=resolved["mobility.v_max_mps"],
        pause_s=resolved["mobility.pause_s"],
        global_update_s=resolved["sink.global_update_s"],
        failure_plan=failure_plan,
        idle_w=resolved["energy.idle_w"],
        sleep_w=resolved["energy.sleep_w"],
        move_j_per_m=resolved["energy.move_j_per_m"],
        sense_j_per_event=resolved["energy.sense_j_per_event"],
        metadata=metadata,
    )


def _echo(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return repr(value)
    return str(value)


def scenario_from_file(path: str | Path,
                       overrides: Optional[dict[str, Any]] = None) -> Scenario:
    return build_scenario(resolve(load_config(path), overrides))
