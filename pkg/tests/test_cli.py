"""Configuration handling, CLI commands, CSV and SVG determinism."""

import os
from pathlib import Path

import pytest

from holesim.cli import main
from holesim.config import (
    DOCUMENTED_NO_OP_KEYS,
    SCHEMA,
    ConfigError,
    build_scenario,
    load_config,
    preset_path,
    resolve,
)
from holesim.engine import run_scenario
from holesim.geometry import Point

BASE_TOML = """
[sim]
protocol = "proposed"
duration_s = 80.0
seed = 3
round_s = 10.0

[grid]
width_m = 200.0
height_m = 200.0
cell_m = 10.0
subregion_m = 100.0

[nodes]
count = 30
initial_j = 1.0

[radii]
r_l_m = 20.0
r_s_m = 40.0

[energy]
model = "simple"
e_trans = 5e-8
e_amp = 1e-10
e_recv = 5e-8
amp_per_bit = true
idle_w = 1e-5

[failures]
percent = 60.0
"""


@pytest.fixture
def base_config(tmp_path):
    path = tmp_path / "base.toml"
    path.write_text(BASE_TOML)
    return path


def fingerprint(resolved):
    result = run_scenario(build_scenario(resolved))
    return (
        tuple((n.id, n.ledger.initial, round(n.ledger.total_consumed, 15),
               n.r_l_current, n.alive, n.pos.x, n.pos.y) for n in result.nodes),
        tuple(sorted(result.msg_counts.items())),
        tuple(result.coverage_series),
        tuple((r.detected_at, r.covered_at, len(r.cells)) for r in result.records),
    )


class TestConfigParsing:
    def test_unknown_keys_all_listed(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text(BASE_TOML + "\n[typo_section]\nfoo = 1\n\n[mobile]\nspede = 2\n")
        with pytest.raises(ConfigError) as err:
            load_config(path)
        text = str(err.value)
        assert "typo_section" in text
        assert "mobile.spede" in text

    def test_missing_required_listed(self, tmp_path):
        path = tmp_path / "empty.toml"
        path.write_text("[sim]\nprotocol = 'proposed'\n")
        with pytest.raises(ConfigError) as err:
            resolve(load_config(path))
        text = str(err.value)
        for key in ("sim.duration_s", "sim.seed", "grid.width_m",
                    "grid.height_m", "nodes.count"):
            assert key in text

    def test_type_errors_rejected(self, tmp_path):
        path = tmp_path / "types.toml"
        path.write_text(BASE_TOML.replace('count = 30', 'count = "thirty"'))
        with pytest.raises(ConfigError):
            resolve(load_config(path))

    def test_bool_key_rejects_non_bool(self, tmp_path):
        path = tmp_path / "types2.toml"
        path.write_text(BASE_TOML.replace("amp_per_bit = true", "amp_per_bit = 1"))
        with pytest.raises(ConfigError):
            resolve(load_config(path))

    def test_unknown_override_rejected(self, base_config):
        with pytest.raises(ConfigError):
            resolve(load_config(base_config), {"nodes.cuont": 5})

    def test_every_preset_builds(self):
        for name in ("table1", "table2", "desk"):
            scenario = build_scenario(resolve(load_config(preset_path(name))))
            assert scenario.validate() == []

    def test_sink_pos_parsing(self, base_config):
        resolved = resolve(load_config(base_config), {"sink.pos": "25,75"})
        assert build_scenario(resolved).sink_pos == Point(25.0, 75.0)
        resolved = resolve(load_config(base_config))
        assert build_scenario(resolved).sink_pos is None
        with pytest.raises(ConfigError):
            build_scenario(resolve(load_config(base_config), {"sink.pos": "oops"}))

    def test_percent_becomes_halftime_plan(self, base_config):
        sc = build_scenario(resolve(load_config(base_config)))
        assert sc.failure_plan == ((40.0, 60.0),)

    def test_explicit_plan_wins(self, base_config):
        sc = build_scenario(resolve(load_config(base_config),
                                    {"failures.plan": [[10.0, 25.0]]}))
        assert sc.failure_plan == ((10.0, 25.0),)

    def test_metadata_echoes_every_key(self, base_config):
        sc = build_scenario(resolve(load_config(base_config)))
        for section, keys in SCHEMA.items():
            for name in keys:
                assert f"{section}.{name}" in sc.metadata
        assert sc.metadata["nodes.count"] == "30"


# One alternate value per documented key; keys listed in
# DOCUMENTED_NO_OP_KEYS must instead leave the run untouched.
KEY_TOGGLES = {
    "sim.protocol": "baseline",
    "sim.duration_s": 60.0,
    "sim.seed": 4,
    "sim.round_s": 20.0,
    "grid.width_m": 400.0,
    "grid.height_m": 400.0,
    "grid.cell_m": 20.0,
    "grid.subregion_m": 200.0,
    "nodes.count": 40,
    "nodes.mobile_fraction": 0.4,
    "nodes.initial_j": 4.0,
    "radii.r_l_m": 25.0,
    "radii.r_s_m": 50.0,
    "energy.model": "two_regime",
    "energy.e_trans": 1e-7,
    "energy.e_amp": 5e-10,
    "energy.e_recv": 1e-7,
    "energy.idle_w": 1e-4,
    "energy.sleep_w": 1e-3,
    "energy.move_j_per_m": 0.001,
    "energy.sense_j_per_event": 0.001,
    "energy.amp_per_bit": False,
    "messages.hello_b": 640,
    "messages.head_announce_b": 640,
    "messages.energy_report_b": 640,
    "messages.crisis_alert_b": 640,
    "messages.help_request_b": 640,
    "messages.mobile_dispatch_b": 640,
    "messages.ql_broadcast_b": 640,
    "messages.ql_per_cell_b": 8,
    "messages.sink_report_b": 1280,
    "messages.data_packet_b": 2048,
    "prevention.zones_per_side": 1,
    "cover.t_base_s": 3.0,
    "mobile.selection": "farthest",
    "mobile.speed_mps": 2.0,
    "sink.pos": "10,10",
    "sink.global_update_s": 35.0,
    "mobility.target_count": 3,
    "mobility.sample_s": 2.0,
    "mobility.v_min_mps": 4.0,
    "mobility.v_max_mps": 5.0,
    "mobility.pause_s": 4.0,
    "failures.percent": 30.0,
    "failures.plan": [[30.0, 60.0]],
    # Exercised on a two-regime base below.
    "energy.e_elec": 1e-7,
    "energy.eps_fs": 2e-11,
    "energy.eps_mp": 2.6e-15,
    "energy.d0": 50.0,
}

TWO_REGIME_KEYS = {"energy.e_elec", "energy.eps_fs", "energy.eps_mp", "energy.d0"}


class TestKeyCoverage:
    def test_every_documented_key_toggles_behavior_or_is_noop(self, base_config):
        flat = load_config(base_config)
        baselines = {
            False: fingerprint(resolve(flat)),
            True: fingerprint(resolve(flat, {"energy.model": "two_regime"})),
        }
        missing = [f"{s}.{k}" for s, ks in SCHEMA.items() for k in ks
                   if f"{s}.{k}" not in KEY_TOGGLES]
        assert not missing, f"keys without a toggle probe: {missing}"
        for key, alt in KEY_TOGGLES.items():
            two_regime = key in TWO_REGIME_KEYS
            overrides = {key: alt}
            if two_regime:
                overrides["energy.model"] = "two_regime"
            resolved = resolve(flat, overrides)
            assert resolved[key] == alt  # echoed
            got = fingerprint(resolved)
            if key in DOCUMENTED_NO_OP_KEYS:
                assert got == baselines[two_regime], f"{key} documented as no-op"
            else:
                assert got != baselines[two_regime], f"{key} had no observable effect"


class TestRunCommand:
    def test_seed_repeat_identical_bytes(self, base_config, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        assert main(["run", str(base_config), "--seed", "42", "--out", str(out1)]) == 0
        assert main(["run", str(base_config), "--seed", "42", "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_trace_written(self, base_config, tmp_path):
        trace = tmp_path / "events.jsonl"
        out = tmp_path / "run.csv"
        assert main(["run", str(base_config), "--trace", str(trace),
                     "--out", str(out)]) == 0
        lines = trace.read_text().splitlines()
        assert lines and all(line.startswith("{") for line in lines)

    def test_validation_failure_exit_code(self, tmp_path):
        bad = tmp_path / "bad.toml"
        bad.write_text(BASE_TOML + "\n[bogus]\nx = 1\n")
        assert main(["run", str(bad), "--out", str(tmp_path / "x.csv")]) == 1

    def test_presets_run_to_completion(self, tmp_path):
        # Full-size table presets with the literal published constants; they
        # must execute end to end.
        for name in ("table1", "table2"):
            out = tmp_path / f"{name}.csv"
            assert main(["run", str(preset_path(name)), "--out", str(out)]) == 0
            assert out.read_text().count("\n") == 3


class TestSweepCommand:
    def test_grid_size_and_order(self, base_config, tmp_path):
        out = tmp_path / "sweep.csv"
        assert main(["sweep", str(base_config), "--nodes", "20,30",
                     "--seeds", "2", "--out", str(out)]) == 0
        lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
        rows = [l.split(",") for l in lines[1:]]
        assert len(rows) == 8  # 2 nodes x 2 seeds x 2 protocols
        keys = [(r[2], int(r[3]), float(r[4]), int(r[1])) for r in rows]
        assert keys == sorted(keys)

    def test_jobs_do_not_change_bytes(self, base_config, tmp_path):
        seq = tmp_path / "seq.csv"
        par = tmp_path / "par.csv"
        args = ["sweep", str(base_config), "--nodes", "20,30", "--seeds", "2"]
        assert main(args + ["--jobs", "1", "--out", str(seq)]) == 0
        assert main(args + ["--jobs", "2", "--out", str(par)]) == 0
        assert seq.read_bytes() == par.read_bytes()

    def test_requires_an_axis(self, base_config, tmp_path):
        assert main(["sweep", str(base_config),
                     "--out", str(tmp_path / "no.csv")]) == 1

    def test_env_var_jobs_default(self, base_config, tmp_path, monkeypatch):
        monkeypatch.setenv("HOLESIM_JOBS", "2")
        out = tmp_path / "env.csv"
        assert main(["sweep", str(base_config), "--nodes", "20",
                     "--seeds", "2", "--out", str(out)]) == 0
        assert out.exists()


class TestPlotCommand:
    def _sweep(self, base_config, tmp_path):
        out = tmp_path / "sweep.csv"
        assert main(["sweep", str(base_config), "--nodes", "20,30",
                     "--seeds", "2", "--out", str(out)]) == 0
        return out

    def test_deterministic_svg(self, base_config, tmp_path):
        csv_path = self._sweep(base_config, tmp_path)
        a = tmp_path / "a.svg"
        b = tmp_path / "b.svg"
        for target in (a, b):
            assert main(["plot", str(csv_path), "--metric", "avg_energy_j",
                         "--x", "nodes", "--out", str(target)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert a.read_text().startswith("<svg")

    def test_two_protocol_lines(self, base_config, tmp_path):
        csv_path = self._sweep(base_config, tmp_path)
        out = tmp_path / "lines.svg"
        assert main(["plot", str(csv_path), "--metric", "load_balance",
                     "--out", str(out)]) == 0
        text = out.read_text()
        assert "proposed" in text and "baseline" in text
        assert text.count("<polyline") == 2

    def test_missing_metric_names_columns(self, base_config, tmp_path, capsys):
        csv_path = self._sweep(base_config, tmp_path)
        code = main(["plot", str(csv_path), "--metric", "nope",
                     "--out", str(tmp_path / "x.svg")])
        assert code == 1
        err = capsys.readouterr().err
        assert "avg_energy_j" in err

    def test_single_row_plot(self, base_config, tmp_path):
        out_csv = tmp_path / "one.csv"
        assert main(["run", str(base_config), "--out", str(out_csv)]) == 0
        out_svg = tmp_path / "one.svg"
        assert main(["plot", str(out_csv), "--metric", "avg_energy_j",
                     "--out", str(out_svg)]) == 0
        assert out_svg.read_text().count("<circle") == 1
