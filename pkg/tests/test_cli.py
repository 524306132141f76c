import csv
import math
from pathlib import Path

import numpy as np
import pytest

from nhdtc.cli import (ExperimentConfig, emit_csv, file_digest, main,
                       parse_overrides, run)
from nhdtc.errors import InvalidConfig


def test_config_round_trips_through_text():
    config = ExperimentConfig(preset="melting", L=6,
                              eps_values=(0.1, 0.2, 0.30000000000000004),
                              protocols=("nonreciprocal",),
                              theta_values=(0.0, math.pi / 16),
                              workers=3, delta_floor=2.5e-14)
    assert ExperimentConfig.from_text(config.to_text()) == config
    # twice through the wire stays identical
    again = ExperimentConfig.from_text(
        ExperimentConfig.from_text(config.to_text()).to_text())
    assert again == config


def test_config_rejects_unknown_lines():
    with pytest.raises(InvalidConfig):
        ExperimentConfig.from_text("flux_capacitance=1.21\n")
    with pytest.raises(InvalidConfig):
        parse_overrides(["n_periods"])
    with pytest.raises(InvalidConfig):
        parse_overrides(["bogus=1"])


def test_parse_overrides_types():
    out = parse_overrides(["L=6", "eps_values=0.1,0.2", "preset=traces",
                           "protocols=reciprocal"])
    assert out == {"L": 6, "eps_values": (0.1, 0.2), "preset": "traces",
                   "protocols": ("reciprocal",)}


def test_emit_csv_round_trips_floats_exactly(tmp_path):
    values = [1.0 / 3.0, 2.0**-52, 0.1 + 0.2, -1.2345678901234567e-13]
    path = tmp_path / "table.csv"
    emit_csv([("n", [0, 1, 2, 3]), ("x", values)], path)
    with open(path) as handle:
        rows = list(csv.DictReader(handle))
    parsed = [float(row["x"]) for row in rows]
    assert parsed == values


def test_emit_csv_empty_table_is_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    emit_csv([("a", []), ("b", [])], path)
    assert path.read_text() == "a,b\n"


def test_emit_csv_rejects_ragged_columns(tmp_path):
    with pytest.raises(InvalidConfig):
        emit_csv([("a", [1, 2]), ("b", [1])], tmp_path / "bad.csv")


def _small_traces_config(tmp_path, name):
    return ExperimentConfig(preset="traces", L=4, n_periods=12,
                            eps_values=(0.0, 0.2),
                            out_dir=str(tmp_path / name))


def test_run_is_deterministic(tmp_path):
    first = run(_small_traces_config(tmp_path, "one"))
    second = run(_small_traces_config(tmp_path, "two"))
    digests_one = {name: digest for name, digest, _ in first.files}
    digests_two = {name: digest for name, digest, _ in second.files}
    assert digests_one == digests_two


def test_manifest_lists_files_with_matching_digests(tmp_path):
    manifest = run(_small_traces_config(tmp_path, "out"))
    out = Path(manifest.config.out_dir)
    assert (out / "manifest.txt").exists()
    for name, digest, size in manifest.files:
        assert file_digest(out / name) == digest
        assert (out / name).stat().st_size == size
    text = (out / "manifest.txt").read_text()
    assert "config.preset=traces" in text
    assert "stage.traces.seconds=" in text


def test_trace_csv_contents(tmp_path):
    manifest = run(_small_traces_config(tmp_path, "data"))
    path = Path(manifest.config.out_dir) / "trace_reciprocal_eps0.csv"
    with open(path) as handle:
        rows = list(csv.DictReader(handle))
    assert [row["I_total"] for row in rows[:4]] == ["1", "-1", "1", "-1"]
    assert "I_4" in rows[0] and "I_5" not in rows[0]


def test_run_rejects_unknown_preset(tmp_path):
    with pytest.raises(InvalidConfig):
        run(ExperimentConfig(preset="fig9", out_dir=str(tmp_path)))


def test_cli_run_and_exit_codes(tmp_path, capsys):
    code = main(["run", "traces", f"out_dir={tmp_path / 'cli'}",
                 "n_periods=8", "L=3", "eps_values=0.0,0.1"])
    assert code == 0
    out = capsys.readouterr().out
    assert "trace_reciprocal_eps0.csv" in out
    assert main(["run", "traces", "bogus_key=1"]) == 2


def test_cli_sweep_requires_pipeline_and_grid(tmp_path):
    assert main(["sweep", f"out_dir={tmp_path / 's0'}"]) == 2
    assert main(["sweep", "pipeline=traces", f"out_dir={tmp_path / 's1'}"]) == 2
    code = main(["sweep", "pipeline=traces", "eps_values=0.0,0.1", "L=3",
                 "n_periods=8", f"out_dir={tmp_path / 's2'}"])
    assert code == 0
    assert (tmp_path / "s2" / "trace_nonreciprocal_eps0.1.csv").exists()


def test_cli_ptcheck_prints_reports(tmp_path, capsys):
    code = main(["ptcheck", "sizes=2", "eps_values=0.3",
                 f"out_dir={tmp_path / 'pt'}"])
    assert code == 0
    out = capsys.readouterr().out
    assert "commutator_hopping: 0.000e+00" in out


def test_gap_scaling_preset_outputs(tmp_path):
    config = ExperimentConfig(preset="gap-scaling", sizes=(4, 5, 6),
                              eps_values=(0.3, 0.35, 0.4),
                              out_dir=str(tmp_path / "gap"))
    manifest = run(config)
    names = {name for name, _, _ in manifest.files}
    assert {"gap_deviation_reciprocal.csv", "alpha_nonreciprocal.csv",
            "exponent_reciprocal.csv"} <= names
    with open(tmp_path / "gap" / "exponent_nonreciprocal.csv") as handle:
        row = next(csv.DictReader(handle))
    assert 1.5 < float(row["beta"]) < 2.6


def test_theta_preset_normalized_column(tmp_path):
    config = ExperimentConfig(preset="theta-sweep", L=4, n_periods=6,
                              eps_values=(0.2,),
                              theta_values=(0.0, math.pi / 8),
                              out_dir=str(tmp_path / "theta"))
    run(config)
    with open(tmp_path / "theta" / "theta_nonreciprocal.csv") as handle:
        rows = list(csv.DictReader(handle))
    first = rows[0]
    assert float(first["normalized"]) == 1.0
    by_theta = {float(r["theta"]) for r in rows}
    assert by_theta == {0.0, math.pi / 8}


def test_overlaps_preset_weight_sums(tmp_path):
    config = ExperimentConfig(preset="overlaps", L=4,
                              eps_values=(0.0, 0.2),
                              protocols=("nonreciprocal",),
                              out_dir=str(tmp_path / "ov"))
    run(config)
    with open(tmp_path / "ov" / "overlaps_nonreciprocal_polarized.csv") as handle:
        rows = list(csv.DictReader(handle))
    for eps in (0.0, 0.2):
        total = sum(float(r["re_weight"]) for r in rows
                    if float(r["eps"]) == eps)
        assert total == pytest.approx(1.0, abs=1e-8)


def test_melting_preset_small_grid(tmp_path):
    config = ExperimentConfig(preset="melting", L=5, n_samples=60,
                              eps_values=tuple(np.round(
                                  np.arange(0.05, 0.81, 0.05), 10)),
                              protocols=("nonreciprocal",),
                              out_dir=str(tmp_path / "melt"))
    manifest = run(config)
    names = {name for name, _, _ in manifest.files}
    assert {"kl_nonreciprocal.csv", "variance_nonreciprocal.csv",
            "transition_nonreciprocal.csv"} <= names
    with open(tmp_path / "melt" / "transition_nonreciprocal.csv") as handle:
        eps_c = float(next(csv.DictReader(handle))["eps_c"])
    assert 0.3 < eps_c < 0.8
