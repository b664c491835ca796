import csv

import numpy as np
import pytest

from ceilprop import ParamSet, read_params, read_steady_csv, write_params
from ceilprop.cli import cli_dispatch


@pytest.fixture
def truth_file(tmp_path, geom_23mm, single_prop_ceiling, bench_motor):
    path = tmp_path / "truth.json"
    write_params(ParamSet(geometry=geom_23mm, ceiling=single_prop_ceiling, motor=bench_motor), path)
    return path


def run(*argv):
    return cli_dispatch([str(a) for a in argv])


class TestUsage:
    def test_no_arguments_is_usage_error(self, capsys):
        assert run() == 1
        assert "usage" in capsys.readouterr().err.lower()

    def test_unknown_subcommand(self):
        assert run("frobnicate") == 1

    def test_unknown_flag(self, truth_file, tmp_path):
        assert run("synth", "--params", truth_file, "--frives", "3") == 1

    def test_help_exits_zero(self, capsys):
        assert run("--help") == 0
        assert "synth" in capsys.readouterr().out

    def test_bad_range_syntax(self, truth_file, tmp_path):
        code = run(
            "synth", "--params", truth_file, "--out", tmp_path / "r.csv",
            "--distances", "1:2", "--setpoints", "800:3000:4",
        )
        assert code == 1

    def test_missing_input_file_is_data_error(self, tmp_path):
        assert run("fit-motor", "--input", tmp_path / "nope.csv", "--params", tmp_path / "p.json") == 2


class TestSynth:
    def test_writes_records(self, truth_file, tmp_path, capsys):
        out = tmp_path / "records.csv"
        code = run(
            "synth", "--params", truth_file, "--out", out,
            "--distances", "0.002:0.1:10,10.0", "--log", "--setpoints", "800:3000:4",
        )
        assert code == 0
        records = read_steady_csv(out)
        assert len(records) == 11 * 4
        assert "wrote 44 records" in capsys.readouterr().out

    def test_deterministic_bytes_for_fixed_seed(self, truth_file, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert run(
                "synth", "--params", truth_file, "--out", out, "--noise", "0.02", "--seed", "11",
                "--distances", "0.002:0.1:10,10.0", "--log", "--setpoints", "800:3000:4",
            ) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_truth_without_motor_is_data_error(self, tmp_path, geom_23mm, single_prop_ceiling):
        truth = tmp_path / "truth.json"
        write_params(ParamSet(geometry=geom_23mm, ceiling=single_prop_ceiling), truth)
        code = run(
            "synth", "--params", truth, "--out", tmp_path / "r.csv",
            "--distances", "0.01:0.1:3", "--setpoints", "800:3000:4",
        )
        assert code == 2


@pytest.fixture
def records_file(truth_file, tmp_path):
    out = tmp_path / "records.csv"
    assert run(
        "synth", "--params", truth_file, "--out", out,
        "--distances", "0.001:0.1:24,10.0", "--log", "--setpoints", "800:3000:8",
    ) == 0
    return out


class TestPipeline:
    def test_full_chain_recovers_truth(self, records_file, tmp_path, capsys):
        fit = tmp_path / "fit.json"
        gamma_csv = tmp_path / "gamma.csv"

        assert run("fit-motor", "--input", records_file, "--params", fit) == 0
        assert run("fit-gamma", "--input", records_file, "--out", gamma_csv, "--params", fit) == 0
        assert run("fit-ceiling", "--input", gamma_csv, "--params", fit, "--reduced") == 0
        assert run("fit-blade", "--input", records_file, "--params", fit) == 0

        params = read_params(fit)
        assert params.motor.resistance == pytest.approx(1.58, rel=1e-6)
        assert params.motor.back_emf == pytest.approx(1.1e-3, rel=1e-6)
        assert params.geometry.figure_of_merit == pytest.approx(0.50, rel=1e-6)
        assert params.ceiling.asymmetry == pytest.approx(1.60, rel=1e-5)
        assert params.ceiling.recirculation == 0.0
        for fitted, true in zip(params.geometry.blade_coeffs, (0.154, 0.846, 0.022)):
            assert fitted == pytest.approx(true, rel=1e-3)
        assert set(params.provenance) == {"motor_fit", "gamma_fit", "ceiling_fit", "blade_fit"}
        assert params.provenance["ceiling_fit"]["converged"] is True

    def test_prediction_outputs(self, records_file, tmp_path):
        fit = tmp_path / "fit.json"
        gamma_csv = tmp_path / "gamma.csv"
        assert run("fit-motor", "--input", records_file, "--params", fit) == 0
        assert run("fit-gamma", "--input", records_file, "--out", gamma_csv, "--params", fit) == 0
        assert run("fit-ceiling", "--input", gamma_csv, "--params", fit, "--reduced") == 0
        assert run("fit-blade", "--input", records_file, "--params", fit) == 0

        coeffs_csv = tmp_path / "coeffs.csv"
        assert run("predict-coeffs", "--params", fit, "--deltas", "0:25:26", "--out", coeffs_csv) == 0
        with open(coeffs_csv) as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 26
        assert float(rows[0]["gamma"]) == pytest.approx(1.0)
        assert float(rows[-1]["thrust_coeff_n_s2_rad2"]) > float(rows[0]["thrust_coeff_n_s2_rad2"])

        power_csv = tmp_path / "power.csv"
        assert run(
            "power-saving", "--params", fit, "--thrust", "0.0785",
            "--distances", "0.001:0.1:30", "--log", "--out", power_csv,
        ) == 0
        with open(power_csv) as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 30
        for row in rows:
            assert float(row["input_power_w"]) > float(row["mechanical_power_w"])

        res_csv = tmp_path / "res.csv"
        assert run("resonance", "--params", fit, "--deltas", "0:25:51", "--out", res_csv) == 0
        with open(res_csv) as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 51

        anom_csv = tmp_path / "anom.csv"
        assert run("anomalies", "--input", gamma_csv, "--params", fit, "--out", anom_csv) == 0
        with open(anom_csv) as fh:
            assert list(csv.DictReader(fh)) == []

    def test_fit_gamma_deterministic_output(self, records_file, tmp_path):
        outputs = []
        for tag in ("x", "y"):
            fit = tmp_path / f"fit_{tag}.json"
            gamma_csv = tmp_path / f"gamma_{tag}.csv"
            assert run("fit-gamma", "--input", records_file, "--out", gamma_csv, "--params", fit) == 0
            outputs.append((gamma_csv.read_bytes(), fit.read_bytes()))
        assert outputs[0] == outputs[1]

    def test_fit_blade_without_ceiling_section(self, records_file, tmp_path):
        fit = tmp_path / "fit.json"
        gamma_csv = tmp_path / "gamma.csv"
        assert run("fit-gamma", "--input", records_file, "--out", gamma_csv, "--params", fit) == 0
        assert run("fit-blade", "--input", records_file, "--params", fit) == 2


class TestExtract:
    def test_extract_subcommand(self, tmp_path):
        raw = tmp_path / "raw.csv"
        lines = ["time_s,setpoint,voltage_v,current_a,thrust_n,torque_nm,omega_rad_s"]
        for i in range(2500):
            lines.append(f"{i / 1000.0},a,3.0,1.0,0.05,0.0001,2000.0")
        for i in range(2500, 5000):
            lines.append(f"{i / 1000.0},b,3.5,1.2,0.08,0.00012,2300.0")
        raw.write_text("\n".join(lines) + "\n")
        out = tmp_path / "steady.csv"
        assert run("extract", "--input", raw, "--out", out, "--radius", "0.023", "--distance", "0.01") == 0
        records = read_steady_csv(out)
        assert [r.setpoint for r in records] == ["a", "b"]
        assert records[1].thrust == pytest.approx(0.08)
