"""Línea de comandos: códigos de salida, archivos escritos y trazas"""

import glob
import json
import os
from fractions import Fraction

import pandas as pd
import pytest

from conftest import data_path
from main import main
from model import parse_scheme


@pytest.fixture
def out(tmp_path):
    return str(tmp_path / "runs")


def _run_dir(out, command):
    matches = glob.glob(os.path.join(out, f"{command}_*"))
    assert len(matches) == 1
    return matches[0]


def test_evaluate_prints_exact_values(out, capsys):
    code = main(["--output-dir", out, "evaluate", data_path("a1_throughput.json"), "--belief", "2/5,3/5"])
    assert code == 0
    printed = capsys.readouterr().out
    assert "8/5" in printed
    assert "≈ 1.6" in printed


def test_evaluate_makespan(out, capsys):
    code = main(["--output-dir", out, "evaluate", data_path("a2_makespan.json"), "--belief", "11/20,9/20",
                 "--objective", "makespan"])
    assert code == 0
    assert "5/2" in capsys.readouterr().out


def test_invalid_instance_exits_with_input_error(out, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"capacities": ["1"], "travel_times": [[1, 2]], "inflow": 1, "horizon": 3,
                               "prior": ["1/2", "1/3"]}), encoding="utf-8")
    assert main(["--output-dir", out, "evaluate", str(bad)]) == 1
    assert "no suman 1" in capsys.readouterr().out


def test_wrong_belief_dimension(out):
    assert main(["--output-dir", out, "evaluate", data_path("a1_throughput.json"), "--belief", "1"]) == 1


def test_sweep_csv_contains_grid_and_breakpoints(out, tmp_path):
    base = str(tmp_path / "a3")
    code = main(["--output-dir", out, "sweep", data_path("a3_irrational.json"), "--samples", "100",
                 "--output", base])
    assert code == 0
    with open(base + ".csv", encoding="utf-8") as f:
        assert f.readline().startswith("# instancia=sha256:")
    df = pd.read_csv(base + ".csv", comment="#", dtype=str)
    assert len(df) == 105
    assert "383/96" in set(df["valor"])
    assert set(df.loc[df["quiebre"] == "1", "mu_2"]) == {"2/15", "1/4", "2/7", "1/3", "39/62"}


def test_sweep_reports_makespan_jumps(out):
    code = main(["--output-dir", out, "sweep", data_path("a2_makespan.json"), "--objective", "makespan",
                 "--samples", "20", "--emit", "svg"])
    assert code == 0
    run_dir = _run_dir(out, "sweep")
    with open(os.path.join(run_dir, "resumen.json"), encoding="utf-8") as f:
        summary = json.load(f)
    assert summary["resultados"]["saltos"] == ["1/10", "2/5", "1/2", "7/8"]
    assert os.path.exists(os.path.join(run_dir, "sweep.svg"))


def test_sweep_rejects_three_scenarios(out, tmp_path, capsys):
    three = tmp_path / "three.json"
    three.write_text(json.dumps({"capacities": ["1/2"], "travel_times": [[1, 2, 3]], "inflow": 1, "horizon": 4,
                                 "prior": ["1/3", "1/3", "1/3"]}), encoding="utf-8")
    assert main(["--output-dir", out, "sweep", str(three)]) == 1
    assert "d = 2" in capsys.readouterr().out


def test_fptas_writes_a_verified_scheme(out, tmp_path):
    path = str(tmp_path / "scheme.json")
    code = main(["--output-dir", out, "fptas", data_path("a1_throughput.json"), "--eps", "1/10",
                 "--output", path, "--verify"])
    assert code == 0
    with open(path, encoding="utf-8") as f:
        scheme, value = parse_scheme(f.read())
    assert len(scheme.signals) <= 3
    assert value >= Fraction(9, 10) * Fraction(55, 36)
    assert os.path.exists(os.path.join(_run_dir(out, "fptas"), "net.csv"))


def test_verify_scheme_detects_tampering(out, tmp_path):
    path = tmp_path / "scheme.json"
    path.write_text(json.dumps({"signals": [{"alpha": "1/2", "belief": [1, 0]},
                                            {"alpha": "1/2", "belief": [0, 1]}]}), encoding="utf-8")
    assert main(["--output-dir", out, "verify-scheme", data_path("a1_throughput.json"), str(path)]) == 2

    path.write_text(json.dumps({"signals": [{"alpha": "9/16", "belief": [1, 0]},
                                            {"alpha": "7/16", "belief": [0, 1]}],
                                "alg": "4/3"}), encoding="utf-8")
    assert main(["--output-dir", out, "verify-scheme", data_path("a1_throughput.json"), str(path)]) == 0


def test_verify_scheme_detects_wrong_value(out, tmp_path):
    path = tmp_path / "scheme.json"
    path.write_text(json.dumps({"signals": [{"alpha": "1", "belief": ["9/16", "7/16"]}], "alg": "2"}),
                    encoding="utf-8")
    assert main(["--output-dir", out, "verify-scheme", data_path("a1_throughput.json"), str(path)]) == 2


def test_makespan_check_finds_no_counterexample(out):
    code = main(["--output-dir", out, "makespan-check", data_path("a2_makespan.json"), "--trials", "10",
                 "--seed", "3"])
    assert code == 0
    trials = pd.read_csv(os.path.join(_run_dir(out, "makespan-check"), "makespan_trials.csv"))
    assert len(trials) == 10
    assert trials["contraejemplo"].sum() == 0


def test_makespan_check_over_random_instances(out):
    code = main(["--output-dir", out, "makespan-check", data_path("a2_makespan.json"), "--trials", "20",
                 "--instances", "5", "--seed", "11"])
    assert code == 0
    run_dir = _run_dir(out, "makespan-check")
    trials = pd.read_csv(os.path.join(run_dir, "makespan_trials.csv"))
    assert len(trials) == 6 * 20
    assert set(trials["instancia"]) == set(range(6))
    assert trials["contraejemplo"].sum() == 0
    with open(os.path.join(run_dir, "resumen.json"), encoding="utf-8") as f:
        assert json.load(f)["resultados"]["instancias"] == 6


def test_makespan_check_needs_trials(out):
    assert main(["--output-dir", out, "makespan-check", data_path("a2_makespan.json"), "--trials", "0"]) == 1


def test_dual_single_scenario(out, tmp_path):
    single = tmp_path / "single.json"
    single.write_text(json.dumps({"capacities": [2], "travel_times": [[1]], "inflow": 1, "horizon": 3,
                                  "prior": [1]}), encoding="utf-8")
    assert main(["--output-dir", out, "dual", str(single), "--eps", "1/20"]) == 0
    trace = pd.read_csv(os.path.join(_run_dir(out, "dual"), "ellipsoid.csv"))
    assert set(trace["corte"]) == {"biseccion"}
