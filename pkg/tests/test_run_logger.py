"""Registros de ejecución y formato de consola"""

import csv
import json
import os
from fractions import Fraction

from console_formatter import ConsoleFormatter
from equilibrium import solve_for_belief
from model import Belief
from run_logger import RunLogger


def test_run_logger_writes_traces_and_summary(tmp_path):
    logger = RunLogger("prueba", str(tmp_path))
    assert logger.run_id.startswith("prueba_")
    logger.register_trace("pasos", ["iteracion", "valor"])
    logger.store_row("pasos", {"iteracion": 1, "valor": "1/2", "extra": "ignorado"})
    logger.store_row("pasos", {"iteracion": 2, "valor": "3/4"})
    logger.store_row("desconocida", {"iteracion": 3})
    path = logger.finalize({"alg": "55/36"})

    with open(path, encoding="utf-8") as f:
        summary = json.load(f)
    assert summary["ejecucion"]["comando"] == "prueba"
    assert summary["trazas"] == {"pasos": 2}
    assert summary["resultados"] == {"alg": "55/36"}

    with open(os.path.join(logger.output_dir, "pasos.csv"), newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    assert rows == [{"iteracion": "1", "valor": "1/2"}, {"iteracion": "2", "valor": "3/4"}]


def test_empty_traces_are_not_written(tmp_path):
    logger = RunLogger("vacia", str(tmp_path))
    logger.register_trace("nada", ["a"])
    logger.finalize()
    assert not os.path.exists(os.path.join(logger.output_dir, "nada.csv"))


def test_console_prints_rationals_with_decimals(capsys):
    console = ConsoleFormatter(use_colors=False)
    console.value_line("ALG", Fraction(8, 5))
    assert "ALG: 8/5 ≈ 1.6" in capsys.readouterr().out


def test_console_prints_equilibrium(a1, capsys):
    console = ConsoleFormatter(use_colors=False)
    console.equilibrium_summary(solve_for_belief(a1, Belief.unit(2, 0)))
    printed = capsys.readouterr().out
    assert "e1 → e2 | k = 1" in printed
    assert "θ* = 3/2" in printed


def test_console_table(capsys):
    console = ConsoleFormatter(use_colors=False)
    console.table([{"α": "13/48", "μ": "(1, 0)"}, {"α": "35/48", "μ": "(2/5, 3/5)"}])
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split() == ["α", "μ"]
    assert len(lines) == 3
