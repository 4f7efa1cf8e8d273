"""Tablas de barrido y figuras"""

from fractions import Fraction

import pytest

from figures import build_figure, header_lines, instance_hash, sweep_table, write_csv, write_html, write_svg
from model import UnsupportedDimensionError


def test_sweep_table_of_an_affine_function(affine_link):
    df, pw = sweep_table(affine_link, "throughput", 4)
    assert list(df["mu_2"]) == ["1", "3/4", "1/2", "1/4", "0"]
    assert list(df["valor"]) == ["1", "5/4", "3/2", "7/4", "2"]
    assert df["quiebre"].sum() == 0
    assert pw.pieces == ((0, -1, 2),)


def test_sweep_table_flags_breakpoints(a1):
    df, _ = sweep_table(a1, "throughput", 10)
    flagged = df[df["quiebre"] == 1]
    assert set(flagged["mu_2"]) == {"1/5", "3/5"}
    assert df["salto"].sum() == 0
    assert len(df) == 11


def test_sweep_table_flags_jumps(a2):
    df, _ = sweep_table(a2, "makespan", 10)
    assert set(df.loc[df["salto"] == 1, "mu_2"]) == {"1/10", "2/5", "1/2", "7/8"}


def test_sweep_table_limits(single_link, a1):
    with pytest.raises(UnsupportedDimensionError):
        sweep_table(single_link)
    with pytest.raises(ValueError):
        sweep_table(a1, samples=0)


def test_header_identifies_the_instance(a1, a3):
    lines = header_lines(a1, "throughput", 100)
    assert lines[0] == f"# instancia=sha256:{instance_hash(a1)}"
    assert lines[1:] == ["# objetivo=throughput", "# muestras=100"]
    assert instance_hash(a1) != instance_hash(a3)
    assert len(instance_hash(a1)) == 64


def test_written_files(a1, tmp_path):
    df, _ = sweep_table(a1, "throughput", 10)
    header = header_lines(a1, "throughput", 10)
    write_csv(df, str(tmp_path / "a1.csv"), header)
    write_svg(df, str(tmp_path / "a1.svg"), header)
    write_html(df, str(tmp_path / "a1.html"), "throughput")
    assert (tmp_path / "a1.csv").read_text(encoding="utf-8").startswith(header[0])
    svg = (tmp_path / "a1.svg").read_text(encoding="utf-8")
    assert "<polyline" in svg and svg.count("<circle") == 2
    assert (tmp_path / "a1.html").stat().st_size > 0


def test_plotly_figure_traces(a1):
    df, _ = sweep_table(a1, "throughput", 10)
    fig = build_figure(df, "throughput")
    assert [trace.name for trace in fig.data] == ["valor", "quiebre", "salto"]
    assert len(fig.data[1].x) == 2
    assert max(fig.data[0].y) == pytest.approx(float(Fraction(8, 5)))
