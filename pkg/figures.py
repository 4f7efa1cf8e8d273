#!/usr/bin/env python3
"""
Módulo Figures - Barridos de F(μ) o M(μ) para dos escenarios
Tabla pandas con valores exactos, CSV con cabecera de la instancia, SVG mínimo y HTML con Plotly
"""

import hashlib
import json
from fractions import Fraction
from typing import List, Tuple

import pandas as pd
import plotly.graph_objects as go

from config import (BREAKPOINT_COLOR, CURVE_COLOR, DISCONTINUITY_COLOR, FIGURE_HEIGHT, FIGURE_WIDTH,
                    SVG_MARGIN)
from model import Belief, Instance, UnsupportedDimensionError, format_decimal, format_rational
from objectives import makespan_breakdown, throughput_values
from oracle import PiecewiseQuadratic1D, extract_piecewise_1d


def instance_hash(inst: Instance) -> str:
    """sha256 del documento canónico de la instancia"""
    canonical = json.dumps(inst.to_document(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _scenario_values(inst: Instance, belief: Belief, objective: str) -> Tuple[Fraction, ...]:
    if objective == "makespan":
        return makespan_breakdown(inst, belief).scenarios
    return throughput_values(inst, belief)


def sweep_table(inst: Instance, objective: str = "throughput",
                samples: int = 100) -> Tuple[pd.DataFrame, PiecewiseQuadratic1D]:
    """
    Barrido de n+1 creencias equiespaciadas más todos los puntos de quiebre

    Args:
        inst: Instancia con d = 2
        objective: "throughput" o "makespan"
        samples: Número de intervalos n del barrido

    Returns:
        Tuple[pd.DataFrame, PiecewiseQuadratic1D]: Filas ordenadas por μ_1 y la función a trozos
    """
    if inst.d != 2:
        raise UnsupportedDimensionError(f"el barrido requiere d = 2, recibido d = {inst.d}")
    if samples < 1:
        raise ValueError("se requiere al menos una muestra")

    pw = extract_piecewise_1d(inst, objective)
    breakpoints = set(pw.breakpoints)
    jumps = set(pw.discontinuities)
    xs = {Fraction(j, samples) for j in range(samples + 1)} | breakpoints

    rows = []
    for x in xs:
        belief = Belief.from_red(x)
        per_scenario = _scenario_values(inst, belief, objective)
        value = sum((belief[s] * per_scenario[s] for s in range(inst.d)), Fraction(0))
        row = {
            "mu_1": format_rational(belief[0]),
            "mu_2": format_rational(belief[1]),
            "mu_2_decimal": float(x),
            "valor": format_rational(value),
            "valor_decimal": format_decimal(value),
        }
        for s, v in enumerate(per_scenario):
            row[f"escenario_{s + 1}"] = format_rational(v)
        row["quiebre"] = int(x in breakpoints and 0 < x < 1)
        row["salto"] = int(x in jumps)
        row["_orden"] = belief[0]
        rows.append(row)

    df = pd.DataFrame(rows).sort_values("_orden", kind="mergesort").drop(columns="_orden").reset_index(drop=True)
    return df, pw


def header_lines(inst: Instance, objective: str, samples: int) -> List[str]:
    return [
        f"# instancia=sha256:{instance_hash(inst)}",
        f"# objetivo={objective}",
        f"# muestras={samples}",
    ]


def write_csv(df: pd.DataFrame, path: str, header: List[str]):
    with open(path, "w", newline="", encoding="utf-8") as f:
        for line in header:
            f.write(line + "\n")
        df.to_csv(f, index=False)


def write_svg(df: pd.DataFrame, path: str, header: List[str]):
    """Polilínea simple de μ_2 contra el valor, con marcas en los puntos de quiebre"""
    xs = df["mu_2_decimal"].astype(float).tolist()
    ys = [float(Fraction(v)) for v in df["valor"]]
    y_min, y_max = min(ys), max(ys)
    span = (y_max - y_min) or 1.0
    width, height = FIGURE_WIDTH - 2 * SVG_MARGIN, FIGURE_HEIGHT - 2 * SVG_MARGIN

    def to_px(x: float, y: float) -> Tuple[float, float]:
        return SVG_MARGIN + x * width, SVG_MARGIN + (1 - (y - y_min) / span) * height

    # Orden por μ_2 para el trazo; los saltos se ven como segmentos casi verticales
    points = sorted(zip(xs, ys))
    polyline = " ".join(f"{px:.2f},{py:.2f}" for px, py in (to_px(x, y) for x, y in points))
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{FIGURE_WIDTH}" height="{FIGURE_HEIGHT}">',
        *(f"<!-- {line.lstrip('# ')} -->" for line in header),
        f'<rect x="{SVG_MARGIN}" y="{SVG_MARGIN}" width="{width}" height="{height}" fill="none" stroke="black"/>',
        f'<polyline fill="none" stroke="{CURVE_COLOR}" stroke-width="2" points="{polyline}"/>',
    ]
    for x, y, is_break, is_jump in zip(xs, ys, df["quiebre"], df["salto"]):
        if is_break:
            px, py = to_px(x, y)
            color = DISCONTINUITY_COLOR if is_jump else BREAKPOINT_COLOR
            lines.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="4" fill="{color}"/>')
    lines.append(
        f'<text x="{SVG_MARGIN}" y="{FIGURE_HEIGHT - SVG_MARGIN / 4:.0f}" font-size="12">'
        f"[{y_min:.4g}, {y_max:.4g}] sobre μ_2 ∈ [0, 1]</text>")
    lines.append("</svg>")
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


def build_figure(df: pd.DataFrame, title: str) -> go.Figure:
    """Figura de Plotly del barrido con los puntos de quiebre destacados"""
    ordered = df.sort_values("mu_2_decimal")
    values = [float(Fraction(v)) for v in ordered["valor"]]
    fig = go.Figure()
    fig.add_trace(go.Scatter(x=ordered["mu_2_decimal"], y=values, mode="lines",
                             line=dict(color=CURVE_COLOR, width=2), name="valor"))
    for flag, color, name in ((0, BREAKPOINT_COLOR, "quiebre"), (1, DISCONTINUITY_COLOR, "salto")):
        marks = ordered[(ordered["quiebre"] == 1) & (ordered["salto"] == flag)]
        fig.add_trace(go.Scatter(x=marks["mu_2_decimal"], y=[float(Fraction(v)) for v in marks["valor"]],
                                 mode="markers", marker=dict(color=color, size=8), name=name))
    fig.update_layout(
        title=title,
        xaxis=dict(title="μ_2", range=[0, 1]),
        yaxis=dict(title="valor esperado"),
        width=FIGURE_WIDTH,
        height=FIGURE_HEIGHT,
    )
    return fig


def write_html(df: pd.DataFrame, path: str, title: str):
    build_figure(df, title).write_html(path)
