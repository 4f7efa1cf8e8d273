#!/usr/bin/env python3
"""
Módulo DualPTAS - Esquema aditivo por el dual lagrangiano y el método del elipsoide

El dual es min wᵀλ* sujeto a wᵀμ ≥ F(μ) para todo μ ∈ Δ. La separación es
exacta: F − wᵀμ es cuadrática en cada celda del arreglo H ∪ H*, así que basta
revisar puntos estacionarios y vértices de todas las celdas.
"""

import functools
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from arrangement import Arrangement, Cell, LinearSolver, Vector, build_H, build_Hstar, solve_linear_system
from config import (BISECTION_MAX_STEPS, ELLIPSOID_ITER_FACTOR, ELLIPSOID_ITER_OFFSET, INTERIOR_PULL_STEPS,
                    VOLUME_RATIO_TOLERANCE)
from model import Belief, Instance
from objectives import throughput_values


@dataclass(frozen=True)
class Violation:
    """F(μ*) − wᵀμ* = gap > 0, calculado en racionales exactos"""

    belief: Belief
    gap: Fraction


@dataclass(frozen=True)
class Feasible:
    """wᵀμ ≥ F(μ) en todo Δ; max_value es el supremo de F − wᵀμ (≤ 0)"""

    max_value: Fraction


SeparationResult = Union[Violation, Feasible]


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _step_inside(arrangement: Arrangement, cell: Cell, direction: Vector) -> Fraction:
    """Paso t con p + t·direction dentro de la misma celda abierta"""
    p = cell.representative.coords
    t = Fraction(1)
    for sigma, c in zip(cell.full_signs, arrangement.constraints):
        if sigma == 0:
            continue
        slope = _dot(c, direction)
        if slope != 0:
            t = min(t, abs(_dot(c, p)) / (2 * abs(slope)))
    return t


@dataclass
class _Piece:
    """Celda donde cada F_s es afín: F_s(p + V t) = fs0_s + Σ_j β[j][s] t_j"""

    arrangement: Arrangement
    cell: Cell
    point: Vector
    basis: List[Vector]
    fs0: Tuple[Fraction, ...]
    beta: List[Tuple[Fraction, ...]]
    hessian: List[List[Fraction]] = field(default_factory=list)
    # Resolución precalculada de hessian·t = rhs(w)
    stationary: Optional[LinearSolver] = None
    base_rhs: List[Fraction] = field(default_factory=list)
    # (x, F verdadero en x, extensión afín en x)
    corners: List[Tuple[Vector, Tuple[Fraction, ...], Tuple[Fraction, ...]]] = field(default_factory=list)

    def extension(self, t: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        return tuple(self.fs0[s] + sum((self.beta[j][s] * t[j] for j in range(len(t))), Fraction(0))
                     for s in range(len(self.fs0)))

    def coordinates(self, x: Vector) -> Optional[Tuple[Fraction, ...]]:
        if not self.basis:
            return ()
        columns = [[self.basis[j][s] for j in range(len(self.basis))] for s in range(len(x))]
        return solve_linear_system(columns, [a - b for a, b in zip(x, self.point)])


class SeparationOracle:
    """
    Oráculo de separación exacto con las piezas cuadráticas precalculadas

    Para cada celda Q de H (de cualquier dimensión) se fija el orden π de Q, se
    construye H*(Q) y se guardan las celdas de H ∪ H*(Q) contenidas en Q.
    """

    def __init__(self, inst: Instance):
        self.inst = inst
        self.pieces: List[_Piece] = []
        self._build()

    def _build(self):
        inst = self.inst
        h_planes = build_H(inst)
        base = Arrangement(h_planes, inst.d)
        n_h = len(h_planes)
        for k in range(inst.d):
            for region in base.cells(k):
                local = Arrangement(h_planes + build_Hstar(inst, region), inst.d)
                for level in range(k + 1):
                    for cell in local.cells(level):
                        # Solo celdas dentro de la región (no de su clausura): π es constante en ellas
                        if cell.signs[:n_h] == region.signs and cell.facet_signs == region.facet_signs:
                            self.pieces.append(self._make_piece(local, cell))

    def _make_piece(self, arrangement: Arrangement, cell: Cell) -> _Piece:
        p = cell.representative.coords
        basis = arrangement.directions(cell)
        fs0 = throughput_values(self.inst, cell.representative)
        beta = []
        for v in basis:
            t = _step_inside(arrangement, cell, v)
            moved = Belief(tuple(a + t * b for a, b in zip(p, v)))
            fs = throughput_values(self.inst, moved)
            beta.append(tuple((fs[s] - fs0[s]) / t for s in range(self.inst.d)))

        piece = _Piece(arrangement, cell, p, basis, fs0, beta)
        k, d = len(basis), self.inst.d
        piece.hessian = [[sum((basis[j][s] * beta[l][s] + basis[l][s] * beta[j][s] for s in range(d)), Fraction(0))
                          for l in range(k)] for j in range(k)]
        piece.base_rhs = [-_dot(basis[j], fs0) - _dot(p, beta[j]) for j in range(k)]
        if k:
            piece.stationary = LinearSolver.of(piece.hessian)
        for vertex in cell.vertices:
            x = vertex.coords
            t = piece.coordinates(x)
            extended = piece.extension(t) if t is not None else throughput_values(self.inst, vertex)
            piece.corners.append((x, throughput_values(self.inst, vertex), extended))
        return piece

    # -------------------------------------------------------------------------

    def _candidates(self, w: Tuple[Fraction, ...]):
        """(valor extendido, valor verdadero o None, punto, pieza) de cada candidato"""
        for piece in self.pieces:
            for x, true_fs, ext_fs in piece.corners:
                wx = _dot(w, x)
                yield _dot(x, ext_fs) - wx, _dot(x, true_fs) - wx, x, piece
            if not piece.basis:
                continue
            rhs = [_dot(w, v) + r for v, r in zip(piece.basis, piece.base_rhs)]
            t = piece.stationary.solve(rhs)
            if t is None:
                continue
            x = tuple(piece.point[s] + sum((t[j] * piece.basis[j][s] for j in range(len(t))), Fraction(0))
                      for s in range(self.inst.d))
            if not piece.arrangement.in_closure(piece.cell, x):
                continue
            value = _dot(x, piece.extension(t)) - _dot(w, x)
            inside = piece.arrangement.sign_vector(x) == piece.cell.full_signs
            yield value, (value if inside else None), x, piece

    def _true_gap(self, x: Vector, w: Tuple[Fraction, ...]) -> Fraction:
        return _dot(x, throughput_values(self.inst, Belief(x))) - _dot(w, x)

    def separate(self, w: Sequence[float]) -> SeparationResult:
        """
        Decide si w es factible para el dual o devuelve una creencia que lo viola

        Args:
            w: Pesos por escenario (float o racional); se convierten exactamente

        Returns:
            SeparationResult: Violation(μ*, gap) o Feasible(max_value)
        """
        w = tuple(Fraction(v) for v in w)
        supremum: Optional[Fraction] = None
        best_true: Optional[Tuple[Fraction, Vector]] = None
        best_ext: Optional[Tuple[Fraction, Vector, _Piece]] = None

        for ext_value, true_value, x, piece in self._candidates(w):
            if supremum is None or ext_value > supremum:
                supremum = ext_value
            if true_value is None and ext_value > 0:
                true_value = self._true_gap(x, w)
            if true_value is not None and true_value > 0 and (best_true is None or true_value > best_true[0]):
                best_true = (true_value, x)
            if ext_value > 0 and (best_ext is None or ext_value > best_ext[0]):
                best_ext = (ext_value, x, piece)

        if best_true is not None:
            return Violation(Belief(best_true[1]), best_true[0])
        if best_ext is not None:
            # Supremo positivo solo como límite de borde: acercarse al interior de la celda
            _, x, piece = best_ext
            target = piece.point
            for j in range(1, INTERIOR_PULL_STEPS + 1):
                factor = Fraction(1, 2 ** j)
                y = tuple(a + factor * (b - a) for a, b in zip(x, target))
                gap = self._true_gap(y, w)
                if gap > 0:
                    return Violation(Belief(y), gap)
        return Feasible(supremum if supremum is not None else Fraction(0))


@functools.lru_cache(maxsize=16)
def separation_oracle(inst: Instance) -> SeparationOracle:
    return SeparationOracle(inst)


def separate(inst: Instance, w: Sequence[float]) -> SeparationResult:
    """Oráculo de separación del dual (piezas cacheadas por instancia)"""
    return separation_oracle(inst).separate(w)


# =============================================================================
# Radio del dual
# =============================================================================

def capacity_gap(inst: Instance) -> Fraction:
    """min |u − Σ_{j∈S} ν_j| sobre subconjuntos S con suma distinta de u"""
    gap = inst.inflow
    for size in range(1, inst.m + 1):
        for subset in itertools.combinations(inst.capacities, size):
            distance = abs(inst.inflow - sum(subset))
            if distance != 0:
                gap = min(gap, distance)
    return gap


def dual_radius_exact(inst: Instance) -> Fraction:
    max_tau = max(max(row) for row in inst.travel_times)
    total = sum(inst.capacities)
    return inst.d * (inst.m + 1) * max_tau * total ** 2 / capacity_gap(inst)


def dual_radius(inst: Instance) -> float:
    """R = d(m+1)·max τ·(ν*)²/κ, redondeado hacia arriba a float"""
    exact = dual_radius_exact(inst)
    value = float(exact)
    if Fraction(value) < exact:
        value = math.nextafter(value, math.inf)
    return value


# =============================================================================
# Método del elipsoide
# =============================================================================

@dataclass
class DualResult:
    p: float
    best_w: Optional[np.ndarray]
    best_value: float
    lower_bound: float
    iterations: int
    converged: bool
    volume_log: List[float]
    drift_warnings: int = 0


def iteration_budget(radius: float, d: int, eps: float) -> int:
    return int(math.ceil(ELLIPSOID_ITER_FACTOR * d * d * math.log(max(radius * d / eps, math.e)))) + ELLIPSOID_ITER_OFFSET


def _bisection(inst: Instance, oracle: SeparationOracle, radius: float, eps: float,
               trace: Optional[Callable[[dict], None]]) -> DualResult:
    lo, hi = 0.0, radius
    steps = 0
    while hi - lo >= eps and steps < BISECTION_MAX_STEPS:
        steps += 1
        mid = (lo + hi) / 2
        verdict = oracle.separate([mid])
        feasible = isinstance(verdict, Feasible)
        if feasible:
            hi = mid
        else:
            lo = mid
        if trace is not None:
            trace({"iteracion": steps, "corte": "biseccion", "objetivo": mid, "log_volumen": math.log(hi - lo),
                   "veredicto": "factible" if feasible else "violacion"})
    converged = hi - lo < eps
    return DualResult(hi - eps, np.array([hi]), hi, lo, steps, converged, [])


def solve_additive_ptas(inst: Instance, eps_star: float,
                        trace: Optional[Callable[[dict], None]] = None) -> DualResult:
    """
    Valor p ∈ [OPT − ε*, OPT] por el método del elipsoide sobre el dual

    Args:
        inst: Instancia
        eps_star: Precisión aditiva ε* > 0
        trace: Callback opcional que recibe una fila por iteración

    Returns:
        DualResult: p, mejor w factible, iteraciones y si se certificó la precisión
    """
    if eps_star <= 0:
        raise ValueError("se requiere ε* > 0")
    d = inst.d
    eps = float(eps_star) / (d + 2)
    oracle = separation_oracle(inst)
    radius = max(dual_radius(inst), float(inst.inflow * inst.horizon))

    if d == 1:
        return _bisection(inst, oracle, radius, eps, trace)

    lam = np.array([float(v) for v in inst.prior])
    center = np.zeros(d)
    shape = np.eye(d) * radius * radius * d
    n = d
    expected_ratio = (n / (n + 1)) * (n * n / (n * n - 1)) ** ((n - 1) / 2)
    budget = iteration_budget(radius, d, eps)

    best_value, best_w = math.inf, None
    volume_log = [0.5 * np.linalg.slogdet(shape)[1]]
    drift = 0
    iterations, converged = 0, False

    def lower() -> float:
        return float(lam @ center - math.sqrt(max(lam @ shape @ lam, 0.0)))

    for iterations in range(1, budget + 1):
        if best_w is not None and best_value - lower() <= eps:
            converged = True
            iterations -= 1
            break

        outside = np.abs(center) - radius
        if np.max(outside) > 0:
            s = int(np.argmax(outside))
            cut = np.zeros(d)
            cut[s] = np.sign(center[s])
            kind, verdict_text = "caja", "fuera de caja"
        else:
            verdict = oracle.separate(center.tolist())
            if isinstance(verdict, Violation):
                cut = -np.array(verdict.belief.to_floats())
                kind, verdict_text = "factibilidad", f"violacion {float(verdict.gap):.3e}"
            else:
                value = float(lam @ center)
                if value < best_value:
                    best_value, best_w = value, center.copy()
                cut = lam.copy()
                kind, verdict_text = "objetivo", "factible"

        pa = shape @ cut
        norm = math.sqrt(max(float(cut @ pa), 0.0))
        if norm == 0.0:
            break
        b = pa / norm
        center = center - b / (n + 1)
        shape = (n * n / (n * n - 1.0)) * (shape - (2.0 / (n + 1)) * np.outer(b, b))
        shape = (shape + shape.T) / 2

        log_volume = 0.5 * np.linalg.slogdet(shape)[1]
        ratio = math.exp(log_volume - volume_log[-1])
        if abs(ratio / expected_ratio - 1) > VOLUME_RATIO_TOLERANCE:
            drift += 1
        volume_log.append(float(log_volume))

        if trace is not None:
            trace({"iteracion": iterations, "corte": kind, "objetivo": float(lam @ center),
                   "log_volumen": float(log_volume), "veredicto": verdict_text})
    else:
        converged = best_w is not None and best_value - lower() <= eps

    p = best_value - eps if best_w is not None else math.nan
    return DualResult(p, best_w, best_value, lower(), iterations, converged, volume_log, drift)
