#!/usr/bin/env python3
"""
Módulo Oracle - Referencias independientes del óptimo

Con dos escenarios F es cuadrática a trozos en μ = probabilidad del escenario
rojo; su envolvente cóncava se resuelve con raíces de tangencia en decimal de
alta precisión. Para instancias pequeñas de cualquier d ≤ 3 hay una rejilla
de fuerza bruta.
"""

import itertools
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from arrangement import Hyperplane, build_H, build_horizon_planes, build_Hstar, breakpoints_1d, solve_linear_system
from config import (COLLINEAR_TOLERANCE, DECIMAL_PRECISION, ENVELOPE_TOLERANCE, MAX_GRID_DIMENSION,
                    MAX_GRID_RESOLUTION)
from equilibrium import exit_time, inflow, solve_for_belief
from model import Belief, Instance, ResolutionError, SignalingError, UnsupportedDimensionError
from objectives import expected_makespan, expected_throughput
from rational_lp import maximize

Coefficients = Tuple[Fraction, Fraction, Fraction]
Number = Union[Fraction, Decimal]

OBJECTIVES: Dict[str, Callable[[Instance, Belief], Fraction]] = {
    "throughput": expected_throughput,
    "makespan": expected_makespan,
}


# =============================================================================
# Función cuadrática a trozos
# =============================================================================

@dataclass(frozen=True)
class PiecewiseQuadratic1D:
    """
    F(μ) = Aμ² + Bμ + C en cada intervalo [b_{j-1}, b_j]

    point_values guarda el valor exacto en cada punto de quiebre; puede
    diferir de los límites laterales cuando la función salta (makespan).
    """

    breakpoints: Tuple[Fraction, ...]
    pieces: Tuple[Coefficients, ...]
    point_values: Tuple[Fraction, ...]

    @staticmethod
    def _eval(coefficients: Coefficients, x: Number) -> Number:
        a, b, c = coefficients
        if isinstance(x, Decimal):
            a, b, c = (Decimal(v.numerator) / Decimal(v.denominator) for v in coefficients)
        return (a * x + b) * x + c

    def piece_index(self, x: Fraction) -> int:
        for j in range(len(self.pieces)):
            if self.breakpoints[j] <= x <= self.breakpoints[j + 1]:
                return j
        raise ValueError(f"μ = {x} fuera de [0, 1]")

    def evaluate(self, x: Number) -> Number:
        if isinstance(x, Fraction) or isinstance(x, int):
            x = Fraction(x)
            if x in self.breakpoints:
                return self.point_values[self.breakpoints.index(x)]
            return self._eval(self.pieces[self.piece_index(x)], x)
        for j, coefficients in enumerate(self.pieces):
            if _to_decimal(self.breakpoints[j]) <= x <= _to_decimal(self.breakpoints[j + 1]):
                return self._eval(coefficients, x)
        raise ValueError(f"μ = {x} fuera de [0, 1]")

    def left_limit(self, j: int) -> Fraction:
        return self._eval(self.pieces[j - 1], self.breakpoints[j])

    def right_limit(self, j: int) -> Fraction:
        return self._eval(self.pieces[j], self.breakpoints[j])

    @property
    def discontinuities(self) -> List[Fraction]:
        """Puntos de quiebre interiores donde los límites laterales difieren"""
        return [self.breakpoints[j] for j in range(1, len(self.breakpoints) - 1)
                if self.left_limit(j) != self.right_limit(j)]

    @property
    def interior_breakpoints(self) -> List[Fraction]:
        return list(self.breakpoints[1:-1])


def _fit_quadratic(samples: Sequence[Tuple[Fraction, Fraction]]) -> Coefficients:
    matrix = [[x * x, x, Fraction(1)] for x, _ in samples]
    solution = solve_linear_system(matrix, [y for _, y in samples], unique=True)
    if solution is None:
        raise SignalingError("muestras colineales al ajustar una pieza cuadrática")
    return solution


def _affine_in_interval(values: Callable[[Fraction], Fraction], a: Fraction, b: Fraction) -> Tuple[Fraction, Fraction]:
    """Pendiente y ordenada de una función afín en (a, b) a partir de dos muestras interiores"""
    x1, x2 = a + (b - a) / 3, a + 2 * (b - a) / 3
    y1, y2 = values(x1), values(x2)
    slope = (y2 - y1) / (x2 - x1)
    return slope, y1 - slope * x1


def _crossings(planes: Sequence[Hyperplane], a: Fraction, b: Fraction) -> List[Fraction]:
    return [x for x in breakpoints_1d(planes) if a < x < b]


def _makespan_ties(inst: Instance, a: Fraction, b: Fraction) -> List[Fraction]:
    """Cruces en (a, b) entre salidas realizadas de enlaces del soporte, escenario por escenario"""
    mid = (a + b) / 2
    profile = solve_for_belief(inst, Belief.from_red(mid))
    support = [i for i in range(inst.m) if inflow(profile, i, inst.horizon) > 0]
    points = []
    for s in range(inst.d):
        realized = inst.column(s)
        lines = []
        for i in support:
            def exit_at(x: Fraction, i: int = i) -> Fraction:
                return exit_time(solve_for_belief(inst, Belief.from_red(x)), i, inst.horizon, realized)
            lines.append(_affine_in_interval(exit_at, a, b))
        for (m1, c1), (m2, c2) in itertools.combinations(lines, 2):
            if m1 != m2:
                x = (c2 - c1) / (m1 - m2)
                if a < x < b:
                    points.append(x)
    return points


def candidate_breakpoints(inst: Instance, objective: str = "throughput") -> List[Fraction]:
    """Cortes de H, H* local a cada intervalo de H y, para makespan, cambios de soporte y de máximo"""
    points = set(breakpoints_1d(build_H(inst)))
    for a, b in zip(sorted(points), sorted(points)[1:]):
        anchor = Belief.from_red((a + b) / 2)
        points.update(_crossings(build_Hstar(inst, anchor), a, b))
        if objective == "makespan":
            points.update(_crossings(build_horizon_planes(inst, anchor), a, b))
    if objective == "makespan":
        ordered = sorted(points)
        for a, b in zip(ordered, ordered[1:]):
            points.update(_makespan_ties(inst, a, b))
    return sorted(points)


def extract_piecewise_1d(inst: Instance, objective: str = "throughput") -> PiecewiseQuadratic1D:
    """
    Reducción exacta de F (o M) a una función cuadrática a trozos de μ_rojo

    Args:
        inst: Instancia con d = 2
        objective: "throughput" o "makespan"

    Returns:
        PiecewiseQuadratic1D: Puntos de quiebre, coeficientes y valores puntuales
    """
    if inst.d != 2:
        raise UnsupportedDimensionError(f"la reducción a una variable requiere d = 2, recibido d = {inst.d}")
    if objective not in OBJECTIVES:
        raise ValueError(f"objetivo desconocido: {objective}")
    evaluate = OBJECTIVES[objective]

    def value(x: Fraction) -> Fraction:
        return evaluate(inst, Belief.from_red(x))

    points = candidate_breakpoints(inst, objective)
    pieces: List[Coefficients] = []
    for a, b in zip(points, points[1:]):
        width = b - a
        samples = [(x, value(x)) for x in (a + width / 4, a + width / 2, a + 3 * width / 4)]
        coefficients = _fit_quadratic(samples)
        check = a + width / 3
        if PiecewiseQuadratic1D._eval(coefficients, check) != value(check):
            raise SignalingError(f"la pieza en [{a}, {b}] no es cuadrática: falta un punto de quiebre")
        pieces.append(coefficients)
    values = [value(x) for x in points]

    # Fusionar piezas iguales sin salto en la unión
    merged_points, merged_pieces, merged_values = [points[0]], [pieces[0]], [values[0]]
    for j in range(1, len(pieces)):
        junction, junction_value = points[j], values[j]
        if pieces[j] == merged_pieces[-1] and PiecewiseQuadratic1D._eval(pieces[j], junction) == junction_value:
            continue
        merged_points.append(junction)
        merged_values.append(junction_value)
        merged_pieces.append(pieces[j])
    merged_points.append(points[-1])
    merged_values.append(values[-1])
    return PiecewiseQuadratic1D(tuple(merged_points), tuple(merged_pieces), tuple(merged_values))


# =============================================================================
# Envolvente cóncava
# =============================================================================

@dataclass(frozen=True)
class EnvelopeSolution:
    """
    F̂(λ*) con sus creencias de soporte μ¹ ≤ λ* ≤ μ² y la recta certificado

    Las creencias son Fraction cuando el punto es racional exacto (extremos de
    pieza) y Decimal cuando viene de una raíz de tangencia.
    """

    value: Decimal
    support: Tuple[Number, Number]
    weights: Tuple[Decimal, Decimal]
    slope: Decimal
    intercept: Decimal

    def line(self, x: Number) -> Decimal:
        return self.slope * _to_decimal(x) + self.intercept

    def certify(self, pw: PiecewiseQuadratic1D, tolerance: Decimal = Decimal(ENVELOPE_TOLERANCE)) -> bool:
        """La recta está por encima de cada pieza (extremos y máximo interior)"""
        with localcontext() as ctx:
            ctx.prec = DECIMAL_PRECISION
            for j, coefficients in enumerate(pw.pieces):
                a, b = _to_decimal(pw.breakpoints[j]), _to_decimal(pw.breakpoints[j + 1])
                checkpoints = [a, b]
                qa = _to_decimal(coefficients[0])
                if qa < 0:
                    vertex = (self.slope - _to_decimal(coefficients[1])) / (2 * qa)
                    if a < vertex < b:
                        checkpoints.append(vertex)
                for x in checkpoints:
                    if pw._eval(coefficients, x) - self.line(x) > tolerance:
                        return False
            for x, y in zip(pw.breakpoints, pw.point_values):
                if _to_decimal(y) - self.line(x) > tolerance:
                    return False
        return True


def _to_decimal(x: Number) -> Decimal:
    if isinstance(x, Decimal):
        return x
    x = Fraction(x)
    return Decimal(x.numerator) / Decimal(x.denominator)


def _exact_sqrt(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    p, q = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if p * p == x.numerator and q * q == x.denominator:
        return Fraction(p, q)
    return None


def _sqrt(x: Fraction) -> Number:
    exact = _exact_sqrt(x)
    return exact if exact is not None else _to_decimal(x).sqrt()


def _tangency_points(pw: PiecewiseQuadratic1D, anchors: Sequence[Tuple[Fraction, Fraction]]) -> List[Number]:
    """Puntos de piezas cóncavas tocados por rectas tangentes que pasan por cada ancla"""
    points: List[Number] = []
    for j, (a_coef, b_coef, c_coef) in enumerate(pw.pieces):
        if a_coef >= 0:
            continue
        lo, hi = pw.breakpoints[j], pw.breakpoints[j + 1]
        for x0, y0 in anchors:
            radicand = (PiecewiseQuadratic1D._eval((a_coef, b_coef, c_coef), x0) - y0) / a_coef
            if radicand < 0:
                continue
            root = _sqrt(radicand)
            base: Number = x0 if isinstance(root, Fraction) else _to_decimal(x0)
            for x in (base - root, base + root):
                if _to_decimal(lo) < _to_decimal(x) < _to_decimal(hi):
                    points.append(x)
    return points


def _common_tangents(pw: PiecewiseQuadratic1D) -> List[Number]:
    """Puntos de contacto de rectas tangentes a dos piezas cóncavas a la vez"""
    points: List[Number] = []
    concave = [j for j, piece in enumerate(pw.pieces) if piece[0] < 0]
    for i, j in itertools.combinations(concave, 2):
        (ai, bi, ci), (aj, bj, cj) = pw.pieces[i], pw.pieces[j]
        # C_i − (B_i − m)²/(4A_i) = C_j − (B_j − m)²/(4A_j) como cuadrática en la pendiente m
        p, q = 1 / (4 * ai), 1 / (4 * aj)
        qa = q - p
        qb = 2 * p * bi - 2 * q * bj
        qc = ci - cj - p * bi * bi + q * bj * bj
        if qa == 0:
            slopes = [-qc / qb] if qb != 0 else []
        else:
            disc = qb * qb - 4 * qa * qc
            if disc < 0:
                continue
            root = _sqrt(disc)
            if isinstance(root, Fraction):
                slopes = [(-qb - root) / (2 * qa), (-qb + root) / (2 * qa)]
            else:
                slopes = [(_to_decimal(-qb) - root) / _to_decimal(2 * qa), (_to_decimal(-qb) + root) / _to_decimal(2 * qa)]
        for m in slopes:
            for k, (a_coef, b_coef, _) in ((i, pw.pieces[i]), (j, pw.pieces[j])):
                if isinstance(m, Fraction):
                    x: Number = (m - b_coef) / (2 * a_coef)
                else:
                    x = (m - _to_decimal(b_coef)) / _to_decimal(2 * a_coef)
                if _to_decimal(pw.breakpoints[k]) < _to_decimal(x) < _to_decimal(pw.breakpoints[k + 1]):
                    points.append(x)
    return points


def _value_at(pw: PiecewiseQuadratic1D, x: Number) -> Decimal:
    if isinstance(x, Fraction):
        return _to_decimal(pw.evaluate(x))
    return pw.evaluate(x)


def _upper_hull(points: List[Tuple[Number, Decimal]]) -> List[Tuple[Number, Decimal]]:
    """Cadena monótona superior; conserva los puntos colineales"""
    tolerance = Decimal(COLLINEAR_TOLERANCE)
    hull: List[Tuple[Number, Decimal]] = []
    for x, y in points:
        while len(hull) >= 2:
            (ox, oy), (ax, ay) = hull[-2], hull[-1]
            cross = (_to_decimal(ax) - _to_decimal(ox)) * (y - oy) - (ay - oy) * (_to_decimal(x) - _to_decimal(ox))
            if cross > tolerance:
                hull.pop()
            else:
                break
        hull.append((x, y))
    return hull


def concave_envelope_1d(pw: PiecewiseQuadratic1D, lam: Number) -> EnvelopeSolution:
    """
    Envolvente cóncava superior de F en λ* y sus dos creencias de soporte

    Args:
        pw: Función cuadrática a trozos sobre [0, 1]
        lam: Probabilidad a priori del escenario rojo

    Returns:
        EnvelopeSolution: Valor F̂(λ*), soporte, pesos y recta certificado
    """
    with localcontext() as ctx:
        ctx.prec = DECIMAL_PRECISION
        lam_dec = _to_decimal(lam)
        if not Decimal(0) <= lam_dec <= Decimal(1):
            raise ValueError("λ* debe estar en [0, 1]")

        # Extremos con el mayor de valor puntual y límites laterales
        anchors: List[Tuple[Fraction, Fraction]] = []
        last = len(pw.breakpoints) - 1
        for j, x in enumerate(pw.breakpoints):
            values = [pw.point_values[j]]
            if j > 0:
                values.append(pw.left_limit(j))
            if j < last:
                values.append(pw.right_limit(j))
            anchors.append((x, max(values)))

        candidates: Dict[Decimal, Tuple[Number, Decimal]] = {}

        def add(x: Number, y: Decimal):
            key = _to_decimal(x)
            if key not in candidates or y > candidates[key][1]:
                candidates[key] = (x, y)

        for x, y in anchors:
            add(x, _to_decimal(y))
        for x in _tangency_points(pw, anchors) + _common_tangents(pw):
            add(x, _value_at(pw, x))
        lam_point: Number = Fraction(lam) if not isinstance(lam, Decimal) else lam
        add(lam_point, _value_at(pw, lam_point))

        hull = _upper_hull([candidates[key] for key in sorted(candidates)])
        segments = list(zip(hull, hull[1:]))
        index = next((k for k, ((x1, _), (x2, _)) in enumerate(segments)
                      if _to_decimal(x1) <= lam_dec <= _to_decimal(x2)), 0)
        (x1, y1), (x2, y2) = segments[index]
        d1, d2 = _to_decimal(x1), _to_decimal(x2)

        if d1 < lam_dec < d2:
            slope = (y2 - y1) / (d2 - d1)
            intercept = y1 - slope * d1
            w2 = (lam_dec - d1) / (d2 - d1)
            return EnvelopeSolution(slope * lam_dec + intercept, (x1, x2), (1 - w2, w2), slope, intercept)

        # λ* es un vértice de la envolvente: F̂(λ*) = F(λ*)
        value = y1 if d1 == lam_dec else y2
        slopes = [(b - a) / (_to_decimal(xb) - _to_decimal(xa)) for (xa, a), (xb, b) in segments
                  if _to_decimal(xa) == lam_dec or _to_decimal(xb) == lam_dec]
        slopes = _derivatives(pw, lam_point) + slopes
        solutions = [EnvelopeSolution(value, (lam_point, lam_point), (Decimal(1), Decimal(0)),
                                      slope, value - slope * lam_dec) for slope in slopes]
        return next((s for s in solutions if s.certify(pw)), solutions[0])


def _derivatives(pw: PiecewiseQuadratic1D, x: Number) -> List[Decimal]:
    """Derivadas de las piezas que contienen a x (dos si x es un punto de quiebre)"""
    x_dec = _to_decimal(x)
    slopes = []
    for j, (a, b, _) in enumerate(pw.pieces):
        if _to_decimal(pw.breakpoints[j]) <= x_dec <= _to_decimal(pw.breakpoints[j + 1]):
            slopes.append(2 * _to_decimal(a) * x_dec + _to_decimal(b))
    return slopes


# =============================================================================
# Fuerza bruta sobre rejilla
# =============================================================================

def grid_points(d: int, n: int) -> List[Belief]:
    """Creencias con coordenadas múltiplos de 1/n"""
    points = []
    for head in itertools.product(range(n + 1), repeat=d - 1):
        if sum(head) <= n:
            points.append(Belief(tuple(Fraction(k, n) for k in head) + (Fraction(n - sum(head), n),)))
    return points


def brute_force_opt(inst: Instance, n: int) -> Fraction:
    """
    Envolvente cóncava discreta de F en λ* sobre la rejilla de resolución n

    Crece hacia OPT cuando la rejilla se refina (n → 2n).
    """
    if inst.d > MAX_GRID_DIMENSION:
        raise UnsupportedDimensionError(f"la rejilla admite d ≤ {MAX_GRID_DIMENSION}, recibido d = {inst.d}")
    if n < 1 or n > MAX_GRID_RESOLUTION:
        raise ResolutionError(f"resolución {n} fuera de [1, {MAX_GRID_RESOLUTION}]")

    if inst.d == 1:
        return expected_throughput(inst, inst.prior_belief)

    points = grid_points(inst.d, n)
    values = [expected_throughput(inst, point) for point in points]

    if inst.d == 2:
        # Rejilla ordenada por μ_rojo: cadena superior exacta
        pairs = sorted((point[1], value) for point, value in zip(points, values))
        hull: List[Tuple[Fraction, Fraction]] = []
        for x, y in pairs:
            while len(hull) >= 2:
                (ox, oy), (ax, ay) = hull[-2], hull[-1]
                if (ax - ox) * (y - oy) - (ay - oy) * (x - ox) >= 0:
                    hull.pop()
                else:
                    break
            hull.append((x, y))
        lam = inst.prior[1]
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            if x1 <= lam <= x2:
                return y1 + (y2 - y1) * (lam - x1) / (x2 - x1)
        return hull[0][1]

    A = [[point[s] for point in points] for s in range(inst.d)]
    A.append([Fraction(1)] * len(points))
    return maximize(values, A, list(inst.prior) + [Fraction(1)]).objective
