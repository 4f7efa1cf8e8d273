#!/usr/bin/env python3
"""
Módulo Arrangement - Arreglos de hiperplanos sobre el símplex de creencias
Hiperplanos H (empates de tiempos esperados), H* (empates de primeras salidas y cruces
con el horizonte) y enumeración exacta de k-celdas en Δ para d ≤ 4
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy

from config import MAX_EXACT_DIMENSION
from equilibrium import solve_for_belief
from model import INFINITY, Belief, Instance, UnsupportedDimensionError

Vector = Tuple[Fraction, ...]


# =============================================================================
# Álgebra lineal exacta (sympy)
# =============================================================================

def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


def _to_matrix(rows: Sequence[Sequence[Fraction]]) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(Fraction(v).numerator, Fraction(v).denominator) for v in row]
                         for row in rows])


def _to_fraction(value: sympy.Rational) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def null_space(rows: Sequence[Sequence[Fraction]], n: int) -> List[Vector]:
    """Base racional del núcleo {v : row·v = 0 para toda fila}"""
    if not rows:
        return [tuple(Fraction(int(j == c)) for j in range(n)) for c in range(n)]
    return [tuple(_to_fraction(v) for v in column) for column in _to_matrix(rows).nullspace()]


@dataclass(frozen=True)
class LinearSolver:
    """
    Solución precalculada de A t = r para cualquier lado derecho r

    Con E tal que E·A está en forma escalonada reducida: t[p_i] = E_i·r en las
    columnas pivote, 0 en las libres, y el sistema es consistente si E_j·r = 0
    en las filas sin pivote.
    """

    columns: int
    pivots: Tuple[int, ...]
    solve_rows: Tuple[Vector, ...]
    checks: Tuple[Vector, ...]

    @classmethod
    def of(cls, matrix: Sequence[Sequence[Fraction]]) -> "LinearSolver":
        m, n = len(matrix), len(matrix[0])
        reduced, pivots = _to_matrix(matrix).row_join(sympy.eye(m)).rref()
        pivots = tuple(p for p in pivots if p < n)
        rows = [tuple(_to_fraction(v) for v in reduced.row(i)[n:]) for i in range(m)]
        return cls(n, pivots, tuple(rows[:len(pivots)]), tuple(rows[len(pivots):]))

    @property
    def is_unique(self) -> bool:
        return len(self.pivots) == self.columns

    def solve(self, rhs: Sequence[Fraction]) -> Optional[Vector]:
        if any(_dot(row, rhs) != 0 for row in self.checks):
            return None
        x = [Fraction(0)] * self.columns
        for p, row in zip(self.pivots, self.solve_rows):
            x[p] = _dot(row, rhs)
        return tuple(x)


def solve_linear_system(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction],
                        unique: bool = False) -> Optional[Vector]:
    """
    Resuelve A x = b en racionales

    Las variables libres se fijan en 0. Devuelve None si el sistema es
    inconsistente, o si unique=True y la solución no es única.
    """
    solver = LinearSolver.of(matrix)
    if unique and not solver.is_unique:
        return None
    return solver.solve([Fraction(b) for b in rhs])


# =============================================================================
# Hiperplanos y celdas
# =============================================================================

@dataclass(frozen=True)
class Hyperplane:
    """
    Hiperplano a·μ = b restringido a Δ

    Sobre Δ (Σμ = 1) equivale a h·μ = 0 con h = a - b·1. Es degenerado si
    h = 0 (contiene todo Δ) o si todas las componentes de h tienen el mismo
    signo estricto (no toca Δ).

    Si h ≥ 0 (o h ≤ 0) con algún cero, el hiperplano solo toca Δ en la cara
    {μ_s = 0 : h_s ≠ 0}. Se clasifica "proper" y el arreglo lo identifica con
    esa cara al deduplicar restricciones geométricas.
    """

    normal: Vector
    offset: Fraction
    label: str
    satisfiable: bool = True

    @property
    def homogeneous(self) -> Vector:
        if not self.satisfiable:
            return tuple(Fraction(1) for _ in self.normal)
        return tuple(Fraction(a) - Fraction(self.offset) for a in self.normal)

    @property
    def status(self) -> str:
        if not self.satisfiable:
            return "unsatisfiable"
        h = self.homogeneous
        if all(v == 0 for v in h):
            return "full"
        if all(v > 0 for v in h) or all(v < 0 for v in h):
            return "empty"
        return "proper"

    @property
    def is_degenerate(self) -> bool:
        return self.status != "proper"

    def side(self, belief: Sequence[Fraction]) -> int:
        return _sign(_dot(self.homogeneous, belief))


@dataclass(frozen=True)
class Cell:
    """k-celda del arreglo: vector de signos, vértices y punto representativo interior"""

    dimension: int
    signs: Tuple[int, ...]
    facet_signs: Tuple[int, ...]
    vertices: Tuple[Belief, ...]
    representative: Belief

    @property
    def full_signs(self) -> Tuple[int, ...]:
        return self.signs + self.facet_signs


def buck_bound(n: int, dim: int, k: int) -> int:
    """Cota de Buck para el número de k-celdas de n hiperplanos en R^dim"""
    if k > dim:
        return 0
    return math.comb(n, dim - k) * sum(math.comb(n - dim + k, i) for i in range(k + 1))


class Arrangement:
    """
    Arreglo de hiperplanos sobre Δ con enumeración exacta de celdas

    Las facetas μ_s ≥ 0 se añaden como restricciones adicionales; los
    vectores de signos de las celdas se reportan sobre los hiperplanos dados.
    """

    def __init__(self, hyperplanes: Sequence[Hyperplane], d: Optional[int] = None):
        self.hyperplanes = list(hyperplanes)
        if d is None:
            if not self.hyperplanes:
                raise ValueError("se necesita d cuando no hay hiperplanos")
            d = len(self.hyperplanes[0].normal)
        self.d = d
        facets = [tuple(Fraction(int(t == s)) for t in range(d)) for s in range(d)]
        self.constraints: List[Vector] = [h.homogeneous for h in self.hyperplanes] + facets
        self._levels: Dict[int, List[Cell]] = {}

        # Restricciones geométricamente distintas (para resolver vértices)
        seen = set()
        self.geometric: List[Vector] = []
        for h, c in zip(self.hyperplanes + [None] * d, self.constraints):
            if h is not None and h.is_degenerate:
                continue
            key = self._normalize(c)
            if key not in seen:
                seen.add(key)
                self.geometric.append(c)

    @staticmethod
    def _normalize(c: Vector) -> Vector:
        lead = next(v for v in c if v != 0)
        return tuple(v / abs(lead) for v in c) if lead > 0 else tuple(-v / abs(lead) for v in c)

    # -------------------------------------------------------------------------

    def sign_vector(self, point: Sequence[Fraction]) -> Tuple[int, ...]:
        return tuple(_sign(_dot(c, point)) for c in self.constraints)

    def buck_bound(self, k: int) -> int:
        n = len(self.geometric)
        return buck_bound(max(n, self.d), self.d - 1, k)

    def in_closure(self, cell: Cell, point: Sequence[Fraction]) -> bool:
        """Pertenencia de un punto a la clausura de una celda"""
        for sigma, c in zip(cell.full_signs, self.constraints):
            value = _sign(_dot(c, point))
            if sigma == 0 and value != 0:
                return False
            if sigma != 0 and value == -sigma:
                return False
        return True

    def directions(self, cell: Cell) -> List[Vector]:
        """Base de las direcciones de la envolvente afín de la celda"""
        rows = [tuple(Fraction(1) for _ in range(self.d))]
        rows += [c for sigma, c in zip(cell.full_signs, self.constraints) if sigma == 0]
        return null_space(rows, self.d)

    def locate(self, point: Sequence[Fraction]) -> Cell:
        """Celda abierta que contiene al punto"""
        signs = self.sign_vector(point)
        dimension = len(self.directions(self._make_cell(0, signs, point, ())))
        for cell in self.cells(dimension):
            if cell.full_signs == signs:
                return cell
        raise LookupError("punto fuera de Δ")

    def _make_cell(self, dimension: int, signs: Tuple[int, ...], point: Sequence[Fraction],
                   vertices: Tuple[Belief, ...]) -> Cell:
        n = len(self.hyperplanes)
        return Cell(dimension, signs[:n], signs[n:], vertices, Belief(tuple(point)))

    # -------------------------------------------------------------------------

    def cells(self, k: int) -> List[Cell]:
        """Todas las k-celdas del arreglo dentro de Δ"""
        if k < 0 or k > self.d - 1:
            return []
        if self.d > MAX_EXACT_DIMENSION:
            raise UnsupportedDimensionError(
                f"enumeración exacta de celdas disponible hasta d={MAX_EXACT_DIMENSION}, recibido d={self.d}")
        if k not in self._levels:
            if self.d == 1:
                self._levels[0] = [self._make_cell(0, self.sign_vector((Fraction(1),)), (Fraction(1),),
                                                   (Belief((Fraction(1),)),))]
            elif self.d == 2:
                self._build_segment()
            else:
                for level in range(k + 1):
                    if level not in self._levels:
                        self._levels[level] = self._build_level(level)
        return self._levels[k]

    def _segment_layout(self, points: List[Fraction]) -> List[Tuple[Optional[int], int]]:
        """
        Por restricción: (posición de su raíz en `points`, signo a la derecha de la raíz),
        o (None, signo constante) si no cambia de signo en Δ
        """
        position = {x: p for p, x in enumerate(points)}
        layout = []
        for h, (c0, c1) in zip(self.hyperplanes + [None] * 2, self.constraints):
            if (h is None or not h.is_degenerate) and c0 != c1:
                layout.append((position[c0 / (c0 - c1)], _sign(c1 - c0)))
            else:
                layout.append((None, _sign(c0)))
        return layout

    def _build_segment(self):
        """
        d = 2: Δ es un segmento y los hiperplanos son puntos ordenables

        Los signos se leen de la posición de cada raíz en la lista ordenada,
        sin evaluar productos escalares en cada punto.
        """
        points = breakpoints_1d(self.hyperplanes)
        layout = self._segment_layout(points)

        def vertex_sign(root: Optional[int], right: int, p: int) -> int:
            if root is None:
                return right
            if root == p:
                return 0
            return right if p > root else -right

        def segment_sign(root: Optional[int], right: int, p: int) -> int:
            if root is None:
                return right
            return right if root <= p else -right

        vertices = []
        for p, x in enumerate(points):
            signs = tuple(vertex_sign(root, right, p) for root, right in layout)
            mu = (1 - x, x)
            vertices.append(self._make_cell(0, signs, mu, (Belief(mu),)))
        segments = []
        for p, (a, b) in enumerate(zip(points, points[1:])):
            signs = tuple(segment_sign(root, right, p) for root, right in layout)
            mid = (a + b) / 2
            segments.append(self._make_cell(1, signs, (1 - mid, mid), (Belief.from_red(a), Belief.from_red(b))))
        self._levels[0] = vertices
        self._levels[1] = segments

    def _build_level(self, k: int) -> List[Cell]:
        if k == 0:
            return self._build_vertices()
        found: Dict[Tuple[int, ...], Tuple[Vector, Tuple[int, ...]]] = {}
        ones = tuple(Fraction(1) for _ in range(self.d))
        for lower in self._levels[k - 1]:
            p = lower.representative.coords
            full = lower.full_signs
            zero = [j for j, sigma in enumerate(full) if sigma == 0]
            flats_seen = set()
            for subset in itertools.combinations(zero, self.d - k - 1):
                basis = null_space([ones] + [self.constraints[j] for j in subset], self.d)
                if len(basis) != k:
                    continue
                flat_zero = frozenset(j for j in zero if all(_dot(self.constraints[j], v) == 0 for v in basis))
                if flat_zero in flats_seen:
                    continue
                flats_seen.add(flat_zero)
                w = next((v for v in basis if any(_dot(self.constraints[j], v) != 0 for j in zero)), None)
                if w is None:
                    continue
                for direction in (w, tuple(-v for v in w)):
                    q = self._perturb(p, full, direction)
                    signs = self.sign_vector(q)
                    if any(sigma < 0 for sigma in signs[len(self.hyperplanes):]):
                        continue
                    if signs not in found:
                        found[signs] = (q, signs)
        return self._finalize(k, found)

    def _perturb(self, p: Vector, full: Tuple[int, ...], direction: Vector) -> Vector:
        """p + ε·direction con ε exacto que conserva todos los signos no nulos de p"""
        epsilon = Fraction(1)
        for sigma, c in zip(full, self.constraints):
            if sigma == 0:
                continue
            slope = _dot(c, direction)
            if slope != 0:
                epsilon = min(epsilon, abs(_dot(c, p)) / (2 * abs(slope)))
        return tuple(a + epsilon * b for a, b in zip(p, direction))

    def _build_vertices(self) -> List[Cell]:
        ones = tuple(Fraction(1) for _ in range(self.d))
        rhs = (Fraction(1),) + tuple(Fraction(0) for _ in range(self.d - 1))
        found: Dict[Tuple[int, ...], Tuple[Vector, Tuple[int, ...]]] = {}
        for subset in itertools.combinations(self.geometric, self.d - 1):
            solution = solve_linear_system([ones] + list(subset), rhs, unique=True)
            if solution is None or any(v < 0 for v in solution):
                continue
            signs = self.sign_vector(solution)
            if signs not in found:
                found[signs] = (solution, signs)
        return self._finalize(0, found)

    def _finalize(self, k: int, found: Dict[Tuple[int, ...], Tuple[Vector, Tuple[int, ...]]]) -> List[Cell]:
        cells = []
        for point, signs in found.values():
            if k == 0:
                vertices = (Belief(point),)
            else:
                outline = self._make_cell(k, signs, point, ())
                vertices = tuple(v.representative for v in self._levels[0]
                                 if self.in_closure(outline, v.representative.coords))
            cells.append(self._make_cell(k, signs, point, vertices))
        cells.sort(key=lambda c: c.representative.coords)
        return cells


def breakpoints_1d(hyperplanes: Sequence[Hyperplane]) -> List[Fraction]:
    """
    Puntos de corte en [0, 1] (probabilidad del segundo escenario) de
    hiperplanos sobre el segmento Δ de dos escenarios, incluidos 0 y 1
    """
    points = {Fraction(0), Fraction(1)}
    for h in hyperplanes:
        if h.is_degenerate:
            continue
        c0, c1 = h.homogeneous
        if c0 != c1:
            x = c0 / (c0 - c1)
            if 0 <= x <= 1:
                points.add(x)
    return sorted(points)


def enumerate_cells(hyperplanes: Sequence[Hyperplane], k: int, d: Optional[int] = None) -> List[Cell]:
    """Todas las k-celdas del arreglo restringido a Δ"""
    return Arrangement(hyperplanes, d).cells(k)


# =============================================================================
# Hiperplanos del problema
# =============================================================================

def build_H(inst: Instance) -> List[Hyperplane]:
    """Hiperplanos μᵀτ_i = μᵀτ_j para cada par de enlaces"""
    planes = []
    for i, j in itertools.combinations(range(inst.m), 2):
        normal = tuple(a - b for a, b in zip(inst.travel_times[i], inst.travel_times[j]))
        planes.append(Hyperplane(normal, Fraction(0), f"H[{i + 1},{j + 1}]"))
    return planes


def _anchor_point(anchor: Union[Cell, Belief]) -> Belief:
    return anchor.representative if isinstance(anchor, Cell) else anchor


def breakpoint_forms(inst: Instance, anchor: Union[Cell, Belief]) -> List[Union[Vector, type(INFINITY)]]:
    """
    θ*_i(μ) como forma lineal en μ, válida en la celda de H que contiene al ancla

    Con π fijo, θ*_{π(q)} = Σ_{j<q} ν̄(j)/(u−ν̄(j))·(τ_{π(j+1)} − τ_{π(j)})ᵀμ.
    """
    profile = solve_for_belief(inst, _anchor_point(anchor))
    forms: List[Union[Vector, type(INFINITY)]] = [INFINITY] * inst.m
    current = tuple(Fraction(0) for _ in range(inst.d))
    forms[profile.order[0]] = current
    for q in range(1, inst.m):
        if profile.breakpoints[q] is INFINITY:
            break
        nbar = profile.cumulative[q - 1]
        factor = nbar / (inst.inflow - nbar)
        upper, lower = inst.travel_times[profile.order[q]], inst.travel_times[profile.order[q - 1]]
        current = tuple(c + factor * (a - b) for c, a, b in zip(current, upper, lower))
        forms[profile.order[q]] = current
    return forms


def first_exit_forms(inst: Instance, anchor: Union[Cell, Belief]) -> List[List[Union[Vector, type(INFINITY)]]]:
    """ω_{i,s}(μ) = θ*_i(μ) + τ_{i,s} como formas lineales homogéneas"""
    forms = breakpoint_forms(inst, anchor)
    result = []
    for i in range(inst.m):
        row = []
        for s in range(inst.d):
            if forms[i] is INFINITY:
                row.append(INFINITY)
            else:
                row.append(tuple(v + inst.travel_times[i][s] for v in forms[i]))
        result.append(row)
    return result


def build_Hstar(inst: Instance, anchor: Union[Cell, Belief]) -> List[Hyperplane]:
    """
    Hiperplanos ω_{i,s} = ω_{j,s} y ω_{i,s} = T válidos en una (d−1)-celda de H

    Los pares con ω infinito se marcan como insatisfacibles.
    """
    omega = first_exit_forms(inst, anchor)
    zero = Fraction(0)
    planes = []
    for s in range(inst.d):
        for i, j in itertools.combinations(range(inst.m), 2):
            label = f"H*[{i + 1},{j + 1},{s + 1}]"
            if omega[i][s] is INFINITY or omega[j][s] is INFINITY:
                planes.append(Hyperplane(tuple(zero for _ in range(inst.d)), zero, label, satisfiable=False))
            else:
                normal = tuple(a - b for a, b in zip(omega[i][s], omega[j][s]))
                planes.append(Hyperplane(normal, zero, label))
        for i in range(inst.m):
            label = f"H*[{i + 1},{s + 1},T]"
            if omega[i][s] is INFINITY:
                planes.append(Hyperplane(tuple(zero for _ in range(inst.d)), zero, label, satisfiable=False))
            else:
                planes.append(Hyperplane(omega[i][s], inst.horizon, label))
    return planes


def build_horizon_planes(inst: Instance, anchor: Union[Cell, Belief]) -> List[Hyperplane]:
    """Hiperplanos θ*_i(μ) = T: cambios del soporte del equilibrio en el instante T"""
    planes = []
    for i, form in enumerate(breakpoint_forms(inst, anchor)):
        if form is INFINITY:
            continue
        planes.append(Hyperplane(form, inst.horizon, f"S[{i + 1},T]"))
    return planes
