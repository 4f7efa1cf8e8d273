#!/usr/bin/env python3
"""
Módulo RationalLP - Símplex revisado de dos fases en aritmética racional exacta
Maximiza cᵀx sujeto a A x = b, x ≥ 0; la regla de Bland evita ciclos
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from model import SignalingError


class LinearProgramError(SignalingError):
    """Programa lineal infactible o no acotado"""


@dataclass(frozen=True)
class LinearProgramResult:
    x: Tuple[Fraction, ...]
    objective: Fraction
    basis: Tuple[int, ...]
    pivots: int


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b) if x and y), Fraction(0))


class RevisedSimplex:
    """
    Símplex revisado con la inversa de la base explícita

    Las columnas 0..n-1 son las variables originales y n..n+m-1 las
    artificiales de la fase 1. Cada pivote actualiza B⁻¹ (m×m) y los valores
    básicos. Entra la columna de mayor costo reducido hasta el primer pivote
    degenerado; desde ahí rige la regla de Bland hasta el final de la fase.
    """

    def __init__(self, A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]):
        self.m = len(A)
        self.n = len(A[0]) if A else 0
        signs = [-1 if Fraction(value) < 0 else 1 for value in b]
        self.columns: List[Tuple[Fraction, ...]] = [
            tuple(signs[i] * Fraction(A[i][j]) for i in range(self.m)) for j in range(self.n)]
        self.columns += [tuple(Fraction(int(i == k)) for i in range(self.m)) for k in range(self.m)]
        self.values = [signs[i] * Fraction(b[i]) for i in range(self.m)]
        self.inverse = [[Fraction(int(i == k)) for k in range(self.m)] for i in range(self.m)]
        self.basis = [self.n + i for i in range(self.m)]
        self.banned = set()
        self.pivots = 0
        self.bland = False

    @property
    def width(self) -> int:
        return self.n + self.m

    def transformed_column(self, j: int) -> List[Fraction]:
        """B⁻¹·A_j"""
        column = self.columns[j]
        return [_dot(row, column) for row in self.inverse]

    def duals(self, cost: Sequence[Fraction]) -> List[Fraction]:
        """y = c_Bᵀ·B⁻¹"""
        y = [Fraction(0)] * self.m
        for i, basic in enumerate(self.basis):
            cb = cost[basic]
            if cb:
                y = [a + cb * v for a, v in zip(y, self.inverse[i])]
        return y

    def pivot(self, i: int, j: int, direction: Sequence[Fraction]):
        lead = direction[i]
        self.inverse[i] = [v / lead for v in self.inverse[i]]
        self.values[i] /= lead
        for k in range(self.m):
            factor = direction[k]
            if k != i and factor:
                self.inverse[k] = [a - factor * b for a, b in zip(self.inverse[k], self.inverse[i])]
                self.values[k] -= factor * self.values[i]
        self.basis[i] = j
        self.pivots += 1

    def entering_column(self, cost: Sequence[Fraction]) -> Optional[int]:
        """Mayor costo reducido positivo, o el menor índice con costo positivo en modo Bland"""
        y = self.duals(cost)
        in_basis = set(self.basis)
        best, best_gain = None, Fraction(0)
        for j in range(self.width):
            if j in self.banned or j in in_basis:
                continue
            gain = cost[j] - _dot(y, self.columns[j])
            if gain > best_gain:
                if self.bland:
                    return j
                best, best_gain = j, gain
        return best

    def bland_primal_step(self, cost: Sequence[Fraction]) -> str:
        entering = self.entering_column(cost)
        if entering is None:
            return "optimal"
        direction = self.transformed_column(entering)
        candidates = [(self.values[i] / direction[i], self.basis[i], i)
                      for i in range(self.m) if direction[i] > 0]
        if not candidates:
            return "unbounded"
        ratio, _, leaving = min(candidates)
        if ratio == 0:
            self.bland = True
        self.pivot(leaving, entering, direction)
        return "go_on"

    def bland_primal(self, cost: Sequence[Fraction]) -> str:
        self.bland = False
        while True:
            status = self.bland_primal_step(cost)
            if status in ("optimal", "unbounded"):
                return status

    def first_phase(self):
        cost = [Fraction(0)] * self.n + [Fraction(-1)] * self.m
        self.bland_primal(cost)
        infeasibility = sum((self.values[i] for i, basic in enumerate(self.basis) if basic >= self.n), Fraction(0))
        if infeasibility > 0:
            raise LinearProgramError("programa lineal infactible")
        self.pivot_out_artificials()
        self.banned = set(range(self.n, self.width))

    def pivot_out_artificials(self):
        """
        Saca de la base las artificiales a nivel cero

        Si ninguna columna original tiene entrada no nula en la fila, la
        restricción es redundante: la artificial queda básica en cero y ningún
        pivote posterior la mueve.
        """
        for i in range(self.m):
            if self.basis[i] < self.n:
                continue
            in_basis = set(self.basis)
            for j in range(self.n):
                if j in in_basis:
                    continue
                entry = _dot(self.inverse[i], self.columns[j])
                if entry != 0:
                    self.pivot(i, j, self.transformed_column(j))
                    break

    def solution(self) -> Tuple[Fraction, ...]:
        x = [Fraction(0)] * self.n
        for i, basic in enumerate(self.basis):
            if basic < self.n:
                x[basic] = self.values[i]
        return tuple(x)


def maximize(c: Sequence[Fraction], A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> LinearProgramResult:
    """
    Resuelve max cᵀx, A x = b, x ≥ 0 de forma exacta

    Raises:
        LinearProgramError: Si el programa es infactible o no acotado
    """
    simplex = RevisedSimplex(A, b)
    simplex.first_phase()
    cost = [Fraction(v) for v in c] + [Fraction(0)] * simplex.m
    if simplex.bland_primal(cost) == "unbounded":
        raise LinearProgramError("programa lineal no acotado")
    x = simplex.solution()
    objective = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    basis = tuple(j for j in simplex.basis if j < simplex.n)
    return LinearProgramResult(x, objective, basis, simplex.pivots)
