"""Símplex revisado exacto de dos fases"""

from fractions import Fraction

import pytest

from rational_lp import LinearProgramError, maximize


def test_simple_optimum():
    result = maximize([3, 2, 0, 0], [[1, 1, 1, 0], [1, 3, 0, 1]], [4, 6])
    assert result.objective == 12
    assert result.x == (4, 0, 0, 2)


def test_fractional_vertex():
    result = maximize([1, 1, 0, 0], [[2, 1, 1, 0], [1, 2, 0, 1]], [Fraction(3), Fraction(3)])
    assert result.objective == 2
    assert result.x[:2] == (1, 1)


def test_redundant_rows_are_dropped():
    result = maximize([1, 2, 3], [[1, 1, 1], [1, 1, 1], [2, 2, 2]], [1, 1, 2])
    assert result.objective == 3
    assert result.x == (0, 0, 1)


def test_infeasible_program():
    with pytest.raises(LinearProgramError, match="infactible"):
        maximize([1, 1], [[1, 1]], [-1])


def test_unbounded_program():
    with pytest.raises(LinearProgramError, match="no acotado"):
        maximize([1, 0], [[1, -1]], [1])


def test_negative_right_hand_side():
    result = maximize([-1, 0], [[-1, 1]], [-2])
    assert result.objective == -2
    assert result.x == (2, 0)


def test_convex_decomposition_of_a_prior():
    """Columnas = creencias; filas = coordenadas y Σα = 1"""
    points = [(Fraction(1), Fraction(0)), (Fraction(2, 5), Fraction(3, 5)), (Fraction(0), Fraction(1))]
    values = [Fraction(4, 3), Fraction(8, 5), Fraction(4, 3)]
    A = [[p[s] for p in points] for s in range(2)] + [[1, 1, 1]]
    result = maximize(values, A, [Fraction(9, 16), Fraction(7, 16), 1])
    assert result.objective == Fraction(55, 36)
    assert sum(result.x) == 1


def test_wide_decomposition_uses_the_endpoints():
    """Valores convexos (x − 1/2)² sobre 201 creencias: el óptimo separa en los extremos"""
    reds = [Fraction(j, 200) for j in range(201)]
    values = [(x - Fraction(1, 2)) ** 2 for x in reds]
    A = [[1 - x for x in reds], reds, [1] * len(reds)]
    result = maximize(values, A, [Fraction(2, 3), Fraction(1, 3), 1])
    assert result.objective == Fraction(1, 4)
    assert result.x[0] == Fraction(2, 3)
    assert result.x[-1] == Fraction(1, 3)
