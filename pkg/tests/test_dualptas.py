"""Oráculo de separación del dual y PTAS aditivo por el método del elipsoide"""

import math
from fractions import Fraction

import pytest

from dualptas import (Feasible, Violation, capacity_gap, dual_radius, dual_radius_exact, iteration_budget, separate,
                      separation_oracle, solve_additive_ptas)
from model import Belief, random_instance
from objectives import throughput_values

A1_OPT = 55 / 36
# Recta soporte de la envolvente de A.1: 4/3 + 4μ/9 sobre μ_rojo
A1_DUAL = (Fraction(4, 3), Fraction(16, 9))


def _gap(inst, w, belief):
    values = throughput_values(inst, belief)
    return sum((belief[s] * (values[s] - w[s]) for s in range(inst.d)), Fraction(0))


def test_radius_of_two_links(a1):
    assert capacity_gap(a1) == Fraction(1, 3)
    assert dual_radius_exact(a1) == 90
    assert dual_radius(a1) == 90.0


def test_radius_with_irrational_optimum(a3):
    assert capacity_gap(a3) == Fraction(1, 12)
    assert dual_radius_exact(a3) == 2 * 4 * 10 * Fraction(13, 12) ** 2 * 12
    assert dual_radius(a3) >= float(dual_radius_exact(a3))


def test_supporting_line_is_feasible(a1):
    verdict = separate(a1, A1_DUAL)
    assert isinstance(verdict, Feasible)
    assert verdict.max_value == 0


def test_lowered_line_is_violated(a1):
    shift = Fraction(1, 1000)
    verdict = separate(a1, [v - shift for v in A1_DUAL])
    assert isinstance(verdict, Violation)
    assert verdict.gap == shift
    assert verdict.belief[1] in (0, Fraction(3, 5))


def test_origin_is_violated(a3):
    verdict = separate(a3, [0.0, 0.0])
    assert isinstance(verdict, Violation)
    assert verdict.gap > 0


def test_large_weights_are_feasible(a3):
    top = float(a3.inflow * a3.horizon) + 1
    verdict = separate(a3, [top, top])
    assert isinstance(verdict, Feasible)
    assert verdict.max_value <= -1


def test_oracle_is_sound_on_random_instances(rng):
    grid = [Belief.from_red(Fraction(j, 200)) for j in range(201)]
    for _ in range(4):
        inst = random_instance(rng, 3, 2)
        oracle = separation_oracle(inst)
        for _ in range(4):
            w = [Fraction(int(v), 4) for v in rng.integers(0, 4 * int(inst.inflow * inst.horizon) + 4, size=2)]
            verdict = oracle.separate(w)
            if isinstance(verdict, Violation):
                assert verdict.gap > 0
                assert _gap(inst, w, verdict.belief) == verdict.gap
            else:
                assert verdict.max_value <= 0
                assert all(_gap(inst, w, belief) <= 0 for belief in grid)


def test_iteration_budget_grows_with_precision():
    assert iteration_budget(90.0, 2, 0.01) > iteration_budget(90.0, 2, 0.1)


def test_additive_ptas_two_links(a1):
    eps_star = 0.1
    result = solve_additive_ptas(a1, eps_star)
    assert result.best_w is not None
    assert A1_OPT - eps_star - 1e-6 <= result.p <= A1_OPT + 1e-6
    assert result.lower_bound <= A1_OPT + 1e-6
    assert isinstance(separate(a1, result.best_w.tolist()), Feasible)


def test_additive_ptas_irrational_optimum(a3):
    eps_star = 0.1
    opt = 4.002565
    result = solve_additive_ptas(a3, eps_star)
    assert opt - eps_star - 1e-5 <= result.p <= opt + 1e-5


@pytest.mark.parametrize("fixture, opt", [("a1", A1_OPT), ("a3", 4.002565)])
def test_additive_ptas_finer_precision(request, fixture, opt):
    inst = request.getfixturevalue(fixture)
    eps_star = 0.05
    result = solve_additive_ptas(inst, eps_star)
    assert result.converged
    assert opt - eps_star - 1e-5 <= result.p <= opt + 1e-5
    assert result.lower_bound <= opt + 1e-5


def test_additive_ptas_single_scenario(single_link):
    result = solve_additive_ptas(single_link, 0.05)
    assert result.converged
    assert 2 - 0.05 <= result.p <= 2


def test_trace_rows(a1):
    rows = []
    result = solve_additive_ptas(a1, 0.5, trace=rows.append)
    assert len(rows) == result.iterations
    assert {row["corte"] for row in rows} <= {"caja", "factibilidad", "objetivo"}
    assert all(math.isfinite(row["log_volumen"]) for row in rows)


def test_rejects_non_positive_precision(a1):
    with pytest.raises(ValueError):
        solve_additive_ptas(a1, 0.0)
