"""Reducción a una variable, envolvente cóncava y rejilla de fuerza bruta"""

from decimal import Decimal, localcontext
from fractions import Fraction

import pytest

from model import Belief, Instance, ResolutionError, UnsupportedDimensionError
from objectives import expected_makespan, expected_throughput
from oracle import brute_force_opt, concave_envelope_1d, extract_piecewise_1d, grid_points

F = Fraction


def _close(exact: Fraction, approx: Decimal) -> bool:
    return abs(Decimal(exact.numerator) / Decimal(exact.denominator) - approx) < Decimal("1e-20")


def test_pieces_of_two_links(a1):
    pw = extract_piecewise_1d(a1)
    assert pw.breakpoints == (0, F(1, 5), F(3, 5), 1)
    assert pw.pieces == ((F(5, 3), -1, F(4, 3)), (0, 1, 1), (F(10, 3), -6, 4))
    assert pw.discontinuities == []
    assert pw.evaluate(F(3, 5)) == F(8, 5)


def test_pieces_with_irrational_optimum(a3):
    pw = extract_piecewise_1d(a3)
    assert pw.interior_breakpoints == [F(2, 15), F(1, 4), F(2, 7), F(1, 3), F(39, 62)]
    assert len(pw.pieces) == 6
    assert pw.pieces[0] == (F(-9, 2), F(1, 2), 4)
    assert pw.pieces[1] == (F(1, 2), F(-1, 6), 4)
    assert pw.pieces[pw.piece_index(F(1, 2))] == (F(18, 5), F(-1111, 120), F(253, 40))
    assert pw.pieces[-1] == (F(37, 12), F(-101, 12), 6)
    assert pw.evaluate(F(1, 4)) == F(383, 96)


def test_pieces_agree_with_direct_evaluation(a3, rng):
    pw = extract_piecewise_1d(a3)
    for _ in range(25):
        x = F(int(rng.integers(0, 1001)), 1000)
        assert pw.evaluate(x) == expected_throughput(a3, Belief.from_red(x))


def test_makespan_jumps(a2):
    pw = extract_piecewise_1d(a2, "makespan")
    assert pw.interior_breakpoints == [F(1, 10), F(1, 5), F(2, 5), F(1, 2), F(3, 4), F(7, 8)]
    assert pw.discontinuities == [F(1, 10), F(2, 5), F(1, 2), F(7, 8)]
    assert pw.pieces[0] == (0, 5, 1)
    assert pw.pieces[1] == (-5, 6, F(7, 5))
    assert pw.pieces[pw.piece_index(F(9, 20))] == (0, 0, F(5, 2))
    for x in (F(1, 10), F(2, 5), F(7, 8)):
        assert pw.evaluate(x) == expected_makespan(a2, Belief.from_red(x))


def test_reduction_needs_two_scenarios(single_link):
    with pytest.raises(UnsupportedDimensionError):
        extract_piecewise_1d(single_link)


def test_envelope_of_two_links(a1):
    pw = extract_piecewise_1d(a1)
    solution = concave_envelope_1d(pw, F(7, 16))
    assert solution.support == (0, F(3, 5))
    assert _close(F(55, 36), solution.value)
    assert solution.value > Decimal(23) / Decimal(16)
    assert solution.value > Decimal(4) / Decimal(3)
    assert solution.certify(pw)


def test_envelope_with_irrational_support(a3):
    pw = extract_piecewise_1d(a3)
    solution = concave_envelope_1d(pw, F(3, 20))
    with localcontext() as ctx:
        ctx.prec = 60
        expected_left = (Decimal(9) - Decimal(42).sqrt()) / Decimal(36)
        assert abs(Decimal(solution.support[0]) - expected_left) < Decimal("1e-20")
    assert solution.support[1] == F(1, 4)
    assert abs(float(solution.value) - 4.002565) < 1e-5
    assert solution.certify(pw)


def test_envelope_of_a_concave_function(affine_link):
    pw = extract_piecewise_1d(affine_link)
    assert pw.pieces == ((0, -1, 2),)
    solution = concave_envelope_1d(pw, F(1, 2))
    assert solution.support == (F(1, 2), F(1, 2))
    assert _close(F(3, 2), solution.value)
    assert solution.certify(pw)


def test_envelope_rejects_outside_prior(a1):
    with pytest.raises(ValueError):
        concave_envelope_1d(extract_piecewise_1d(a1), F(3, 2))


def test_grid_points():
    points = grid_points(3, 4)
    assert len(points) == 15
    assert all(sum(p) == 1 for p in points)


def test_brute_force_matches_envelope(a1, a3):
    assert brute_force_opt(a1, 5) == F(55, 36)
    assert abs(float(brute_force_opt(a3, 400)) - 4.002565) < 1e-3


def test_brute_force_grows_with_resolution(a3):
    coarse, fine, finer = (brute_force_opt(a3, n) for n in (5, 10, 20))
    assert coarse <= fine <= finer


def test_brute_force_three_scenarios():
    inst = Instance((F(1, 2), F(1, 3)), ((1, 4, 2), (3, 1, 2)), 1, 6, (F(1, 3), F(1, 3), F(1, 3)))
    value = brute_force_opt(inst, 6)
    assert value >= expected_throughput(inst, inst.prior_belief)
    assert value <= inst.inflow * inst.horizon


def test_brute_force_limits(single_link):
    assert brute_force_opt(single_link, 10) == 2
    four = Instance((1,), ((1, 2, 3, 4),), 1, 5, (F(1, 4),) * 4)
    with pytest.raises(UnsupportedDimensionError):
        brute_force_opt(four, 4)
    with pytest.raises(ResolutionError):
        brute_force_opt(single_link, 2001)
