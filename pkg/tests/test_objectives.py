"""Throughput y makespan del equilibrio canónico"""

from fractions import Fraction

import pytest

from arrangement import Arrangement, breakpoints_1d, build_H, build_Hstar
from model import INFINITY, Belief, Instance, SignalingScheme, random_instance
from objectives import (_scenario_throughput, expected_makespan, expected_throughput, full_information_makespan,
                        integrate_outflow, makespan_breakdown, makespan_scenario, makespan_with_perceived, outflow,
                        scheme_makespan, scheme_throughput, throughput_breakdown, throughput_scenario,
                        throughput_values)


@pytest.mark.parametrize("x, expected", [
    (Fraction(0), Fraction(4, 3)),
    (Fraction(1, 5), Fraction(6, 5)),
    (Fraction(3, 5), Fraction(8, 5)),
    (Fraction(1), Fraction(4, 3)),
])
def test_throughput_of_two_links(a1, x, expected):
    assert expected_throughput(a1, Belief.from_red(x)) == expected


def test_throughput_per_scenario(a1):
    assert throughput_values(a1, Belief.unit(2, 0)) == (Fraction(4, 3), Fraction(1, 3))
    breakdown = throughput_breakdown(a1, Belief.unit(2, 0))
    blue = breakdown.scenarios[0]
    assert blue.exit_order == (0, 1)
    assert blue.contributing == 1
    assert blue.prefix_capacity == (Fraction(1, 3), 1)


def test_throughput_with_irrational_optimum(a3):
    assert expected_throughput(a3, Belief.unit(2, 0)) == 4
    assert expected_throughput(a3, Belief.unit(2, 1)) == Fraction(2, 3)
    assert expected_throughput(a3, Belief.from_red(Fraction(1, 4))) == Fraction(383, 96)


def test_throughput_of_an_uncongested_link(affine_link):
    for x in (Fraction(0), Fraction(1, 3), Fraction(1)):
        assert expected_throughput(affine_link, Belief.from_red(x)) == 2 - x


def test_throughput_vanishes_before_first_exit(a1):
    early = a1.__class__(a1.capacities, a1.travel_times, a1.inflow, Fraction(1, 2), a1.prior)
    assert throughput_values(early, Belief.from_red(Fraction(1, 3))) == (0, 0)


def test_outflow_rates(a1):
    blue = Belief.unit(2, 0)
    assert outflow(a1, blue, 0, Fraction(1, 2)) == 0
    assert outflow(a1, blue, 0, Fraction(2)) == Fraction(1, 3)
    assert outflow(a1, blue, 0, Fraction(100)) == 1


def test_outflow_integrates_to_throughput(a1, a3, rng):
    for inst in (a1, a3):
        for _ in range(8):
            belief = Belief.from_red(Fraction(int(rng.integers(0, 41)), 40))
            for s in range(inst.d):
                assert integrate_outflow(inst, belief, s) == throughput_scenario(inst, belief, s)


def test_makespan_full_information(a2):
    assert makespan_scenario(a2, Belief.unit(2, 0), 0) == 1
    assert makespan_scenario(a2, Belief.unit(2, 1), 1) == 1
    assert full_information_makespan(a2) == 1


def test_makespan_flat_region(a2):
    breakdown = makespan_breakdown(a2, Belief.from_red(Fraction(9, 20)))
    assert breakdown.support == (1,)
    assert breakdown.scenarios == (Fraction(5, 2), Fraction(5, 2))
    assert breakdown.expected == Fraction(5, 2)


def test_makespan_first_piece(a2):
    for x in (Fraction(1, 50), Fraction(1, 20)):
        assert expected_makespan(a2, Belief.from_red(x)) == 1 + 5 * x


def test_makespan_with_true_travel_times(a2):
    for s in range(a2.d):
        assert makespan_with_perceived(a2, a2.column(s), s) == makespan_scenario(a2, Belief.unit(2, s), s)


def test_makespan_ignores_common_shift(a3):
    perceived = [Fraction(2), Fraction(3), Fraction(4)]
    shifted = [tau + Fraction(7, 3) for tau in perceived]
    assert makespan_with_perceived(a3, perceived) == makespan_with_perceived(a3, shifted)


def test_full_information_beats_random_schemes(a2, rng):
    full = full_information_makespan(a2)
    for _ in range(40):
        scheme = SignalingScheme.random(a2.prior_belief, rng, 3)
        assert scheme_makespan(a2, scheme) >= full


def test_scheme_values_are_weighted_sums(a1):
    full = SignalingScheme.full_information(a1)
    assert scheme_throughput(a1, full) == Fraction(4, 3)
    none = SignalingScheme.no_information(a1)
    assert scheme_throughput(a1, none) == expected_throughput(a1, a1.prior_belief)


def _two_scenario_instances(a1, a3, rng):
    return [a1, a3] + [random_instance(rng, 3, 2) for _ in range(4)]


def _exit_tie_intervals(inst):
    """Intervalos abiertos de μ_rojo sin cruces de H ni del H* local de cada celda"""
    cuts = breakpoints_1d(build_H(inst))
    for lo, hi in zip(cuts, cuts[1:]):
        local = breakpoints_1d(build_Hstar(inst, Belief.from_red((lo + hi) / 2)))
        inner = sorted({lo, hi} | {x for x in local if lo < x < hi})
        yield from zip(inner, inner[1:])


def test_scenario_throughput_is_affine_between_exit_ties(a1, a3, rng):
    for inst in _two_scenario_instances(a1, a3, rng):
        for lo, hi in _exit_tie_intervals(inst):
            t = sorted(Fraction(int(v), 97) for v in rng.choice(range(1, 97), size=3, replace=False))
            xs = [lo + (hi - lo) * v for v in t]
            values = [throughput_values(inst, Belief.from_red(x)) for x in xs]
            for s in range(inst.d):
                left = (values[1][s] - values[0][s]) * (xs[2] - xs[1])
                right = (values[2][s] - values[1][s]) * (xs[1] - xs[0])
                assert left == right


@pytest.mark.parametrize("scenarios", [2, 3])
def test_scenario_throughput_is_convex_on_indifference_cells(a3, rng, scenarios):
    instances = [random_instance(rng, 3, scenarios) for _ in range(4)]
    if scenarios == 2:
        instances.append(a3)
    for inst in instances:
        for cell in Arrangement(build_H(inst), d=inst.d).cells(inst.d - 1):
            inner = cell.representative.coords
            for _ in range(4):
                ends = []
                for vertex in (cell.vertices[0], cell.vertices[-1]):
                    t = Fraction(int(rng.integers(1, 100)), 100)
                    ends.append(tuple(a + t * (b - a) for a, b in zip(inner, vertex.coords)))
                middle = tuple((a + b) / 2 for a, b in zip(*ends))
                first, last, mid = (throughput_values(inst, Belief(p)) for p in (*ends, middle))
                for s in range(inst.d):
                    assert 2 * mid[s] <= first[s] + last[s]


def test_perceived_travel_times_never_beat_the_truth(rng):
    for _ in range(20):
        inst = random_instance(rng, 3, 1)
        truth = makespan_with_perceived(inst, inst.column(0))
        for _ in range(10):
            perceived = [Fraction(int(v), 2) for v in rng.integers(0, 21, size=inst.m)]
            assert makespan_with_perceived(inst, perceived) >= truth


def test_exit_order_ties_do_not_change_throughput(rng):
    for _ in range(30):
        inst = random_instance(rng, 4, 1)
        # Pocos valores distintos: empates frecuentes en ω
        omega = [[Fraction(int(v), 2)] if v < 9 else [INFINITY] for v in rng.integers(0, 10, size=inst.m)]
        value = _scenario_throughput(inst, omega, 0).value
        permutation = [int(i) for i in rng.permutation(inst.m)]
        shuffled = Instance(tuple(inst.capacities[i] for i in permutation),
                            tuple(inst.travel_times[i] for i in permutation), inst.inflow, inst.horizon, inst.prior)
        assert _scenario_throughput(shuffled, [omega[i] for i in permutation], 0).value == value
