#!/usr/bin/env python3
"""
Módulo Objectives - Throughput y makespan del equilibrio canónico
Valores por escenario y esperados en función de la creencia pública
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from equilibrium import exit_time, first_exit_times, inflow, solve_deterministic, solve_for_belief
from model import INFINITY, Belief, Instance, SignalingScheme


@dataclass(frozen=True)
class ScenarioThroughput:
    """Desglose del throughput en un escenario"""

    scenario: int
    exit_order: Tuple[int, ...]
    first_exits: Tuple[object, ...]
    prefix_capacity: Tuple[Fraction, ...]
    contributing: int
    value: Fraction


@dataclass(frozen=True)
class ThroughputBreakdown:
    scenarios: Tuple[ScenarioThroughput, ...]
    expected: Fraction


@dataclass(frozen=True)
class MakespanBreakdown:
    support: Tuple[int, ...]
    scenarios: Tuple[Fraction, ...]
    expected: Fraction


# =============================================================================
# Throughput
# =============================================================================

def _scenario_throughput(inst: Instance, omega: Sequence[Sequence[object]], s: int) -> ScenarioThroughput:
    u, horizon = inst.inflow, inst.horizon
    column = [omega[i][s] for i in range(inst.m)]
    order = tuple(sorted(range(inst.m), key=lambda i: (column[i] is INFINITY, column[i] if column[i] is not INFINITY else 0, i)))

    prefix = []
    running = Fraction(0)
    for i in order:
        running += inst.capacities[i]
        prefix.append(running)

    exited = sum(1 for i in order if column[i] is not INFINITY and column[i] <= horizon)
    saturating = next((p + 1 for p, nbar in enumerate(prefix) if nbar >= u), inst.m)
    contributing = min(exited, saturating)

    if contributing == 0:
        value = Fraction(0)
    else:
        nbar = prefix[contributing - 1]
        last_exit = column[order[contributing - 1]]
        value = (u * horizon
                 + horizon * min(nbar - u, Fraction(0))
                 + last_exit * max(nbar - u, Fraction(0))
                 - sum(inst.capacities[i] * column[i] for i in order[:contributing]))

    return ScenarioThroughput(s, order, tuple(column), tuple(prefix), contributing, value)


def throughput_breakdown(inst: Instance, belief: Belief) -> ThroughputBreakdown:
    """Throughput por escenario con orden de salida σ_s, ν̄_s y número de enlaces contribuyentes"""
    omega = first_exit_times(inst, belief)
    scenarios = tuple(_scenario_throughput(inst, omega, s) for s in range(inst.d))
    expected = sum((belief[s] * scenarios[s].value for s in range(inst.d)), Fraction(0))
    return ThroughputBreakdown(scenarios, expected)


def throughput_scenario(inst: Instance, belief: Belief, s: int) -> Fraction:
    return _scenario_throughput(inst, first_exit_times(inst, belief), s).value


def expected_throughput(inst: Instance, belief: Belief) -> Fraction:
    return throughput_breakdown(inst, belief).expected


def throughput_values(inst: Instance, belief: Belief) -> Tuple[Fraction, ...]:
    """Vector (F_s(μ))_s"""
    omega = first_exit_times(inst, belief)
    return tuple(_scenario_throughput(inst, omega, s).value for s in range(inst.d))


def _outflow_segments(inst: Instance, belief: Belief, s: int) -> List[Tuple[Fraction, object, Fraction]]:
    """Tramos (inicio, fin, tasa) del flujo de salida total en el escenario s"""
    breakdown = _scenario_throughput(inst, first_exit_times(inst, belief), s)
    column = breakdown.first_exits
    finite = [i for i in breakdown.exit_order if column[i] is not INFINITY]
    segments = []
    for p, i in enumerate(finite):
        start = column[i]
        end = column[finite[p + 1]] if p + 1 < len(finite) else INFINITY
        rate = min(breakdown.prefix_capacity[p], inst.inflow)
        segments.append((start, end, rate))
    return segments


def outflow(inst: Instance, belief: Belief, s: int, theta: Fraction) -> Fraction:
    """Flujo total de salida en θ: min{ν̄_s(i), u} en [ω_σ(i), ω_σ(i+1))"""
    theta = Fraction(theta)
    for start, end, rate in _outflow_segments(inst, belief, s):
        if start <= theta < end:
            return rate
    return Fraction(0)


def integrate_outflow(inst: Instance, belief: Belief, s: int) -> Fraction:
    """Integral exacta del flujo de salida sobre [0, T]"""
    horizon = inst.horizon
    total = Fraction(0)
    for start, end, rate in _outflow_segments(inst, belief, s):
        if start >= horizon:
            break
        stop = horizon if end is INFINITY or end > horizon else end
        total += rate * (stop - start)
    return total


# =============================================================================
# Makespan
# =============================================================================

def _makespan(profile, horizon: Fraction, realized: Sequence[Fraction]) -> Tuple[Tuple[int, ...], Fraction]:
    support = tuple(i for i in range(profile.m) if inflow(profile, i, horizon) > 0)
    return support, max(exit_time(profile, i, horizon, realized) for i in support)


def makespan_breakdown(inst: Instance, belief: Belief) -> MakespanBreakdown:
    """Makespan M_{T,s}: mayor salida realizada en T sobre el soporte del equilibrio"""
    profile = solve_for_belief(inst, belief)
    values = []
    support: Tuple[int, ...] = ()
    for s in range(inst.d):
        support, value = _makespan(profile, inst.horizon, inst.column(s))
        values.append(value)
    expected = sum((belief[s] * values[s] for s in range(inst.d)), Fraction(0))
    return MakespanBreakdown(support, tuple(values), expected)


def makespan_scenario(inst: Instance, belief: Belief, s: int) -> Fraction:
    profile = solve_for_belief(inst, belief)
    return _makespan(profile, inst.horizon, inst.column(s))[1]


def expected_makespan(inst: Instance, belief: Belief) -> Fraction:
    return makespan_breakdown(inst, belief).expected


def makespan_with_perceived(inst: Instance, perceived: Sequence[Fraction], scenario: int = 0) -> Fraction:
    """
    Makespan cuando las partículas actúan sobre τ′ pero experimentan el τ verdadero

    Args:
        inst: Instancia; el τ verdadero es la columna scenario
        perceived: Tiempos de viaje percibidos τ′ ≥ 0
        scenario: Columna de travel_times que se toma como verdadera

    Returns:
        Fraction: Makespan del equilibrio para τ′ desempatado por τ y luego por índice
    """
    true_tt = inst.column(scenario)
    profile = solve_deterministic(inst.capacities, perceived, inst.inflow, tie_keys=true_tt)
    return _makespan(profile, inst.horizon, true_tt)[1]


def full_information_makespan(inst: Instance) -> Fraction:
    """Σ_s λ*_s · M_{T,s}(e_s)"""
    return sum((inst.prior[s] * makespan_scenario(inst, Belief.unit(inst.d, s), s)
                for s in range(inst.d) if inst.prior[s] > 0), Fraction(0))


# =============================================================================
# Esquemas
# =============================================================================

def scheme_throughput(inst: Instance, scheme: SignalingScheme) -> Fraction:
    return sum((alpha * expected_throughput(inst, belief) for alpha, belief in scheme.signals), Fraction(0))


def scheme_makespan(inst: Instance, scheme: SignalingScheme) -> Fraction:
    return sum((alpha * expected_makespan(inst, belief) for alpha, belief in scheme.signals), Fraction(0))
