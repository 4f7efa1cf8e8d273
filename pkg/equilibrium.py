#!/usr/bin/env python3
"""
Módulo Equilibrium - Equilibrio dinámico canónico en enlaces paralelos
Puntos de quiebre θ*, flujos de entrada, colas y tiempos de salida en forma cerrada
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from model import INFINITY, Belief, Instance, expected_travel_times

Breakpoint = Union[Fraction, type(INFINITY)]


@dataclass(frozen=True)
class EquilibriumProfile:
    """
    Equilibrio canónico para unos tiempos de viaje efectivos

    order[p] es el enlace original en la posición p (0-based) del orden π;
    breakpoints[p] es θ* de ese enlace; k cuenta las posiciones con ν̄ < u.
    """

    capacities: Tuple[Fraction, ...]
    inflow_rate: Fraction
    effective_tt: Tuple[Fraction, ...]
    order: Tuple[int, ...]
    breakpoints: Tuple[Breakpoint, ...]
    cumulative: Tuple[Fraction, ...]
    k: int

    @property
    def m(self) -> int:
        return len(self.capacities)

    def position(self, i: int) -> int:
        return self.order.index(i)

    def theta(self, i: int) -> Breakpoint:
        """θ*_i del enlace original i"""
        return self.breakpoints[self.position(i)]

    def thetas(self) -> Tuple[Breakpoint, ...]:
        """θ* indexado por enlace original"""
        result: List[Breakpoint] = [INFINITY] * self.m
        for p, i in enumerate(self.order):
            result[i] = self.breakpoints[p]
        return tuple(result)

    def sorted_tt(self, p: int) -> Fraction:
        return self.effective_tt[self.order[p]]

    def _segment(self, theta: Fraction) -> int:
        """Mayor posición ℓ < k con θ*_ℓ ≤ θ"""
        segment = 0
        for p in range(self.k):
            if self.breakpoints[p] <= theta:
                segment = p
        return segment

    def _saturated(self, theta: Fraction) -> bool:
        return self.k < self.m and self.breakpoints[self.k] <= theta


@dataclass(frozen=True)
class QueueCoefficients:
    """
    Colas afines por tramos: segments[i] lista (inicio, fin, a, b) con z_i = a·θ + b

    El último tramo de un enlace con cola termina en +∞ con a = 0 (meseta).
    """

    segments: Tuple[Tuple[Tuple[Fraction, Breakpoint, Fraction, Fraction], ...], ...]
    plateau: Tuple[Optional[Fraction], ...]

    def evaluate(self, i: int, theta: Fraction) -> Fraction:
        for start, end, a, b in self.segments[i]:
            if start <= theta < end:
                return a * theta + b
        return Fraction(0)


def solve_deterministic(capacities: Sequence[Fraction], travel_times: Sequence[Fraction], inflow_rate: Fraction,
                        tie_keys: Optional[Sequence[Fraction]] = None) -> EquilibriumProfile:
    """
    Equilibrio canónico para tiempos de viaje deterministas

    Args:
        capacities: ν_i de cada enlace
        travel_times: Tiempos sobre los que actúan las partículas
        inflow_rate: Tasa de entrada u
        tie_keys: Criterio secundario de desempate antes del índice original

    Returns:
        EquilibriumProfile: Orden π, puntos de quiebre θ* y k
    """
    capacities = tuple(Fraction(v) for v in capacities)
    travel_times = tuple(Fraction(v) for v in travel_times)
    inflow_rate = Fraction(inflow_rate)
    m = len(capacities)
    keys = tie_keys if tie_keys is not None else [0] * m
    order = tuple(sorted(range(m), key=lambda i: (travel_times[i], keys[i], i)))

    cumulative = []
    running = Fraction(0)
    for i in order:
        running += capacities[i]
        cumulative.append(running)

    breakpoints: List[Breakpoint] = [Fraction(0)]
    for p in range(1, m):
        previous = breakpoints[-1]
        nbar = cumulative[p - 1]
        if previous is INFINITY or nbar >= inflow_rate:
            breakpoints.append(INFINITY)
            continue
        gap = travel_times[order[p]] - travel_times[order[p - 1]]
        breakpoints.append(previous + nbar / (inflow_rate - nbar) * gap)

    k = sum(1 for nbar in cumulative if nbar < inflow_rate)
    return EquilibriumProfile(capacities, inflow_rate, travel_times, order, tuple(breakpoints),
                              tuple(cumulative), k)


def solve_for_belief(inst: Instance, belief: Belief) -> EquilibriumProfile:
    """Equilibrio bayesiano: tiempos efectivos μᵀτ_i, desempate por índice"""
    return solve_deterministic(inst.capacities, expected_travel_times(inst, belief), inst.inflow)


def inflow(profile: EquilibriumProfile, i: int, theta: Fraction) -> Fraction:
    """Flujo de entrada f_i(θ) del equilibrio canónico"""
    theta = Fraction(theta)
    p = profile.position(i)
    k = profile.k
    if profile.breakpoints[p] > theta:
        return Fraction(0)
    if p < k:
        if profile._saturated(theta):
            return profile.capacities[i]
        segment = profile._segment(theta)
        return profile.inflow_rate * profile.capacities[i] / profile.cumulative[segment]
    if p == k:
        previous = profile.cumulative[k - 1] if k > 0 else Fraction(0)
        return profile.inflow_rate - previous
    return Fraction(0)


def queue_length(profile: EquilibriumProfile, i: int, theta: Fraction) -> Fraction:
    """Longitud de cola z_i(θ) en forma cerrada"""
    theta = Fraction(theta)
    p = profile.position(i)
    if p >= profile.k or profile.breakpoints[p] > theta:
        return Fraction(0)
    nu = profile.capacities[i]
    own = profile.effective_tt[i]
    if profile._saturated(theta):
        return nu * (profile.sorted_tt(profile.k) - own)
    segment = profile._segment(theta)
    nbar = profile.cumulative[segment]
    growth = (profile.inflow_rate - nbar) / nbar
    return nu * (profile.sorted_tt(segment) - own + growth * (theta - profile.breakpoints[segment]))


def queue_coefficients(profile: EquilibriumProfile) -> QueueCoefficients:
    """Coeficientes (a, b) de z_i(θ) = a·θ + b en cada tramo de π"""
    segments = []
    plateau: List[Optional[Fraction]] = []
    for i in range(profile.m):
        p = profile.position(i)
        pieces = []
        if p >= profile.k:
            segments.append(tuple())
            plateau.append(None)
            continue
        nu, own = profile.capacities[i], profile.effective_tt[i]
        for seg in range(p, profile.k):
            start = profile.breakpoints[seg]
            end = profile.breakpoints[seg + 1] if seg + 1 < profile.m else INFINITY
            nbar = profile.cumulative[seg]
            growth = (profile.inflow_rate - nbar) / nbar
            a = nu * growth
            b = nu * (profile.sorted_tt(seg) - own) - a * start
            if start < end:
                pieces.append((start, end, a, b))
        if profile.k < profile.m:
            level = nu * (profile.sorted_tt(profile.k) - own)
            pieces.append((profile.breakpoints[profile.k], INFINITY, Fraction(0), level))
            plateau.append(level)
        else:
            plateau.append(None)
        segments.append(tuple(pieces))
    return QueueCoefficients(tuple(segments), tuple(plateau))


def exit_time(profile: EquilibriumProfile, i: int, theta: Fraction, realized_tt: Sequence[Fraction]) -> Fraction:
    """Instante de salida T_i(θ) = θ + z_i(θ)/ν_i + τ_i realizado"""
    theta = Fraction(theta)
    return theta + queue_length(profile, i, theta) / profile.capacities[i] + Fraction(realized_tt[i])


def first_exit_times(inst: Instance, belief: Belief) -> Tuple[Tuple[Breakpoint, ...], ...]:
    """ω[i][s] = θ*_i(μ) + τ_{i,s}; +∞ si el enlace nunca se usa"""
    thetas = solve_for_belief(inst, belief).thetas()
    return tuple(tuple(thetas[i] + tau for tau in inst.travel_times[i]) for i in range(inst.m))


def simulate_queues(profile: EquilibriumProfile, horizon: float, step: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Integra hacia adelante la dinámica de colas con Euler explícito

    Los flujos de entrada son los del equilibrio en forma cerrada, constantes
    a trozos, por lo que se tabulan una vez en punto flotante.

    Returns:
        Tuple[np.ndarray, np.ndarray]: instantes (n,) y colas (n, m)
    """
    steps = int(round(horizon / step))
    times = np.arange(steps + 1) * step
    capacities = np.array([float(v) for v in profile.capacities])

    # Tabla de flujos: un valor por tramo entre puntos de quiebre finitos
    cuts = sorted({bp for bp in profile.breakpoints if bp is not INFINITY})
    rates = np.array([[float(inflow(profile, i, cut)) for i in range(profile.m)] for cut in cuts])
    cut_floats = np.array([float(c) for c in cuts])
    segment_of = np.searchsorted(cut_floats, times, side="right") - 1

    queues = np.zeros((steps + 1, profile.m))
    z = np.zeros(profile.m)
    for n in range(steps):
        z = np.maximum(z + step * (rates[segment_of[n]] - capacities), 0.0)
        queues[n + 1] = z
    return times, queues
