#!/usr/bin/env python3
"""
Módulo FPTAS - Esquema multiplicativo para maximizar el throughput esperado

Construye una red ε no uniforme (H más rejilla de potencias de 1−ε en cada
coordenada), evalúa el subestimador F_{ε,κ} en sus vértices y resuelve el
programa lineal de descomposición del prior en racionales exactos.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from arrangement import Hyperplane, breakpoints_1d, build_H, enumerate_cells
from model import Belief, Instance, SignalingError, SignalingScheme
from objectives import expected_throughput, throughput_values
from rational_lp import maximize


class ZeroOptimumError(SignalingError):
    """OPT = 0: el esquema trivial {(1, λ*)} ya es óptimo"""


@dataclass(frozen=True)
class NetParameters:
    eps: Fraction
    delta: Fraction
    kappa: int
    points: Tuple[Belief, ...]
    values: Tuple[Fraction, ...]


@dataclass(frozen=True)
class FptasResult:
    scheme: SignalingScheme
    value: Fraction
    relaxed_value: Fraction
    net: Optional[NetParameters]
    trivial: bool = False


def lower_bound(inst: Instance) -> Fraction:
    """
    Cota inferior de OPT: λ*_{s*}(T − τ_{i*,s*})·min{ν_{i*}, u}

    (i*, s*) minimiza τ entre los escenarios con probabilidad positiva.
    """
    candidates = [(inst.travel_times[i][s], s, i) for s in range(inst.d) if inst.prior[s] > 0 for i in range(inst.m)]
    tau, s, i = min(candidates)
    return inst.prior[s] * (inst.horizon - tau) * min(inst.capacities[i], inst.inflow)


def compute_kappa(inst: Instance, eps: Fraction, delta: Fraction) -> int:
    """
    Menor κ ≥ 1 con (1−ε)^κ·d·T·u ≤ δ·LB, por iteración exacta

    Raises:
        ZeroOptimumError: Si T ≤ min τ (el throughput es nulo en todo Δ)
    """
    eps, delta = Fraction(eps), Fraction(delta)
    if not (0 < eps < 1 and 0 < delta < 1):
        raise ValueError("se requiere 0 < ε < 1 y 0 < δ < 1")
    if inst.horizon <= inst.min_travel_time(positive_prior_only=True):
        raise ZeroOptimumError("T ≤ min τ: ningún esquema obtiene throughput positivo")
    target = delta * lower_bound(inst)
    scale = inst.d * inst.horizon * inst.inflow
    kappa, power = 1, 1 - eps
    while power * scale > target:
        kappa += 1
        power *= 1 - eps
    return kappa


def h_round(x: Fraction, eps: Fraction, kappa: int) -> Fraction:
    """Redondea x hacia abajo a la rejilla {(1−ε)^{k−1} : k ∈ [κ]}; 0 por debajo de la última potencia"""
    x, ratio = Fraction(x), 1 - Fraction(eps)
    level = Fraction(1)
    for _ in range(kappa):
        if level <= x:
            return level
        level *= ratio
    return Fraction(0)


def under_estimator(inst: Instance, belief: Belief, eps: Fraction, kappa: int) -> Fraction:
    """F_{ε,κ}(μ) = Σ_s h(μ_s)·F_s(μ)"""
    values = throughput_values(inst, belief)
    return sum((h_round(belief[s], eps, kappa) * values[s] for s in range(inst.d)), Fraction(0))


def net_hyperplanes(inst: Instance, eps: Fraction, kappa: int) -> List[Hyperplane]:
    """L = H ∪ {μ_s = (1−ε)^{j−1} : j ∈ [κ]} ∪ {μ_s = 0}"""
    planes = build_H(inst)
    zero = Fraction(0)
    for s in range(inst.d):
        unit = tuple(Fraction(int(t == s)) for t in range(inst.d))
        level = Fraction(1)
        for j in range(1, kappa + 1):
            planes.append(Hyperplane(unit, level, f"L[{s + 1},{j}]"))
            level *= 1 - Fraction(eps)
        planes.append(Hyperplane(unit, zero, f"L[{s + 1},0]"))
    return planes


def build_net(inst: Instance, eps: Fraction, kappa: int, delta: Optional[Fraction] = None) -> NetParameters:
    """Vértices (0-celdas) del arreglo L sobre Δ y el valor de F_{ε,κ} en cada uno"""
    eps = Fraction(eps)
    planes = net_hyperplanes(inst, eps, kappa)
    if inst.d == 2:
        # Sobre el segmento los vértices son los cortes ordenados
        vertices = [Belief.from_red(x) for x in breakpoints_1d(planes)]
    else:
        vertices = [cell.representative for cell in enumerate_cells(planes, 0, d=inst.d)]
    unique: Dict[Tuple[Fraction, ...], Belief] = {}
    for vertex in vertices:
        unique.setdefault(vertex.coords, vertex)
    points = tuple(unique[key] for key in sorted(unique))
    values = tuple(under_estimator(inst, point, eps, kappa) for point in points)
    return NetParameters(eps, Fraction(delta) if delta is not None else eps, kappa, points, values)


def solve_fptas(inst: Instance, eps_star: Fraction,
                trace: Optional[Callable[[dict], None]] = None) -> FptasResult:
    """
    Esquema con throughput ALG ≥ (1−ε*)·OPT

    Args:
        inst: Instancia
        eps_star: Precisión multiplicativa ε* ∈ (0, 1)
        trace: Callback opcional que recibe una fila por punto de la red

    Returns:
        FptasResult: Esquema, su throughput verdadero y el valor del subestimador
    """
    eps_star = Fraction(eps_star)
    if not 0 < eps_star < 1:
        raise ValueError("se requiere 0 < ε* < 1")

    if inst.d == 1:
        belief = Belief((Fraction(1),))
        scheme = SignalingScheme(((Fraction(1), belief),))
        value = expected_throughput(inst, belief)
        return FptasResult(scheme, value, value, None, trivial=True)

    eps = delta = eps_star / 2
    try:
        kappa = compute_kappa(inst, eps, delta)
    except ZeroOptimumError:
        scheme = SignalingScheme.no_information(inst)
        return FptasResult(scheme, Fraction(0), Fraction(0), None, trivial=True)

    net = build_net(inst, eps, kappa, delta)
    columns = len(net.points)
    A = [[point[s] for point in net.points] for s in range(inst.d)]
    A.append([Fraction(1)] * columns)
    b = list(inst.prior) + [Fraction(1)]
    lp = maximize(net.values, A, b)

    signals = [(alpha, point) for alpha, point in zip(lp.x, net.points) if alpha > 0]
    scheme = SignalingScheme(tuple(signals))
    value = sum((alpha * expected_throughput(inst, point) for alpha, point in signals), Fraction(0))

    if trace is not None:
        for point, relaxed, alpha in zip(net.points, net.values, lp.x):
            trace({"belief": str(point), "F_eps_kappa": float(relaxed), "alpha": str(alpha)})

    return FptasResult(scheme, value, lp.objective, net)
