#!/usr/bin/env python3
"""
Módulo Model - Instancias, creencias y esquemas de señalización en aritmética exacta
Todas las cantidades de entrada son racionales (fractions.Fraction); nada se redondea aquí
"""

import json
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from config import DECIMAL_DIGITS, RANDOM_CAPACITY_DENOMINATOR, RANDOM_MAX_TRAVEL_TIME, RANDOM_PRIOR_DENOMINATOR


# =============================================================================
# Errores
# =============================================================================

class SignalingError(Exception):
    """Error base del paquete"""


class InstanceError(SignalingError, ValueError):
    """Documento de instancia mal formado o inválido"""


class BeliefError(InstanceError):
    """Creencia fuera del símplex o de dimensión incorrecta"""


class UnsupportedDimensionError(SignalingError):
    """Número de escenarios fuera del alcance de un camino exacto"""


class ResolutionError(SignalingError, ValueError):
    """Resolución de rejilla demasiado grande"""


# =============================================================================
# Infinito explícito
# =============================================================================

class _Infinity:
    """Valor +∞ explícito para puntos de quiebre que nunca se alcanzan"""

    __slots__ = ()

    def __repr__(self) -> str:
        return "∞"

    __str__ = __repr__

    def __eq__(self, other: Any) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("∞")

    def __lt__(self, other: Any) -> bool:
        return False

    def __le__(self, other: Any) -> bool:
        return other is self

    def __gt__(self, other: Any) -> bool:
        return other is not self

    def __ge__(self, other: Any) -> bool:
        return True

    def __add__(self, other: Any) -> "_Infinity":
        return self

    __radd__ = __add__


INFINITY = _Infinity()


def is_infinite(value: Any) -> bool:
    return value is INFINITY


# =============================================================================
# Racionales
# =============================================================================

def parse_rational(value: Any, field: str = "valor") -> Fraction:
    """
    Convierte "p/q", "p" o un entero JSON en Fraction

    Args:
        value: Texto o entero a convertir
        field: Nombre del campo para el mensaje de error

    Returns:
        Fraction: Racional exacto
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise InstanceError(f"{field}: se esperaba un racional 'p/q', no {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise InstanceError(f"{field}: se esperaba un racional 'p/q', no {value!r}")
    try:
        return Fraction(value.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise InstanceError(f"{field}: racional mal formado {value!r} ({e})") from e


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value: Fraction, digits: int = DECIMAL_DIGITS) -> str:
    """Aproximación decimal con `digits` cifras significativas"""
    with localcontext() as ctx:
        ctx.prec = digits
        approx = +(Decimal(value.numerator) / Decimal(value.denominator))
    return f"{approx:g}" if approx != 0 else "0"


# =============================================================================
# Tipos del dominio
# =============================================================================

@dataclass(frozen=True)
class Belief:
    """Punto del símplex Δ sobre los escenarios"""

    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if not coords:
            raise BeliefError("creencia vacía")
        if any(c < 0 or c > 1 for c in coords):
            raise BeliefError(f"creencia con coordenadas fuera de [0,1]: {self}")
        if sum(coords) != 1:
            raise BeliefError(f"creencia que no suma 1: {self}")

    @classmethod
    def of(cls, *values: Any) -> "Belief":
        return cls(tuple(Fraction(v) for v in values))

    @classmethod
    def unit(cls, d: int, s: int) -> "Belief":
        return cls(tuple(Fraction(int(t == s)) for t in range(d)))

    @classmethod
    def from_red(cls, x: Any) -> "Belief":
        """Creencia de dos escenarios con probabilidad x del segundo ('rojo')"""
        x = Fraction(x)
        return cls((1 - x, x))

    @property
    def d(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, s: int) -> Fraction:
        return self.coords[s]

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(format_rational(c) for c in self.coords) + ")"

    def to_floats(self) -> List[float]:
        return [float(c) for c in self.coords]


@dataclass(frozen=True)
class Instance:
    """
    Sistema de colas: m enlaces paralelos, d escenarios de tiempos de viaje

    travel_times[i][s] es el tiempo de viaje del enlace i en el escenario s
    """

    capacities: Tuple[Fraction, ...]
    travel_times: Tuple[Tuple[Fraction, ...], ...]
    inflow: Fraction
    horizon: Fraction
    prior: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "capacities", tuple(Fraction(v) for v in self.capacities))
        object.__setattr__(self, "travel_times",
                           tuple(tuple(Fraction(v) for v in row) for row in self.travel_times))
        object.__setattr__(self, "inflow", Fraction(self.inflow))
        object.__setattr__(self, "horizon", Fraction(self.horizon))
        object.__setattr__(self, "prior", tuple(Fraction(v) for v in self.prior))
        self._validate()

    def _validate(self):
        m, d = len(self.capacities), len(self.prior)
        if m < 1:
            raise InstanceError("capacities: se necesita al menos un enlace")
        if d < 1:
            raise InstanceError("prior: se necesita al menos un escenario")
        if len(self.travel_times) != m:
            raise InstanceError(f"travel_times: {len(self.travel_times)} filas para {m} enlaces")
        for i, row in enumerate(self.travel_times):
            if len(row) != d:
                raise InstanceError(f"travel_times[{i}]: {len(row)} columnas para {d} escenarios")
            for s, tau in enumerate(row):
                if tau < 0:
                    raise InstanceError(f"travel_times[{i}][{s}]: tiempo de viaje negativo")
        for i, nu in enumerate(self.capacities):
            if nu <= 0:
                raise InstanceError(f"capacities[{i}]: la capacidad debe ser positiva")
        if self.inflow <= 0:
            raise InstanceError("inflow: la tasa de entrada debe ser positiva")
        if self.horizon <= 0:
            raise InstanceError("horizon: el horizonte debe ser positivo")
        if any(p < 0 or p > 1 for p in self.prior):
            raise InstanceError("prior: probabilidades fuera de [0,1]")
        if sum(self.prior) != 1:
            raise InstanceError("prior: las probabilidades no suman 1")

    @property
    def m(self) -> int:
        return len(self.capacities)

    @property
    def d(self) -> int:
        return len(self.prior)

    @property
    def prior_belief(self) -> Belief:
        return Belief(self.prior)

    def column(self, s: int) -> Tuple[Fraction, ...]:
        """Tiempos de viaje realizados en el escenario s"""
        return tuple(row[s] for row in self.travel_times)

    def min_travel_time(self, positive_prior_only: bool = False) -> Fraction:
        scenarios = [s for s in range(self.d) if not positive_prior_only or self.prior[s] > 0]
        return min(self.travel_times[i][s] for i in range(self.m) for s in scenarios)

    def to_document(self) -> Dict[str, Any]:
        return {
            "capacities": [format_rational(v) for v in self.capacities],
            "travel_times": [[format_rational(v) for v in row] for row in self.travel_times],
            "inflow": format_rational(self.inflow),
            "horizon": format_rational(self.horizon),
            "prior": [format_rational(v) for v in self.prior],
        }


# =============================================================================
# Lectura de documentos
# =============================================================================

def parse_instance(text: str) -> Instance:
    """
    Lee un documento JSON de instancia y valida todos sus invariantes

    Args:
        text: Documento con campos capacities, travel_times, inflow, horizon, prior

    Returns:
        Instance: Instancia validada
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceError(f"documento JSON inválido (línea {e.lineno}, columna {e.colno}): {e.msg}") from e
    if not isinstance(document, dict):
        raise InstanceError("el documento de instancia debe ser un objeto")

    missing = [k for k in ("capacities", "travel_times", "inflow", "horizon", "prior") if k not in document]
    if missing:
        raise InstanceError(f"faltan campos: {', '.join(missing)}")

    def rational_list(values: Any, field: str) -> Tuple[Fraction, ...]:
        if not isinstance(values, list):
            raise InstanceError(f"{field}: se esperaba una lista")
        return tuple(parse_rational(v, f"{field}[{j}]") for j, v in enumerate(values))

    travel_times = document["travel_times"]
    if not isinstance(travel_times, list):
        raise InstanceError("travel_times: se esperaba una matriz m×d")

    return Instance(
        capacities=rational_list(document["capacities"], "capacities"),
        travel_times=tuple(rational_list(row, f"travel_times[{i}]") for i, row in enumerate(travel_times)),
        inflow=parse_rational(document["inflow"], "inflow"),
        horizon=parse_rational(document["horizon"], "horizon"),
        prior=rational_list(document["prior"], "prior"),
    )


def load_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as f:
        return parse_instance(f.read())


def parse_belief(text: str, d: int) -> Belief:
    """Lee una creencia 'a,b,...' con d coordenadas racionales"""
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != d:
        raise BeliefError(f"belief: se esperaban {d} coordenadas, se recibieron {len(parts)}")
    return Belief(tuple(parse_rational(p, f"belief[{s}]") for s, p in enumerate(parts)))


def expected_travel_times(inst: Instance, belief: Belief) -> Tuple[Fraction, ...]:
    """Tiempos de viaje esperados μᵀτ_i de cada enlace"""
    if len(belief) != inst.d:
        raise BeliefError(f"creencia de dimensión {len(belief)} para {inst.d} escenarios")
    return tuple(sum((mu * tau for mu, tau in zip(belief, row)), Fraction(0)) for row in inst.travel_times)


# =============================================================================
# Esquemas de señalización
# =============================================================================

@dataclass(frozen=True)
class SignalingScheme:
    """
    Descomposición convexa Σ_j α_j μ^j del prior

    signals: lista de pares (α_j, μ^j)
    """

    signals: Tuple[Tuple[Fraction, Belief], ...]

    def __post_init__(self):
        object.__setattr__(self, "signals",
                           tuple((Fraction(alpha), belief) for alpha, belief in self.signals))

    @property
    def d(self) -> int:
        return len(self.signals[0][1])

    def weights(self) -> List[Fraction]:
        return [alpha for alpha, _ in self.signals]

    def mean(self) -> Tuple[Fraction, ...]:
        d = self.d
        return tuple(sum((alpha * belief[s] for alpha, belief in self.signals), Fraction(0)) for s in range(d))

    def phi(self) -> List[List[Fraction]]:
        """Matriz φ[s][ξ] = α_ξ · μ^ξ_s"""
        return [[alpha * belief[s] for alpha, belief in self.signals] for s in range(self.d)]

    @classmethod
    def from_phi(cls, phi: Sequence[Sequence[Any]]) -> "SignalingScheme":
        columns = len(phi[0])
        signals = []
        for xi in range(columns):
            column = [Fraction(row[xi]) for row in phi]
            alpha = sum(column)
            if alpha == 0:
                continue
            signals.append((alpha, Belief(tuple(v / alpha for v in column))))
        return cls(tuple(signals))

    @classmethod
    def full_information(cls, inst: Instance) -> "SignalingScheme":
        return cls(tuple((inst.prior[s], Belief.unit(inst.d, s)) for s in range(inst.d) if inst.prior[s] > 0))

    @classmethod
    def no_information(cls, inst: Instance) -> "SignalingScheme":
        return cls(((Fraction(1), inst.prior_belief),))

    @classmethod
    def random(cls, prior: Belief, rng: np.random.Generator, signals: int = 3,
               denominator: int = 1000) -> "SignalingScheme":
        """
        Descomposición convexa aleatoria y exacta del prior

        Se sortean signals-1 creencias sobre el soporte del prior; la última
        señal absorbe el resto para que Σ α μ = prior se cumpla exactamente.
        """
        d = len(prior)
        support = [s for s in range(d) if prior[s] > 0]
        if signals <= 1 or len(support) == 1:
            return cls(((Fraction(1), prior),))

        drawn = []
        for _ in range(signals - 1):
            raw = [int(v) for v in rng.integers(0, denominator, size=len(support))]
            if sum(raw) == 0:
                raw[int(rng.integers(0, len(support)))] = 1
            total = sum(raw)
            coords = [Fraction(0)] * d
            for s, v in zip(support, raw):
                coords[s] = Fraction(v, total)
            weight = Fraction(int(rng.integers(1, denominator + 1)), denominator)
            drawn.append((weight, coords))

        combined = [sum((w * c[s] for w, c in drawn), Fraction(0)) for s in range(d)]
        # Mayor t con prior - t·combined ≥ 0
        t_max = min(prior[s] / combined[s] for s in support if combined[s] > 0)
        t = t_max * Fraction(int(rng.integers(1, denominator)), denominator)
        if t * sum(w for w, _ in drawn) >= 1:
            t = Fraction(1, 2) / sum(w for w, _ in drawn)
            t = min(t, t_max / 2)

        result = [(t * w, Belief(tuple(c))) for w, c in drawn]
        rest_alpha = 1 - sum(alpha for alpha, _ in result)
        rest = tuple((prior[s] - t * combined[s]) / rest_alpha for s in range(d))
        result.append((rest_alpha, Belief(rest)))
        return cls(tuple(result))

    def check(self, inst: Instance) -> List[str]:
        """
        Verifica exactamente los invariantes del esquema frente a una instancia

        Returns:
            List[str]: Problemas encontrados (vacía si el esquema es válido)
        """
        errors = []
        if not self.signals:
            return ["esquema sin señales"]
        if any(len(belief) != inst.d for _, belief in self.signals):
            errors.append("creencias con dimensión distinta a la de la instancia")
            return errors
        if any(alpha < 0 or alpha > 1 for alpha, _ in self.signals):
            errors.append("pesos fuera de [0,1]")
        if sum(self.weights()) != 1:
            errors.append(f"Σα = {format_rational(sum(self.weights()))} ≠ 1")
        if self.mean() != inst.prior:
            errors.append("Σ α μ ≠ prior")
        row_sums = tuple(sum(row, Fraction(0)) for row in self.phi())
        if row_sums != inst.prior:
            errors.append("las filas de φ no suman el prior")
        return errors


def scheme_to_document(scheme: SignalingScheme, value: Optional[Fraction] = None) -> Dict[str, Any]:
    document: Dict[str, Any] = {
        "signals": [
            {"alpha": format_rational(alpha), "belief": [format_rational(c) for c in belief]}
            for alpha, belief in scheme.signals
        ],
        "phi": [[format_rational(v) for v in row] for row in scheme.phi()],
    }
    if value is not None:
        document["alg"] = format_rational(value)
    return document


def parse_scheme(text: str) -> Tuple[SignalingScheme, Optional[Fraction]]:
    """Lee un documento de esquema; devuelve el esquema y el valor ALG si viene"""
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceError(f"esquema JSON inválido (línea {e.lineno}, columna {e.colno}): {e.msg}") from e
    if not isinstance(document, dict) or not isinstance(document.get("signals"), list):
        raise InstanceError("signals: se esperaba una lista de señales")
    signals = []
    for j, entry in enumerate(document["signals"]):
        if not isinstance(entry, dict) or "alpha" not in entry or "belief" not in entry:
            raise InstanceError(f"signals[{j}]: se esperaban los campos alpha y belief")
        alpha = parse_rational(entry["alpha"], f"signals[{j}].alpha")
        if not isinstance(entry["belief"], list):
            raise InstanceError(f"signals[{j}].belief: se esperaba una lista")
        coords = tuple(parse_rational(v, f"signals[{j}].belief[{s}]") for s, v in enumerate(entry["belief"]))
        try:
            belief = Belief(coords)
        except BeliefError as e:
            raise InstanceError(f"signals[{j}].belief: {e}") from e
        signals.append((alpha, belief))
    if not signals:
        raise InstanceError("signals: el esquema no tiene señales")
    value = parse_rational(document["alg"], "alg") if "alg" in document else None
    return SignalingScheme(tuple(signals)), value


# =============================================================================
# Instancias aleatorias
# =============================================================================

def random_instance(rng: np.random.Generator, links: int, scenarios: int) -> Instance:
    """Instancia aleatoria pequeña con datos racionales sencillos"""
    capacities = tuple(Fraction(int(k), RANDOM_CAPACITY_DENOMINATOR)
                       for k in rng.integers(1, RANDOM_CAPACITY_DENOMINATOR + 1, size=links))
    travel_times = tuple(tuple(Fraction(int(v)) for v in rng.integers(0, RANDOM_MAX_TRAVEL_TIME + 1, size=scenarios))
                         for _ in range(links))
    inflow = Fraction(int(rng.integers(1, 4)), 2)
    horizon = Fraction(int(rng.integers(1, 2 * RANDOM_MAX_TRAVEL_TIME + 1)), 2)
    weights = [int(v) for v in rng.integers(1, RANDOM_PRIOR_DENOMINATOR, size=scenarios)]
    total = sum(weights)
    prior = tuple(Fraction(w, total) for w in weights)
    return Instance(capacities, travel_times, inflow, horizon, prior)

