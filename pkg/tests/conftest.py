"""Fixtures compartidos: instancias de ejemplo y generador aleatorio"""

import os
import sys
from fractions import Fraction

import numpy as np
import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, ROOT)

from model import Instance, load_instance  # noqa: E402

DATA_DIR = os.path.join(ROOT, "data")


def data_path(name: str) -> str:
    return os.path.join(DATA_DIR, name)


@pytest.fixture
def a1() -> Instance:
    """Dos enlaces, throughput: indiferencia en μ_rojo = 3/5"""
    return load_instance(data_path("a1_throughput.json"))


@pytest.fixture
def a2() -> Instance:
    """Tres enlaces, makespan con saltos"""
    return load_instance(data_path("a2_makespan.json"))


@pytest.fixture
def a3() -> Instance:
    """Tres enlaces, óptimo en una creencia irracional"""
    return load_instance(data_path("a3_irrational.json"))


@pytest.fixture
def single_link() -> Instance:
    return Instance((Fraction(2),), ((Fraction(1),),), Fraction(1), Fraction(3), (Fraction(1),))


@pytest.fixture
def affine_link() -> Instance:
    """Un enlace sin cola y dos escenarios: F(μ) = 2 − μ_rojo"""
    return Instance((Fraction(1, 2),), ((Fraction(1), Fraction(3)),), Fraction(1), Fraction(5),
                    (Fraction(1, 2), Fraction(1, 2)))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240531)
