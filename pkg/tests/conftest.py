"""Fixtures partagées: plans fournis, sous-plans de l'exemple et tableaux orthogonaux"""

import itertools
import os
import tempfile

os.environ.setdefault("LATMAJ_CONFIG_DIR", tempfile.mkdtemp(prefix="latmaj-config-"))
os.environ.setdefault("LATMAJ_THREADS", "1")

import numpy as np  # noqa: E402
import pytest  # noqa: E402

from latmaj.design_core import Design, bundled_design, project  # noqa: E402

# Colonnes base 0 des sous-plans {A,C,G,H}, {B,C,G,H}, {A,B,D,F}, {A,D,E,F}
X1_COLS = (0, 2, 6, 7)
X2_COLS = (1, 2, 6, 7)
X3_COLS = (0, 1, 3, 5)
X4_COLS = (0, 3, 4, 5)


@pytest.fixture(scope="session")
def table1() -> Design:
    return bundled_design("table1")


@pytest.fixture(scope="session")
def x1(table1) -> Design:
    return project(table1, X1_COLS)


@pytest.fixture(scope="session")
def x2(table1) -> Design:
    return project(table1, X2_COLS)


@pytest.fixture(scope="session")
def x3(table1) -> Design:
    return project(table1, X3_COLS)


@pytest.fixture(scope="session")
def x4(table1) -> Design:
    return project(table1, X4_COLS)


@pytest.fixture(scope="session")
def table3() -> Design:
    return bundled_design("table3")


@pytest.fixture
def oa_4_3_2() -> Design:
    """OA(4, 2^3, 2) saturé: toutes les coïncidences valent 1"""
    return Design(np.array([[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]]), 2)


@pytest.fixture
def oa_9_4_3() -> Design:
    """OA(9, 3^4, 2) saturé: lignes (a, b, a+b, a+2b) mod 3"""
    rows = [(a, b, (a + b) % 3, (a + 2 * b) % 3) for a in range(3) for b in range(3)]
    return Design(np.array(rows), 3)


def _hadamard_rows() -> np.ndarray:
    """Plan à 8 essais et 7 colonnes: parité de r & c pour c = 1..7"""
    return np.array([[bin(r & c).count("1") % 2 for c in range(1, 8)] for r in range(8)])


@pytest.fixture
def hadamard_8_7() -> Design:
    return Design(_hadamard_rows(), 2)


@pytest.fixture
def hadamard_8_6() -> Design:
    """Sous-plan à 6 colonnes: faiblement équidistant, coïncidences 2 et 3"""
    return Design(_hadamard_rows()[:, :6], 2)


@pytest.fixture
def full_factorial_2_3() -> Design:
    return Design(np.array(list(itertools.product(range(2), repeat=3))), 2)
