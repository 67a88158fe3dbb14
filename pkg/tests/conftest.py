"""Shared fixtures: the example polytopes and their characteristic data."""

from pathlib import Path

import pytest
from sympy import ImmutableMatrix

from qtembed.chardata import char_matrix
from qtembed.config import get_settings
from qtembed.document import load_document
from qtembed.exactlin import int_matrix
from qtembed.polytope import cube, enumerate_faces, simplex, stasheff_k5

DATA = Path(__file__).resolve().parent.parent / "data"

K5_C = [
    [1, 0, 0, 1, 0, 0],
    [0, 1, 0, 0, 0, 1],
    [0, 0, 1, 1, 0, 1],
    [1, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0],
    [0, 0, 0, 1, 1, 1],
    [0, 0, 0, 0, 1, 0],
    [0, 0, 0, 1, 1, 0],
]
K5_CHARACTER = (3, 3, 3, 7, 6, 5)

K5_VERTICES = [
    (1, 0, 0), (0, 0, 1), (1, 3, 0), (0, 3, 1), (2, 0, 0), (3, 1, 0), (3, 1, 3),
    (2, 0, 3), (3, 2, 3), (0, 2, 3), (0, 3, 2), (3, 3, 2), (0, 0, 3), (3, 3, 0),
]  # fmt: skip
K5_EDGE_POINTS = [
    (1, 1, 0), (1, 2, 0), (2, 3, 0), (3, 2, 0), (0, 1, 1), (0, 2, 1), (3, 3, 1),
    (3, 1, 1), (2, 0, 1), (1, 3, 2), (2, 3, 2), (3, 1, 2), (2, 0, 2), (0, 0, 2),
    (1, 0, 3), (0, 1, 3), (1, 2, 3), (2, 2, 3),
]  # fmt: skip

# Monomial of every edge, keyed by the two facets (1-based) containing it.
K5_EDGE_MONOMIALS = {
    (1, 2): "z3 w6 w7 z8",
    (1, 5): "w3 z6 z7 w8",
    (1, 6): "w2 z5 z7 w9",
    (1, 7): "w2 z3 z5 w6 z8 w9",
    (1, 8): "z2 w5 w7 z9",
    (2, 3): "z1 w4 z8 w9",
    (2, 6): "z1 w4 z8 w9",
    (2, 8): "w1 z3 z4 w6 w7 z9",
    (2, 9): "w3 z6 z7 w8",
    (3, 4): "w2 z5 z7 w9",
    (3, 5): "w1 z4 w8 z9",
    (3, 8): "z2 w5 w7 z9",
    (3, 9): "z1 z2 w4 w5 w7 z8",
    (4, 5): "z3 w6 w7 z8",
    (4, 6): "z2 w5 w7 z9",
    (4, 7): "w2 z3 z5 w6 z8 w9",
    # derived: along x = 3, y = 1 the direction is the third row of Lambda
    (4, 9): "z3 w6 w7 z8",
    (5, 7): "w1 z4 w8 z9",
    (5, 8): "w1 z3 z4 w6 w7 z9",
    (6, 7): "w1 z4 w8 z9",
    (6, 9): "z1 z2 w4 w5 w7 z8",
}


def simplex_lambda(n: int) -> ImmutableMatrix:
    """``[I | -1]``, the characteristic matrix of CP^n."""
    return int_matrix([[int(r == c) for c in range(n)] + [-1] for r in range(n)])


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test starts from default settings."""
    for name in (
        "QTEMBED_CI",
        "QTEMBED_LOG_LEVEL",
        "QTEMBED_LOG_JSON",
        "QTEMBED_SAMPLES",
    ):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(scope="session")
def k5():
    return stasheff_k5()


@pytest.fixture(scope="session")
def k5_lattice(k5):
    return enumerate_faces(k5)


@pytest.fixture(scope="session")
def k5_cm(k5):
    """K5 with the 0/1 kernel embedding."""
    return char_matrix(ImmutableMatrix(k5.A.T), int_matrix(K5_C))


@pytest.fixture(scope="session")
def k5_doc():
    return load_document(DATA / "k5.txt")


@pytest.fixture(scope="session")
def cube3():
    return cube(3)


@pytest.fixture(scope="session")
def cube3_cm(cube3):
    return char_matrix(ImmutableMatrix(cube3.A.T))


@pytest.fixture(scope="session", params=[2, 3], ids=["cp2", "cp3"])
def cpn(request):
    """``(n, P, cm)`` for CP^n over the standard simplex."""
    n = request.param
    P = simplex(n)
    return n, P, char_matrix(simplex_lambda(n))


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA
