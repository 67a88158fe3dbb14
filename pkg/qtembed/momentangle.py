"""
The moment-angle manifold as an intersection of quadrics.

``Z_P`` is the set of ``z`` in ``C^m`` with ``|z|^2 = A x + b`` for some x in
P. Eliminating x gives ``m - n`` real quadrics
``sum_k c_jk (|z_k|^2 - b_k) = 0`` where the rows ``c_j`` span the left
kernel of A.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from math import lcm

import numpy as np
import structlog
from sympy import ImmutableMatrix, Matrix, Rational

from .errors import DimensionMismatchError, NonInteriorPointError
from .exactlin import IntMatrix, integer_kernel_basis
from .polytope import HPolytope, Point, image_point

log = structlog.get_logger(__name__)


@dataclass(frozen=True)
class QuadricSystem:
    """
    Equations ``C_P |z|^2 = C_P b`` of the moment-angle manifold.

    Attributes:
        c_p: (m - n) x m integer matrix with ``C_P A = 0``
        rhs: Exact right-hand sides ``C_P b``
    """

    c_p: IntMatrix
    rhs: tuple[Rational, ...]

    def equations(self) -> list[str]:
        lines = []
        for j in range(self.c_p.rows):
            terms = []
            for k in range(self.c_p.cols):
                coeff = int(self.c_p[j, k])
                if coeff == 0:
                    continue
                sign = "-" if coeff < 0 else "+"
                size = "" if abs(coeff) == 1 else str(abs(coeff))
                terms.append((sign, f"{size}|z{k + 1}|^2"))
            text = " ".join(f"{s} {t}" for s, t in terms)
            if text.startswith("+ "):
                text = text[2:]
            elif text.startswith("- "):
                text = "-" + text[2:]
            lines.append(f"{text or '0'} = {self.rhs[j]}")
        return lines


@dataclass(frozen=True)
class ZPoint:
    """
    A point of the moment-angle manifold.

    Attributes:
        z: Complex coordinates
        base: Exact point of P below z
        angles: Arguments of the coordinates, in turns
    """

    z: np.ndarray
    base: Point
    angles: np.ndarray


def _integral_rows(matrix: ImmutableMatrix) -> IntMatrix:
    """Scale every row to clear denominators; the kernel does not change."""
    rows = []
    for i in range(matrix.rows):
        row = [Rational(x) for x in matrix.row(i)]
        scale = lcm(*(int(x.q) for x in row)) if row else 1
        rows.append([int(x * scale) for x in row])
    return ImmutableMatrix(Matrix(rows)) if rows else matrix


def quadric_system(P: HPolytope, c_user: IntMatrix | None = None) -> QuadricSystem:
    """
    The quadrics cutting out ``Z_P``.

    ``c_user`` (an m x (m - n) matrix with ``A^T C = 0``, such as the kernel
    embedding of a characteristic matrix equal to ``A^T``) fixes the basis of
    the equations; otherwise the canonical kernel basis of ``A^T`` is used.
    """
    a_t = ImmutableMatrix(P.A.T)
    if c_user is not None and c_user.rows == P.m and not any(a_t * c_user):
        c = c_user
    else:
        c = integer_kernel_basis(_integral_rows(a_t))
    c_p = ImmutableMatrix(c.T)
    if c_p.rows != P.m - P.n or (c_p.rows and c_p.rank() != c_p.rows):
        raise DimensionMismatchError(
            f"quadric matrix has rank {c_p.rank()}, expected {P.m - P.n}"
        )
    rhs = tuple(Rational(x) for x in c_p * P.b) if c_p.rows else ()
    log.debug("quadric_system", name=P.name, equations=c_p.rows)
    return QuadricSystem(c_p=c_p, rhs=rhs)


def sample_zpoint(P: HPolytope, p: Sequence, angles: Sequence[float]) -> ZPoint:
    """
    ``z_k = exp(2 pi i angle_k) sqrt((A p + b)_k)``.

    Raises:
        NonInteriorPointError: If p is not in P
    """
    if len(angles) != P.m:
        raise DimensionMismatchError(f"{len(angles)} angles given, expected {P.m}")
    y = image_point(P, p)
    if any(v < 0 for v in y):
        raise NonInteriorPointError(f"point {tuple(str(c) for c in p)} is not in P")
    angles = np.asarray(angles, dtype=float)
    moduli = np.sqrt(np.array([float(v) for v in y]))
    z = moduli * np.exp(2j * np.pi * angles)
    return ZPoint(z=z, base=tuple(Rational(c) for c in p), angles=angles)


def quadric_residual(system: QuadricSystem, z: np.ndarray) -> np.ndarray:
    """Per equation, ``sum_k c_jk |z_k|^2 - rhs_j``."""
    z = np.asarray(z, dtype=complex)
    if z.shape != (system.c_p.cols,):
        raise DimensionMismatchError(
            f"point in C^{z.size}, expected C^{system.c_p.cols}"
        )
    c = np.array(system.c_p.tolist(), dtype=float).reshape(system.c_p.shape)
    rhs = np.array([float(v) for v in system.rhs])
    return c @ np.abs(z) ** 2 - rhs


def moment_map(P: HPolytope, z: np.ndarray) -> np.ndarray:
    """The point x of P with ``A x + b = |z|^2``, by least squares."""
    z = np.asarray(z, dtype=complex)
    a = np.array(P.A.tolist(), dtype=float)
    b = np.array([float(v) for v in P.b])
    x, *_ = np.linalg.lstsq(a, np.abs(z) ** 2 - b, rcond=None)
    return x
