"""
Characteristic data of a quasitoric manifold.

``Lambda`` is the n x m integer characteristic matrix, ``C`` an m x (m - n)
integer matrix whose columns are a basis of ``ker Lambda``. Characters of
the kernel torus K are integer vectors ``b~`` in the coordinates given by the
columns of ``C``; a character of the big torus is an integer m-vector ``a``,
and it restricts to K as ``C^T a``.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import structlog
from sympy import ImmutableMatrix

from .errors import DimensionMismatchError, IndependenceError, InvalidKernelError
from .exactlin import (
    IntMatrix,
    as_int_tuple,
    delete_rows,
    int_matrix,
    integer_kernel_basis,
    is_direct_summand,
    select_columns,
    unimodular_inverse,
)
from .polytope import FaceLattice, HPolytope, Vertex, enumerate_faces
from .reports import Report, one_based

log = structlog.get_logger(__name__)


@dataclass(frozen=True)
class Character:
    """
    Character of K, as coordinates with respect to the columns of C.

    Attributes:
        coords: Integer vector of length m - n
    """

    coords: tuple[int, ...]

    @classmethod
    def trivial(cls, size: int) -> "Character":
        return cls(coords=(0,) * size)

    @property
    def is_trivial(self) -> bool:
        return not any(self.coords)

    def column(self) -> IntMatrix:
        return int_matrix([[x] for x in self.coords], cols=1)


@dataclass(frozen=True)
class CharLift:
    """
    Character of the big torus ``T^m``.

    Attributes:
        a: Integer exponent vector of length m
    """

    a: tuple[int, ...]


@dataclass(frozen=True)
class CharMatrix:
    """
    A characteristic matrix together with the chosen kernel embedding.

    Attributes:
        lam: n x m characteristic matrix
        c: m x (m - n) kernel embedding
        c_source: ``canonical`` for the Hermite basis, ``user`` when supplied
    """

    lam: IntMatrix
    c: IntMatrix
    c_source: Literal["canonical", "user"] = "canonical"

    @property
    def n(self) -> int:
        return self.lam.rows

    @property
    def m(self) -> int:
        return self.lam.cols

    @property
    def k(self) -> int:
        """Rank of K."""
        return self.c.cols


def validate_characteristic(
    P: HPolytope,
    lam: IntMatrix,
    lattice: FaceLattice | None = None,
    c: IntMatrix | None = None,
) -> Report:
    """
    Check the independence condition ``det Lambda_v = +-1`` at every vertex.

    When ``c`` is given, also check that ``C`` with the rows of each vertex
    deleted is unimodular.
    """
    if lam.shape != (P.n, P.m):
        raise DimensionMismatchError(
            f"Lambda must be {P.n}x{P.m}, got {lam.rows}x{lam.cols}"
        )
    lattice = lattice or enumerate_faces(P)
    report = Report(check="characteristic")
    determinants = []
    for v in lattice.vertices:
        det = int(select_columns(lam, v.index_set).det())
        determinants.append({"vertex": one_based(v.index_set), "det": det})
        if abs(det) != 1:
            report.fail(
                "independence",
                f"det Lambda_v = {det} at vertex {one_based(v.index_set)}",
                vertex=one_based(v.index_set),
            )
        if c is not None and c.cols:
            minor = int(delete_rows(c, v.index_set).det())
            if abs(minor) != 1:
                report.fail(
                    "kernel_minor",
                    f"det C_I = {minor} at vertex {one_based(v.index_set)}",
                    vertex=one_based(v.index_set),
                )
    report.details["determinants"] = determinants
    report.details["f0"] = lattice.f0
    return report


def kernel_embedding(lam: IntMatrix, c_user: IntMatrix | None = None) -> IntMatrix:
    """
    The matrix C: ``c_user`` when it is valid, else the canonical kernel basis.

    Raises:
        InvalidKernelError: If ``c_user`` has the wrong shape, is not in the
            kernel of ``lam``, or does not span a direct summand
    """
    if c_user is None:
        c = integer_kernel_basis(lam)
        log.debug("kernel_embedding_chosen", c_source="canonical", rank=c.cols)
        return c

    expected = (lam.cols, lam.cols - lam.rank())
    if c_user.shape != expected:
        raise InvalidKernelError(
            f"C must be {expected[0]}x{expected[1]}, got {c_user.rows}x{c_user.cols}"
        )
    if any(x != 0 for x in lam * c_user):
        raise InvalidKernelError("Lambda * C is not zero")
    if not is_direct_summand(c_user):
        raise InvalidKernelError("columns of C do not span a direct summand")
    log.debug("kernel_embedding_chosen", c_source="user", rank=c_user.cols)
    return c_user


def char_matrix(lam: IntMatrix, c_user: IntMatrix | None = None) -> CharMatrix:
    """Bundle ``lam`` with its kernel embedding."""
    c = kernel_embedding(lam, c_user)
    return CharMatrix(lam=lam, c=c, c_source="canonical" if c_user is None else "user")


def reduced_form(P: HPolytope, lam: IntMatrix, v: Vertex) -> IntMatrix:
    """
    ``Lambda_v^-1 Lambda``: the columns of the facets at ``v`` become the identity.

    Raises:
        IndependenceError: If ``Lambda_v`` is not unimodular
    """
    if lam.shape != (P.n, P.m):
        raise DimensionMismatchError(
            f"Lambda must be {P.n}x{P.m}, got {lam.rows}x{lam.cols}"
        )
    lam_v = select_columns(lam, v.index_set)
    det = int(lam_v.det())
    if abs(det) != 1:
        raise IndependenceError(
            f"det Lambda_v = {det} at vertex {one_based(v.index_set)}"
        )
    return ImmutableMatrix(unimodular_inverse(lam_v) * lam)


def restrict_character(c: IntMatrix, a: CharLift | Sequence[int]) -> Character:
    """Restriction ``C^T a`` of a character of ``T^m`` to K."""
    values = a.a if isinstance(a, CharLift) else tuple(a)
    if len(values) != c.rows:
        raise DimensionMismatchError(
            f"character of T^m needs {c.rows} entries, got {len(values)}"
        )
    if c.cols == 0:
        return Character(coords=())
    b = c.T * int_matrix([[x] for x in values], cols=1)
    return Character(coords=as_int_tuple(b))
