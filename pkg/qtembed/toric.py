"""
Toric case: lattice polytopes whose normals match the characteristic matrix.

When ``b`` is integral and ``A^T = B Lambda D`` with B unimodular and D a
diagonal sign matrix, the manifold is a projective toric variety and the
character set of ``C^T b`` consists of lattice points: the images ``A v + b``
of the vertices and their nearest lattice neighbours along the edges.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np
import structlog
from sympy import ImmutableMatrix, diag

from .chardata import Character, CharMatrix, restrict_character
from .embed import EmbeddingSpec, build_character_set
from .errors import NonInteriorPointError, ToricError
from .exactlin import (
    IntMatrix,
    as_int_tuple,
    is_integral,
    primitive_vector,
    select_columns,
    unimodular_inverse,
)
from .polytope import Edge, FaceLattice, HPolytope, enumerate_faces, image_point
from .reports import one_based

log = structlog.get_logger(__name__)


@dataclass(frozen=True)
class ToricCertificate:
    """
    Witness that ``(P, Lambda)`` is toric.

    Attributes:
        integral_b: Whether b is an integer vector
        B: Unimodular n x n matrix with ``A^T = B Lambda D``, if found
        D: Diagonal signs of D, if found
        k_tilde: Restriction of b to K, when b is integral
        reason: Why the check failed, empty when it passed
        k_embedding: Restriction of ``D b`` to K, the character the lattice
            embedding is built for; equals k_tilde when D is the identity
    """

    integral_b: bool
    B: IntMatrix | None
    D: tuple[int, ...] | None
    k_tilde: Character | None
    reason: str = ""
    k_embedding: Character | None = None

    @property
    def passed(self) -> bool:
        return self.integral_b and self.B is not None

    @property
    def is_identity(self) -> bool:
        return (
            self.B is not None
            and self.B == ImmutableMatrix.eye(self.B.rows)
            and all(d == 1 for d in self.D or ())
        )


def _find_b_and_d(
    a_t: IntMatrix, lam: IntMatrix, lattice: FaceLattice
) -> tuple[IntMatrix, tuple[int, ...]] | None:
    n, m = lam.shape
    vertex = lattice.vertices[0]
    index = list(vertex.index_set)
    rest = [j for j in range(m) if j not in vertex.index_set]
    lam_inv = unimodular_inverse(select_columns(lam, index))
    a_i = select_columns(a_t, index)
    for signs in product((1, -1), repeat=n):
        b = ImmutableMatrix(a_i * diag(*signs) * lam_inv)
        if not is_integral(b) or abs(b.det()) != 1:
            continue
        d = dict(zip(index, signs))
        for j in rest:
            image = b * lam[:, j]
            if image == a_t[:, j]:
                d[j] = 1
            elif image == -a_t[:, j]:
                d[j] = -1
            else:
                break
        else:
            return b, tuple(d[j] for j in range(m))
    return None


def check_toric(
    P: HPolytope, cm: CharMatrix, lattice: FaceLattice | None = None
) -> ToricCertificate:
    """
    Look for B and D with ``A^T = B Lambda D``.

    Sign patterns are tried in lexicographic order with +1 before -1 on the
    facets of the first vertex; the first pattern that works is reported.

    Raises:
        ToricError: If A is not integral
    """
    if not is_integral(P.A):
        raise ToricError("A is not integral, so it cannot be compared with Lambda")
    lattice = lattice or enumerate_faces(P)
    integral_b = is_integral(P.b)
    k_tilde = restrict_character(cm.c, as_int_tuple(P.b)) if integral_b else None
    found = _find_b_and_d(ImmutableMatrix(P.A.T), cm.lam, lattice)

    reasons = []
    if not integral_b:
        reasons.append("b is not integral")
    if found is None:
        reasons.append("no unimodular B and sign matrix D with A^T = B Lambda D")
    k_embedding = None
    if integral_b and found:
        signed_b = [d * x for d, x in zip(found[1], as_int_tuple(P.b))]
        k_embedding = restrict_character(cm.c, signed_b)
    certificate = ToricCertificate(
        integral_b=integral_b,
        B=found[0] if found else None,
        D=found[1] if found else None,
        k_tilde=k_tilde,
        reason="; ".join(reasons),
        k_embedding=k_embedding,
    )
    log.info(
        "toric_certificate",
        name=P.name,
        passed=certificate.passed,
        reason=certificate.reason,
    )
    return certificate


def lattice_embedding_set(
    P: HPolytope, cm: CharMatrix, lattice: FaceLattice | None = None
) -> EmbeddingSpec:
    """
    Character set of ``C^T b`` for data with ``Lambda = A^T`` and integral b.

    Besides building the set this asserts the lattice structure: every vertex
    character is ``A v + b``, has exactly n zero entries, and no entry of the
    set has a negative exponent.

    Raises:
        ToricError: If ``Lambda != A^T``, b is not integral, or the lattice
            structure does not hold
    """
    if cm.lam != ImmutableMatrix(P.A.T):
        raise ToricError("Lambda must equal A^T; normalise with check_toric first")
    if not is_integral(P.b):
        raise ToricError("b is not integral")
    lattice = lattice or enumerate_faces(P)
    k_tilde = restrict_character(cm.c, as_int_tuple(P.b))
    spec = build_character_set(P, cm, k_tilde, lattice, mode="projective")

    vertex_entries = {
        s.vertex: e.monomial.exponents
        for e in spec.entries
        for s in e.sources
        if s.kind == "vertex"
    }
    for v in lattice.vertices:
        expected = tuple(int(x) for x in image_point(P, v.coords))
        b_v = vertex_entries[v.index_set]
        if b_v != expected:
            raise ToricError(
                f"vertex character {b_v} at {one_based(v.index_set)} "
                f"is not A v + b = {expected}"
            )
        if sum(1 for x in b_v if x == 0) != P.n:
            raise ToricError(
                f"vertex character {b_v} does not have exactly {P.n} zeros"
            )
    for entry in spec.entries:
        if any(x < 0 for x in entry.monomial.exponents):
            raise ToricError(f"negative exponent in {entry.monomial.exponents}")
    return spec


def toric_embedding(
    P: HPolytope, cm: CharMatrix, lattice: FaceLattice | None = None
) -> tuple[EmbeddingSpec, ToricCertificate]:
    """
    Projective embedding of a toric pair by lattice points.

    The data is first normalised to ``Lambda' = A^T`` and ``C' = D C``; the
    lattice set built there, pulled back by D, must coincide with the
    character set of ``C^T D b`` for the original data.

    Raises:
        ToricError: If the data is not toric or the two sets differ
    """
    lattice = lattice or enumerate_faces(P)
    certificate = check_toric(P, cm, lattice)
    if not certificate.passed:
        raise ToricError(certificate.reason)
    signs = certificate.D or ()
    c_normal = ImmutableMatrix(diag(*signs) * cm.c) if cm.k else cm.c
    normal = CharMatrix(lam=ImmutableMatrix(P.A.T), c=c_normal, c_source=cm.c_source)
    lattice_spec = lattice_embedding_set(P, normal, lattice)
    pulled_back = {
        tuple(d * x for d, x in zip(signs, e.monomial.exponents))
        for e in lattice_spec.entries
    }

    character = certificate.k_embedding
    if character != lattice_spec.character:
        raise ToricError(f"character {character} differs from the normalised data")
    spec = build_character_set(P, cm, character, lattice, mode="projective")
    if {e.monomial.exponents for e in spec.entries} != pulled_back:
        raise ToricError("lattice character set does not match after pulling back by D")
    return spec, certificate


@dataclass(frozen=True)
class EdgeLatticePoints:
    """
    Lattice points of an edge image next to its ends.

    Attributes:
        edge: The edge
        length: Lattice length of ``A r + b``
        near: The lattice point after each endpoint, in endpoint order
    """

    edge: Edge
    length: int
    near: tuple[tuple[int, ...], tuple[int, ...]]


def lattice_points_on_edges(
    P: HPolytope, lattice: FaceLattice | None = None
) -> list[EdgeLatticePoints]:
    """For every edge, the lattice points of its image adjacent to the two vertices."""
    if not (is_integral(P.A) and is_integral(P.b)):
        raise ToricError("A and b must be integral")
    lattice = lattice or enumerate_faces(P)
    result = []
    for edge in lattice.edges:
        v0, v1 = edge.endpoints
        y0 = tuple(int(x) for x in image_point(P, v0.coords))
        y1 = tuple(int(x) for x in image_point(P, v1.coords))
        diff = [b - a for a, b in zip(y0, y1)]
        step = primitive_vector(diff)
        length = next(d // s for d, s in zip(diff, step) if s)
        near = (
            tuple(a + s for a, s in zip(y0, step)),
            tuple(b - s for b, s in zip(y1, step)),
        )
        result.append(EdgeLatticePoints(edge=edge, length=length, near=near))
    return result


def log_jacobian(beta: np.ndarray, l1: np.ndarray) -> np.ndarray:
    """
    ``G_ik = sum_j l1_ji l1_jk / beta_j``, the Jacobian of
    ``x -> sum_j l1_jk log beta_j(x)`` when ``beta`` is affine with linear
    part ``l1``.

    G is filled on and above the diagonal and mirrored, so it is exactly
    symmetric.

    Raises:
        NonInteriorPointError: If some beta_j <= 0 on a row where l1 is nonzero
    """
    beta = np.asarray(beta, dtype=float)
    l1 = np.asarray(l1, dtype=float)
    active = np.any(l1 != 0, axis=1)
    if np.any(beta[active] <= 0):
        raise NonInteriorPointError("beta must be positive on every active row")
    weights = np.zeros_like(beta)
    weights[active] = 1.0 / beta[active]
    size = l1.shape[1]
    g = np.zeros((size, size))
    for i in range(size):
        for k in range(i, size):
            g[i, k] = np.sum(l1[:, i] * l1[:, k] * weights)
            g[k, i] = g[i, k]
    return g


def log_modulus_map(P: HPolytope, x: np.ndarray) -> np.ndarray:
    """``x -> A^T log(A x + b)``; its Jacobian is ``log_jacobian(A x + b, A)``."""
    a = np.array(P.A.tolist(), dtype=float)
    b = np.array([float(v) for v in P.b])
    return a.T @ np.log(a @ np.asarray(x, dtype=float) + b)


def is_positive_definite(g: np.ndarray) -> bool:
    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        return False
    return True
