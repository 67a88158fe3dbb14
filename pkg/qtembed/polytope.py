"""
Simple polytopes given by exact H-representations.

A polytope is ``P = {x : A x + b >= 0}`` with ``A`` an m x n rational matrix.
Facet ``i`` is the set where row ``i`` is tight. Facet indices are 0-based
in code and 1-based whenever they are shown to a user.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import structlog
from sympy import ImmutableMatrix, Matrix, Rational

from .errors import CutError, DimensionMismatchError, InvalidPolytopeError
from .exactlin import IntMatrix, RatMatrix, column, rat_matrix, solve_rational
from .reports import Report, one_based

log = structlog.get_logger(__name__)

Point = tuple[Rational, ...]


@dataclass(frozen=True)
class HPolytope:
    """
    Polytope ``{x : A x + b >= 0}``.

    Attributes:
        A: m x n rational matrix, one row per facet
        b: m x 1 rational column
        name: Optional label used in reports
    """

    A: RatMatrix
    b: RatMatrix
    name: str = ""

    def __post_init__(self) -> None:
        if self.b.cols != 1 or self.b.rows != self.A.rows:
            raise DimensionMismatchError(
                f"b must be a column of length {self.A.rows}, got {self.b.shape}"
            )

    @property
    def m(self) -> int:
        return self.A.rows

    @property
    def n(self) -> int:
        return self.A.cols

    def row(self, i: int) -> RatMatrix:
        return self.A.row(i)

    def slack(self, x: Sequence) -> Point:
        return image_point(self, x)


@dataclass(frozen=True, order=True)
class Vertex:
    """
    Vertex ``F_I`` of a simple polytope.

    Attributes:
        index_set: Sorted facets containing the vertex, exactly n of them
        coords: Exact coordinates of the vertex
    """

    index_set: tuple[int, ...]
    coords: Point = field(compare=False)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True, order=True)
class Edge:
    """
    Edge ``F_J`` joining two vertices.

    Attributes:
        index_set: Sorted facets containing the edge, n - 1 of them
        endpoints: The two vertices, in index-set order
    """

    index_set: tuple[int, ...]
    endpoints: tuple[Vertex, Vertex]

    def other(self, vertex: Vertex) -> Vertex:
        v0, v1 = self.endpoints
        if vertex == v0:
            return v1
        if vertex == v1:
            return v0
        raise ValueError(f"{vertex} is not an endpoint of edge {self.index_set}")

    def leaving_facet(self, vertex: Vertex) -> int:
        """The facet of ``vertex`` that does not contain the edge."""
        (k,) = set(vertex.index_set) - set(self.index_set)
        return k


@dataclass(frozen=True)
class FaceLattice:
    """
    Vertices and edges of a simple polytope, in canonical sorted order.

    Attributes:
        n: Dimension
        m: Number of facets
        vertices: Vertices sorted by index set
        edges: Edges sorted by index set
    """

    n: int
    m: int
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]

    @property
    def f0(self) -> int:
        return len(self.vertices)

    @property
    def f1(self) -> int:
        return len(self.edges)

    def edges_at(self, vertex: Vertex) -> list[Edge]:
        return [e for e in self.edges if vertex in e.endpoints]

    def vertex(self, index_set: Sequence[int]) -> Vertex:
        key = tuple(sorted(index_set))
        for v in self.vertices:
            if v.index_set == key:
                return v
        raise KeyError(key)


def image_point(P: HPolytope, x: Sequence) -> Point:
    """The affine map ``x -> A x + b``; ``x`` lies in P iff every entry is >= 0."""
    if len(x) != P.n:
        raise DimensionMismatchError(f"point has {len(x)} coordinates, expected {P.n}")
    y = P.A * column(x) + P.b
    return tuple(Rational(v) for v in y)


def _candidates(P: HPolytope) -> dict[Point, frozenset[int]]:
    """Feasible basic solutions mapped to the set of rows tight at them."""
    found: dict[Point, frozenset[int]] = {}
    rows = list(range(P.m))
    all_cols = list(range(P.n))
    for subset in combinations(rows, P.n):
        a_sub = P.A.extract(list(subset), all_cols)
        if a_sub.det() == 0:
            continue
        x = solve_rational(a_sub, -P.b.extract(list(subset), [0]))
        point = tuple(Rational(v) for v in x)
        if point in found:
            continue
        slack = image_point(P, point)
        if all(s >= 0 for s in slack):
            found[point] = frozenset(i for i, s in enumerate(slack) if s == 0)
    return found


def _affine_rank(points: list[Point]) -> int:
    if len(points) < 2:
        return 0
    base = points[0]
    diffs = [[p[k] - base[k] for k in range(len(base))] for p in points[1:]]
    return Matrix(diffs).rank()


def validate(P: HPolytope) -> Report:
    """
    Check that P is bounded, full dimensional, simple and irredundant.

    Every problem found is listed in the returned report; nothing is raised.
    """
    report = Report(check="polytope", details={"n": P.n, "m": P.m})
    found = _candidates(P)
    if not found:
        report.fail("no_vertices", "polytope has no vertices (empty or unbounded)")
        return report

    for point, tight in sorted(found.items(), key=lambda kv: sorted(kv[1])):
        if len(tight) > P.n:
            report.fail(
                "non_simple",
                f"vertex {tuple(str(c) for c in point)} lies on {len(tight)} facets",
                vertex=one_based(tight),
            )
            continue
        index = sorted(tight)
        a_inv = P.A.extract(index, list(range(P.n))).inv()
        for k in range(P.n):
            direction = a_inv[:, k]
            others = [i for i in range(P.m) if i not in tight]
            if all((P.row(i) * direction)[0] >= 0 for i in others):
                report.fail(
                    "unbounded",
                    f"ray leaving facet {index[k] + 1} at vertex "
                    f"{tuple(str(c) for c in point)} never meets another facet",
                    vertex=one_based(index),
                )
                break

    points = list(found)
    if _affine_rank(points) < P.n:
        report.fail("not_full_dimensional", "vertices span less than the full space")

    on_facet: dict[int, frozenset[Point]] = {}
    for i in range(P.m):
        members = [p for p, tight in found.items() if i in tight]
        on_facet[i] = frozenset(members)
        if not members:
            report.fail(
                "redundant_facet", f"facet {i + 1} contains no vertex", facet=i + 1
            )
        elif _affine_rank(members) < P.n - 1:
            report.fail(
                "redundant_facet",
                f"inequality {i + 1} only supports a lower dimensional face",
                facet=i + 1,
            )
        else:
            duplicate = next(
                (j for j in range(i) if on_facet[j] == on_facet[i]), None
            )
            if duplicate is not None:
                report.fail(
                    "redundant_facet",
                    f"inequality {i + 1} defines the same facet as {duplicate + 1}",
                    facet=i + 1,
                )

    report.details["f0"] = len(found)
    return report


def enumerate_faces(P: HPolytope) -> FaceLattice:
    """
    Vertices and edges of a valid polytope.

    Raises:
        InvalidPolytopeError: If ``validate`` reports any failure
    """
    report = validate(P)
    if not report.passed:
        raise InvalidPolytopeError(report)

    vertices = sorted(
        Vertex(index_set=tuple(sorted(tight)), coords=point)
        for point, tight in _candidates(P).items()
    )
    edges = []
    for v0, v1 in combinations(vertices, 2):
        shared = set(v0.index_set) & set(v1.index_set)
        if len(shared) == P.n - 1:
            edges.append(Edge(index_set=tuple(sorted(shared)), endpoints=(v0, v1)))
    edges.sort()

    lattice = FaceLattice(n=P.n, m=P.m, vertices=tuple(vertices), edges=tuple(edges))
    log.debug("faces_enumerated", name=P.name, f0=lattice.f0, f1=lattice.f1, m=P.m)
    return lattice


def face_vertices(lattice: FaceLattice, index_set: Sequence[int]) -> list[Vertex]:
    """Vertices of the face ``F_I``, i.e. those lying on every facet of I."""
    wanted = set(index_set)
    return [v for v in lattice.vertices if wanted <= set(v.index_set)]


def face_edges(lattice: FaceLattice, index_set: Sequence[int]) -> list[Edge]:
    wanted = set(index_set)
    return [e for e in lattice.edges if wanted <= set(e.index_set)]


def cut_codim2_face(
    P: HPolytope, lam: IntMatrix, i: int, j: int, eps
) -> tuple[HPolytope, IntMatrix]:
    """
    Cut off a neighbourhood of the codimension-2 face ``F_i & F_j``.

    The new inequality is row i plus row j with offset ``b_i + b_j - eps``;
    the characteristic matrix gains the column ``lambda_i + lambda_j``.

    Raises:
        CutError: If the face is empty, ``eps`` is not positive, or the cut
            reaches beyond the face (the result is not simple or has the
            wrong number of vertices and edges)
    """
    eps = Rational(eps)
    if eps <= 0:
        raise CutError(f"cut depth must be positive, got {eps}")
    if i == j or not (0 <= i < P.m and 0 <= j < P.m):
        raise CutError(f"facets {i + 1} and {j + 1} do not name a codimension-2 face")
    if lam.shape != (P.n, P.m):
        raise DimensionMismatchError(
            f"characteristic matrix must be {P.n}x{P.m}, got {lam.rows}x{lam.cols}"
        )

    lattice = enumerate_faces(P)
    face_f0 = len(face_vertices(lattice, (i, j)))
    face_f1 = len(face_edges(lattice, (i, j)))
    if face_f0 == 0:
        raise CutError(f"face F_{{{i + 1},{j + 1}}} is empty")

    new_row = P.row(i) + P.row(j)
    new_b = P.b[i] + P.b[j] - eps
    cut = HPolytope(
        A=ImmutableMatrix(P.A.col_join(new_row)),
        b=ImmutableMatrix(P.b.col_join(Matrix([[new_b]]))),
        name=P.name,
    )
    new_lam = ImmutableMatrix(lam.row_join(lam[:, i] + lam[:, j]))

    report = validate(cut)
    if not report.passed:
        reasons = "; ".join(f.message for f in report.failures)
        raise CutError(f"cut depth {eps} too large: {reasons}")
    result = enumerate_faces(cut)
    expected = (lattice.f0 + face_f0, lattice.f1 + face_f1 + face_f0)
    if (result.f0, result.f1) != expected:
        raise CutError(
            f"cut depth {eps} too large: got f0={result.f0}, f1={result.f1}, "
            f"expected f0={expected[0]}, f1={expected[1]}"
        )
    log.debug("face_cut", facets=(i + 1, j + 1), eps=str(eps), f0=result.f0)
    return cut, new_lam


def simplex(n: int) -> HPolytope:
    """Standard simplex: ``x_k >= 0`` and ``1 - sum x_k >= 0``."""
    rows = [[int(r == c) for c in range(n)] for r in range(n)] + [[-1] * n]
    return HPolytope(
        A=rat_matrix(rows), b=column([0] * n + [1]), name=f"simplex{n}"
    )


def cube(n: int, side=1) -> HPolytope:
    """Cube ``[0, side]^n``; facets ``x_k >= 0`` first, then ``side - x_k >= 0``."""
    eye = [[int(r == c) for c in range(n)] for r in range(n)]
    rows = eye + [[-x for x in r] for r in eye]
    return HPolytope(
        A=rat_matrix(rows), b=column([0] * n + [side] * n), name=f"cube{n}"
    )


K5_LAMBDA = [
    [1, 0, 0, -1, 0, 0, 0, 1, -1],
    [0, 1, 0, 0, -1, 0, -1, 0, 1],
    [0, 0, 1, 0, 0, -1, -1, 1, 0],
]
K5_B = [0, 0, 0, 3, 3, 3, 5, -1, 2]


def stasheff_k5() -> HPolytope:
    """The 3-dimensional associahedron as a lattice polytope with ``A = Lambda^T``."""
    a = rat_matrix(K5_LAMBDA).T
    return HPolytope(A=ImmutableMatrix(a), b=column(K5_B), name="K5")


def interior_point(P: HPolytope, rng: np.random.Generator) -> Point:
    """Exact interior point: a random strictly positive average of all vertices."""
    lattice = enumerate_faces(P)
    weights = [int(w) for w in rng.integers(1, 10, size=lattice.f0)]
    total = sum(weights)
    return tuple(
        Rational(sum(w * v.coords[k] for w, v in zip(weights, lattice.vertices)), total)
        for k in range(P.n)
    )


def random_truncated_cube(
    n: int, cuts: int, rng: np.random.Generator, side: int = 3
) -> tuple[HPolytope, IntMatrix]:
    """
    A 2-truncated cube: ``cuts`` successive codimension-2 cuts of ``[0, side]^n``.

    Each cut picks a random nonempty codimension-2 face and starts at depth 1,
    halving the depth until the cut is admissible. The characteristic matrix
    starts as ``A^T`` of the cube and stays equal to ``A^T`` of the result.
    """
    P = cube(n, side)
    lam = ImmutableMatrix(P.A.T)
    for _ in range(cuts):
        lattice = enumerate_faces(P)
        faces = sorted(
            {
                pair
                for v in lattice.vertices
                for pair in combinations(v.index_set, 2)
            }
        )
        i, j = faces[int(rng.integers(len(faces)))]
        eps = Rational(1)
        for _ in range(32):
            try:
                P, lam = cut_codim2_face(P, lam, i, j, eps)
                break
            except CutError:
                eps /= 2
        else:
            raise CutError(f"no admissible depth for face F_{{{i + 1},{j + 1}}}")
    return HPolytope(A=P.A, b=P.b, name=f"truncated_cube{n}_{cuts}"), lam
