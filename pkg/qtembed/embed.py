"""
Equivariant monomial embeddings.

Given a polytope P, characteristic data (Lambda, C) and a character ``b~`` of
the kernel torus K, this module builds the character set X: one vertex
character ``b_v`` per vertex and one edge character ``a_{v,r}`` per incident
vertex-edge pair. The monomials with these exponents, together with the
moment map, embed the quasitoric manifold into ``R^n x C^(q-1)`` (trivial
character) or ``P x CP^(q-1)``.
"""

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from itertools import combinations
from typing import Literal

import numpy as np
import structlog
from pydantic import BaseModel, Field
from sympy import ImmutableMatrix

from .chardata import Character, CharMatrix, restrict_character
from .errors import (
    CrossCheckError,
    DimensionMismatchError,
    EmbeddingError,
    IndependenceError,
    NotUnimodularError,
)
from .exactlin import (
    as_int_tuple,
    delete_rows,
    int_matrix,
    integer_kernel_basis,
    primitive_vector,
    select_columns,
    sign_normalized,
    unimodular_inverse,
    zero_extend,
)
from .momentangle import moment_map
from .monomials import Monomial, evaluate_monomial, format_monomial
from .polytope import Edge, FaceLattice, HPolytope, Vertex, enumerate_faces
from .reports import Report, one_based

log = structlog.get_logger(__name__)

Mode = Literal["affine", "projective"]


@dataclass(frozen=True)
class EdgeDirection:
    """
    Primitive weight ``u_r`` of an edge, normalised to a positive first entry.

    Attributes:
        edge: The edge
        u: ``alpha^T Lambda``, zero on the facets containing the edge
        alpha: Primitive vector orthogonal to the columns of Lambda on the edge
    """

    edge: Edge
    u: tuple[int, ...]
    alpha: tuple[int, ...]


@dataclass(frozen=True)
class EdgeCharacter:
    monomial: Monomial
    degenerate: bool
    collinear: bool


@dataclass(frozen=True)
class Source:
    """Where a character came from: a vertex, or a vertex and one of its edges."""

    kind: Literal["vertex", "edge"]
    vertex: tuple[int, ...]
    edge: tuple[int, ...] | None = None

    def describe(self) -> str:
        if self.kind == "vertex":
            return f"k_v v={one_based(self.vertex)}"
        return f"k_v,r v={one_based(self.vertex)} r={one_based(self.edge or ())}"


@dataclass
class CharSetEntry:
    """
    One distinct element of the character set.

    Attributes:
        monomial: Exponent vector
        sources: Every vertex or vertex-edge pair producing this vector
    """

    monomial: Monomial
    sources: list[Source] = field(default_factory=list)

    @property
    def kind(self) -> str:
        return self.sources[0].kind


@dataclass
class EmbeddingSpec:
    """
    The character set X of a character, with provenance.

    Attributes:
        mode: ``affine`` (trivial character only) or ``projective``
        character: The character of K
        c_source: Which C the character coordinates refer to
        entries: Deduplicated characters, vertex entries first
        edge_directions: ``u_r`` for every edge, in edge order
        torus_rep: T^n weight of every entry (relative to the first entry
            in projective mode)
        diagnostics: Cross-checks run while building the set
    """

    mode: Mode
    character: Character
    c_source: str
    n: int
    m: int
    f0: int
    f1: int
    entries: list[CharSetEntry]
    edge_directions: list[EdgeDirection]
    torus_rep: list[tuple[int, ...]]
    diagnostics: Report

    @property
    def q(self) -> int:
        return len(self.entries)

    def monomials(self) -> list[Monomial]:
        return [e.monomial for e in self.entries]


class CertificateItem(BaseModel):
    vertex: list[int]
    entry: int


class EmbeddingDescription(BaseModel):
    """
    Target space and coordinate functions of an embedding.

    Attributes:
        mode: ``affine`` or ``projective``
        target: Human readable target space
        n: Dimension of the polytope
        q: Size of the character set
        c_source: Which C the character coordinates refer to
        character: Character coordinates
        coordinates: Exponent vectors of the coordinate monomials
        strings: The same monomials in the z/w grammar
        weights: T^n weights of the coordinates
        provenance: Source description of every coordinate
        certificate: For every vertex, a coordinate not vanishing near it
    """

    mode: Mode
    target: str
    n: int
    q: int
    c_source: str
    character: list[int]
    coordinates: list[list[int]]
    strings: list[str]
    weights: list[list[int]]
    provenance: list[list[str]]
    certificate: list[CertificateItem] = Field(default_factory=list)


def vertex_character(cm: CharMatrix, character: Character, vertex: Vertex) -> Monomial:
    """
    The vertex character ``b_v``.

    It is ``(C_I^T)^-1 b~`` put back into ``Z^m`` with zeros at the facets of
    the vertex, so that ``C^T b_v = b~``.

    Raises:
        IndependenceError: If ``C`` without the rows of the vertex is not
            unimodular
    """
    if len(character.coords) != cm.k:
        raise DimensionMismatchError(
            f"character has {len(character.coords)} entries, K has rank {cm.k}"
        )
    if cm.k == 0:
        return Monomial((0,) * cm.m)
    c_i = delete_rows(cm.c, vertex.index_set)
    try:
        inverse = unimodular_inverse(c_i.T)
    except NotUnimodularError as exc:
        raise IndependenceError(
            f"C_I is not unimodular at vertex {one_based(vertex.index_set)} "
            f"(det = {exc.det})"
        ) from exc
    y = as_int_tuple(inverse * character.column())
    b_v = zero_extend(y, cm.m, vertex.index_set)
    if restrict_character(cm.c, b_v) != character:
        raise EmbeddingError(f"vertex character {b_v} does not restrict to {character}")
    return Monomial(b_v)


def _direction_from_lambda(
    cm: CharMatrix, edge: Edge
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    lam_j = select_columns(cm.lam, edge.index_set)
    basis = integer_kernel_basis(ImmutableMatrix(lam_j.T))
    if basis.cols != 1:
        raise IndependenceError(
            f"columns of Lambda on edge {one_based(edge.index_set)} are dependent"
        )
    alpha = primitive_vector(as_int_tuple(basis))
    u = as_int_tuple(int_matrix([alpha]) * cm.lam)
    if sign_normalized(u) != u:
        alpha = tuple(-x for x in alpha)
        u = tuple(-x for x in u)
    return u, alpha


def _direction_from_kernel(cm: CharMatrix, edge: Edge) -> tuple[int, ...]:
    c_j = delete_rows(cm.c, edge.index_set)
    basis = integer_kernel_basis(ImmutableMatrix(c_j.T))
    if basis.cols != 1:
        raise IndependenceError(
            f"cokernel of C_J on edge {one_based(edge.index_set)} has rank {basis.cols}"
        )
    y = primitive_vector(as_int_tuple(basis))
    return sign_normalized(zero_extend(y, cm.m, edge.index_set))


def edge_direction(cm: CharMatrix, edge: Edge) -> EdgeDirection:
    """
    The edge weight ``u_r``, computed from Lambda and cross-checked against C.

    Raises:
        CrossCheckError: If the two computations disagree
    """
    u, alpha = _direction_from_lambda(cm, edge)
    dual = _direction_from_kernel(cm, edge)
    if u != dual:
        raise CrossCheckError(
            f"edge {one_based(edge.index_set)}: alpha^T Lambda = {u} but the "
            f"cokernel of C_J gives {dual}"
        )
    return EdgeDirection(edge=edge, u=u, alpha=alpha)


def edge_character(
    cm: CharMatrix,
    character: Character,
    vertex: Vertex,
    edge: Edge,
    direction: EdgeDirection | None = None,
    known: Mapping[Vertex, Monomial] | None = None,
) -> EdgeCharacter:
    """
    The edge character ``a_{v,r}``.

    This is the lattice point next to ``b_v`` on the ray towards ``b_v'``,
    where ``v'`` is the other end of the edge, or ``b_v + u_r`` when both
    vertex characters agree. ``known`` holds vertex characters computed
    earlier for the same character.
    """
    direction = direction or edge_direction(cm, edge)
    known = known or {}
    other = edge.other(vertex)
    b_v = (known.get(vertex) or vertex_character(cm, character, vertex)).exponents
    b_w = (known.get(other) or vertex_character(cm, character, other)).exponents
    if b_v == b_w:
        a = tuple(x + y for x, y in zip(b_v, direction.u))
        degenerate, collinear = True, True
    else:
        step = primitive_vector([y - x for x, y in zip(b_v, b_w)])
        a = tuple(x + y for x, y in zip(b_v, step))
        degenerate = False
        collinear = step in (direction.u, tuple(-x for x in direction.u))
    if restrict_character(cm.c, a) != character:
        raise EmbeddingError(f"edge character {a} does not restrict to {character}")
    return EdgeCharacter(
        monomial=Monomial(a), degenerate=degenerate, collinear=collinear
    )


def _weight(cm: CharMatrix, vertex: Vertex, a: Sequence[int]) -> tuple[int, ...]:
    """``alpha`` with ``alpha^T Lambda = a`` for ``a`` in the image of Lambda^T."""
    lam_v = select_columns(cm.lam, vertex.index_set)
    a_v = int_matrix([[a[i] for i in vertex.index_set]])
    alpha = as_int_tuple(a_v * unimodular_inverse(lam_v))
    if as_int_tuple(int_matrix([alpha]) * cm.lam) != tuple(a):
        raise EmbeddingError(f"{tuple(a)} is not a weight of the T^n action")
    return alpha


def torus_weights(
    cm: CharMatrix, lattice: FaceLattice, monomials: Sequence[Monomial], mode: Mode
) -> list[tuple[int, ...]]:
    """
    Weights of the induced ``T^n`` action on the coordinates.

    In affine mode every coordinate is a weight vector itself; in projective
    mode weights are taken relative to the first coordinate.
    """
    vertex = lattice.vertices[0]
    if mode == "affine":
        return [_weight(cm, vertex, mono.exponents) for mono in monomials]
    first = monomials[0].exponents
    return [
        _weight(cm, vertex, [x - y for x, y in zip(mono.exponents, first)])
        for mono in monomials
    ]


def build_character_set(
    P: HPolytope,
    cm: CharMatrix,
    character: Character,
    lattice: FaceLattice | None = None,
    mode: Mode | None = None,
) -> EmbeddingSpec:
    """
    The character set X of ``character``.

    Vertex characters come first in vertex order, then edge characters in
    (vertex, edge) order; repeated exponent vectors are merged and keep every
    source.

    Raises:
        EmbeddingError: If affine mode is asked for a nontrivial character
            or a size bound is violated
    """
    lattice = lattice or enumerate_faces(P)
    mode = mode or ("affine" if character.is_trivial else "projective")
    if mode == "affine" and not character.is_trivial:
        raise EmbeddingError("affine embeddings need the trivial character")

    diagnostics = Report(check="character_set")
    directions = {e: edge_direction(cm, e) for e in lattice.edges}
    entries: dict[tuple[int, ...], CharSetEntry] = {}

    def add(mono: Monomial, source: Source) -> None:
        entry = entries.setdefault(mono.exponents, CharSetEntry(monomial=mono))
        entry.sources.append(source)

    known = {v: vertex_character(cm, character, v) for v in lattice.vertices}
    for v in lattice.vertices:
        add(known[v], Source("vertex", v.index_set))
    for v in lattice.vertices:
        for e in sorted(lattice.edges_at(v)):
            result = edge_character(cm, character, v, e, directions[e], known)
            if not result.collinear:
                diagnostics.fail(
                    "not_collinear",
                    f"b_v' - b_v is not a multiple of u_r on edge "
                    f"{one_based(e.index_set)}",
                    vertex=one_based(v.index_set),
                )
            add(result.monomial, Source("edge", v.index_set, e.index_set))

    spec_entries = list(entries.values())
    q = len(spec_entries)
    if q > lattice.f0 * (lattice.n + 1):
        bound = lattice.f0 * (lattice.n + 1)
        raise EmbeddingError(f"q = {q} exceeds f0 (n + 1) = {bound}")
    if character.is_trivial and q > lattice.f1 + 1:
        raise EmbeddingError(f"q = {q} exceeds f1 + 1 = {lattice.f1 + 1}")

    spec = EmbeddingSpec(
        mode=mode,
        character=character,
        c_source=cm.c_source,
        n=lattice.n,
        m=lattice.m,
        f0=lattice.f0,
        f1=lattice.f1,
        entries=spec_entries,
        edge_directions=[directions[e] for e in lattice.edges],
        torus_rep=torus_weights(cm, lattice, [e.monomial for e in spec_entries], mode),
        diagnostics=diagnostics,
    )
    log.info(
        "character_set_built",
        name=P.name,
        mode=mode,
        q=q,
        c_source=cm.c_source,
        failures=len(diagnostics.failures),
    )
    return spec


def _certificate(spec: EmbeddingSpec, indices: Sequence[int]) -> list[CertificateItem]:
    """For every vertex, a coordinate whose support avoids the facets of the vertex."""
    vertices = sorted(
        {s.vertex for e in spec.entries for s in e.sources if s.kind == "vertex"}
    )
    items = []
    for vertex in vertices:
        facets = set(vertex)
        hit = next(
            (
                pos
                for pos, k in enumerate(indices)
                if not any(spec.entries[k].monomial.exponents[i] for i in facets)
            ),
            None,
        )
        if hit is None:
            raise EmbeddingError(
                f"every coordinate vanishes at vertex {one_based(vertex)}"
            )
        items.append(CertificateItem(vertex=one_based(vertex), entry=hit))
    return items


def assemble_embedding(spec: EmbeddingSpec) -> EmbeddingDescription:
    """
    Describe the embedding defined by a character set.

    In affine mode the coordinates are the nonconstant entries and the target
    is ``R^n x C^(q-1)``; in projective mode all entries are homogeneous
    coordinates of ``CP^(q-1)``.

    Raises:
        EmbeddingError: If the entries do not fit the mode or some vertex has
            no coordinate that stays nonzero near it
    """
    if spec.mode == "affine":
        if not spec.character.is_trivial:
            raise EmbeddingError("affine embeddings need the trivial character")
        indices = [k for k, e in enumerate(spec.entries) if not e.monomial.is_constant]
        if len(indices) != spec.q - 1:
            raise EmbeddingError(
                "affine character set must contain exactly one constant"
            )
        target = f"R^{spec.n} x C^{spec.q - 1}"
        certificate = []
    else:
        indices = list(range(spec.q))
        target = f"P x CP^{spec.q - 1}"
        certificate = _certificate(spec, indices)

    monomials = [spec.entries[k].monomial for k in indices]
    return EmbeddingDescription(
        mode=spec.mode,
        target=target,
        n=spec.n,
        q=spec.q,
        c_source=spec.c_source,
        character=list(spec.character.coords),
        coordinates=[list(mono.exponents) for mono in monomials],
        strings=[format_monomial(mono.exponents) for mono in monomials],
        weights=[list(spec.torus_rep[k]) for k in indices],
        provenance=[[s.describe() for s in spec.entries[k].sources] for k in indices],
        certificate=certificate,
    )


def evaluate_embedding(
    description: EmbeddingDescription, P: HPolytope, z: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """
    Image of a point of the moment-angle manifold.

    Returns the moment map value in ``R^n`` and the coordinate vector; in
    projective mode the latter is scaled to unit norm.
    """
    x = moment_map(P, z)
    values = np.array(
        [evaluate_monomial(a, z) for a in description.coordinates], dtype=complex
    )
    if description.mode == "projective":
        norm = np.linalg.norm(values)
        if norm == 0:
            raise EmbeddingError("all homogeneous coordinates vanish")
        values = values / norm
    return x, values


def unit_matrix_check(
    lattice: FaceLattice, directions: Sequence[EdgeDirection]
) -> Report:
    """
    At every vertex, ``u_r`` is +-1 on the facet the edge leaves and 0 on the
    facets containing the edge.
    """
    by_edge = {d.edge: d for d in directions}
    report = Report(check="unit_matrix")
    for v in lattice.vertices:
        for e in lattice.edges_at(v):
            u = by_edge[e].u
            k = e.leaving_facet(v)
            if abs(u[k]) != 1:
                report.fail(
                    "unit_entry",
                    f"u_r has entry {u[k]} at facet {k + 1}",
                    vertex=one_based(v.index_set),
                    facet=k + 1,
                )
            if any(u[j] for j in e.index_set):
                report.fail(
                    "coordinate_not_zero",
                    f"u_r is nonzero on a facet of edge {one_based(e.index_set)}",
                    vertex=one_based(v.index_set),
                )
    return report


def exact_sequence_check(
    lattice: FaceLattice, cm: CharMatrix, directions: Sequence[EdgeDirection]
) -> Report:
    """
    For every vertex v and every face ``F_I`` through it: the rows ``u_r`` of
    the edges of ``F_I`` at v, with the columns I deleted, are annihilated by
    ``C_I`` and restrict to a +-1 diagonal on the remaining facets of v.
    """
    by_edge = {d.edge: d for d in directions}
    report = Report(check="exact_sequence")
    checked = 0
    for v in lattice.vertices:
        edges = {e.leaving_facet(v): e for e in lattice.edges_at(v)}
        for size in range(len(v.index_set) + 1):
            for face in combinations(v.index_set, size):
                free = [k for k in v.index_set if k not in face]
                if not free:
                    continue
                keep = [j for j in range(cm.m) if j not in face]
                rows = int_matrix(
                    [[by_edge[edges[k]].u[j] for j in keep] for k in free]
                )
                c_i = delete_rows(cm.c, face)
                checked += 1
                if cm.k and any(x != 0 for x in rows * c_i):
                    report.fail(
                        "not_exact",
                        f"Lambda_I C_I != 0 for face {one_based(face)}",
                        vertex=one_based(v.index_set),
                    )
                block = [[by_edge[edges[k]].u[j] for j in free] for k in free]
                diagonal = all(
                    abs(block[r][s]) == (1 if r == s else 0)
                    for r in range(len(free))
                    for s in range(len(free))
                )
                if not diagonal:
                    report.fail(
                        "no_unit_block",
                        f"no unit block of rank {len(free)} for face {one_based(face)}",
                        vertex=one_based(v.index_set),
                    )
    report.details["faces_checked"] = checked
    return report
