"""
Report models.

Validation and verification routines return these pydantic models instead
of raising, so that callers (the CLI, the HTTP app, tests) can list every
failure at once and serialise the result with ``model_dump_json``.
"""

from typing import Any

from pydantic import BaseModel, Field, computed_field


class Failure(BaseModel):
    """
    A single failed check.

    Attributes:
        code: Short machine-readable reason, e.g. ``non_simple``
        message: Human readable description
        vertex: 1-based facet index set of the vertex involved, if any
        facet: 1-based facet index involved, if any
        trial: Index of the random trial that failed, if any
    """

    code: str
    message: str
    vertex: list[int] | None = None
    facet: int | None = None
    trial: int | None = None


class Report(BaseModel):
    """
    Outcome of one named check.

    Attributes:
        check: Name of the check
        failures: Every failure found; empty when the check passed
        inconclusive: Number of trials that were neither a pass nor a failure
        details: Extra values worth reporting (counts, maxima, witnesses)
    """

    check: str
    failures: list[Failure] = Field(default_factory=list)
    inconclusive: int = 0
    details: dict[str, Any] = Field(default_factory=dict)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, code: str, message: str, **where: Any) -> None:
        self.failures.append(Failure(code=code, message=message, **where))


class ReportBundle(BaseModel):
    """Several reports produced by one command."""

    name: str
    reports: list[Report] = Field(default_factory=list)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def get(self, check: str) -> Report:
        for report in self.reports:
            if report.check == check:
                return report
        raise KeyError(check)


def one_based(index_set) -> list[int]:
    """Facet index set as printed: sorted and 1-based."""
    return [i + 1 for i in sorted(index_set)]


class VertexRecord(BaseModel):
    index_set: list[int]
    coords: list[str]


class EdgeRecord(BaseModel):
    index_set: list[int]
    endpoints: list[list[int]]


class FacesReport(BaseModel):
    """Face lattice as printed: 1-based index sets and exact coordinates."""

    name: str
    n: int
    m: int
    f0: int
    f1: int
    vertices: list[VertexRecord]
    edges: list[EdgeRecord]

    @classmethod
    def from_lattice(cls, name: str, lattice) -> "FacesReport":
        return cls(
            name=name,
            n=lattice.n,
            m=lattice.m,
            f0=lattice.f0,
            f1=lattice.f1,
            vertices=[
                VertexRecord(
                    index_set=one_based(v.index_set), coords=[str(c) for c in v.coords]
                )
                for v in lattice.vertices
            ],
            edges=[
                EdgeRecord(
                    index_set=one_based(e.index_set),
                    endpoints=[one_based(v.index_set) for v in e.endpoints],
                )
                for e in lattice.edges
            ],
        )


class QuadricsReport(BaseModel):
    name: str
    c_p: list[list[int]]
    rhs: list[str]
    equations: list[str]

    @classmethod
    def from_system(cls, name: str, system) -> "QuadricsReport":
        return cls(
            name=name,
            c_p=[[int(x) for x in system.c_p.row(j)] for j in range(system.c_p.rows)],
            rhs=[str(v) for v in system.rhs],
            equations=system.equations(),
        )


class ToricReport(BaseModel):
    """
    Outcome of the toric check.

    Attributes:
        passed: Whether B and D exist and b is integral
        integral_b: Whether b is integral
        B: The matrix B, when found
        D: Diagonal signs of D, when found
        k_tilde: Restriction of b to K, when b is integral
        k_embedding: Restriction of D b to K, the character behind q
        reason: Why the check failed
        q: Size of the lattice character set, when the check passed
        edge_lengths: Lattice length of every edge image, when the check passed
    """

    passed: bool
    integral_b: bool
    B: list[list[int]] | None = None
    D: list[int] | None = None
    k_tilde: list[int] | None = None
    k_embedding: list[int] | None = None
    reason: str = ""
    q: int | None = None
    edge_lengths: list[int] | None = None
