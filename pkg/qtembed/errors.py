"""
Exception hierarchy for qtembed.

Constructive operations raise one of the errors below; validation
operations return reports instead (see ``qtembed.reports``). The CLI maps
``InputDocumentError`` to exit code 2 and everything else to exit code 1.
"""


class QtembedError(Exception):
    """Base class for every error raised by qtembed."""


class InputDocumentError(QtembedError):
    """The input document could not be parsed or has inconsistent sizes."""


class DimensionMismatchError(QtembedError):
    """Operands have incompatible shapes."""


class SingularMatrixError(QtembedError):
    """A square matrix that must be invertible has zero determinant."""


class NotUnimodularError(QtembedError):
    """An integer matrix that must have determinant +-1 does not."""

    def __init__(self, det: int):
        super().__init__(f"not unimodular (det = {det})")
        self.det = det


class ZeroVectorError(QtembedError):
    """A primitive direction was requested for the zero vector."""


class InvalidPolytopeError(QtembedError):
    """The H-representation failed validation."""

    def __init__(self, report):
        reasons = "; ".join(f.message for f in report.failures)
        super().__init__(f"invalid polytope: {reasons}")
        self.report = report


class InvalidKernelError(QtembedError):
    """A user supplied kernel embedding C was rejected."""


class IndependenceError(QtembedError):
    """The independence condition fails at some vertex."""


class CrossCheckError(QtembedError):
    """Two independent computations of the same quantity disagree."""


class EmbeddingError(QtembedError):
    """A character set or embedding description violates its invariants."""


class ToricError(QtembedError):
    """The data does not satisfy the toric (Delzant-type) conditions."""


class NonInteriorPointError(QtembedError):
    """A point is outside the polytope or not in its interior."""


class CutError(QtembedError):
    """A codimension-2 cut could not be performed."""
