"""
qtembed

Equivariant embeddings of quasitoric manifolds: exact polytope and
characteristic-matrix data in, monomial embeddings and moment-angle quadrics
out, with a numerical verification harness.
"""

from .chardata import Character, CharLift, CharMatrix
from .document import InputDocument, dump_document, load_document, parse_document
from .embed import (
    EmbeddingDescription,
    EmbeddingSpec,
    assemble_embedding,
    build_character_set,
)
from .errors import QtembedError
from .momentangle import QuadricSystem, ZPoint
from .monomials import Monomial
from .polytope import Edge, FaceLattice, HPolytope, Vertex
from .reports import Failure, Report, ReportBundle
from .toric import ToricCertificate
from .verify import VerifyConfig

__all__ = [
    "HPolytope",
    "Vertex",
    "Edge",
    "FaceLattice",
    "CharMatrix",
    "Character",
    "CharLift",
    "Monomial",
    "EmbeddingSpec",
    "EmbeddingDescription",
    "build_character_set",
    "assemble_embedding",
    "QuadricSystem",
    "ZPoint",
    "ToricCertificate",
    "VerifyConfig",
    "InputDocument",
    "parse_document",
    "load_document",
    "dump_document",
    "Report",
    "ReportBundle",
    "Failure",
    "QtembedError",
]
