import pytest
from sympy import Rational

from qtembed.document import (
    InputDocument,
    dump_document,
    load_document,
    parse_document,
)
from qtembed.errors import InputDocumentError
from qtembed.polytope import K5_LAMBDA, cube, stasheff_k5

from .conftest import K5_C, K5_CHARACTER

SEGMENT = """\
# comment lines are skipped
name: segment
n: 1
m: 2
A: [
  [1],
  [-1]
]
b: [0, "1/2"]
Lambda: [[1, -1]]
"""


def test_parse_multiline_arrays():
    doc = parse_document(SEGMENT)
    assert doc.name == "segment"
    assert doc.A == [[1], [-1]]
    P = doc.polytope()
    assert list(P.b) == [0, Rational(1, 2)]
    assert doc.C is None and doc.character is None


def test_bundled_k5(k5_doc):
    assert k5_doc.name == "K5"
    assert k5_doc.lam() == stasheff_k5().A.T
    assert k5_doc.Lambda == K5_LAMBDA
    assert k5_doc.C == K5_C
    assert tuple(k5_doc.character) == K5_CHARACTER
    assert k5_doc.char_matrix().c_source == "user"


def test_bundled_documents_load(data_dir):
    names = sorted(p.stem for p in data_dir.glob("*.txt"))
    assert names == ["cube", "k5", "segment", "simplex2", "simplex3", "square"]
    for path in data_dir.glob("*.txt"):
        doc = load_document(path)
        assert doc.polytope().m == doc.m


def test_dump_then_parse():
    doc = InputDocument.from_data(cube(2, side=Rational(3, 2)), cube(2).A.T)
    again = parse_document(dump_document(doc))
    assert again == doc
    assert again.b == [0, 0, "3/2", "3/2"]


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("n: 1\nm: 2\nfoo: 3\n", "unknown key"),
        ("n: 1\nn: 1\n", "repeated key"),
        ("n 1\n", "expected 'key: value'"),
        ("A: [[1],\n", "unterminated"),
        ("A: [1]]\n", "unbalanced"),
        ("n: x\n", "bad value"),
        (SEGMENT.replace("m: 2", "m: 3"), "A must be 3x1"),
        (SEGMENT.replace('"1/2"', '"1/0"'), "not a rational"),
        (SEGMENT + "character: [1, 2]\n", "character must have 1 entries"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(InputDocumentError, match=fragment):
        parse_document(text)


def test_missing_file(tmp_path):
    with pytest.raises(InputDocumentError, match="cannot read"):
        load_document(tmp_path / "missing.txt")


def test_canonical_kernel_when_c_is_missing():
    doc = parse_document(SEGMENT)
    cm = doc.char_matrix()
    assert cm.c_source == "canonical"
    assert cm.k == 1
