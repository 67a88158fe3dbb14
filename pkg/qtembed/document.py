"""
Input documents.

A document is line-oriented text, one ``key: value`` pair per entry with the
value written as JSON. Arrays may span several lines and continue until their
brackets balance. Lines starting with ``#`` are comments. Rational entries
are written as ``"p/q"`` strings::

    name: K5
    n: 3
    m: 9
    A: [
      [1, 0, 0],
      ...
    ]
"""

import json
from pathlib import Path

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator
from sympy import ImmutableMatrix, Rational

from .chardata import Character, CharMatrix, char_matrix
from .errors import InputDocumentError
from .exactlin import IntMatrix, column, int_matrix, rat_matrix, to_rational
from .polytope import HPolytope

KEYS = ("name", "n", "m", "A", "b", "Lambda", "C", "character")

Number = int | str


def _rational(value: Number) -> Rational:
    try:
        q = to_rational(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {value!r}") from exc
    if not isinstance(q, Rational):
        raise ValueError(f"not a rational number: {value!r}")
    return q


def _encode(value) -> Number:
    q = Rational(value)
    return int(q) if q.q == 1 else f"{q.p}/{q.q}"


class InputDocument(BaseModel):
    """
    Combinatorial data of a quasitoric manifold.

    Attributes:
        name: Label used in reports
        n: Dimension of the polytope
        m: Number of facets
        A: m x n inequality matrix (integers or "p/q" strings)
        b: m offsets (integers or "p/q" strings)
        Lambda: n x m characteristic matrix
        C: Optional m x (m - n) kernel embedding
        character: Optional character of K, m - n integers
    """

    model_config = ConfigDict(extra="forbid")

    name: str = ""
    n: int
    m: int
    A: list[list[Number]]
    b: list[Number]
    Lambda: list[list[int]]
    C: list[list[int]] | None = None
    character: list[int] | None = None

    @model_validator(mode="after")
    def check_sizes(self) -> "InputDocument":
        n, m = self.n, self.m
        if n < 1 or m < n:
            raise ValueError(f"need 1 <= n <= m, got n={n}, m={m}")
        if len(self.A) != m or any(len(row) != n for row in self.A):
            raise ValueError(f"A must be {m}x{n}")
        if len(self.b) != m:
            raise ValueError(f"b must have {m} entries")
        for value in [x for row in self.A for x in row] + list(self.b):
            _rational(value)
        if len(self.Lambda) != n or any(len(row) != m for row in self.Lambda):
            raise ValueError(f"Lambda must be {n}x{m}")
        if self.C is not None and (
            len(self.C) != m or any(len(row) != m - n for row in self.C)
        ):
            raise ValueError(f"C must be {m}x{m - n}")
        if self.character is not None and len(self.character) != m - n:
            raise ValueError(f"character must have {m - n} entries")
        return self

    def polytope(self) -> HPolytope:
        return HPolytope(
            A=rat_matrix(self.A, cols=self.n), b=column(self.b), name=self.name
        )

    def lam(self) -> IntMatrix:
        return int_matrix(self.Lambda, cols=self.m)

    def c_user(self) -> IntMatrix | None:
        if self.C is None:
            return None
        if self.m == self.n:
            return ImmutableMatrix.zeros(self.m, 0)
        return int_matrix(self.C)

    def char_matrix(self) -> CharMatrix:
        return char_matrix(self.lam(), self.c_user())

    def get_character(self) -> Character | None:
        if self.character is None:
            return None
        return Character(coords=tuple(self.character))

    @classmethod
    def from_data(
        cls,
        P: HPolytope,
        lam: IntMatrix,
        c: IntMatrix | None = None,
        character: Character | None = None,
    ) -> "InputDocument":
        return cls(
            name=P.name,
            n=P.n,
            m=P.m,
            A=[[_encode(x) for x in P.A.row(i)] for i in range(P.m)],
            b=[_encode(x) for x in P.b],
            Lambda=[[int(x) for x in lam.row(i)] for i in range(lam.rows)],
            C=None if c is None else [[int(x) for x in r] for r in c.tolist()],
            character=None if character is None else list(character.coords),
        )


def _split_entries(text: str) -> list[tuple[int, str, str]]:
    entries = []
    key, buffer, start, depth = None, [], 0, 0
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if key is None:
            if not line or line.startswith("#"):
                continue
            if ":" not in line:
                raise InputDocumentError(f"line {number}: expected 'key: value'")
            key, value = (part.strip() for part in line.split(":", 1))
            buffer, start = [value], number
        else:
            if line.startswith("#"):
                continue
            buffer.append(line)
        depth = sum(part.count("[") - part.count("]") for part in buffer)
        if depth < 0:
            raise InputDocumentError(f"line {number}: unbalanced ']'")
        if depth == 0:
            entries.append((start, key, " ".join(buffer)))
            key = None
    if key is not None:
        raise InputDocumentError(f"line {start}: unterminated array for {key!r}")
    return entries


def parse_document(text: str) -> InputDocument:
    """
    Parse document text.

    Raises:
        InputDocumentError: On syntax errors, unknown or repeated keys, and
            inconsistent sizes
    """
    data: dict = {}
    for line, key, value in _split_entries(text):
        if key not in KEYS:
            raise InputDocumentError(f"line {line}: unknown key {key!r}")
        if key in data:
            raise InputDocumentError(f"line {line}: repeated key {key!r}")
        try:
            data[key] = json.loads(value)
        except json.JSONDecodeError as exc:
            if key != "name":
                raise InputDocumentError(
                    f"line {line}: bad value for {key!r}: {exc.msg}"
                ) from exc
            data[key] = value
    try:
        return InputDocument(**data)
    except ValidationError as exc:
        reasons = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'document'}: {err['msg']}"
            for err in exc.errors()
        )
        raise InputDocumentError(reasons) from exc


def load_document(path: str | Path) -> InputDocument:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputDocumentError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_document(text)


def _matrix_lines(key: str, rows: list[list]) -> list[str]:
    if not rows:
        return [f"{key}: []"]
    body = [f"  {json.dumps(row)}," for row in rows]
    body[-1] = body[-1].rstrip(",")
    return [f"{key}: ["] + body + ["]"]


def dump_document(doc: InputDocument) -> str:
    """Render a document; ``parse_document`` reads it back unchanged."""
    lines = [
        f"name: {json.dumps(doc.name)}",
        f"n: {doc.n}",
        f"m: {doc.m}",
        *_matrix_lines("A", doc.A),
        f"b: {json.dumps(doc.b)}",
        *_matrix_lines("Lambda", doc.Lambda),
    ]
    if doc.C is not None:
        lines += _matrix_lines("C", doc.C)
    if doc.character is not None:
        lines.append(f"character: {json.dumps(doc.character)}")
    return "\n".join(lines) + "\n"
