"""
Monomials in z_1, ..., z_m and their conjugates.

An exponent vector ``a`` stands for the product of ``z_i ** a_i`` over the
positive entries and ``conj(z_i) ** -a_i`` over the negative ones. The text
form writes ``z<i>`` for a variable and ``w<i>`` for its conjugate, with
1-based indices in ascending order, e.g. ``"z3 w6 w7 z8"``; the empty
monomial is ``"1"``.
"""

import re
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InputDocumentError

_TERM = re.compile(r"^([zw])([1-9][0-9]*)(?:\^([1-9][0-9]*))?$")


@dataclass(frozen=True, order=True)
class Monomial:
    """
    Exponent vector of a monomial map.

    Attributes:
        exponents: Integer exponents, negative entries meaning the conjugated variable
    """

    exponents: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.exponents)

    @property
    def is_constant(self) -> bool:
        return not any(self.exponents)

    @property
    def degree(self) -> int:
        return sum(abs(a) for a in self.exponents)

    def __neg__(self) -> "Monomial":
        return Monomial(tuple(-a for a in self.exponents))

    def __str__(self) -> str:
        return format_monomial(self.exponents)


def format_monomial(exponents: Sequence[int]) -> str:
    """Render an exponent vector in the ``z``/``w`` grammar."""
    terms = []
    for i, a in enumerate(exponents, start=1):
        if a == 0:
            continue
        var = "z" if a > 0 else "w"
        power = abs(a)
        terms.append(f"{var}{i}" if power == 1 else f"{var}{i}^{power}")
    return " ".join(terms) if terms else "1"


def parse_monomial(text: str, m: int) -> Monomial:
    """
    Parse the ``z``/``w`` grammar back into a monomial on ``m`` variables.

    Raises:
        InputDocumentError: On malformed terms, repeated or unordered
            indices, or indices larger than ``m``
    """
    text = text.strip()
    exponents = [0] * m
    if text == "1":
        return Monomial(tuple(exponents))
    if not text:
        raise InputDocumentError("empty monomial, use '1'")
    last = 0
    for token in text.split():
        match = _TERM.match(token)
        if not match:
            raise InputDocumentError(f"bad monomial term {token!r}")
        var, index, power = match.group(1), int(match.group(2)), match.group(3)
        if index <= last:
            raise InputDocumentError(f"indices must ascend in {text!r}")
        if index > m:
            raise InputDocumentError(f"variable index {index} exceeds m = {m}")
        last = index
        value = int(power) if power else 1
        exponents[index - 1] = value if var == "z" else -value
    return Monomial(tuple(exponents))


def evaluate_monomial(exponents: Sequence[int], z: np.ndarray) -> complex:
    """
    Value of the monomial at ``z``.

    A zero exponent contributes 1 even where ``z_i = 0``.
    """
    z = np.asarray(z, dtype=complex)
    a = np.asarray(exponents, dtype=int)
    if a.shape != z.shape:
        raise DimensionMismatchError(f"{a.size} exponents for a point in C^{z.size}")
    base = np.where(a > 0, z, np.conj(z))
    base = np.where(a == 0, 1.0 + 0j, base)
    return complex(np.prod(base ** np.abs(a)))
