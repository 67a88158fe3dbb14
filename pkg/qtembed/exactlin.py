"""
Exact integer and rational linear algebra.

Matrices are sympy ``ImmutableMatrix`` objects holding ``Integer`` or
``Rational`` entries, so every computation here is exact. The Smith normal
form works on plain Python integers internally and converts back at the
boundary.
"""

from collections.abc import Iterable, Sequence
from functools import reduce
from math import gcd

from sympy import ImmutableMatrix, Integer, Rational, zeros
from sympy.matrices.normalforms import hermite_normal_form

from .errors import (
    DimensionMismatchError,
    NotUnimodularError,
    SingularMatrixError,
    ZeroVectorError,
)

# Aliases documenting which kind of entries a matrix carries.
IntMatrix = ImmutableMatrix
RatMatrix = ImmutableMatrix


def to_rational(value) -> Rational:
    """Convert an int, a sympy number or a ``"p/q"`` string to a Rational."""
    if isinstance(value, str):
        return Rational(value.strip())
    return Rational(value)


def int_matrix(rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
    """
    Build an integer matrix from nested rows.

    ``cols`` is only needed for matrices without rows.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return ImmutableMatrix(zeros(0, cols or 0))
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DimensionMismatchError("ragged matrix rows")
    entries = []
    for r in rows:
        for x in r:
            q = to_rational(x)
            if q.q != 1:
                raise DimensionMismatchError(f"non-integral entry {x}")
            entries.append(Integer(q.p))
    return ImmutableMatrix(len(rows), width, entries)


def rat_matrix(rows: Sequence[Sequence], cols: int | None = None) -> RatMatrix:
    """Build a rational matrix from nested rows of ints, Rationals or strings."""
    rows = [list(r) for r in rows]
    if not rows:
        return ImmutableMatrix(zeros(0, cols or 0))
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DimensionMismatchError("ragged matrix rows")
    return ImmutableMatrix(len(rows), width, [to_rational(x) for r in rows for x in r])


def column(values: Iterable) -> RatMatrix:
    """Column vector from an iterable of numbers."""
    values = [to_rational(x) for x in values]
    return ImmutableMatrix(len(values), 1, values)


def as_int_tuple(vector: ImmutableMatrix) -> tuple[int, ...]:
    """Flatten an integral vector (row or column) to a tuple of ints."""
    out = []
    for x in vector:
        if Rational(x).q != 1:
            raise DimensionMismatchError(f"non-integral entry {x}")
        out.append(int(x))
    return tuple(out)


def is_integral(matrix: ImmutableMatrix) -> bool:
    return all(Rational(x).q == 1 for x in matrix)


def _identity(size: int) -> list[list[int]]:
    return [[int(i == j) for j in range(size)] for i in range(size)]


def _to_lists(matrix: ImmutableMatrix) -> list[list[int]]:
    if not is_integral(matrix):
        raise DimensionMismatchError("integer matrix expected")
    return [[int(matrix[i, j]) for j in range(matrix.cols)] for i in range(matrix.rows)]


def _from_lists(rows: list[list[int]], cols: int) -> IntMatrix:
    return int_matrix(rows, cols=cols)


def smith_normal_form(matrix: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """
    Smith normal form with transformation matrices.

    Returns ``(U, S, V)`` with ``U * M * V == S``, ``U`` and ``V`` unimodular
    and ``S`` diagonal with non-negative entries ``d_1 | d_2 | ...``.
    """
    rows, cols = matrix.shape
    s = _to_lists(matrix)
    u = _identity(rows)
    v = _identity(cols)

    def swap_rows(i: int, j: int) -> None:
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for r in s:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(target: int, source: int, factor: int) -> None:
        s[target] = [a + factor * b for a, b in zip(s[target], s[source])]
        u[target] = [a + factor * b for a, b in zip(u[target], u[source])]

    def add_col(target: int, source: int, factor: int) -> None:
        for r in s:
            r[target] += factor * r[source]
        for r in v:
            r[target] += factor * r[source]

    for t in range(min(rows, cols)):
        while True:
            pivot = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if not s[i][j]:
                        continue
                    if pivot is None or abs(s[i][j]) < abs(s[pivot[0]][pivot[1]]):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = s[t][t]

            clean = True
            for i in range(t + 1, rows):
                q = s[i][t] // p
                if q:
                    add_row(i, t, -q)
                clean = clean and s[i][t] == 0
            for j in range(t + 1, cols):
                q = s[t][j] // p
                if q:
                    add_col(j, t, -q)
                clean = clean and s[t][j] == 0
            if not clean:
                continue

            # divisibility of the remaining block by the pivot
            offender = next(
                (
                    i
                    for i in range(t + 1, rows)
                    for j in range(t + 1, cols)
                    if s[i][j] % p
                ),
                None,
            )
            if offender is None:
                break
            add_row(t, offender, 1)

        if t < rows and t < cols and s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]

    return _from_lists(u, rows), _from_lists(s, cols), _from_lists(v, cols)


def invariant_factors(matrix: IntMatrix) -> tuple[int, ...]:
    """Diagonal of the Smith normal form, zeros included."""
    _, s, _ = smith_normal_form(matrix)
    return tuple(int(s[i, i]) for i in range(min(s.shape)))


def integer_rank(matrix: IntMatrix) -> int:
    return sum(1 for d in invariant_factors(matrix) if d)


def is_direct_summand(basis: IntMatrix) -> bool:
    """True if the columns are independent and span a saturated sublattice."""
    if basis.cols == 0:
        return True
    factors = invariant_factors(basis)
    return len(factors) == basis.cols and all(d == 1 for d in factors)


def integer_kernel_basis(matrix: IntMatrix) -> IntMatrix:
    """
    Basis of the integer kernel of ``matrix``.

    The columns of the result span ``ker M`` intersected with the integer
    lattice, which is a direct summand. The basis is returned in column
    Hermite normal form so that it does not depend on the route taken to
    find it.
    """
    _, s, v = smith_normal_form(matrix)
    rank = sum(1 for i in range(min(s.shape)) if s[i, i])
    size = matrix.cols
    if rank == size:
        return ImmutableMatrix(zeros(size, 0))
    raw = v[:, rank:]
    return ImmutableMatrix(hermite_normal_form(raw.as_mutable()))


def primitive_vector(vector: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    values = [int(x) for x in vector]
    g = reduce(gcd, values, 0)
    if g == 0:
        raise ZeroVectorError("zero has no primitive direction")
    return tuple(x // g for x in values)


def sign_normalized(vector: Sequence[int]) -> tuple[int, ...]:
    """Flip the sign so that the first nonzero entry is positive."""
    values = tuple(int(x) for x in vector)
    for x in values:
        if x:
            return values if x > 0 else tuple(-y for y in values)
    return values


def solve_rational(matrix: RatMatrix, rhs: RatMatrix) -> RatMatrix:
    """Exact solution of ``M x = rhs`` for a square nonsingular ``M``."""
    if matrix.rows != matrix.cols:
        raise DimensionMismatchError(f"square matrix expected, got {matrix.shape}")
    if rhs.rows != matrix.rows:
        raise DimensionMismatchError(
            f"right-hand side has {rhs.rows} rows, expected {matrix.rows}"
        )
    if matrix.det() == 0:
        raise SingularMatrixError("singular matrix")
    return ImmutableMatrix(matrix.LUsolve(rhs))


def unimodular_inverse(matrix: IntMatrix) -> IntMatrix:
    """Exact integer inverse of a matrix with determinant +-1."""
    if matrix.rows != matrix.cols:
        raise DimensionMismatchError(f"square matrix expected, got {matrix.shape}")
    if matrix.rows == 0:
        return matrix
    det = int(matrix.det())
    if abs(det) != 1:
        raise NotUnimodularError(det)
    return ImmutableMatrix(matrix.inv())


def delete_rows(matrix: ImmutableMatrix, indices: Iterable[int]) -> ImmutableMatrix:
    """Copy of ``matrix`` without the given rows."""
    drop = set(indices)
    keep = [i for i in range(matrix.rows) if i not in drop]
    if not keep:
        return ImmutableMatrix(zeros(0, matrix.cols))
    return ImmutableMatrix(matrix.extract(keep, list(range(matrix.cols))))


def select_columns(matrix: ImmutableMatrix, indices: Sequence[int]) -> ImmutableMatrix:
    if not indices:
        return ImmutableMatrix(zeros(matrix.rows, 0))
    return ImmutableMatrix(matrix.extract(list(range(matrix.rows)), list(indices)))


def zero_extend(
    values: Sequence[int], size: int, zero_at: Iterable[int]
) -> tuple[int, ...]:
    """Insert zeros at the positions ``zero_at`` to get a vector of ``size``."""
    holes = set(zero_at)
    it = iter(values)
    out = tuple(0 if i in holes else int(next(it)) for i in range(size))
    if next(it, None) is not None:
        raise DimensionMismatchError("too many values for zero extension")
    return out
