"""Exact linear algebra over QQ.

Matrices are plain lists of rows of ``Fraction``. Elimination is delegated to
sympy's ``DomainMatrix`` over ``QQ``; results come back as ``Fraction`` so the
rest of the package never handles sympy numbers directly.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import sympy
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

logger = logging.getLogger(__name__)

Rows = List[List[Fraction]]


def to_rational(value: Fraction) -> sympy.Rational:
    """Convert a Fraction to a sympy Rational."""
    return sympy.Rational(value.numerator, value.denominator)


def from_rational(value: sympy.Expr) -> Fraction:
    """Convert a sympy rational number to a Fraction.

    Raises:
        ValueError: If the value is not rational.
    """
    value = sympy.sympify(value)
    if not value.is_Rational:
        raise ValueError(f"Expected a rational number, got {value}")
    return Fraction(int(value.p), int(value.q))


def _to_domain_matrix(rows: Sequence[Sequence[Fraction]], ncols: int) -> DomainMatrix:
    matrix = sympy.Matrix(len(rows), ncols, lambda i, j: to_rational(rows[i][j]))
    return matrix.to_DM(QQ)


def _from_domain_matrix(dm: DomainMatrix) -> Rows:
    return [[from_rational(entry) for entry in row] for row in dm.to_Matrix().tolist()]


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> Tuple[Rows, Tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    if not rows or ncols == 0:
        return [list(row) for row in rows], ()
    reduced, pivots = _to_domain_matrix(rows, ncols).rref()
    return _from_domain_matrix(reduced), tuple(pivots)


def rank(rows: Sequence[Sequence[Fraction]], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def pivot_columns(rows: Sequence[Sequence[Fraction]], ncols: int) -> Tuple[int, ...]:
    """Indices of a maximal set of linearly independent columns."""
    return rref(rows, ncols)[1]


def pivot_rows(rows: Sequence[Sequence[Fraction]], ncols: int) -> Tuple[int, ...]:
    """Indices of a maximal set of linearly independent rows."""
    if not rows:
        return ()
    return pivot_columns(transpose(rows, ncols), len(rows))


def transpose(rows: Sequence[Sequence[Fraction]], ncols: int) -> Rows:
    return [[rows[i][j] for i in range(len(rows))] for j in range(ncols)]


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> Rows:
    """Basis of the right kernel, one vector per free column."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    reduced, pivots = rref(rows, ncols)
    free = [j for j in range(ncols) if j not in pivots]
    basis: Rows = []
    for f in free:
        vector = [Fraction(0)] * ncols
        vector[f] = Fraction(1)
        for r, p in enumerate(pivots):
            vector[p] = -reduced[r][f]
        basis.append(vector)
    return basis


def solve(
    matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> List[Fraction]:
    """Solve a square invertible system ``matrix · x = rhs`` exactly.

    Raises:
        ValueError: If the matrix is singular.
    """
    n = len(matrix)
    if n == 0:
        return []
    augmented = [list(matrix[i]) + [rhs[i]] for i in range(n)]
    reduced, pivots = rref(augmented, n + 1)
    if pivots != tuple(range(n)):
        raise ValueError("Singular system")
    return [reduced[i][n] for i in range(n)]


def inverse(matrix: Sequence[Sequence[Fraction]]) -> Rows:
    """Exact inverse of a square matrix.

    Raises:
        ValueError: If the matrix is singular.
    """
    n = len(matrix)
    if n == 0:
        return []
    dm = _to_domain_matrix(matrix, n)
    try:
        return _from_domain_matrix(dm.inv())
    except (DMNonInvertibleMatrixError, ZeroDivisionError) as e:
        raise ValueError("Singular matrix") from e


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Rows:
    if not a:
        return []
    inner = len(b)
    ncols = len(b[0]) if b else 0
    return [
        [
            sum((a[i][k] * b[k][j] for k in range(inner)), Fraction(0))
            for j in range(ncols)
        ]
        for i in range(len(a))
    ]


def identity(n: int) -> Rows:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def rational_eigenvalues(rows: Sequence[Sequence[Fraction]]) -> Dict[Fraction, int]:
    """Eigenvalues with algebraic multiplicities.

    Raises:
        ValueError: If the characteristic polynomial has irrational roots.
    """
    n = len(rows)
    if n == 0:
        return {}
    coefficients = _to_domain_matrix(rows, n).charpoly()
    x = sympy.Symbol("x")
    poly = sympy.Poly([QQ.to_sympy(c) for c in coefficients], x)
    found = sympy.roots(poly, filter="Q")
    if sum(found.values()) != n:
        raise ValueError(
            f"Characteristic polynomial {poly.as_expr()} has irrational roots"
        )
    return {from_rational(root): int(mult) for root, mult in found.items()}


def generalized_eigenspace(
    rows: Sequence[Sequence[Fraction]], eigenvalue: Fraction, multiplicity: int
) -> Rows:
    """Basis (as column vectors) of ker (M − λ)^multiplicity."""
    n = len(rows)
    shifted = [
        [rows[i][j] - (eigenvalue if i == j else 0) for j in range(n)] for i in range(n)
    ]
    power = identity(n)
    for _ in range(multiplicity):
        power = matmul(power, shifted)
    return nullspace(power, n)
