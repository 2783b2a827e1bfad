"""Exact polynomial and rational interpolation at rational sample points."""

from fractions import Fraction
from typing import List, Optional, Sequence, Set, Tuple

import sympy

from .linalg import Rows, nullspace, to_rational

Point = Tuple[Fraction, Fraction]


def sample_points(
    count: int, avoid: Optional[Set[Fraction]] = None, start: int = 0
) -> List[Fraction]:
    """Deterministic integer sample points ``start, start+1, ...`` skipping ``avoid``."""
    avoid = avoid or set()
    points: List[Fraction] = []
    candidate = start
    while len(points) < count:
        if Fraction(candidate) not in avoid:
            points.append(Fraction(candidate))
        candidate += 1
    return points


def interpolate_polynomial(points: Sequence[Point], symbol: sympy.Symbol) -> sympy.Poly:
    """Lagrange interpolation through ``points``, returned as a Poly over QQ."""
    data = [(to_rational(x), to_rational(y)) for x, y in points]
    if all(y == data[0][1] for _, y in data):
        return sympy.Poly(data[0][1], symbol, domain="QQ")
    return sympy.Poly(sympy.interpolate(data, symbol), symbol, domain="QQ")


def interpolate_matrix(
    points: Sequence[Fraction], samples: Sequence[Rows], symbol: sympy.Symbol
) -> sympy.Matrix:
    """Entrywise polynomial interpolation of sampled matrices.

    The last sample is held out and only checks the interpolant.

    Raises:
        ValueError: If an entry disagrees with the held-out sample.
    """
    rows = len(samples[0])
    columns = len(samples[0][0]) if rows else 0
    result = sympy.zeros(rows, columns)
    check_at, check = points[-1], samples[-1]
    for i in range(rows):
        for j in range(columns):
            data = [(a, m[i][j]) for a, m in zip(points[:-1], samples[:-1])]
            poly = interpolate_polynomial(data, symbol)
            if poly.eval(to_rational(check_at)) != to_rational(check[i][j]):
                raise ValueError(
                    f"Entry ({i}, {j}) is not a polynomial of degree < {len(data)} in {symbol}"
                )
            result[i, j] = poly.as_expr()
    return result


def rational_interpolate(
    points: Sequence[Point], num_degree: int, den_degree: int, symbol: sympy.Symbol
) -> sympy.Expr:
    """Cauchy interpolation: find p/q with deg p ≤ num_degree, deg q ≤ den_degree.

    Solves ``p(x_k) − y_k q(x_k) = 0`` exactly and cancels common factors.

    Raises:
        ValueError: If no interpolant with a nonzero denominator exists.
    """
    rows = []
    for x, y in points:
        row = [x**k for k in range(num_degree + 1)]
        row += [-y * x**k for k in range(den_degree + 1)]
        rows.append(row)
    width = num_degree + den_degree + 2
    for vector in nullspace(rows, width):
        denominator = vector[num_degree + 1 :]
        if any(denominator):
            p = sum(
                (to_rational(c) * symbol**k for k, c in enumerate(vector[: num_degree + 1])),
                sympy.Integer(0),
            )
            q = sum(
                (to_rational(c) * symbol**k for k, c in enumerate(denominator)),
                sympy.Integer(0),
            )
            return sympy.cancel(p / q)
    raise ValueError("No rational interpolant with the requested degrees")


def evaluate(expression: sympy.Expr, symbol: sympy.Symbol, value: Fraction) -> Fraction:
    """Evaluate a rational expression exactly at a rational point."""
    result = sympy.sympify(expression).subs(symbol, to_rational(value))
    if not result.is_Rational:
        raise ValueError(f"{expression} is not rational at {value}")
    return Fraction(int(result.p), int(result.q))


def poles(expression: sympy.Expr, symbol: sympy.Symbol) -> Set[Fraction]:
    """Rational poles of a rational expression."""
    _, denominator = sympy.fraction(sympy.cancel(expression))
    found = sympy.roots(sympy.Poly(denominator, symbol), filter="Q")
    return {Fraction(int(r.p), int(r.q)) for r in found}
