"""ℓ-weights, weights and generalized simple roots.

An ℓ-weight is an I-tuple of monic rational functions. The distinguished
elements are

    Ψ_{i,a}  component i equal to (u − a), all others 1
    Y_{i,a}  Ψ_{i,a−d_i/2} / Ψ_{i,a+d_i/2}
    A_{i,a}  ∏_j Ψ_{j,a−d_ij} / Ψ_{j,a+d_ij}

A-monomials are stored as sorted tuples of (node, a) pairs with repetition,
which is how q-character terms are keyed.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import sympy

from ..core.exceptions import NotAMonomialError, ParseError
from ..utils.linalg import solve
from .cartan import CartanData, build_cartan
from .parsing import parse_lweight_terms
from .ratfun import LinRat

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]
AKey = Tuple[int, Fraction]
AMonomial = Tuple[AKey, ...]


@dataclass(frozen=True)
class Weight:
    """A weight in fundamental-weight coordinates (coefficient of each ϖ_i)."""

    coeffs: Tuple[Fraction, ...]

    @classmethod
    def zero(cls, rank: int) -> "Weight":
        return cls(tuple(Fraction(0) for _ in range(rank)))

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coeffs))

    def __sub__(self, other: "Weight") -> "Weight":
        return self + (-other)

    def scale(self, factor: Number) -> "Weight":
        factor = Fraction(factor)
        return Weight(tuple(factor * a for a in self.coeffs))

    def root_coordinates(self, cd: CartanData) -> Tuple[Fraction, ...]:
        """Coefficients b with Σ b_i α_i equal to this weight (α_i = Σ_j c_ji ϖ_j)."""
        matrix = [[Fraction(cd.cij(j, i)) for i in cd.nodes] for j in cd.nodes]
        return tuple(solve(matrix, list(self.coeffs)))

    def leq(self, other: "Weight", cd: CartanData) -> bool:
        """λ ≤ μ iff μ − λ is a nonnegative combination of simple roots."""
        return all(b >= 0 for b in (other - self).root_coordinates(cd))

    def __str__(self) -> str:
        return "(" + ", ".join(_text(a) for a in self.coeffs) + ")"


def _text(a: Fraction) -> str:
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


@dataclass(frozen=True)
class LWeight:
    """An ℓ-weight: one monic rational function per node."""

    cartan: CartanData
    components: Tuple[LinRat, ...]

    def __post_init__(self) -> None:
        if len(self.components) != self.cartan.rank:
            raise ValueError(
                f"{self.cartan.type_label} needs {self.cartan.rank} components, "
                f"got {len(self.components)}"
            )

    @classmethod
    def one(cls, cd: CartanData) -> "LWeight":
        return cls(cd, tuple(LinRat.one() for _ in cd.nodes))

    @classmethod
    def from_sl2(cls, e: LinRat) -> "LWeight":
        return cls(build_cartan("A1"), (e,))

    @classmethod
    def from_components(cls, cd: CartanData, components: Mapping[int, LinRat]) -> "LWeight":
        return cls(cd, tuple(components.get(i, LinRat.one()) for i in cd.nodes))

    def component(self, i: int) -> LinRat:
        return self.components[i - 1]

    def __mul__(self, other: "LWeight") -> "LWeight":
        self._check_same_type(other)
        return LWeight(
            self.cartan, tuple(a * b for a, b in zip(self.components, other.components))
        )

    def __truediv__(self, other: "LWeight") -> "LWeight":
        return self * other.inverse()

    def __pow__(self, power: int) -> "LWeight":
        return LWeight(self.cartan, tuple(c**power for c in self.components))

    def inverse(self) -> "LWeight":
        return LWeight(self.cartan, tuple(c.inverse() for c in self.components))

    def spectral_shift(self, a: Number) -> "LWeight":
        """τ_a: every root b of every component moves to b + a."""
        return LWeight(self.cartan, tuple(c.shift(a) for c in self.components))

    @property
    def is_one(self) -> bool:
        return all(c.is_one for c in self.components)

    def coweight(self) -> Tuple[int, ...]:
        return tuple(c.degree for c in self.components)

    def _check_same_type(self, other: "LWeight") -> None:
        if other.cartan != self.cartan:
            raise ValueError(
                f"Cannot combine {self.cartan.type_label} and "
                f"{other.cartan.type_label} ℓ-weights"
            )

    def __str__(self) -> str:
        if self.cartan.rank == 1:
            return str(self.components[0])
        return "; ".join(f"{i}: {c}" for i, c in zip(self.cartan.nodes, self.components))

    def to_dict(self) -> Dict[str, str]:
        return {str(i): str(c) for i, c in zip(self.cartan.nodes, self.components)}


def generators(cd: CartanData, kind: str, i: int, a: Number) -> LWeight:
    """Ψ_{i,a}, Y_{i,a} or A_{i,a} as an ℓ-weight.

    Raises:
        ValueError: For an unknown node or kind.
    """
    if i not in cd.nodes:
        raise ValueError(f"Node {i} is not in {cd.type_label}")
    a = Fraction(a)
    if kind == "Psi":
        return LWeight.from_components(cd, {i: LinRat.linear(a)})
    if kind == "Y":
        half = Fraction(cd.di(i), 2)
        return LWeight.from_components(
            cd, {i: LinRat.from_multisets(zeros=[a - half], poles=[a + half])}
        )
    if kind == "A":
        components = {}
        for j in cd.nodes:
            dij = cd.dij(i, j)
            if dij != 0:
                components[j] = LinRat.from_multisets(zeros=[a - dij], poles=[a + dij])
        return LWeight.from_components(cd, components)
    raise ValueError(f"Unknown ℓ-weight generator {kind!r}")


def sl2_simple_root(a: Number) -> LinRat:
    """A_a = (u − a + 1)/(u − a − 1) for sl₂."""
    a = Fraction(a)
    return LinRat.from_multisets(zeros=[a - 1], poles=[a + 1])


def weight_and_coweight(e: LWeight) -> Tuple[Weight, Tuple[int, ...]]:
    """Weight ϖ(e) and coweight ϖ^∨(e).

    The coefficient of ϖ_i is the subleading Laurent coefficient of e_i
    divided by d_i, that is −(Σ of roots with multiplicity)/d_i.
    """
    cd = e.cartan
    coeffs = []
    for i, component in zip(cd.nodes, e.components):
        subleading = -sum((a * m for a, m in component.roots), Fraction(0))
        coeffs.append(subleading / cd.di(i))
    return Weight(tuple(coeffs)), e.coweight()


def a_monomial(cd: CartanData, factors: Union[Mapping[AKey, int], Iterable[AKey]]) -> LWeight:
    """∏ A_{i,a}^{n} from a mapping (i, a) → n or a multiset of (i, a)."""
    if not isinstance(factors, Mapping):
        counted: Dict[AKey, int] = {}
        for key in factors:
            counted[key] = counted.get(key, 0) + 1
        factors = counted
    roots: Dict[int, Dict[Fraction, int]] = {i: {} for i in cd.nodes}
    for (i, a), n in factors.items():
        a = Fraction(a)
        for j in cd.nodes:
            dij = cd.dij(i, j)
            if dij == 0:
                continue
            roots[j][a - dij] = roots[j].get(a - dij, 0) + n
            roots[j][a + dij] = roots[j].get(a + dij, 0) - n
    return LWeight(cd, tuple(LinRat.from_roots(roots[i]) for i in cd.nodes))


def inverse_monomial_lweight(cd: CartanData, monomial: AMonomial) -> LWeight:
    """The ℓ-weight of the A⁻¹-monomial ∏ A_{i,a}^{−1}."""
    return a_monomial(cd, monomial).inverse()


Laurent = Dict[int, int]


def _laurent_terms(expr: sympy.Expr, x: sympy.Symbol, shift: int) -> Laurent:
    poly = sympy.Poly(sympy.expand(expr * x**shift), x)
    return {monom[0] - shift: int(coeff) for monom, coeff in poly.terms() if coeff != 0}


@lru_cache(maxsize=None)
def _peeling_data(cd: CartanData) -> Tuple[Tuple[Tuple[Laurent, ...], ...], Laurent]:
    """Adjugate and determinant of C(x), C_ij(x) = x^(−2d_ij) − x^(2d_ij).

    The exponent of x counts half-steps of the spectral parameter, so
    A_{i,a} moves Ψ_{j,b} with b ∈ {a ± d_ij} exactly as C_ij(x) does.
    """
    x = sympy.Symbol("x")

    def entry(r: int, c: int) -> sympy.Expr:
        twice = int(2 * cd.dij(r + 1, c + 1))
        return x ** (-twice) - x**twice

    matrix = sympy.Matrix(cd.rank, cd.rank, entry)
    shift = 2 * max(cd.d) * cd.rank
    adjugate = matrix.adjugate(method="berkowitz")
    rows = tuple(
        tuple(_laurent_terms(adjugate[r, c], x, shift) for c in range(cd.rank))
        for r in range(cd.rank)
    )
    return rows, _laurent_terms(matrix.det(method="berkowitz"), x, shift)


def _times(a: Laurent, b: Laurent) -> Laurent:
    product: Laurent = {}
    for i, x in a.items():
        for j, y in b.items():
            product[i + j] = product.get(i + j, 0) + x * y
    return product


def _peel(numerator: Laurent, divisor: Laurent) -> Optional[Laurent]:
    """Exact quotient by repeatedly cancelling the largest exponent, or None."""
    remaining = {k: v for k, v in numerator.items() if v}
    if not remaining:
        return {}
    top, bottom = max(divisor), min(divisor)
    lowest = min(remaining) - bottom
    quotient: Laurent = {}
    while remaining:
        lead = max(remaining)
        step = lead - top
        coefficient = Fraction(remaining[lead], divisor[top])
        if step < lowest or coefficient.denominator != 1:
            return None
        quotient[step] = int(coefficient)
        for k, v in divisor.items():
            value = remaining.get(k + step, 0) - int(coefficient) * v
            if value:
                remaining[k + step] = value
            else:
                remaining.pop(k + step, None)
    return quotient


def a_monomial_decompose(f: LWeight) -> Dict[AKey, int]:
    """The unique exponents n with ∏ A_{i,a}^{n} = f.

    Roots of f are grouped by their class modulo ½. Within a class the
    Ψ-exponents of node j form a Laurent polynomial g_j(x) with g = C(x) n,
    so n = adj C(x) g / det C(x); the division peels the largest remaining
    key each step and fails on a nonzero remainder.

    Raises:
        NotAMonomialError: If f is not an A-monomial.
    """
    cd = f.cartan
    if f.is_one:
        return {}
    if any(c.degree != 0 for c in f.components):
        raise NotAMonomialError(f"{f} has nonzero coweight, so it is not an A-monomial")

    classes: Dict[Fraction, Dict[int, Laurent]] = {}
    for j, component in zip(cd.nodes, f.components):
        for b, m in component.roots:
            base = b - Fraction(floor(2 * b), 2)
            exponents = classes.setdefault(base, {}).setdefault(j, {})
            exponents[int(2 * (b - base))] = m

    adjugate, determinant = _peeling_data(cd)
    solution: Dict[AKey, int] = {}
    for base, g in sorted(classes.items()):
        for i in cd.nodes:
            numerator: Laurent = {}
            for j, exponents in g.items():
                for k, v in _times(adjugate[i - 1][j - 1], exponents).items():
                    numerator[k] = numerator.get(k, 0) + v
            quotient = _peel(numerator, determinant)
            if quotient is None:
                raise NotAMonomialError(f"{f} is not a product of generalized simple roots")
            for k, n in quotient.items():
                solution[(i, base + Fraction(k, 2))] = n
    logger.debug(f"Decomposed {f} into {len(solution)} simple-root factors")
    return dict(sorted(solution.items()))


def monomial_from_exponents(exponents: Mapping[AKey, int]) -> AMonomial:
    """Sorted multiset of keys for a mapping with positive exponents."""
    keys: List[AKey] = []
    for key in sorted(exponents):
        if exponents[key] < 0:
            raise NotAMonomialError(f"Negative exponent {exponents[key]} at {key}")
        keys.extend([key] * exponents[key])
    return tuple(keys)


def in_monoid_D(e: LWeight) -> bool:
    """True iff every component is a polynomial."""
    return all(c.is_polynomial for c in e.components)


def parse_lweight(cd: CartanData, text: str) -> LWeight:
    """Parse ``Psi(1,3)*Psi(2,-1)^-1*A(1,0)^2`` for the given Cartan type.

    Raises:
        ParseError: On malformed input or unknown nodes.
    """
    result = LWeight.one(cd)
    for kind, node, a, power in parse_lweight_terms(text):
        try:
            result = result * generators(cd, kind, node, a) ** power
        except ValueError as e:
            raise ParseError(str(e)) from e
    return result

