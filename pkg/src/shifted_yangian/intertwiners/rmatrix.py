"""Baxter recursion operators and R-matrices over Y(sl₂).

R_s^W fixes the top vector ω of W and satisfies

    R(x⁻_n w) = Σ_k c_k x⁻_{n+k} R(w)      for s(u) = Σ_k c_k u^k.

R_1^W(u) is the case s(v) = v − u; on every level it is a polynomial in u,
recovered here by exact interpolation. The R-matrix Ř_{N,W}(u) for W a
negative prefundamental module is assembled from R_1^W(u) and its lowest
diagonal entry, and the normalized R-matrix of two finite-dimensional modules
is solved from the intertwining equations at sample points.
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Any, Dict, List, Mapping, Optional, Sequence, Set, Tuple, Union

import sympy
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from ..algebra.lweight import AKey, LWeight, a_monomial_decompose
from ..algebra.ratfun import LinRat
from ..algebra.yangian_sl2 import Generator
from ..core.exceptions import NotAMonomialError, RealizationError, SamplePointError
from ..core.report import CheckReport
from ..modules.analysis import lweight_decomposition
from ..modules.families import negative_prefundamental, spectral_shift, two_dimensional
from ..modules.realization import Label, ModuleRealization, Vector, add_into, combine, target_level
from ..modules.tensor import LEFT, RIGHT, ExtremeActions, TensorModule, tensor_onedim, tensor_Y0
from ..modules.verma import make_weyl
from ..utils.interpolation import (
    evaluate,
    interpolate_matrix,
    poles,
    rational_interpolate,
    sample_points,
)
from ..utils.linalg import (
    Rows,
    from_rational,
    inverse,
    matmul,
    nullspace,
    rank,
    to_rational,
    transpose,
)
from ..utils.serialization import render_fraction

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]
Block = Union[Rows, sympy.Matrix]

U = sympy.Symbol("u")
RATIONAL_FUNCTIONS = QQ.frac_field(U)

# x^±_0, ξ_0 and ξ_1 generate Y(sl₂)
_GENERATING_MODES = (
    (Generator.XMINUS, 0),
    (Generator.XPLUS, 0),
    (Generator.XI, 0),
    (Generator.XI, 1),
)


def _as_matrix(rows: Rows, columns: int) -> sympy.Matrix:
    matrix = sympy.zeros(len(rows), columns)
    for i, row in enumerate(rows):
        for j, value in enumerate(row):
            matrix[i, j] = to_rational(value)
    return matrix


def as_rows(matrix: sympy.Matrix) -> Rows:
    return [[from_rational(matrix[i, j]) for j in range(matrix.cols)] for i in range(matrix.rows)]


def _mode_matrix(
    module: ModuleRealization, generator: Generator, index: int, level: int
) -> sympy.Matrix:
    return _as_matrix(module.matrix(generator, index, level), module.dimension(level))


def _over_field(matrix: sympy.Matrix) -> DomainMatrix:
    return matrix.to_DM(RATIONAL_FUNCTIONS)


def _invert(matrix: DomainMatrix, what: str) -> DomainMatrix:
    try:
        return matrix.inv()
    except DMNonInvertibleMatrixError as e:
        raise RealizationError(f"{what} is singular over QQ(u)") from e


def _polynomial_entries(matrix: DomainMatrix, what: str) -> sympy.Matrix:
    """Back to sympy, insisting that every entry over QQ(u) is a polynomial.

    Raises:
        RealizationError: If an entry keeps a denominator in u.
    """
    for row in matrix.to_list():
        for value in row:
            if value.denom.degree() > 0:
                raise RealizationError(
                    f"{what} has a non-polynomial entry {RATIONAL_FUNCTIONS.to_sympy(value)}"
                )
    return matrix.to_Matrix().applyfunc(sympy.expand)


def polynomial_coefficients(matrix: sympy.Matrix, symbol: sympy.Symbol) -> List[sympy.Matrix]:
    """Coefficient matrices of symbol^0, symbol^1, ... of a polynomial matrix."""
    polys = {
        (i, j): sympy.Poly(matrix[i, j], symbol)
        for i in range(matrix.rows)
        for j in range(matrix.cols)
        if matrix[i, j] != 0
    }
    degree = max((p.degree() for p in polys.values()), default=0)
    result = []
    for k in range(degree + 1):
        coefficient = sympy.zeros(matrix.rows, matrix.cols)
        for (i, j), poly in polys.items():
            coefficient[i, j] = poly.coeff_monomial(symbol**k)
        result.append(coefficient)
    return result


def _is_zero(matrix: sympy.Matrix) -> bool:
    return all(sympy.expand(value) == 0 for value in matrix)


@dataclass
class ROperator:
    """An operator on a realization W, stored level by level.

    ``blocks[k]`` maps level k to level k + ``level_shift``. Evaluated
    operators hold exact ``Rows``; polynomial ones hold sympy matrices in
    ``symbol``.
    """

    name: str
    module: ModuleRealization
    blocks: Dict[int, Block]
    polynomial: bool = False
    level_shift: int = 0
    symbol: sympy.Symbol = U

    def levels(self) -> List[int]:
        return sorted(self.blocks)

    def block(self, level: int) -> Block:
        if level not in self.blocks:
            raise RealizationError(f"{self.name} is not computed on level {level}")
        return self.blocks[level]

    def matrix(self, level: int) -> sympy.Matrix:
        block = self.block(level)
        if self.polynomial:
            return block
        return _as_matrix(block, self.module.dimension(level))

    def at(self, a: Number) -> "ROperator":
        """Specialize a polynomial operator at ``symbol = a``."""
        if not self.polynomial:
            raise ValueError(f"{self.name} is already evaluated")
        value = to_rational(Fraction(a))
        blocks = {k: as_rows(m.subs(self.symbol, value)) for k, m in self.blocks.items()}
        return ROperator(
            f"{self.name}({render_fraction(Fraction(a))})",
            self.module,
            blocks,
            polynomial=False,
            level_shift=self.level_shift,
            symbol=self.symbol,
        )

    def coefficient_matrices(self, level: int) -> List[Rows]:
        """Coefficients of u^0, u^1, ... of a polynomial block."""
        if not self.polynomial:
            raise ValueError(f"{self.name} is not polynomial")
        return [as_rows(m) for m in polynomial_coefficients(self.block(level), self.symbol)]

    def compose(self, other: "ROperator") -> "ROperator":
        """self ∘ other on the levels where both are known (evaluated operators)."""
        if self.polynomial or other.polynomial or self.level_shift or other.level_shift:
            raise ValueError("compose expects evaluated level-preserving operators")
        common = sorted(set(self.blocks) & set(other.blocks))
        blocks = {k: matmul(self.blocks[k], other.blocks[k]) for k in common}
        return ROperator(f"{self.name}∘{other.name}", self.module, blocks)

    def apply(self, level: int, vector: Vector) -> Vector:
        """Image of a vector supported on ``level`` (evaluated operators)."""
        if self.polynomial:
            raise ValueError(f"{self.name} must be evaluated before it is applied")
        coords = self.module.coordinates(vector, level)
        block = self.block(level)
        target = self.module.basis(level + self.level_shift) if block else []
        result: Vector = {}
        for label, row in zip(target, block):
            value = sum((row[j] * coords[j] for j in range(len(coords))), Fraction(0))
            if value != 0:
                result[label] = value
        return result

    def to_dict(self) -> Dict[str, Any]:
        blocks: Dict[str, List[List[str]]] = {}
        for level, block in sorted(self.blocks.items()):
            if self.polynomial:
                blocks[str(level)] = [
                    [str(sympy.expand(block[i, j])) for j in range(block.cols)]
                    for i in range(block.rows)
                ]
            else:
                blocks[str(level)] = [[render_fraction(c) for c in row] for row in block]
        return {
            "name": self.name,
            "module": self.module.name,
            "polynomial": self.polynomial,
            "symbol": str(self.symbol) if self.polynomial else None,
            "level_shift": self.level_shift,
            "blocks": blocks,
        }


def _spanning(module: ModuleRealization, level: int) -> Tuple[List[Tuple[int, ...]], Rows]:
    words, columns = module.word_spanning_set(level)
    return words, inverse(columns)


def _twisted_image(
    module: ModuleRealization, coefficients: Sequence[Fraction], word: Sequence[int]
) -> Vector:
    """y_{w_1} ⋯ y_{w_k} ω with y_n = Σ_j c_j x⁻_{n+j}."""
    vector = module.top_vector()
    for n in reversed(tuple(word)):
        vector = combine(
            (c, module.act(Generator.XMINUS, n + j, vector))
            for j, c in enumerate(coefficients)
            if c != 0
        )
        if not vector:
            break
    return vector


def _baxter_block(
    module: ModuleRealization,
    coefficients: Sequence[Fraction],
    level: int,
    spanning: Tuple[List[Tuple[int, ...]], Rows],
) -> Rows:
    dim = module.dimension(level)
    if dim == 0:
        return []
    words, spanning_inverse = spanning
    images = [module.coordinates(_twisted_image(module, coefficients, w), level) for w in words]
    return matmul(transpose(images, dim), spanning_inverse)


def baxter_R(
    W: ModuleRealization,
    s: Optional[LinRat] = None,
    a: Optional[Number] = None,
    depth: Optional[int] = None,
) -> ROperator:
    """The Baxter recursion operator on the levels of W up to ``depth``.

    With a polynomial ``s`` this is R_s^W. Without ``s`` it is R_1^W(u),
    the case s(v) = v − u: specialized at ``a`` when given, otherwise as a
    polynomial in u interpolated at level + 2 points per level.

    Raises:
        ValueError: If ``s`` is not a polynomial or both ``s`` and ``a`` are given.
        RealizationError: If a level has no x⁻-word basis, or an
            interpolated block exceeds its degree bound.
    """
    depth = W.depth if depth is None else depth
    levels = list(W.levels(depth))
    spanning = {k: _spanning(W, k) for k in levels if W.dimension(k)}

    if s is not None or a is not None:
        if s is not None and a is not None:
            raise ValueError("Pass either s or a, not both")
        if s is None:
            a = Fraction(a)
            s = LinRat.linear(a)
        if not s.is_polynomial:
            raise ValueError(f"Baxter recursion needs a polynomial, got {s}")
        coefficients = s.poly_coefficients()
        blocks: Dict[int, Block] = {
            k: _baxter_block(W, coefficients, k, spanning[k]) if k in spanning else []
            for k in levels
        }
        name = f"R[{s}]" if a is None else f"R({render_fraction(Fraction(a))})"
        return ROperator(name, W, blocks)

    blocks = {}
    for k in levels:
        if k not in spanning:
            blocks[k] = sympy.zeros(0, 0)
            continue
        points = sample_points(k + 2)
        samples = [_baxter_block(W, [-p, Fraction(1)], k, spanning[k]) for p in points]
        try:
            blocks[k] = interpolate_matrix(points, samples, U)
        except ValueError as e:
            raise RealizationError(f"R_1^W(u) on level {k} of {W.name}: {e}") from e
        logger.debug(f"R_1(u) on {W.name}: level {k} interpolated at {len(points)} points")
    return ROperator("R(u)", W, blocks, polynomial=True)


def lambda_poly(
    ratio: Union[LWeight, Mapping[AKey, int]], s: Union[LWeight, LinRat]
) -> LinRat:
    """∏ s_j(u + b)^n over the factors A_{j,b}^n of a highest/lowest ratio.

    Raises:
        NotAMonomialError: If the ratio is not a monomial in the A_{j,b}.
        ValueError: If a component of s used by the ratio is not a polynomial.
    """
    if isinstance(s, LinRat):
        s = LWeight.from_sl2(s)
    exponents = a_monomial_decompose(ratio) if isinstance(ratio, LWeight) else dict(ratio)
    result = LinRat.one()
    for (j, b), n in sorted(exponents.items()):
        if n < 0:
            raise NotAMonomialError(f"A({j},{b}) appears with exponent {n} in the ratio")
        component = s.component(j)
        if not component.is_polynomial:
            raise ValueError(f"Component {j} of {s} is not a polynomial")
        result = result * component.shift(-Fraction(b)) ** n
    return result


def negative_polynomial(W: ModuleRealization) -> LinRat:
    """s with W = L(s⁻¹).

    Raises:
        RealizationError: If the top ℓ-weight of W is not an inverse polynomial.
    """
    s = W.top.inverse()
    if not s.is_polynomial:
        raise RealizationError(f"{W.name} is not a negative module: top ℓ-weight {W.top}")
    return s


def _lowest_data(v_data: Sequence[Tuple[int, Number]]) -> List[Fraction]:
    positions = []
    for i, a in v_data:
        if int(i) != 1:
            raise RealizationError(f"Node {i} does not exist for sl₂")
        positions.append(Fraction(a))
    return positions


def _tq_sides(
    base: sympy.Matrix, positions: Sequence[Fraction], lam: LinRat
) -> Tuple[DomainMatrix, DomainMatrix]:
    """(∏ R(u + a_s), λ(u) ∏ R(u + a_s + 1)) on one level, over QQ(u)."""
    left = DomainMatrix.eye(base.rows, RATIONAL_FUNCTIONS)
    right = left * RATIONAL_FUNCTIONS.from_sympy(lam.to_expr(U))
    for a in positions:
        left = left * _over_field(base.subs(U, U + to_rational(a)))
        right = right * _over_field(base.subs(U, U + to_rational(a + 1)))
    return left, right


def t_lowest(
    v_data: Sequence[Tuple[int, Number]], W: ModuleRealization, depth: Optional[int] = None
) -> ROperator:
    """Lowest diagonal entry t_{V,W}(u) as a polynomial operator on W.

    V is the irreducible module with lowest ℓ-weight ∏_s Y_{a_s+1/2}^{−1},
    given by ``v_data`` = [(1, a_s), ...]; W = L(s⁻¹) is negative. Solves

        t(u) ∏_s R_1^W(u + a_s) = λ_{V,W}(u) ∏_s R_1^W(u + a_s + 1)

    over QQ(u) on every level and checks that the solution is polynomial.

    Raises:
        RealizationError: If W is not negative or t is not polynomial.
    """
    positions = _lowest_data(v_data)
    s = negative_polynomial(W)
    ratio: Dict[AKey, int] = {}
    for a in positions:
        ratio[(1, a)] = ratio.get((1, a), 0) + 1
    lam = lambda_poly(ratio, s)
    R = baxter_R(W, depth=depth)
    blocks: Dict[int, Block] = {}
    for level in R.levels():
        base = R.matrix(level)
        if base.rows == 0:
            blocks[level] = base
            continue
        left, right = _tq_sides(base, positions, lam)
        blocks[level] = _polynomial_entries(
            right * _invert(left, f"T-side on level {level}"), f"t(u) on level {level}"
        )
    logger.debug(f"t(u) on {W.name}: λ = {lam}, {len(blocks)} levels")
    return ROperator(f"t[{lam}]", W, blocks, polynomial=True)


def _rho(monomial: Sequence[AKey]) -> sympy.Expr:
    """Eigenvalue ∏ (a − u) of R_1^W(u) on the ℓ-weight top ∏ A_a^{−1}."""
    return sympy.Mul(*[to_rational(a) - U for _, a in monomial])


def check_tq_relation(
    v_data: Sequence[Tuple[int, Number]], W: ModuleRealization, depth: Optional[int] = None
) -> CheckReport:
    """Check t_{V,W} against R_1^W level by level as exact polynomial identities.

    On every level: the TQ identity itself, t monic of degree deg λ, and the
    characteristic polynomials of R(u) and t(u) against the closed
    eigenvalues read from the ℓ-weights of W.
    """
    report = CheckReport(
        f"TQ relation on {W.name}",
        hint="Compare the failing level's ℓ-weights with the q-character of W.",
    )
    positions = _lowest_data(v_data)
    s = negative_polynomial(W)
    ratio: Dict[AKey, int] = {}
    for a in positions:
        ratio[(1, a)] = ratio.get((1, a), 0) + 1
    lam = lambda_poly(ratio, s)
    R = baxter_R(W, depth=depth)
    t = t_lowest(v_data, W, depth)
    qc = lweight_decomposition(W, depth=depth)
    x = sympy.Symbol("x")
    lam_expr = lam.to_expr(U)

    for level in R.levels():
        base = R.matrix(level)
        if base.rows == 0:
            continue
        block = t.matrix(level)
        left, right = _tq_sides(base, positions, lam)
        report.record(
            (_over_field(block) * left - right).is_zero_matrix,
            f"TQ identity fails on level {level}",
        )

        coefficients = polynomial_coefficients(block, U)
        monic = len(coefficients) == lam.degree + 1 and coefficients[-1] == sympy.eye(base.rows)
        report.record(monic, f"t(u) is not monic of degree {lam.degree} on level {level}")

        expected_r = sympy.Integer(1)
        expected_t = sympy.Integer(1)
        for monomial, mult in qc.at_size(level).items():
            rho = _rho(monomial)
            tau = lam_expr
            for a in positions:
                shift = to_rational(a)
                tau = tau * rho.subs(U, U + shift + 1) / rho.subs(U, U + shift)
            expected_r *= (x - rho) ** mult
            expected_t *= (x - sympy.cancel(tau)) ** mult
        report.record(
            sympy.expand(base.charpoly(x).as_expr() - expected_r) == 0,
            f"R(u) eigenvalues on level {level} differ from ∏(a − u)",
        )
        report.record(
            sympy.expand(sympy.cancel(block.charpoly(x).as_expr() - expected_t)) == 0,
            f"t(u) eigenvalues on level {level} differ from the closed formula",
        )
    report.details.update({"lambda": str(lam), "levels": len(R.levels())})
    return report


def check_baxter_operator(
    W: ModuleRealization, n_max: int = 6, depth: Optional[int] = None
) -> CheckReport:
    """Invariants of R_1^W(u): R(ω) = ω, commutation with the ξ_p, monic degree, eigenvalues."""
    report = CheckReport(
        f"Baxter operator on {W.name}",
        hint="A ξ-commutation failure usually means the word basis of a level is wrong.",
    )
    R = baxter_R(W, depth=depth)
    qc = lweight_decomposition(W, depth=depth)
    unit = W.algebra.unit_index
    x = sympy.Symbol("x")
    for level in R.levels():
        block = R.matrix(level)
        dim = block.rows
        if dim == 0:
            continue
        if level == 0:
            report.record(block == sympy.eye(1), "R(ω) ≠ ω")
        for p in range(unit + 1, n_max + 1):
            xi = _mode_matrix(W, Generator.XI, p, level)
            report.record(
                _is_zero(block * xi - xi * block), f"[R(u), ξ_{p}] ≠ 0 on level {level}"
            )
        coefficients = polynomial_coefficients(block, U)
        leading = sympy.eye(dim) * (-1) ** level
        report.record(
            len(coefficients) == level + 1 and coefficients[-1] == leading,
            f"R(u) is not monic of degree {level} in −u on level {level}",
        )
        expected = sympy.Mul(
            *[(x - _rho(m)) ** mult for m, mult in qc.at_size(level).items()]
        )
        report.record(
            sympy.expand(block.charpoly(x).as_expr() - expected) == 0,
            f"R(u) eigenvalues on level {level} differ from ∏(a − u)",
        )
    return report


@dataclass
class FundamentalRMatrix:
    """Ř_{N,W}(u) for W = Lminus(b), as a 2×2 matrix of operators on W.

    ``entries[(k, j)]`` is t_{e_k,e_j}: Ř(e_j ⊗ w) = Σ_k t_{e_k,e_j}(w) ⊗ e_k.
    Entries are known on the source levels 0, ..., depth − 1.
    """

    module: ModuleRealization
    entries: Dict[Tuple[int, int], ROperator]
    depth: int
    parameter: Optional[Fraction] = None
    _levels: Dict[Label, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        for level in range(0, self.depth + 1):
            for label in self.module.basis(level):
                self._levels[label] = level

    @property
    def polynomial(self) -> bool:
        return self.parameter is None

    def entry(self, k: int, j: int) -> ROperator:
        return self.entries[(k, j)]

    def at(self, a: Number) -> "FundamentalRMatrix":
        if not self.polynomial:
            raise ValueError("R-matrix is already evaluated")
        entries = {key: op.at(a) for key, op in self.entries.items()}
        return FundamentalRMatrix(self.module, entries, self.depth, Fraction(a))

    def apply(self, j: int, w: Label) -> Vector:
        """Ř(e_j ⊗ w) as a vector over labels (w', k) of W ⊗ N."""
        if self.polynomial:
            raise ValueError("Evaluate the R-matrix before applying it")
        level = self._levels.get(w)
        if level is None or level >= self.depth:
            raise RealizationError(f"{self.module.label_text(w)} is beyond the R-matrix cutoff")
        result: Vector = {}
        for k in (0, 1):
            for label, c in self.entries[(k, j)].apply(level, {w: Fraction(1)}).items():
                result[(label, k)] = c
        return result

    def apply_vector(self, vector: Vector) -> Vector:
        """Ř on a vector over labels (j, w) of N ⊗ W."""
        result: Vector = {}
        for (j, w), c in vector.items():
            add_into(result, self.apply(j, w), c)
        return result

    def spot_check(self, n_max: int = 3) -> CheckReport:
        """Ř x⁻_n (e_1 ⊗ ω) = x⁻_n (ω ⊗ e_1), both sides from the extreme actions."""
        if self.polynomial:
            raise ValueError("Evaluate the R-matrix before the spot check")
        report = CheckReport(
            f"Ř(N({self.parameter}), {self.module.name}) intertwines x⁻",
            hint="The first failing mode index locates the wrong entry.",
        )
        V = two_dimensional(self.parameter)
        source = ExtremeActions(V, self.module)
        target = ExtremeActions(self.module, V)
        top = self.module.basis(0)[0]
        for n in range(0, n_max + 1):
            lhs = self.apply_vector(source.xminus_on_top(n, 0))
            rhs = target.xminus_on_top(n, top)
            report.record(
                lhs == rhs, f"Ř x⁻_{n}(e1⊗ω) ≠ x⁻_{n}(ω⊗e1) at a = {self.parameter}"
            )
        return report

    def to_dict(self) -> Dict[str, Any]:
        return {
            "module": self.module.name,
            "parameter": None if self.polynomial else render_fraction(self.parameter),
            "depth": self.depth,
            "entries": {
                f"t_e{k + 1}e{j + 1}": op.to_dict() for (k, j), op in sorted(self.entries.items())
            },
        }


def rhat_fund_negative(
    a: Optional[Number], W: ModuleRealization, depth: Optional[int] = None
) -> FundamentalRMatrix:
    """Ř_{N,W}(a) for W = Lminus(b); polynomial in u when ``a`` is None.

    t_{e2,e2} is the lowest diagonal entry, t_{e1,e2} = −R(u)⁻¹ x⁻_0 R(u) t_{e2,e2},
    and commuting Ř with x⁺_0 gives t_{e1,e1} = [x⁺_0, t_{e1,e2}] and
    t_{e2,e1} = [x⁺_0, t_{e2,e2}].

    Raises:
        RealizationError: If W is not a negative prefundamental module.
    """
    s = negative_polynomial(W)
    if W.shift != -1 or s.degree != 1:
        raise RealizationError(f"{W.name} is not a negative prefundamental module")
    depth = W.depth if depth is None else depth
    if depth < 1:
        raise ValueError(f"depth must be at least 1, got {depth}")
    R = baxter_R(W, depth=depth)
    t22 = t_lowest([(1, 0)], W, depth)
    safe = range(0, depth)

    t12: Dict[int, Block] = {}
    for level in safe:
        x_minus = _mode_matrix(W, Generator.XMINUS, 0, level)
        upper = _over_field(R.matrix(level + 1))
        lower = _over_field(x_minus) * _over_field(R.matrix(level))
        lower = lower * _over_field(t22.matrix(level))
        product = -(_invert(upper, f"R on level {level + 1}") * lower)
        t12[level] = _polynomial_entries(product, f"t_e1e2 on level {level}")

    t11: Dict[int, Block] = {}
    t21: Dict[int, Block] = {}
    for level in safe:
        x_up = _mode_matrix(W, Generator.XPLUS, 0, level + 1)
        x_here = _mode_matrix(W, Generator.XPLUS, 0, level)
        bracket_12 = x_up * t12[level]
        bracket_22 = x_here * t22.matrix(level)
        if level >= 1:
            bracket_12 -= t12[level - 1] * x_here
            bracket_22 -= t22.matrix(level - 1) * x_here
        t11[level] = bracket_12.applyfunc(sympy.expand)
        t21[level] = bracket_22.applyfunc(sympy.expand)

    entries = {
        (0, 0): ROperator("t_e1e1", W, t11, polynomial=True),
        (0, 1): ROperator("t_e1e2", W, t12, polynomial=True, level_shift=1),
        (1, 0): ROperator("t_e2e1", W, t21, polynomial=True, level_shift=-1),
        (1, 1): ROperator(
            "t_e2e2", W, {k: t22.matrix(k) for k in safe}, polynomial=True
        ),
    }
    result = FundamentalRMatrix(W, entries, depth)
    logger.debug(f"Ř(N, {W.name}) assembled on {depth} levels")
    return result if a is None else result.at(a)


def _intertwiner_rows(
    source: ModuleRealization,
    target: ModuleRealization,
    modes: Sequence[Tuple[Generator, int]] = _GENERATING_MODES,
) -> Tuple[Rows, List[int], List[int]]:
    """Linear equations X g_source = g_target X for the given modes.

    Unknowns are the entries of the level blocks X_k, row-major, starting at
    ``offsets[k]``; source and target share
    their level dimensions.
    """
    top_level = source.max_level or 0
    dims = [source.dimension(k) for k in range(top_level + 1)]
    offsets = [sum(d * d for d in dims[:k]) for k in range(len(dims))]
    total = sum(d * d for d in dims)
    rows: Rows = []
    for generator, index in modes:
        for k in range(len(dims)):
            t = target_level(generator, k)
            if not 0 <= t < len(dims) or dims[k] == 0 or dims[t] == 0:
                continue
            m_source = source.matrix(generator, index, k)
            m_target = target.matrix(generator, index, k)
            for r in range(dims[t]):
                for c in range(dims[k]):
                    row = [Fraction(0)] * total
                    for j in range(dims[t]):
                        row[offsets[t] + r * dims[t] + j] += m_source[j][c]
                    for j in range(dims[k]):
                        row[offsets[k] + j * dims[k] + c] -= m_target[r][j]
                    rows.append(row)
    return rows, offsets, dims


def _tensor_pair(
    left: ModuleRealization, right: ModuleRealization, z: Fraction
) -> Tuple[TensorModule, TensorModule]:
    shifted = spectral_shift(left, z)
    return tensor_Y0(shifted, right), tensor_Y0(right, shifted)


def intertwiner_at(left: ModuleRealization, right: ModuleRealization, z: Number) -> Dict[int, Rows]:
    """The normalized intertwiner U(z) ⊗ V → V ⊗ U(z) at one sample point.

    Blocks are indexed by level, in the bases of ``tensor_Y0``; the top
    vector ω_U ⊗ ω_V goes to ω_V ⊗ ω_U.

    Raises:
        SamplePointError: If the intertwiners do not form a line or vanish on
            the top vector.
    """
    z = Fraction(z)
    source, target = _tensor_pair(left, right, z)
    rows, offsets, dims = _intertwiner_rows(source, target)
    total = sum(d * d for d in dims)
    kernel = nullspace(rows, total) if rows else [
        [Fraction(int(i == j)) for i in range(total)] for j in range(total)
    ]
    if len(kernel) != 1:
        raise SamplePointError(f"Intertwiners at z = {z} form a space of dimension {len(kernel)}")
    vector = kernel[0]
    norm = vector[offsets[0]]
    if norm == 0:
        raise SamplePointError(f"Intertwiner at z = {z} kills the top vector")
    return {
        k: [[vector[offsets[k] + r * d + c] / norm for c in range(d)] for r in range(d)]
        for k, d in enumerate(dims)
    }


def _twisted_pair(a: Fraction) -> Tuple[ModuleRealization, ModuleRealization]:
    """L⁺_a ⊗ N(a) and N(a) ⊗ L⁺_a as one-dimensional twists of N(a)."""
    s = LinRat.linear(a)
    return tensor_onedim(s, two_dimensional(a), LEFT), tensor_onedim(s, two_dimensional(a), RIGHT)


def _all_modes(module: ModuleRealization, n_max: int) -> List[Tuple[Generator, int]]:
    return [
        (generator, n)
        for generator in (Generator.XMINUS, Generator.XPLUS, Generator.XI)
        for n in module.mode_indices(generator, n_max)
    ]


def rhat_positive_fundamental(a: Number, n_max: int = 3) -> Dict[int, Rows]:
    """Ř_{L⁺_a, N(a)}: L⁺_a ⊗ N(a) → N(a) ⊗ L⁺_a, one block per level.

    Both sides are N(a) twisted by u − a; the morphism is solved from the
    intertwining equations for all modes up to ``n_max`` and normalized to
    send the top vector to the top vector.

    Raises:
        RealizationError: If the morphisms do not form a line or kill the top vector.
    """
    a = Fraction(a)
    source, target = _twisted_pair(a)
    rows, offsets, dims = _intertwiner_rows(source, target, _all_modes(source, n_max))
    kernel = nullspace(rows, sum(d * d for d in dims))
    if len(kernel) != 1:
        raise RealizationError(
            f"Morphisms {source.name} → {target.name} form a space of dimension {len(kernel)}"
        )
    vector = kernel[0]
    norm = vector[offsets[0]]
    if norm == 0:
        raise RealizationError(f"The morphism {source.name} → {target.name} kills the top vector")
    return {
        k: [[vector[offsets[k] + r * d + c] / norm for c in range(d)] for r in range(d)]
        for k, d in enumerate(dims)
    }


def _has_lweight(
    module: ModuleRealization, level: int, vector: Sequence[Fraction], e: LinRat, modes: int
) -> bool:
    """True iff ξ_p acts on ``vector`` by the coefficients of e(u)."""
    if e.degree != module.top.degree:
        return False
    unit = module.algebra.unit_index
    for j in range(1, modes + 1):
        value = e.coefficient(e.degree - j)
        block = module.matrix(Generator.XI, unit + j, level)
        image = [sum((x * y for x, y in zip(row, vector)), Fraction(0)) for row in block]
        if image != [value * x for x in vector]:
            return False
    return True


def check_short_exact_sequence(a: Number, n_max: int = 3) -> CheckReport:
    """Kernel and image of Ř_{L⁺_a, N(a)} are the lines of ℓ-weight Ψ_{a+1} and Ψ_{a−1}.

    The kernel gives the submodule L⁺_{a+1} of L⁺_a ⊗ N(a) and the image
    the quotient L⁺_{a−1}.
    """
    a = Fraction(a)
    report = CheckReport(
        f"short exact sequence through Ř(L+_{render_fraction(a)}, N({render_fraction(a)}))",
        hint="A kernel of the wrong ℓ-weight means the twisted actions disagree.",
    )
    source, target = _twisted_pair(a)
    blocks = rhat_positive_fundamental(a, n_max)
    kernel = [
        (k, v) for k, block in blocks.items() for v in nullspace(block, len(block))
    ]
    image = [
        (k, column)
        for k, block in blocks.items()
        for column in transpose(block, len(block))
        if any(column)
    ][:1]
    image_rank = sum(rank(block, len(block)) for block in blocks.values() if block)
    report.record(len(kernel) == 1, f"the kernel has dimension {len(kernel)}")
    report.record(image_rank == 1, f"the image has dimension {image_rank}")
    if len(kernel) == 1:
        level, vector = kernel[0]
        report.record(
            _has_lweight(source, level, vector, LinRat.linear(a + 1), n_max + 1),
            f"the kernel vector on level {level} does not have ℓ-weight Ψ_{a + 1}",
        )
        report.details["kernel_level"] = level
    if image:
        level, vector = image[0]
        report.record(
            _has_lweight(target, level, vector, LinRat.linear(a - 1), n_max + 1),
            f"the image on level {level} does not have ℓ-weight Ψ_{a - 1}",
        )
        report.details["image_level"] = level
    return report


@dataclass
class RationalRMatrix:
    """Normalized Ř_{U,V}(u): U(u) ⊗ V → V ⊗ U(u), rational in u on each level."""

    left: ModuleRealization
    right: ModuleRealization
    source_levels: List[List[Label]]
    target_levels: List[List[Label]]
    blocks: Dict[int, sympy.Matrix]
    symbol: sympy.Symbol = U
    _evaluated: Dict[Fraction, Dict[int, Rows]] = field(default_factory=dict, repr=False)

    def poles(self) -> Set[Fraction]:
        found: Set[Fraction] = set()
        for block in self.blocks.values():
            for value in block:
                found |= poles(value, self.symbol)
        return found

    def at(self, z: Number) -> Dict[int, Rows]:
        """Blocks at u = z.

        Raises:
            SamplePointError: If z is a pole.
        """
        z = Fraction(z)
        if z not in self._evaluated:
            try:
                self._evaluated[z] = {
                    k: [
                        [evaluate(block[i, j], self.symbol, z) for j in range(block.cols)]
                        for i in range(block.rows)
                    ]
                    for k, block in self.blocks.items()
                }
            except (ValueError, ZeroDivisionError) as e:
                raise SamplePointError(f"u = {z} is a pole of Ř_{{U,V}}(u)") from e
        return self._evaluated[z]

    def apply(self, z: Number, vector: Vector) -> Vector:
        """Ř(z) on a vector over labels (u, v) of U ⊗ V."""
        blocks = self.at(z)
        result: Vector = {}
        for label, c in vector.items():
            for k, level in enumerate(self.source_levels):
                if label in level:
                    column = level.index(label)
                    for row, target in zip(blocks[k], self.target_levels[k]):
                        if row[column] != 0:
                            add_into(result, {target: row[column] * c})
                    break
            else:
                raise RealizationError(f"{label!r} is not a basis label of U ⊗ V")
        return result

    def is_morphism_at(self, z: Number) -> bool:
        """The specialization at z satisfies the intertwining equations."""
        source, target = _tensor_pair(self.left, self.right, Fraction(z))
        rows, offsets, dims = _intertwiner_rows(source, target)
        blocks = self.at(z)
        vector = [Fraction(0)] * sum(d * d for d in dims)
        for k, d in enumerate(dims):
            for r in range(d):
                for c in range(d):
                    vector[offsets[k] + r * d + c] = blocks[k][r][c]
        return all(
            sum((row[i] * vector[i] for i in range(len(vector))), Fraction(0)) == 0
            for row in rows
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "left": self.left.name,
            "right": self.right.name,
            "symbol": str(self.symbol),
            "blocks": {
                str(k): {
                    "source": [str(label) for label in self.source_levels[k]],
                    "target": [str(label) for label in self.target_levels[k]],
                    "matrix": [
                        [str(sympy.factor(block[i, j])) for j in range(block.cols)]
                        for i in range(block.rows)
                    ],
                }
                for k, block in sorted(self.blocks.items())
            },
        }


def rhat_findim(
    left: ModuleRealization, right: ModuleRealization, start: int = 0, held_out: int = 3
) -> RationalRMatrix:
    """Normalized R-matrix of two finite-dimensional modules over Y(sl₂).

    Intertwiners are solved at integer sample points from ``start`` on,
    skipping points where they are not unique; entries are reconstructed by
    Cauchy interpolation with numerator and denominator degrees bounded by
    the product of the level dimensions, then checked at ``held_out`` further
    points.

    Raises:
        RealizationError: If a factor is shifted or infinite-dimensional, or
            a held-out check fails.
        SamplePointError: If too many sample points are singular.
    """
    product = tensor_Y0(left, right)
    dims = [product.dimension(k) for k in range((product.max_level or 0) + 1)]
    bound = prod(d for d in dims if d)
    needed = 2 * bound + 1
    samples: List[Tuple[Fraction, Dict[int, Rows]]] = []
    candidate = start
    limit = start + 4 * (needed + held_out) + 16
    while len(samples) < needed + held_out:
        if candidate > limit:
            raise SamplePointError(
                f"Only {len(samples)} regular sample points found below {limit}"
            )
        try:
            samples.append((Fraction(candidate), intertwiner_at(left, right, candidate)))
        except SamplePointError as e:
            logger.debug(f"Skipping sample point: {e}")
        candidate += 1

    fit, checks = samples[:needed], samples[needed:]
    blocks: Dict[int, sympy.Matrix] = {}
    for k, d in enumerate(dims):
        block = sympy.zeros(d, d)
        for r in range(d):
            for c in range(d):
                points = [(a, value[k][r][c]) for a, value in fit]
                block[r, c] = rational_interpolate(points, bound, bound, U)
        blocks[k] = block

    swapped = tensor_Y0(right, left)
    source_levels = [list(product.basis(k)) for k in range(len(dims))]
    target_levels = [list(swapped.basis(k)) for k in range(len(dims))]
    result = RationalRMatrix(left, right, source_levels, target_levels, blocks)
    for a, expected in checks:
        if result.at(a) != expected:
            raise RealizationError(f"Interpolated Ř(u) disagrees with the intertwiner at u = {a}")
    logger.debug(
        f"Ř({left.name}, {right.name}): {needed} fit points, {held_out} held out, bound {bound}"
    )
    return result


def fundamental_position(module: ModuleRealization) -> Fraction:
    """c with module ≅ N(c).

    Raises:
        RealizationError: If the module is not two-dimensional of that form.
    """
    candidates = module.top.poles()
    if module.shift != 0 or module.max_level != 1 or len(candidates) != 1:
        raise RealizationError(f"{module.name} is not a two-dimensional module N(c)")
    c = candidates[0]
    if module.top != two_dimensional(c).top:
        raise RealizationError(f"{module.name} is not a two-dimensional module N(c)")
    return c


def check_ybe(
    left: ModuleRealization,
    middle: ModuleRealization,
    W: ModuleRealization,
    samples: Sequence[Tuple[Number, Number]],
    depth: Optional[int] = None,
) -> CheckReport:
    """The Yang–Baxter equation on U ⊗ V ⊗ W for U, V two-dimensional.

    Ř^{23}_{U,V}(u−v) Ř^{12}_{U,W}(u) Ř^{23}_{V,W}(v) and
    Ř^{12}_{V,W}(v) Ř^{23}_{U,W}(u) Ř^{12}_{U,V}(u−v) are compared on every
    e_i ⊗ e_j ⊗ w with w at most two levels below the cutoff of W.

    Raises:
        RealizationError: If U or V is not of the form N(c), or W is not
            a negative prefundamental module.
        SamplePointError: If u − v is a pole of Ř_{U,V}.
    """
    c_u, c_v = fundamental_position(left), fundamental_position(middle)
    report = CheckReport(
        f"Yang–Baxter equation on {left.name}⊗{middle.name}⊗{W.name}",
        hint="Failures at the deepest levels only point to a cutoff problem.",
    )
    uv = rhat_findim(left, middle)
    fundamental = rhat_fund_negative(None, W, depth)
    safe_levels = range(0, fundamental.depth - 1)

    for u, v in samples:
        u, v = Fraction(u), Fraction(v)
        z = u - v
        r_uw = fundamental.at(u + c_u)
        r_vw = fundamental.at(v + c_v)

        def lhs(i: int, j: int, w: Label) -> Vector:
            first: Vector = {}
            for (w1, k), c in r_vw.apply(j, w).items():
                add_into(first, {(i, w1, k): c})
            second: Vector = {}
            for (i1, w1, k), c in first.items():
                for (w2, l), d in r_uw.apply(i1, w1).items():
                    add_into(second, {(w2, l, k): c * d})
            third: Vector = {}
            for (w2, l, k), c in second.items():
                for (k1, l1), d in uv.apply(z, {(l, k): Fraction(1)}).items():
                    add_into(third, {(w2, k1, l1): c * d})
            return third

        def rhs(i: int, j: int, w: Label) -> Vector:
            first: Vector = {}
            for (j1, i1), c in uv.apply(z, {(i, j): Fraction(1)}).items():
                add_into(first, {(j1, i1, w): c})
            second: Vector = {}
            for (j1, i1, w1), c in first.items():
                for (w2, l), d in r_uw.apply(i1, w1).items():
                    add_into(second, {(j1, w2, l): c * d})
            third: Vector = {}
            for (j1, w2, l), c in second.items():
                for (w3, k), d in r_vw.apply(j1, w2).items():
                    add_into(third, {(w3, k, l): c * d})
            return third

        for level in safe_levels:
            for w in W.basis(level):
                for i in (0, 1):
                    for j in (0, 1):
                        report.record(
                            lhs(i, j, w) == rhs(i, j, w),
                            f"YBE fails on e{i + 1}⊗e{j + 1}⊗{W.label_text(w)} "
                            f"at (u, v) = ({u}, {v})",
                        )
    report.details.update({"samples": len(samples), "levels": len(safe_levels)})
    return report


def _kron(a: sympy.Matrix, b: sympy.Matrix) -> sympy.Matrix:
    return sympy.Matrix(
        a.rows * b.rows,
        a.cols * b.cols,
        lambda i, j: a[i // b.rows, j // b.cols] * b[i % b.rows, j % b.cols],
    )


def _composite_lowest_row(
    first: FundamentalRMatrix, second: FundamentalRMatrix, level: int
) -> sympy.Matrix:
    """The e₂ → e₂ block of (1⊗Ř₂)(Ř₁⊗1) on level ``level`` of W₁ ⊗ W₂.

    It is t¹_{e2,e2}⊗t²_{e2,e2} + t¹_{e1,e2}⊗t²_{e2,e1}; the basis runs over
    the pairs of levels (p, level − p) with p ascending.
    """
    sizes = [
        first.module.dimension(p) * second.module.dimension(level - p)
        for p in range(level + 1)
    ]
    offsets = [sum(sizes[:p]) for p in range(level + 2)]
    result = sympy.zeros(offsets[-1], offsets[-1])
    for p in range(level + 1):
        q = level - p
        if sizes[p] == 0:
            continue
        diagonal = _kron(first.entry(1, 1).matrix(p), second.entry(1, 1).matrix(q))
        result[offsets[p] : offsets[p + 1], offsets[p] : offsets[p + 1]] = diagonal
        if q >= 1 and sizes[p + 1]:
            cross = _kron(first.entry(0, 1).matrix(p), second.entry(1, 0).matrix(q))
            result[offsets[p + 1] : offsets[p + 2], offsets[p] : offsets[p + 1]] = cross
    return result.applyfunc(sympy.expand)


def _constant_conjugacy(source: sympy.Matrix, target: sympy.Matrix, seed: int) -> bool:
    """True iff some invertible constant φ has φ source(u) = target(u) φ."""
    d = source.rows
    if target.shape != source.shape:
        return False
    a_coefficients = polynomial_coefficients(source, U)
    b_coefficients = polynomial_coefficients(target, U)
    length = max(len(a_coefficients), len(b_coefficients))
    a_coefficients += [sympy.zeros(d, d)] * (length - len(a_coefficients))
    b_coefficients += [sympy.zeros(d, d)] * (length - len(b_coefficients))
    rows: Rows = []
    for a_n, b_n in zip(a_coefficients, b_coefficients):
        for r in range(d):
            for c in range(d):
                row = [Fraction(0)] * (d * d)
                for j in range(d):
                    row[r * d + j] += from_rational(a_n[j, c])
                    row[j * d + c] -= from_rational(b_n[r, j])
                rows.append(row)
    kernel = nullspace(rows, d * d)
    rng = random.Random(seed)
    for _ in range(3):
        weights = [Fraction(rng.randint(1, 97)) for _ in kernel]
        combined = [
            sum((w * v[i] for w, v in zip(weights, kernel)), Fraction(0)) for i in range(d * d)
        ]
        phi = [combined[r * d : (r + 1) * d] for r in range(d)]
        if rank(phi, d) == d:
            return True
    return False


def check_factorization_consistency(r: LinRat, s: LinRat, depth: int = 4) -> CheckReport:
    """Ř_{N,L(r⁻¹s⁻¹)} against (1⊗Ř_{N,L(s⁻¹)})(Ř_{N,L(r⁻¹)}⊗1) on lowest-row entries.

    L(r⁻¹s⁻¹) is realized as the Weyl module W(1, rs). On every level below
    ``depth`` its t(u) must be conjugate, by one constant invertible matrix,
    to the e₂ → e₂ block of the composite on L(r⁻¹) ⊗ L(s⁻¹).

    Raises:
        ValueError: If r or s is not a monic linear polynomial.
    """
    for p in (r, s):
        if not p.is_polynomial or p.degree != 1:
            raise ValueError(f"Expected a monic linear polynomial, got {p}")
    report = CheckReport(
        f"factorization of Ř(N, L(1/({r}·{s})))",
        hint="A mismatch on one level only points to the cross term t_e1e2 ⊗ t_e2e1.",
    )
    first = rhat_fund_negative(None, negative_prefundamental(r.zeros()[0], depth), depth)
    second = rhat_fund_negative(None, negative_prefundamental(s.zeros()[0], depth), depth)
    W = make_weyl(LinRat.one(), r * s, depth)
    t = t_lowest([(1, 0)], W, depth)
    levels = [level for level in range(depth) if level in t.blocks]
    for level in levels:
        lowest = t.matrix(level)
        composite = _composite_lowest_row(first, second, level)
        report.record(
            lowest.shape == composite.shape,
            f"level {level} has dimension {lowest.rows} in {W.name} "
            f"and {composite.rows} in the tensor product",
        )
        report.record(
            _constant_conjugacy(lowest, composite, seed=level),
            f"t(u) on level {level} is not conjugate to the composite lowest row",
        )
    report.details.update({"levels": len(levels), "r": str(r), "s": str(s)})
    return report
