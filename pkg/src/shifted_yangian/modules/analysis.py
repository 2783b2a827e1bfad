"""ℓ-weight decomposition, relation checks and cocyclicity for realizations."""

import logging
from fractions import Fraction
from math import comb
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from ..algebra.lweight import AMonomial, sl2_simple_root
from ..algebra.ratfun import LinRat
from ..algebra.yangian_sl2 import Generator
from ..characters.qchar import QCharacter
from ..core.exceptions import RealizationError
from ..core.report import CheckReport
from ..utils.linalg import (
    Rows,
    from_rational,
    generalized_eigenspace,
    rank,
    rational_eigenvalues,
    transpose,
)
from .realization import (
    Label,
    ModuleRealization,
    Vector,
    add_into,
    combine,
    express_in_span,
    target_level,
)
from .verma import VermaModule

logger = logging.getLogger(__name__)

Letter = Tuple[Generator, int]


def _matvec(matrix: Rows, vector: Sequence[Fraction]) -> List[Fraction]:
    return [sum((row[j] * vector[j] for j in range(len(vector))), Fraction(0)) for row in matrix]


def _restrict(matrix: Rows, columns: Rows) -> Rows:
    """R with M·S = S·R for the column basis S of an invariant subspace.

    Raises:
        RealizationError: If the subspace is not invariant.
    """
    coefficients = []
    for column in columns:
        try:
            coefficients.append(express_in_span(columns, _matvec(matrix, column)))
        except ValueError as e:
            raise RealizationError(
                "ξ blocks do not commute: a joint eigenspace is not invariant"
            ) from e
    return transpose(coefficients, len(columns))


def _joint_eigenspaces(
    matrices: Sequence[Rows], dim: int
) -> List[Tuple[Tuple[Fraction, ...], int]]:
    """Joint generalized eigenvalue sequences of commuting matrices with their dimensions."""
    spaces: List[Tuple[Tuple[Fraction, ...], Rows]] = [
        ((), [[Fraction(int(i == j)) for i in range(dim)] for j in range(dim)])
    ]
    for matrix in matrices:
        refined: List[Tuple[Tuple[Fraction, ...], Rows]] = []
        for values, columns in spaces:
            restricted = _restrict(matrix, columns)
            for eigenvalue, multiplicity in sorted(rational_eigenvalues(restricted).items()):
                local = generalized_eigenspace(restricted, eigenvalue, multiplicity)
                lifted = [
                    [
                        sum((columns[k][r] * vector[k] for k in range(len(columns))), Fraction(0))
                        for r in range(dim)
                    ]
                    for vector in local
                ]
                refined.append((values + (eigenvalue,), lifted))
        spaces = refined
    return [(values, len(columns)) for values, columns in spaces]


def _roots_from_series(top: LinRat, values: Sequence[Fraction], size: int) -> AMonomial:
    """Spectral parameters a_1..a_size with top ∏ A_{a_t}^{−1} having the given modes.

    ``values[j]`` is the coefficient of u^{shift−j−1}.
    """
    shift = top.degree
    t = [top.coefficient(shift - j) for j in range(len(values) + 1)]
    f = [Fraction(1)] + list(values)
    c = [Fraction(1)]
    for m in range(1, len(f)):
        c.append(f[m] - sum((t[j] * c[m - j] for j in range(1, m + 1)), Fraction(0)))
    logs = [Fraction(0)]
    for m in range(1, len(c)):
        logs.append(m * c[m] - sum((logs[j] * c[m - j] for j in range(1, m)), Fraction(0)))

    # logs[m] = Σ_t (a_t − 1)^m − (a_t + 1)^m = −2 Σ_{j odd} C(m, j) p_{m−j}
    power_sums = [Fraction(size)]
    if logs[1] != -2 * size:
        raise RealizationError(f"ℓ-weight at level {size} is not top times {size} A⁻¹ factors")
    for m in range(2, size + 2):
        rest = sum(
            (comb(m, j) * power_sums[m - j] for j in range(3, m + 1, 2)), Fraction(0)
        )
        power_sums.append((-logs[m] / 2 - rest) / m)

    elementary = [Fraction(1)]
    for m in range(1, size + 1):
        total = sum(
            ((-1) ** (i - 1) * elementary[m - i] * power_sums[i] for i in range(1, m + 1)),
            Fraction(0),
        )
        elementary.append(total / m)
    x = sympy.Symbol("x")
    poly = sympy.Poly(
        [sympy.Rational((-1) ** m * e.numerator, e.denominator) for m, e in enumerate(elementary)],
        x,
    )
    found = sympy.roots(poly, filter="Q") if size else {}
    if sum(found.values()) != size:
        raise RealizationError(f"ℓ-weight has irrational spectral parameters: {poly.as_expr()}")
    monomial = []
    for root, multiplicity in found.items():
        monomial.extend([(1, from_rational(root))] * int(multiplicity))
    return tuple(sorted(monomial))


def lweight_decomposition(
    module: ModuleRealization, xi_modes: int = 0, depth: Optional[int] = None
) -> QCharacter:
    """q-character of a realization from the joint spectra of the ξ_p.

    Each level is split into joint generalized eigenspaces of ξ_p for p from
    −shift up to at least −shift + level; the eigenvalue sequence identifies
    the A⁻¹-monomial. ``xi_modes`` adds further modes as consistency checks.

    Raises:
        RealizationError: For Verma modules, non-commuting ξ blocks or
            eigenvalue sequences that are not ℓ-weights of the expected form.
    """
    if isinstance(module, VermaModule):
        raise RealizationError(
            "Verma levels are not ξ-invariant under the index cap; decompose a quotient"
        )
    depth = module.depth if depth is None else depth
    unit = module.algebra.unit_index
    top = module.top
    terms: Dict[AMonomial, int] = {}
    for level in module.levels(depth):
        dim = module.dimension(level)
        if dim == 0:
            continue
        count = max(level + 1, xi_modes)
        matrices = [module.matrix(Generator.XI, unit + j, level) for j in range(1, count + 1)]
        for a in range(len(matrices)):
            for b in range(a + 1, len(matrices)):
                left = [_matvec(matrices[a], col) for col in transpose(matrices[b], dim)]
                right = [_matvec(matrices[b], col) for col in transpose(matrices[a], dim)]
                if left != right:
                    raise RealizationError(
                        f"{module.name}: ξ_{unit + a + 1} and ξ_{unit + b + 1} do not commute "
                        f"at level {level}"
                    )
        for values, multiplicity in _joint_eigenspaces(matrices, dim):
            monomial = _roots_from_series(top, values, level)
            expected = top
            for _, a in monomial:
                expected = expected / sl2_simple_root(a)
            for j, value in enumerate(values, start=1):
                if expected.coefficient(top.degree - j) != value:
                    raise RealizationError(
                        f"{module.name}: eigenvalue of ξ_{unit + j} at level {level} "
                        f"does not match {expected}"
                    )
            terms[monomial] = terms.get(monomial, 0) + multiplicity
        logger.debug(f"{module.name}: level {level} split into ℓ-weight spaces")
    return QCharacter(module.top_lweight.cartan, module.top_lweight, terms, depth)


Term = Tuple[Fraction, Tuple[Letter, ...]]


def _zeros(rows: int, columns: int) -> np.ndarray:
    return np.full((rows, columns), Fraction(0), dtype=object)


class _ModeMatrices:
    """Exact mode matrices of a realization, one per (mode, level), and their products."""

    def __init__(self, module: ModuleRealization):
        self.module = module
        self._products: Dict[Tuple[Tuple[Letter, ...], int], np.ndarray] = {}

    def _mode(self, letter: Letter, level: int) -> np.ndarray:
        generator, index = letter
        rows = self.module.dimension(target_level(generator, level))
        columns = self.module.dimension(level)
        if rows == 0 or columns == 0:
            return _zeros(rows, columns)
        return np.array(self.module.matrix(generator, index, level), dtype=object)

    def product(self, letters: Tuple[Letter, ...], level: int) -> np.ndarray:
        """X_1 ⋯ X_k on ``level`` (rightmost first)."""
        key = (letters, level)
        if key not in self._products:
            if not letters:
                dim = self.module.dimension(level)
                result = _zeros(dim, dim)
                for i in range(dim):
                    result[i, i] = Fraction(1)
            else:
                last = letters[-1]
                inner = self._mode(last, level)
                if len(letters) == 1:
                    result = inner
                else:
                    outer = self.product(letters[:-1], target_level(last[0], level))
                    if outer.shape[1] == 0:
                        result = _zeros(outer.shape[0], inner.shape[1])
                    else:
                        result = outer @ inner
            self._products[key] = result
        return self._products[key]

    def vanishing_columns(self, terms: Sequence[Term], level: int) -> List[bool]:
        total: Optional[np.ndarray] = None
        for c, letters in terms:
            scaled = self.product(letters, level) * c
            total = scaled if total is None else total + scaled
        if total is None:
            return [True] * self.module.dimension(level)
        return [all(x == 0 for x in total[:, j]) for j in range(total.shape[1])]


class _SparseModes:
    """Columns of letter products on Verma words, each computed once.

    Verma levels are not closed under the index cap, so products are kept
    as sparse vectors over every word they reach.
    """

    def __init__(self, module: ModuleRealization):
        self.module = module
        self._products: Dict[Tuple[Tuple[Letter, ...], Label], Vector] = {}

    def product(self, letters: Tuple[Letter, ...], label: Label) -> Vector:
        key = (letters, label)
        if key not in self._products:
            if not letters:
                result: Vector = {label: Fraction(1)}
            else:
                generator, index = letters[-1]
                inner = self.module.act_on_basis(generator, index, label)
                if len(letters) == 1:
                    result = dict(inner)
                else:
                    result = {}
                    for word, c in inner.items():
                        add_into(result, self.product(letters[:-1], word), c)
            self._products[key] = result
        return self._products[key]

    def vanishing_columns(self, terms: Sequence[Term], level: int) -> List[bool]:
        return [
            not combine((c, self.product(letters, label)) for c, letters in terms)
            for label in self.module.basis(level)
        ]


def _relation_terms(unit: int, n_max: int) -> Iterator[Tuple[List[Term], str]]:
    """Every defining relation with indices up to n_max, as terms of LHS − RHS."""
    one, two = Fraction(1), Fraction(2)
    XI, XP, XM = Generator.XI, Generator.XPLUS, Generator.XMINUS
    xi_range = range(unit + 1, n_max + 1)
    x_range = range(0, n_max + 1)

    yield [(one, ((XI, unit),)), (-one, ())], f"ξ_{unit} ≠ 1"
    yield [(one, ((XI, unit - 1),))], f"ξ_{unit - 1} ≠ 0"
    for p in xi_range:
        for q in xi_range:
            if q > p:
                yield [
                    (one, ((XI, p), (XI, q))),
                    (-one, ((XI, q), (XI, p))),
                ], f"[ξ_{p}, ξ_{q}] ≠ 0"
    for m in x_range:
        for n in x_range:
            yield [
                (one, ((XP, m), (XM, n))),
                (-one, ((XM, n), (XP, m))),
                (-one, ((XI, m + n),)),
            ], f"[x+_{m}, x-_{n}] ≠ ξ_{m + n}"
    for gen, sign in ((XP, 1), (XM, -1)):
        symbol = gen.symbol
        s = Fraction(sign)
        for n in x_range:
            yield [
                (one, ((XI, unit + 1), (gen, n))),
                (-one, ((gen, n), (XI, unit + 1))),
                (-sign * two, ((gen, n),)),
            ], f"[ξ_{unit + 1}, {symbol}_{n}] ≠ {2 * sign}{symbol}_{n}"
        for p in range(unit + 1, n_max):
            for n in range(0, n_max):
                yield [
                    (one, ((XI, p + 1), (gen, n))),
                    (-one, ((gen, n), (XI, p + 1))),
                    (-one, ((XI, p), (gen, n + 1))),
                    (one, ((gen, n + 1), (XI, p))),
                    (-s, ((XI, p), (gen, n))),
                    (-s, ((gen, n), (XI, p))),
                ], f"ξ/{symbol} ladder fails at p={p}, n={n}"
        for m in range(0, n_max):
            for n in range(m, n_max):
                yield [
                    (one, ((gen, m + 1), (gen, n))),
                    (-one, ((gen, n), (gen, m + 1))),
                    (-one, ((gen, m), (gen, n + 1))),
                    (one, ((gen, n + 1), (gen, m))),
                    (-s, ((gen, m), (gen, n))),
                    (-s, ((gen, n), (gen, m))),
                ], f"{symbol} exchange fails at m={m}, n={n}"


def verify_relations(
    module: ModuleRealization, n_max: int, depth: Optional[int] = None
) -> CheckReport:
    """Check the defining relations of Y_s(sl₂) as exact matrix identities.

    Generator indices run up to ``n_max`` on every level within depth. Each
    mode matrix and each product of two modes is built once per level; a
    relation is recorded once per basis vector of the level.
    """
    report = CheckReport(
        f"relations of {module.name}",
        hint="A failing relation names the mode indices and the basis vector it was applied to.",
    )
    unit = module.algebra.unit_index
    modes = _SparseModes(module) if isinstance(module, VermaModule) else _ModeMatrices(module)
    relations = list(_relation_terms(unit, n_max))
    levels = list(module.levels(depth))
    for level in levels:
        names = [module.label_text(label) for label in module.basis(level)]
        for terms, message in relations:
            for name, vanishes in zip(names, modes.vanishing_columns(terms, level)):
                report.record(vanishes, f"{message} on {name}")
        logger.debug(f"{module.name}: relations checked on level {level}")
    report.details.update({"n_max": n_max, "levels": len(levels), "shift": module.shift})
    if isinstance(module, VermaModule):
        report.details["index_cap"] = module.index_cap
    return report


def cocyclicity_check(
    module: ModuleRealization, n_max: int, depth: Optional[int] = None
) -> CheckReport:
    """The joint kernel of the x⁺_n, n ≤ n_max, is the top line."""
    report = CheckReport(
        f"cocyclicity of {module.name}",
        hint="A nonzero joint kernel below the top means the module is not simple.",
    )
    for level in module.levels(depth):
        dim = module.dimension(level)
        if dim == 0 or level == 0:
            report.record(level != 0 or dim == 1, f"top level has dimension {dim}")
            continue
        stacked: Rows = []
        for n in range(0, n_max + 1):
            stacked.extend(module.matrix(Generator.XPLUS, n, level))
        kernel = dim - rank(stacked, dim) if stacked else dim
        report.record(kernel == 0, f"joint x+ kernel of dimension {kernel} at level {level}")
    return report
