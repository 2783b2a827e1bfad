"""GKLO series, truncation checks and the s ↦ s̄ map.

For a truncatable pair (μ, r) the GKLO series A_i(u) = u^{m_i} + ... solve
ξ_i(u) = r_i(u) / (A_i(u) A_i(u − d_i) ∏ neighbour factors). On sl₂ modules
the series is computed twice: as a matrix series from the ξ-modes of each
level, and from the ℓ-weights through the closed eigenvalue formula. The
truncated shifted Yangian is cut out by ⟨A_i(u)⟩₊ = 0.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, floor
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import sympy

from ..algebra.cartan import CartanData, build_cartan, coroot_coordinates
from ..algebra.lweight import AKey, AMonomial, LWeight, sl2_simple_root
from ..algebra.ratfun import LinRat
from ..algebra.yangian_sl2 import Generator
from ..characters.qchar import qc_simple_sl2
from ..core.exceptions import RealizationError
from ..core.report import CheckReport
from ..modules.analysis import lweight_decomposition
from ..modules.realization import ModuleRealization
from ..utils.linalg import Rows, identity, matmul, nullspace
from ..utils.serialization import render_fraction
from .rmatrix import U, as_rows, polynomial_coefficients, baxter_R, lambda_poly, t_lowest

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]
Ratio = Mapping[AKey, int]

H = Fraction(1, 2)

# Highest/lowest ratios of the fundamental modules, as exponents of A_{j,b}.
_FUND_RATIOS: Dict[str, Dict[int, Dict[AKey, int]]] = {
    "A1": {1: {(1, Fraction(0)): 1}},
    "B2": {
        1: {
            (1, Fraction(0)): 1,
            (1, Fraction(-1)): 1,
            (2, Fraction(0)): 1,
            (2, Fraction(-1)): 1,
        },
        2: {(1, Fraction(-1)): 1, (2, Fraction(0)): 1, (2, Fraction(-2)): 1},
    },
    "G2": {
        1: {
            (1, Fraction(0)): 1,
            (1, Fraction(-1)): 1,
            (1, Fraction(-2)): 1,
            (1, Fraction(-3)): 1,
            (2, H): 1,
            (2, -H): 1,
            (2, -3 * H): 2,
            (2, -5 * H): 1,
            (2, -7 * H): 1,
        },
        2: {
            (1, -3 * H): 1,
            (1, -7 * H): 1,
            (2, Fraction(0)): 1,
            (2, Fraction(-2)): 1,
            (2, Fraction(-3)): 1,
            (2, Fraction(-5)): 1,
        },
    },
}


def fund_ratios(type_label: str) -> Dict[int, Dict[AKey, int]]:
    """Shipped fundamental ratios for A1, B2 and G2.

    Raises:
        ValueError: For other types.
    """
    if type_label not in _FUND_RATIOS:
        raise ValueError(
            f"No fundamental ratios shipped for {type_label}; "
            f"available: {', '.join(sorted(_FUND_RATIOS))}"
        )
    return {i: dict(ratio) for i, ratio in _FUND_RATIOS[type_label].items()}


def _zero(rows: int, columns: int) -> Rows:
    return [[Fraction(0)] * columns for _ in range(rows)]


def _add(a: Rows, b: Rows, factor: Fraction = Fraction(1)) -> Rows:
    return [[x + factor * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _is_zero_rows(a: Rows) -> bool:
    return all(x == 0 for row in a for x in row)


@dataclass
class TruncatablePair:
    """A coweight μ and an ℓ-weight r with ϖ^∨(r) − μ = Σ m_i α_i^∨, m_i ∈ ℕ."""

    cartan: CartanData
    mu: Tuple[int, ...]
    r: LWeight
    m: Tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        if len(self.mu) != self.cartan.rank:
            raise ValueError(f"μ = {self.mu} does not match rank {self.cartan.rank}")
        difference = [c - k for c, k in zip(self.r.coweight(), self.mu)]
        coordinates = coroot_coordinates(self.cartan, difference)
        if any(x.denominator != 1 or x < 0 for x in coordinates):
            raise ValueError(
                f"({self.mu}, {self.r}) is not truncatable: ϖ^∨(r) − μ has coroot "
                f"coordinates {[render_fraction(x) for x in coordinates]}"
            )
        self.m = tuple(int(x) for x in coordinates)

    @classmethod
    def sl2(cls, mu: int, r: LinRat) -> "TruncatablePair":
        return cls(build_cartan("A1"), (int(mu),), LWeight.from_sl2(r))

    @property
    def r_sl2(self) -> LinRat:
        if self.cartan.rank != 1:
            raise ValueError(f"{self.cartan.type_label} pair has no single r component")
        return self.r.component(1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": self.cartan.type_label,
            "mu": list(self.mu),
            "r": self.r.to_dict(),
            "m": list(self.m),
        }


def solve_shift_product(h: LinRat) -> LinRat:
    """The g with g(u) g(u − 1) = h.

    Root exponents satisfy n_g(x) = Σ_k (−1)^k n_h(x + 1 + k).

    Raises:
        RealizationError: If no g with finitely many roots exists.
    """
    exponents = h.as_dict()
    classes: Dict[Fraction, List[Fraction]] = {}
    for a in exponents:
        classes.setdefault(a - floor(a), []).append(a)
    roots: Dict[Fraction, int] = {}
    for members in classes.values():
        low, high = min(members), max(members)
        x = high - 1
        while x >= low - 1:
            n = sum(
                (-1) ** k * exponents.get(x + 1 + k, 0) for k in range(int(high - x))
            )
            if n:
                roots[x] = n
            x -= 1
    g = LinRat.from_roots(roots)
    if g * g.shift(1) != h:
        raise RealizationError(f"{h} is not of the form g(u)g(u−1)")
    return g


def eigenvalue_from_monomial(g: LinRat, monomial: AMonomial) -> LinRat:
    """A(u) on the ℓ-weight top·∏A_a⁻¹: g(u) ∏ (u − a + 1)/(u − a)."""
    result = g
    for _, a in monomial:
        result = result * LinRat.from_multisets(zeros=[a - 1], poles=[a])
    return result


def _lweight_of(top: LinRat, monomial: AMonomial) -> LinRat:
    e = top
    for _, a in monomial:
        e = e / sl2_simple_root(a)
    return e


def _xi_series(module: ModuleRealization, level: int, count: int) -> List[Rows]:
    """Coefficients X_0 = 1, X_1, ... of u^{−μ} ξ(u) on a level."""
    dim = module.dimension(level)
    unit = module.algebra.unit_index
    return [identity(dim)] + [
        module.matrix(Generator.XI, unit + j, level) for j in range(1, count)
    ]


def _inverse_series(series: Sequence[Rows], dim: int) -> List[Rows]:
    inverse = [identity(dim)]
    for n in range(1, len(series)):
        acc = _zero(dim, dim)
        for j in range(1, n + 1):
            acc = _add(acc, matmul(series[j], inverse[n - j]))
        inverse.append(_add(_zero(dim, dim), acc, Fraction(-1)))
    return inverse


def _shift_weight(j: int, l: int) -> int:
    """Coefficient of u^{−l−j} in (u − 1)^{−l} for l ≥ 1; only j = 0 for l = 0."""
    if l == 0:
        return int(j == 0)
    return comb(l + j - 1, j)


def _gklo_coefficients(
    pair: TruncatablePair, module: ModuleRealization, level: int, count: int
) -> List[Rows]:
    """A_0 = 1, A_1, ..., A_{count−1} of u^{−m} A(u) on one level.

    a(u) a(u − 1) = c(u) Y(u), with Y the inverse of u^{−μ}ξ(u) and c(u) the
    expansion of r(u) / (u^m (u − 1)^m u^μ), solved degree by degree.
    """
    dim = module.dimension(level)
    m = pair.m[0]
    h = pair.r_sl2 / (LinRat.linear(0) ** m * LinRat.linear(1) ** m)
    c = h.expand(count - h.degree).coeffs[:count]
    inverse = _inverse_series(_xi_series(module, level, count), dim)
    target = []
    for n in range(count):
        acc = _zero(dim, dim)
        for j in range(n + 1):
            if c[j]:
                acc = _add(acc, inverse[n - j], c[j])
        target.append(acc)

    A = [identity(dim)]
    for n in range(1, count):
        acc = _zero(dim, dim)
        for k in range(n + 1):
            for l in range(n - k + 1):
                j = n - k - l
                if (k, l, j) in ((n, 0, 0), (0, n, 0)):
                    continue
                w = _shift_weight(j, l)
                if w:
                    acc = _add(acc, matmul(A[k], A[l]), Fraction(w))
        A.append([[x / 2 for x in row] for row in _add(target[n], acc, Fraction(-1))])
    return A


@dataclass
class GKLOAction:
    """The GKLO series of an sl₂ realization, per level and per ℓ-weight.

    ``series[level][k]`` is the coefficient of u^{m−k} of A(u) for
    k = 0, ..., m + order; ``eigenvalues[level]`` maps each A⁻¹-monomial to
    the closed eigenvalue of A(u) and ``direct[level]`` to the solution of
    g(u)g(u − 1) = r(u)/e(u) on that ℓ-weight.
    """

    pair: TruncatablePair
    module: ModuleRealization
    order: int
    series: Dict[int, List[Rows]]
    eigenvalues: Dict[int, Dict[AMonomial, LinRat]]
    direct: Dict[int, Dict[AMonomial, LinRat]]

    @property
    def m(self) -> int:
        return self.pair.m[0]

    def eigenvalue_on_top(self) -> LinRat:
        return self.eigenvalues[0][()]

    def principal_part_vanishes(self, level: int) -> bool:
        """⟨A(u)⟩₊ = 0 on a level, to the computed order."""
        return all(_is_zero_rows(a) for a in self.series[level][self.m + 1 :])

    def check_routes(self) -> CheckReport:
        """Compare the matrix series with the closed eigenvalues on joint eigenvectors."""
        report = CheckReport(
            f"GKLO routes on {self.module.name}",
            hint="Disagreement on one ℓ-weight points at its A-monomial decomposition.",
        )
        unit = self.module.algebra.unit_index
        mu = self.pair.mu[0]
        for level, table in sorted(self.eigenvalues.items()):
            dim = self.module.dimension(level)
            for monomial, g_f in sorted(table.items()):
                report.record(
                    g_f == self.direct[level][monomial],
                    f"eigenformula {g_f} ≠ direct solve {self.direct[level][monomial]} "
                    f"at level {level}",
                )
                e = _lweight_of(self.module.top, monomial)
                stacked: Rows = []
                for j in range(1, level + 2):
                    value = e.coefficient(mu - j)
                    block = self.module.matrix(Generator.XI, unit + j, level)
                    stacked.extend(
                        [x - value * int(r == c) for c, x in enumerate(row)]
                        for r, row in enumerate(block)
                    )
                vectors = nullspace(stacked, dim)
                report.record(bool(vectors), f"no joint eigenvector for {e} at level {level}")
                for k, coefficient in enumerate(self.series[level]):
                    expected = g_f.coefficient(self.m - k)
                    for vector in vectors:
                        image = [
                            sum((row[i] * vector[i] for i in range(dim)), Fraction(0))
                            for row in coefficient
                        ]
                        report.record(
                            image == [expected * x for x in vector],
                            f"A_{k} ≠ {render_fraction(expected)} on the {e} eigenvector",
                        )
        return report

    def to_dict(self) -> Dict[str, Any]:
        return {
            "pair": self.pair.to_dict(),
            "module": self.module.name,
            "order": self.order,
            "eigenvalues": {
                str(level): [
                    {"monomial": [render_fraction(a) for _, a in monomial], "A": str(g)}
                    for monomial, g in sorted(table.items())
                ]
                for level, table in sorted(self.eigenvalues.items())
            },
            "principal_part_vanishes": {
                str(level): self.principal_part_vanishes(level) for level in sorted(self.series)
            },
        }


def gklo_action(
    pair: TruncatablePair, W: ModuleRealization, order: int = 16, depth: Optional[int] = None
) -> GKLOAction:
    """GKLO series of an sl₂ realization W for a truncatable pair.

    Raises:
        ValueError: If the pair is not of type A1 or its μ is not the shift of W.
        RealizationError: If an ℓ-weight of W admits no finite GKLO eigenvalue.
    """
    if pair.cartan.rank != 1:
        raise ValueError("GKLO series are computed for sl₂ realizations only")
    if pair.mu[0] != W.shift:
        raise ValueError(f"μ = {pair.mu[0]} differs from the shift {W.shift} of {W.name}")
    depth = W.depth if depth is None else depth
    m = pair.m[0]
    count = m + order + 1
    r = pair.r_sl2
    top_value = solve_shift_product(r / W.top)
    qc = lweight_decomposition(W, depth=depth)

    series: Dict[int, List[Rows]] = {}
    eigenvalues: Dict[int, Dict[AMonomial, LinRat]] = {}
    direct: Dict[int, Dict[AMonomial, LinRat]] = {}
    for level in W.levels(depth):
        if W.dimension(level) == 0:
            continue
        series[level] = _gklo_coefficients(pair, W, level, count)
        eigenvalues[level] = {}
        direct[level] = {}
        for monomial in qc.at_size(level):
            eigenvalues[level][monomial] = eigenvalue_from_monomial(top_value, monomial)
            direct[level][monomial] = solve_shift_product(r / _lweight_of(W.top, monomial))
        logger.debug(f"GKLO series on {W.name}: level {level}, {count} coefficients")
    return GKLOAction(pair, W, order, series, eigenvalues, direct)


def conjugation_check(
    pair: TruncatablePair,
    W: ModuleRealization,
    n_max: int = 4,
    order: int = 8,
    depth: Optional[int] = None,
) -> CheckReport:
    """A(u) x⁻_n A(u)⁻¹ = x⁻_n + Σ_k x⁻_{n+k} u^{−k−1}, coefficient by coefficient."""
    action = gklo_action(pair, W, order, depth)
    report = CheckReport(
        f"GKLO conjugation on {W.name}",
        hint="A failure at small j means the ξ-series inversion is wrong on that level.",
    )
    for level in sorted(action.series):
        if level + 1 not in action.series:
            continue
        below, above = action.series[level], action.series[level + 1]
        modes = [W.matrix(Generator.XMINUS, n, level) for n in range(n_max + order + 1)]
        for n in range(n_max + 1):
            for j in range(min(len(below), len(above))):
                lhs = matmul(above[j], modes[n])
                rhs = matmul(modes[n], below[j])
                for k in range(j):
                    rhs = _add(rhs, matmul(modes[n + k], below[j - k - 1]))
                report.record(
                    lhs == rhs, f"conjugation fails at n={n}, u^{action.m - j}, level {level}"
                )
    return report


def check_difference_equation(
    pair: TruncatablePair, W: ModuleRealization, order: int = 20, depth: Optional[int] = None
) -> CheckReport:
    """R(u + 1) = R(u) Ā(u) with Ā(u) = A(u)/g(u), as Laurent coefficients in u.

    R is the Baxter operator R_1^W(u) and g the eigenvalue of A(u) on ω;
    coefficients of u^q are compared for q > −order.
    """
    report = CheckReport(
        f"difference equation on {W.name}",
        hint="Compare R(u) eigenvalue ratios with the GKLO eigenvalues on the failing level.",
    )
    R = baxter_R(W, depth=depth)
    top_level = max(R.levels())
    action = gklo_action(pair, W, order + top_level, depth)
    g = action.eigenvalue_on_top()
    gamma_source = LinRat.linear(0) ** action.m / g
    for level in R.levels():
        block = R.matrix(level)
        dim = block.rows
        if dim == 0:
            continue
        A = action.series[level]
        gamma = [gamma_source.coefficient(-k) for k in range(len(A))]
        a_bar = []
        for k in range(len(A)):
            acc = _zero(dim, dim)
            for j in range(k + 1):
                if gamma[k - j]:
                    acc = _add(acc, A[j], gamma[k - j])
            a_bar.append(acc)

        current = [as_rows(c) for c in polynomial_coefficients(block, U)]
        moved = block.subs(U, U + 1).applyfunc(sympy.expand)
        shifted = [as_rows(c) for c in polynomial_coefficients(moved, U)]
        degree = len(current) - 1
        for q in range(degree, -order, -1):
            rhs = _zero(dim, dim)
            for k in range(len(a_bar)):
                p = q + k
                if p > degree:
                    break
                if p >= 0:
                    rhs = _add(rhs, matmul(current[p], a_bar[k]))
            lhs = shifted[q] if 0 <= q < len(shifted) else _zero(dim, dim)
            report.record(lhs == rhs, f"coefficient of u^{q} differs on level {level}")
    report.details.update({"order": order, "levels": len(R.levels())})
    return report


def truncation_check(
    s: LinRat,
    W: ModuleRealization,
    order: int = 16,
    depth: Optional[int] = None,
    r: Optional[LinRat] = None,
) -> CheckReport:
    """⟨A(u)⟩₊ = 0 on a realization of L(s⁻¹), or of its twist by r.

    The pair is (shift of W, r·s̄) with s̄(u) = s(u − 1). Without a twist the
    GKLO series is also compared with the lowest diagonal entry t_{N,W}(u).

    Raises:
        ValueError: If the top ℓ-weight of W is not r/s.
    """
    twist = LinRat.one() if r is None else r
    if W.top != twist / s:
        raise ValueError(f"{W.name} has top ℓ-weight {W.top}, expected {twist / s}")
    pair = TruncatablePair.sl2(W.shift, twist * s.shift(1))
    action = gklo_action(pair, W, order, depth)
    report = CheckReport(
        f"truncation on {W.name}",
        hint="A nonzero principal part means the module does not factor through the truncation.",
    )
    for level in sorted(action.series):
        report.record(
            action.principal_part_vanishes(level),
            f"⟨A(u)⟩₊ ≠ 0 on level {level}",
        )
    report.merge(action.check_routes(), "routes")

    if r is None:
        t = t_lowest([(1, 0)], W, depth)
        for level in sorted(action.series):
            coefficients = t.coefficient_matrices(level)
            for j in range(action.m + 1):
                power = action.m - j
                expected = coefficients[power] if power < len(coefficients) else None
                report.record(
                    expected is not None and action.series[level][j] == expected,
                    f"A(u) and t(u) differ at u^{power} on level {level}",
                )
    report.details.update({"m": action.m, "order": order, "r": str(pair.r_sl2)})
    return report


def sbar_map(
    cd: CartanData, ratios: Mapping[int, Ratio], s: LWeight
) -> Tuple[LWeight, Dict[int, LinRat]]:
    """s̄ together with the polynomials g_i^s = λ_{V_i, L(s⁻¹)}.

    s̄_i(u) = g_i(u) g_i(u − d_i) / (s_i(u) ∏_{j: c_ji<0} ∏_{t=1}^{−c_ji} g_j(u − d_ij − t d_j)).
    Components need not be polynomials; callers test membership themselves.

    Raises:
        ValueError: If a node has no ratio or s is of another type.
    """
    if s.cartan != cd:
        raise ValueError(f"s is of type {s.cartan.type_label}, expected {cd.type_label}")
    g: Dict[int, LinRat] = {}
    for i in cd.nodes:
        if i not in ratios:
            raise ValueError(f"No fundamental ratio given for node {i}")
        g[i] = lambda_poly(ratios[i], s)
    components: Dict[int, LinRat] = {}
    for i in cd.nodes:
        value = g[i] * g[i].shift(cd.di(i)) / s.component(i)
        for j in cd.neighbours(i):
            for t in range(1, -cd.cij(j, i) + 1):
                value = value / g[j].shift(cd.dij(i, j) + t * cd.di(j))
        components[i] = value
    return LWeight.from_components(cd, components), g


@dataclass(frozen=True)
class TruncationCandidate:
    """A candidate eigenvalue g of A(u) on ω and the ℓ-weight e = r / (g(u)g(u−1))."""

    g: LinRat
    e: LinRat

    def to_dict(self) -> Dict[str, str]:
        return {"g": str(self.g), "e": str(self.e)}


def enumerate_truncation_candidates_sl2(pair: TruncatablePair) -> List[TruncationCandidate]:
    """Monic g of degree m whose roots lie in the zeros of p^r(u + 1), filtered by divisibility.

    g must divide p^r(u + 1)/q^r(u + 1); every candidate gives the highest
    ℓ-weight of a module on which A(u) could act by g on ω.
    """
    if pair.cartan.rank != 1:
        raise ValueError("Candidate enumeration is implemented for sl₂ pairs only")
    m = pair.m[0]
    r = pair.r_sl2
    numerator = r.numerator().shift(-1)
    denominator = r.denominator().shift(-1)
    roots = sorted(set(numerator.zeros()))
    candidates: List[TruncationCandidate] = []
    for chosen in combinations_with_replacement(roots, m):
        g = LinRat.from_multisets(zeros=chosen)
        if not (numerator / (g * denominator)).is_polynomial:
            continue
        candidates.append(TruncationCandidate(g, r / (g * g.shift(1))))
    logger.debug(f"{len(candidates)} truncation candidates for r = {r}, m = {m}")
    return candidates


def denominator_membership(e: LinRat, depth: int) -> CheckReport:
    """(u − a)^k | denominator of e implies A_a^{−k} e is an ℓ-weight of L(e)."""
    report = CheckReport(
        f"denominator ℓ-weights of L({e})",
        hint="A missing monomial means the q-character of L(e) is wrong near that pole.",
    )
    qc = qc_simple_sl2(e, depth)
    for a, multiplicity in e.denominator().as_dict().items():
        for k in range(1, min(multiplicity, depth) + 1):
            monomial = ((1, a),) * k
            report.record(
                monomial in qc.terms,
                f"A({render_fraction(a)})^-{k} · e is not an ℓ-weight of L(e)",
            )
    return report
