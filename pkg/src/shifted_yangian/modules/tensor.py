"""Tensor products in the regimes where the action is known exactly.

* One-dimensional twists: L(s) ⊗ V and V ⊗ L(s) for a polynomial s.
* Two unshifted factors: the Yangian coproduct on V ⊗ W, built from the
  primitive degree-zero generators and Δ(ξ_1) by commutator recursion.
* Extreme vectors: partial actions on v_− ⊗ w and v ⊗ ω for mixed shifts.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

import sympy

from ..algebra.lweight import LWeight
from ..algebra.ratfun import LinRat
from ..algebra.yangian_sl2 import Generator
from ..core.exceptions import RealizationError
from ..utils.interpolation import interpolate_matrix, sample_points
from ..utils.linalg import rank
from .families import spectral_shift
from .realization import (
    FiniteModule,
    Label,
    ModuleRealization,
    Vector,
    add_into,
    ascending_words,
    target_level,
)

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]
Operator = Dict[Label, Vector]

LEFT = "left"
RIGHT = "right"


def _as_polynomial(s: Union[LinRat, LWeight]) -> LinRat:
    if isinstance(s, LWeight):
        if s.cartan.rank != 1:
            raise RealizationError("One-dimensional twists are implemented for sl₂")
        s = s.component(1)
    if not s.is_polynomial:
        raise RealizationError(f"One-dimensional twist needs a polynomial, got {s}")
    return s


class TwistedModule(ModuleRealization):
    """L(s) ⊗ V (left) or V ⊗ L(s) (right) for a polynomial s.

    ξ(u) ↦ s(u)ξ(u) on both sides; the left twist replaces x⁺(u) by
    ⟨s(u)x⁺(u)⟩₊ and the right twist replaces x⁻(u) by ⟨s(u)x⁻(u)⟩₊.
    """

    def __init__(self, base: ModuleRealization, s: LinRat, side: str = LEFT):
        if side not in (LEFT, RIGHT):
            raise RealizationError(f"side must be 'left' or 'right', got {side!r}")
        name = f"L({s})⊗{base.name}" if side == LEFT else f"{base.name}⊗L({s})"
        super().__init__(name, s * base.top, base.depth)
        self.base = base
        self.s = s
        self.side = side
        self._coefficients = s.poly_coefficients()

    @property
    def max_level(self) -> Optional[int]:
        return self.base.max_level

    def basis(self, level: int) -> List[Label]:
        return self.base.basis(level)

    def _twisted(self, generator: Generator) -> bool:
        if generator == Generator.XI:
            return True
        return (generator == Generator.XPLUS) == (self.side == LEFT)

    def act_on_basis(self, generator: Generator, index: int, label: Label) -> Vector:
        if not self._twisted(generator):
            return self.base.act_on_basis(generator, index, label)
        result: Vector = {}
        base_unit = self.base.algebra.unit_index
        for k, c in enumerate(self._coefficients):
            if c == 0:
                continue
            shifted = index + k
            if generator == Generator.XI:
                if shifted < base_unit:
                    continue
                if shifted == base_unit:
                    add_into(result, {label: Fraction(1)}, c)
                    continue
            add_into(result, self.base.act_on_basis(generator, shifted, label), c)
        return result

    def label_text(self, label: Label) -> str:
        return self.base.label_text(label)


def tensor_onedim(
    s: Union[LinRat, LWeight], module: ModuleRealization, side: str = LEFT
) -> ModuleRealization:
    """Pull V back through the one-dimensional twist by s.

    Raises:
        RealizationError: If s is not a polynomial.
    """
    s = _as_polynomial(s)
    if s.is_one:
        return module
    return TwistedModule(module, s, side)


# operators on finite bases


def _apply(op: Operator, vector: Vector) -> Vector:
    result: Vector = {}
    for label, c in vector.items():
        add_into(result, op.get(label, {}), c)
    return result


def _compose(a: Operator, b: Operator, labels: List[Label]) -> Operator:
    return {label: _apply(a, b.get(label, {})) for label in labels}


def _combine(terms: List[Tuple[Fraction, Operator]], labels: List[Label]) -> Operator:
    result: Operator = {}
    for label in labels:
        image: Vector = {}
        for factor, op in terms:
            add_into(image, op.get(label, {}), factor)
        result[label] = image
    return result


def _commutator(a: Operator, b: Operator, labels: List[Label]) -> Operator:
    return _combine(
        [(Fraction(1), _compose(a, b, labels)), (Fraction(-1), _compose(b, a, labels))], labels
    )


class TensorY0:
    """V ⊗ W over the unshifted Yangian Y(sl₂) for finite-dimensional factors.

    Δ(x^±_0), Δ(ξ_0) are primitive and
    Δ(ξ_1) = ξ_1⊗1 + 1⊗ξ_1 + ξ_0⊗ξ_0 − 2x⁻_0⊗x⁺_0. With T = ξ_1 − ½ξ_0²
    the remaining modes follow from x^±_{n+1} = ±½[T, x^±_n] and
    ξ_p = [x⁺_p, x⁻_0].
    """

    def __init__(self, left: ModuleRealization, right: ModuleRealization):
        for factor in (left, right):
            if factor.shift != 0:
                raise RealizationError(
                    f"{factor.name} has shift {factor.shift}; the Yangian coproduct needs shift 0"
                )
            if factor.max_level is None:
                raise RealizationError(f"{factor.name} is not finite-dimensional")
        self.left = left
        self.right = right
        self.levels: List[List[Label]] = []
        for v_level in range(left.max_level + 1):
            for v in left.basis(v_level):
                for w_level in range(right.max_level + 1):
                    for w in right.basis(w_level):
                        total = v_level + w_level
                        while len(self.levels) <= total:
                            self.levels.append([])
                        self.levels[total].append((v, w))
        self.labels = [label for level in self.levels for label in level]
        self._minus: List[Operator] = []
        self._plus: List[Operator] = []
        self._xi: Dict[int, Operator] = {}
        self._t: Optional[Operator] = None

    def _factor_op(self, side: str, generator: Generator, index: int) -> Operator:
        op: Operator = {}
        for v, w in self.labels:
            if side == LEFT:
                image = self.left.act_on_basis(generator, index, v)
                op[(v, w)] = {(x, w): c for x, c in image.items()}
            else:
                image = self.right.act_on_basis(generator, index, w)
                op[(v, w)] = {(v, y): c for y, c in image.items()}
        return op

    def _outer(self, left_gen: Generator, right_gen: Generator) -> Operator:
        """X⊗Y for degree-zero modes."""
        op: Operator = {}
        for v, w in self.labels:
            image: Vector = {}
            for y, c in self.right.act_on_basis(right_gen, 0, w).items():
                for x, d in self.left.act_on_basis(left_gen, 0, v).items():
                    add_into(image, {(x, y): c * d})
            op[(v, w)] = image
        return op

    def _primitive(self, generator: Generator) -> Operator:
        return _combine(
            [
                (Fraction(1), self._factor_op(LEFT, generator, 0)),
                (Fraction(1), self._factor_op(RIGHT, generator, 0)),
            ],
            self.labels,
        )

    def _t_operator(self) -> Operator:
        if self._t is None:
            half = Fraction(1, 2)
            terms: List[Tuple[Fraction, Operator]] = []
            for side in (LEFT, RIGHT):
                xi0 = self._factor_op(side, Generator.XI, 0)
                terms.append((Fraction(1), self._factor_op(side, Generator.XI, 1)))
                terms.append((-half, _compose(xi0, xi0, self.labels)))
            terms.append((Fraction(-2), self._outer(Generator.XMINUS, Generator.XPLUS)))
            self._t = _combine(terms, self.labels)
        return self._t

    def xminus(self, n: int) -> Operator:
        while len(self._minus) <= n:
            if not self._minus:
                self._minus.append(self._primitive(Generator.XMINUS))
                continue
            previous = self._minus[-1]
            bracket = _commutator(self._t_operator(), previous, self.labels)
            self._minus.append(_combine([(Fraction(-1, 2), bracket)], self.labels))
        return self._minus[n]

    def xplus(self, n: int) -> Operator:
        while len(self._plus) <= n:
            if not self._plus:
                self._plus.append(self._primitive(Generator.XPLUS))
                continue
            previous = self._plus[-1]
            bracket = _commutator(self._t_operator(), previous, self.labels)
            self._plus.append(_combine([(Fraction(1, 2), bracket)], self.labels))
        return self._plus[n]

    def xi(self, p: int) -> Operator:
        if p < -1:
            return {label: {} for label in self.labels}
        if p == -1:
            return {label: {label: Fraction(1)} for label in self.labels}
        if p not in self._xi:
            self._xi[p] = _commutator(self.xplus(p), self.xminus(0), self.labels)
        return self._xi[p]

    def mode_action(self, generator: Generator, index: int) -> Operator:
        if generator == Generator.XMINUS:
            return self.xminus(index) if index >= 0 else {}
        if generator == Generator.XPLUS:
            return self.xplus(index) if index >= 0 else {}
        return self.xi(index)

    def module(self) -> "TensorModule":
        return TensorModule(self)


class TensorModule(FiniteModule):
    """The realization of V ⊗ W with basis labels (v, w)."""

    def __init__(self, tensor: TensorY0):
        super().__init__(
            f"{tensor.left.name}⊗{tensor.right.name}",
            tensor.left.top * tensor.right.top,
            tensor.levels,
            tensor.mode_action,
        )
        self.factors = (tensor.left, tensor.right)

    def label_text(self, label: Label) -> str:
        v, w = label
        return f"{self.factors[0].label_text(v)}⊗{self.factors[1].label_text(w)}"


def tensor_Y0(left: ModuleRealization, right: ModuleRealization) -> TensorModule:
    """V ⊗ W for two finite-dimensional modules over Y(sl₂).

    Raises:
        RealizationError: If a factor is shifted or infinite-dimensional.
    """
    module = TensorY0(left, right).module()
    logger.debug(f"Built {module.name} with {len(module.all_labels())} basis vectors")
    return module


@dataclass
class PolyTensor:
    """V(z) ⊗ W or V ⊗ W(z) with matrix entries polynomial in z.

    Entries of a mode of index n have degree at most n in z; they are
    recovered exactly by interpolation at n + 2 points, the last of which
    checks the degree bound.
    """

    left: ModuleRealization
    right: ModuleRealization
    side: str = RIGHT
    symbol: sympy.Symbol = sympy.Symbol("z")
    _cache: Dict[Fraction, FiniteModule] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.side not in (LEFT, RIGHT):
            raise RealizationError(f"side must be 'left' or 'right', got {self.side!r}")

    def at(self, a: Number) -> FiniteModule:
        """The tensor product specialized at z = a."""
        a = Fraction(a)
        if a not in self._cache:
            if self.side == LEFT:
                self._cache[a] = tensor_Y0(spectral_shift(self.left, a), self.right)
            else:
                self._cache[a] = tensor_Y0(self.left, spectral_shift(self.right, a))
        return self._cache[a]

    def matrix(self, generator: Generator, index: int, level: int) -> sympy.Matrix:
        """Matrix of a mode from ``level`` to its target level, entries in QQ[z].

        Raises:
            RealizationError: If an entry exceeds the expected degree in z.
        """
        degree = max(index, 0) + 1
        points = sample_points(degree + 1)
        samples = [self.at(a).matrix(generator, index, level) for a in points]
        try:
            return interpolate_matrix(points, samples, self.symbol)
        except ValueError as e:
            raise RealizationError(f"{generator.symbol}_{index} at level {level}: {e}") from e

    def dimension(self, level: int) -> int:
        return self.at(0).dimension(level)


def tensor_poly_parameter(
    left: ModuleRealization, right: ModuleRealization, side: str = RIGHT
) -> PolyTensor:
    """The tensor product with a formal spectral parameter on one factor."""
    return PolyTensor(left, right, side)


def _word_images_rank(
    module: ModuleRealization, level: int, bound: int
) -> Tuple[int, int]:
    dim = module.dimension(level)
    columns = [
        module.coordinates(module.apply_word(w), level)
        for w in ascending_words(level, bound)
    ]
    if not columns or dim == 0:
        return 0, dim
    return rank(columns, dim), dim


def cyclicity_witness(
    module: Union[ModuleRealization, PolyTensor], level: int, bound: Optional[int] = None
) -> Tuple[int, int]:
    """(rank of the x⁻-word images of the top vector, dimension) at a level.

    For a ``PolyTensor`` the rank is taken over the field of rational
    functions in z.
    """
    if isinstance(module, ModuleRealization):
        dim = module.dimension(level)
        return _word_images_rank(module, level, bound or dim + level + 1)

    dim = module.dimension(level)
    bound = bound or dim + level + 1
    start = sympy.zeros(module.dimension(0), 1)
    start[0, 0] = 1
    matrices: Dict[Tuple[int, int], sympy.Matrix] = {}
    images = []
    for word in ascending_words(level, bound):
        vector = start
        current = 0
        for n in reversed(word):
            key = (n, current)
            if key not in matrices:
                matrices[key] = module.matrix(Generator.XMINUS, n, current)
            vector = matrices[key] * vector
            current = target_level(Generator.XMINUS, current)
        images.append(vector)
    if not images or dim == 0:
        return 0, dim
    return sympy.Matrix.hstack(*images).rank(simplify=True), dim


@dataclass
class ExtremeActions:
    """Exact partial actions on V ⊗ W at a lowest vector of V and the top of W.

        ξ(u)(v_− ⊗ ω)   = ξ(u)v_− ⊗ ξ(u)ω
        x⁻(u)(v_− ⊗ w)  = v_− ⊗ x⁻(u)w
        x⁻(u)(v ⊗ ω)    = v ⊗ x⁻(u)ω + ⟨x⁻(u)v ⊗ ξ(u)ω⟩₊

    ``lowest`` may be omitted when only the action on v ⊗ ω is needed.
    """

    left: ModuleRealization
    right: ModuleRealization
    lowest: Optional[Label] = None

    def __post_init__(self) -> None:
        if self.lowest is None:
            return
        for n in range(0, 3):
            if self.left.act_on_basis(Generator.XMINUS, n, self.lowest):
                label = self.left.label_text(self.lowest)
                raise RealizationError(f"{label} is not a lowest vector")

    @property
    def top(self) -> Label:
        return self.right.basis(0)[0]

    def _top_mode(self, q: int) -> Fraction:
        """Coefficient of u^{−q−1} in the top ℓ-weight of W."""
        return self.right.top.coefficient(-q - 1)

    def _lowest_mode(self, p: int) -> Fraction:
        if self.lowest is None:
            raise RealizationError(f"No lowest vector of {self.left.name} was given")
        image = self.left.act_on_basis(Generator.XI, p, self.lowest)
        extra = [label for label in image if label != self.lowest]
        if extra:
            raise RealizationError(
                f"{self.left.label_text(self.lowest)} is not a ξ-eigenvector"
            )
        return image.get(self.lowest, Fraction(0))

    def xi_on_extreme(self, p: int) -> Fraction:
        """Eigenvalue of ξ_p on v_− ⊗ ω."""
        unit_v = self.left.algebra.unit_index
        unit_w = self.right.algebra.unit_index
        total = Fraction(0)
        for p1 in range(unit_v, p - unit_w):
            p2 = p - p1 - 1
            total += self._lowest_mode(p1) * self._top_mode(p2)
        return total

    def xminus_on_lowest(self, n: int, w: Label) -> Vector:
        if self.lowest is None:
            raise RealizationError(f"No lowest vector of {self.left.name} was given")
        image = self.right.act_on_basis(Generator.XMINUS, n, w)
        return {(self.lowest, y): c for y, c in image.items()}

    def xminus_on_top(self, n: int, v: Label) -> Vector:
        """x⁻_n (v ⊗ ω)."""
        result: Vector = {
            (v, y): c for y, c in self.right.act_on_basis(Generator.XMINUS, n, self.top).items()
        }
        for q in range(self.right.algebra.unit_index, n):
            k = n - q - 1
            e_q = self._top_mode(q)
            if e_q == 0:
                continue
            for x, c in self.left.act_on_basis(Generator.XMINUS, k, v).items():
                add_into(result, {(x, self.top): c * e_q})
        return result


def extreme_actions(
    left: ModuleRealization, right: ModuleRealization, lowest: Optional[Label] = None
) -> ExtremeActions:
    """Partial-action oracle for V ⊗ W; the lowest vector defaults to V's bottom level.

    Raises:
        RealizationError: If V has no finite bottom level or the vector is not extreme.
    """
    if lowest is None:
        if left.max_level is None:
            raise RealizationError(f"{left.name} has no lowest level; pass the vector")
        bottom = left.basis(left.max_level)
        if len(bottom) != 1:
            raise RealizationError(f"{left.name} has a {len(bottom)}-dimensional bottom level")
        lowest = bottom[0]
    return ExtremeActions(left, right, lowest)
