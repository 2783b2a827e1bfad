"""Common interface for module realizations over shifted Y(sl₂).

A realization is graded by depth: level k holds the weight space of weight
(top weight − kα). Vectors are sparse dicts from basis labels to
``Fraction``; ``act`` applies the mode x^±_n or ξ_p of a generating current.
"""

import logging
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from ..algebra.lweight import LWeight, Weight, weight_and_coweight
from ..algebra.ratfun import LinRat
from ..algebra.yangian_sl2 import Generator, ShiftedYangianSL2
from ..core.exceptions import RealizationError
from ..utils.linalg import Rows, pivot_columns, solve, transpose
from ..utils.serialization import render_fraction

logger = logging.getLogger(__name__)

Label = Hashable
Vector = Dict[Label, Fraction]
XWord = Tuple[int, ...]


def add_into(target: Vector, source: Vector, factor: Fraction = Fraction(1)) -> Vector:
    """target += factor · source, dropping zero entries."""
    if factor == 0:
        return target
    for label, c in source.items():
        value = target.get(label, Fraction(0)) + factor * c
        if value == 0:
            target.pop(label, None)
        else:
            target[label] = value
    return target


def scale(vector: Vector, factor: Fraction) -> Vector:
    if factor == 0:
        return {}
    return {label: factor * c for label, c in vector.items()}


def combine(terms: Iterable[Tuple[Fraction, Vector]]) -> Vector:
    result: Vector = {}
    for factor, vector in terms:
        add_into(result, vector, factor)
    return result


def target_level(generator: Generator, level: int) -> int:
    if generator == Generator.XMINUS:
        return level + 1
    if generator == Generator.XPLUS:
        return level - 1
    return level


def ascending_words(length: int, bound: int) -> List[XWord]:
    """Ascending tuples of the given length with entries in 0..bound−1."""
    if length == 0:
        return [()]
    words: List[XWord] = []

    def extend(prefix: XWord, start: int) -> None:
        if len(prefix) == length:
            words.append(prefix)
            return
        for n in range(start, bound):
            extend(prefix + (n,), n)

    extend((), 0)
    return words


class ModuleRealization(ABC):
    """A depth-graded module over the shifted Yangian Y_s(sl₂)."""

    def __init__(self, name: str, top: LinRat, depth: int):
        if depth < 0:
            raise RealizationError(f"depth must be nonnegative, got {depth}")
        self.name = name
        self.top = top
        self.depth = depth
        self.algebra = ShiftedYangianSL2(top.degree)
        self._matrices: Dict[Tuple[Generator, int, int], Rows] = {}

    @property
    def shift(self) -> int:
        return self.algebra.shift

    @property
    def top_lweight(self) -> LWeight:
        return LWeight.from_sl2(self.top)

    @property
    def max_level(self) -> Optional[int]:
        """Highest nonzero level for finite modules, None otherwise."""
        return None

    def levels(self, depth: Optional[int] = None) -> range:
        depth = self.depth if depth is None else depth
        if self.max_level is not None:
            depth = min(depth, self.max_level)
        return range(0, depth + 1)

    @abstractmethod
    def basis(self, level: int) -> List[Label]:
        """Basis labels of the weight space at ``level``."""

    @abstractmethod
    def act_on_basis(self, generator: Generator, index: int, label: Label) -> Vector:
        """Image of a basis vector under x^±_index or ξ_index."""

    def act(self, generator: Generator, index: int, vector: Vector) -> Vector:
        result: Vector = {}
        for label, c in vector.items():
            add_into(result, self.act_on_basis(generator, index, label), c)
        return result

    def top_vector(self) -> Vector:
        return {self.basis(0)[0]: Fraction(1)}

    def dimension(self, level: int) -> int:
        if level < 0 or (self.max_level is not None and level > self.max_level):
            return 0
        return len(self.basis(level))

    def weight(self, level: int) -> Weight:
        top_weight, _ = weight_and_coweight(self.top_lweight)
        return Weight((top_weight.coeffs[0] - 2 * level,))

    def coordinates(self, vector: Vector, level: int) -> List[Fraction]:
        """Coefficients of a vector in the basis of ``level``.

        Raises:
            RealizationError: If the vector has labels outside that basis.
        """
        basis = self.basis(level) if self.dimension(level) else []
        index = {label: k for k, label in enumerate(basis)}
        values = [Fraction(0)] * len(basis)
        for label, c in vector.items():
            if label not in index:
                raise RealizationError(
                    f"{self.name}: label {label!r} is outside the level-{level} basis"
                )
            values[index[label]] = c
        return values

    def matrix(self, generator: Generator, index: int, level: int) -> Rows:
        """Matrix of a mode from the level block to its target block.

        Blocks are cached per (mode, level); callers get a fresh copy.
        """
        key = (generator, index, level)
        if key not in self._matrices:
            source = self.basis(level) if self.dimension(level) else []
            target = target_level(generator, level)
            rows = self.dimension(target)
            columns = [
                self.coordinates(self.act_on_basis(generator, index, label), target)
                if rows else []
                for label in source
            ]
            self._matrices[key] = (
                transpose(columns, rows) if columns else [[] for _ in range(rows)]
            )
        return [list(row) for row in self._matrices[key]]

    def apply_word(self, word: Sequence[int], vector: Optional[Vector] = None) -> Vector:
        """x⁻_{w1} ⋯ x⁻_{wk} applied to a vector (default the top vector)."""
        result = self.top_vector() if vector is None else vector
        for n in reversed(word):
            result = self.act(Generator.XMINUS, n, result)
        return result

    def word_spanning_set(
        self, level: int, max_bound: Optional[int] = None
    ) -> Tuple[List[XWord], Rows]:
        """Ascending x⁻-words whose images on the top vector form a basis.

        Returns the words and the matrix whose columns are their coordinates.

        Raises:
            RealizationError: If no basis of x⁻-words is found.
        """
        dim = self.dimension(level)
        if dim == 0:
            return [], []
        max_bound = max_bound or dim + level + 2
        for bound in range(1, max_bound + 1):
            words = ascending_words(level, bound)
            columns = [self.coordinates(self.apply_word(w), level) for w in words]
            pivots = pivot_columns(transpose(columns, dim), len(columns))
            if len(pivots) == dim:
                chosen = [words[p] for p in pivots]
                return chosen, transpose([columns[p] for p in pivots], dim)
        raise RealizationError(
            f"{self.name}: level {level} is not spanned by x⁻-words on the top vector"
        )

    def label_text(self, label: Label) -> str:
        return str(label)

    def to_dict(self, n_max: int) -> Dict[str, Any]:
        """Basis, weights and sparse mode matrices for levels up to depth."""
        levels = []
        actions: Dict[str, List[List[str]]] = {}
        for level in self.levels():
            labels = self.basis(level)
            levels.append(
                {
                    "level": level,
                    "weight": str(self.weight(level)),
                    "basis": [self.label_text(label) for label in labels],
                }
            )
            for generator in Generator:
                for index in self.mode_indices(generator, n_max):
                    key = f"{generator.symbol}_{index}"
                    for label in labels:
                        image = self.act_on_basis(generator, index, label)
                        for target, c in sorted(image.items(), key=lambda kv: str(kv[0])):
                            row = [self.label_text(label), self.label_text(target)]
                            actions.setdefault(key, []).append(row + [render_fraction(c)])
        return {
            "name": self.name,
            "shift": self.shift,
            "top": str(self.top),
            "levels": levels,
            "actions": actions,
        }

    def mode_indices(self, generator: Generator, n_max: int) -> range:
        if generator == Generator.XI:
            return range(self.algebra.unit_index + 1, n_max + 1)
        return range(0, n_max + 1)


class FiniteModule(ModuleRealization):
    """A realization given by explicit per-mode actions on a finite basis."""

    def __init__(
        self,
        name: str,
        top: LinRat,
        levels: Sequence[Sequence[Label]],
        mode_action: Callable[[Generator, int], Dict[Label, Vector]],
    ):
        super().__init__(name, top, max(len(levels) - 1, 0))
        self._levels = [list(level) for level in levels]
        self._mode_action = mode_action
        self._cache: Dict[Tuple[Generator, int], Dict[Label, Vector]] = {}

    @property
    def max_level(self) -> Optional[int]:
        return len(self._levels) - 1

    def basis(self, level: int) -> List[Label]:
        if level < 0 or level >= len(self._levels):
            return []
        return self._levels[level]

    def all_labels(self) -> List[Label]:
        return [label for level in self._levels for label in level]

    def act_on_basis(self, generator: Generator, index: int, label: Label) -> Vector:
        key = (generator, index)
        if key not in self._cache:
            self._cache[key] = self._mode_action(generator, index)
        return dict(self._cache[key].get(label, {}))


def express_in_span(columns: Rows, vector: Sequence[Fraction]) -> List[Fraction]:
    """Coefficients c with Σ c_j columns[j] = vector for independent columns.

    Raises:
        ValueError: If the vector is outside the span.
    """
    if not columns:
        if any(vector):
            raise ValueError("Vector is not in the span of an empty set")
        return []
    dim = len(vector)
    matrix = transpose(columns, dim)
    rows = pivot_columns(transpose(matrix, len(columns)), dim)
    square = [[matrix[r][j] for j in range(len(columns))] for r in rows]
    coefficients = solve(square, [vector[r] for r in rows])
    for r in range(dim):
        total = sum((matrix[r][j] * coefficients[j] for j in range(len(columns))), Fraction(0))
        if total != vector[r]:
            raise ValueError("Vector is not in the span")
    return coefficients
