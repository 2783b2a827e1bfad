"""Verma modules M(e), their simple quotients L(e) and Weyl modules W(r, s).

Vectors of M(e) are combinations of ascending words x⁻_{n_1} ⋯ x⁻_{n_k} ω,
stored as tuples (n_1, ..., n_k). The engine applies generators to words by
the relations of the algebra and memoizes every result.
"""

import logging
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Tuple

from ..algebra.ratfun import LinRat
from ..algebra.yangian_sl2 import Generator, ShiftedYangianSL2
from ..core.exceptions import RealizationError
from ..utils.linalg import Rows, pivot_columns, pivot_rows, solve
from .realization import (
    Label,
    ModuleRealization,
    Vector,
    XWord,
    add_into,
    ascending_words,
)

logger = logging.getLogger(__name__)


class VermaEngine:
    """Action of Y_s(sl₂) on M(e) in the PBW basis of ascending x⁻-words."""

    def __init__(self, top: LinRat):
        self.top = top
        self.algebra = ShiftedYangianSL2(top.degree)
        self._minus: Dict[Tuple[int, XWord], Vector] = {}
        self._xi: Dict[Tuple[int, XWord], Vector] = {}
        self._plus: Dict[Tuple[int, XWord], Vector] = {}
        self._pairings: Dict[Tuple[XWord, XWord], Fraction] = {}

    def top_mode(self, p: int) -> Fraction:
        """e_p, the coefficient of u^{−p−1} in e(u)."""
        return self.top.coefficient(-p - 1)

    def xminus(self, n: int, word: XWord) -> Vector:
        key = (n, word)
        if key in self._minus:
            return self._minus[key]
        if n < 0:
            raise ValueError(f"Undefined generator x-_{n}")
        if not word or n <= word[0]:
            result: Vector = {(n,) + word: Fraction(1)}
        else:
            result = {}
            head, rest = word[0], word[1:]
            for (i, j), c in self.algebra.xminus_pair(n, head).items():
                for inner, c_inner in self.xminus(j, rest).items():
                    add_into(result, self.xminus(i, inner), c * c_inner)
        self._minus[key] = result
        return result

    def xminus_vector(self, n: int, vector: Vector) -> Vector:
        result: Vector = {}
        for word, c in vector.items():
            add_into(result, self.xminus(n, word), c)
        return result

    def xi_vector(self, p: int, vector: Vector) -> Vector:
        result: Vector = {}
        for word, c in vector.items():
            add_into(result, self.xi(p, word), c)
        return result

    def xi(self, q: int, word: XWord) -> Vector:
        """ξ_q on a word, from the ladder relation with ξ_{q−1}."""
        key = (q, word)
        if key in self._xi:
            return self._xi[key]
        unit = self.algebra.unit_index
        if q < unit:
            result: Vector = {}
        elif q == unit:
            result = {word: Fraction(1)}
        elif not word:
            value = self.top_mode(q)
            result = {(): value} if value else {}
        else:
            head, rest = word[0], word[1:]
            p = q - 1
            below = self.xi(p, rest)
            result = dict(self.xminus_vector(head, self.xi(q, rest)))
            add_into(result, self.xi_vector(p, self.xminus(head + 1, rest)))
            add_into(result, self.xminus_vector(head + 1, below), Fraction(-1))
            add_into(result, self.xi(p, word), Fraction(-1))
            add_into(result, self.xminus_vector(head, below), Fraction(-1))
        self._xi[key] = result
        return result

    def xplus(self, m: int, word: XWord) -> Vector:
        key = (m, word)
        if key in self._plus:
            return self._plus[key]
        if m < 0:
            raise ValueError(f"Undefined generator x+_{m}")
        if not word:
            result: Vector = {}
        else:
            head, rest = word[0], word[1:]
            result = dict(self.xminus_vector(head, self.xplus(m, rest)))
            add_into(result, self.xi(m + head, rest))
        self._plus[key] = result
        return result

    def act_on_word(self, generator: Generator, index: int, word: XWord) -> Vector:
        if generator == Generator.XMINUS:
            return self.xminus(index, word)
        if generator == Generator.XI:
            return self.xi(index, word)
        return self.xplus(index, word)

    def act(self, generator: Generator, index: int, vector: Vector) -> Vector:
        result: Vector = {}
        for word, c in vector.items():
            add_into(result, self.act_on_word(generator, index, word), c)
        return result

    def pairing(self, dual: XWord, word: XWord) -> Fraction:
        """Top coefficient of x⁺_{d_1} ⋯ x⁺_{d_k} applied to a word of equal length."""
        key = (dual, word)
        if key in self._pairings:
            return self._pairings[key]
        if not dual:
            value = Fraction(1) if not word else Fraction(0)
        else:
            value = Fraction(0)
            for lower, c in self.xplus(dual[-1], word).items():
                value += c * self.pairing(dual[:-1], lower)
        self._pairings[key] = value
        return value

    def pair_vector(self, dual: XWord, vector: Vector) -> Fraction:
        return sum((c * self.pairing(dual, w) for w, c in vector.items()), Fraction(0))


class VermaModule(ModuleRealization):
    """M(e), with the basis at each level cut off at generator index ``index_cap``."""

    def __init__(self, top: LinRat, depth: int, index_cap: Optional[int] = None):
        super().__init__(f"Verma({top})", top, depth)
        self.engine = VermaEngine(top)
        self.index_cap = depth + 2 if index_cap is None else index_cap

    def basis(self, level: int) -> List[Label]:
        if level < 0:
            return []
        return list(ascending_words(level, self.index_cap + 1))

    def act_on_basis(self, generator: Generator, index: int, label: Label) -> Vector:
        return self.engine.act_on_word(generator, index, tuple(label))

    def coordinates(self, vector: Vector, level: int) -> List[Fraction]:
        outside = [w for w in vector if max(w, default=0) > self.index_cap]
        if outside:
            raise RealizationError(
                f"{self.name}: words {outside[:3]} exceed the index cap {self.index_cap}"
            )
        return super().coordinates(vector, level)

    def word_spanning_set(
        self, level: int, max_bound: Optional[int] = None
    ) -> Tuple[List[XWord], Rows]:
        raise RealizationError("Verma weight spaces are infinite-dimensional")

    def label_text(self, label: Label) -> str:
        return _word_text(label)


def _word_text(word: Label) -> str:
    if not word:
        return "w"
    return "".join(f"x{n}" for n in word) + "w"


class SimpleModule(ModuleRealization):
    """L(e), the quotient of M(e) by its radical, computed level by level.

    Words with indices below the denominator degree N of e span each level;
    the radical is the kernel of the pairing with x⁺-words of the same
    length, so a basis is a set of pivot columns of that pairing matrix.
    """

    def __init__(self, top: LinRat, depth: int):
        super().__init__(f"Simple({top})", top, depth)
        self.engine = VermaEngine(top)
        self.index_bound = top.denominator().degree
        self._levels: Dict[int, Tuple[List[XWord], List[XWord], Rows]] = {}

    def _level_data(self, level: int) -> Tuple[List[XWord], List[XWord], Rows]:
        if level in self._levels:
            return self._levels[level]
        candidates = ascending_words(level, self.index_bound)
        gram = [[self.engine.pairing(d, w) for w in candidates] for d in candidates]
        columns = list(pivot_columns(gram, len(candidates))) if candidates else []
        basis = [candidates[j] for j in columns]
        restricted = [[row[j] for j in columns] for row in gram]
        rows = list(pivot_rows(restricted, len(columns))) if columns else []
        duals = [candidates[r] for r in rows]
        square = [[restricted[r][k] for k in range(len(columns))] for r in rows]
        logger.debug(f"{self.name}: level {level} has dimension {len(basis)}")
        self._levels[level] = (basis, duals, square)
        return self._levels[level]

    @property
    def max_level(self) -> Optional[int]:
        if self.index_bound == 0:
            return 0
        return None

    def basis(self, level: int) -> List[Label]:
        if level < 0:
            return []
        return list(self._level_data(level)[0])

    def reduce(self, vector: Vector, level: int) -> Vector:
        """Project a Verma vector of the given level onto the chosen basis."""
        basis, duals, square = self._level_data(level)
        if not basis:
            return {}
        rhs = [self.engine.pair_vector(d, vector) for d in duals]
        values = solve(square, rhs)
        return {w: c for w, c in zip(basis, values) if c != 0}

    def act_on_basis(self, generator: Generator, index: int, label: Label) -> Vector:
        image = self.engine.act_on_word(generator, index, tuple(label))
        level = len(label) + {Generator.XMINUS: 1, Generator.XI: 0, Generator.XPLUS: -1}[generator]
        if level < 0:
            return {}
        return self.reduce(image, level)

    def apply_word(self, word: XWord, vector: Optional[Vector] = None) -> Vector:
        if vector is None:
            return self.reduce(_word_vector(self.engine, word), len(word))
        return super().apply_word(word, vector)

    def word_spanning_set(
        self, level: int, max_bound: Optional[int] = None
    ) -> Tuple[List[XWord], Rows]:
        basis = self.basis(level)
        identity = [[Fraction(int(i == j)) for j in range(len(basis))] for i in range(len(basis))]
        return [tuple(w) for w in basis], identity

    def label_text(self, label: Label) -> str:
        return _word_text(label)


def _word_vector(engine: VermaEngine, word: XWord) -> Vector:
    vector: Vector = {(): Fraction(1)}
    for n in reversed(tuple(word)):
        vector = engine.xminus_vector(n, vector)
    return vector


class WeylModule(ModuleRealization):
    """W(r, s): M(r/s) modulo the relations ⟨s(u) x⁻(u)⟩₊ ω = 0.

    Ascending words with indices below N = deg s form a basis. Generators
    act directly on that basis: x⁻_n ω with n ≥ N is rewritten as
    −Σ_{j<N} (c_j / c_N) x⁻_{n−N+j} ω for s(u) = Σ c_j u^j, and every other
    step follows the relations of the algebra, so no intermediate vector
    leaves the quotient basis.
    """

    def __init__(self, r: LinRat, s: LinRat, depth: int):
        if not (r.is_polynomial and s.is_polynomial):
            raise RealizationError(f"Weyl module needs polynomial r and s, got {r} and {s}")
        top = r / s
        super().__init__(f"Weyl({r};{s})", top, depth)
        self.r, self.s = r, s
        self.index_bound = s.degree
        coefficients = s.poly_coefficients()
        self._relation = [c / coefficients[-1] for c in coefficients[:-1]]
        self._minus: Dict[Tuple[int, XWord], Vector] = {}
        self._xi: Dict[Tuple[int, XWord], Vector] = {}
        self._plus: Dict[Tuple[int, XWord], Vector] = {}

    @property
    def max_level(self) -> Optional[int]:
        return 0 if self.index_bound == 0 else None

    def basis(self, level: int) -> List[Label]:
        if level < 0:
            return []
        if self.index_bound == 0:
            return [()] if level == 0 else []
        return list(ascending_words(level, self.index_bound))

    def _xminus_vector(self, n: int, vector: Vector) -> Vector:
        result: Vector = {}
        for word, c in vector.items():
            add_into(result, self.xminus(n, word), c)
        return result

    def xminus(self, n: int, word: XWord) -> Vector:
        """x⁻_n on a basis word, expanded in the basis."""
        key = (n, word)
        if key in self._minus:
            return self._minus[key]
        if n < 0:
            raise ValueError(f"Undefined generator x-_{n}")
        bound = self.index_bound
        result: Vector = {}
        if not word:
            if n < bound:
                result = {(n,): Fraction(1)}
            else:
                for j, c in enumerate(self._relation):
                    if c:
                        add_into(result, self.xminus(n - bound + j, ()), -c)
        elif n <= word[0]:
            result = {(n,) + word: Fraction(1)}
        else:
            head, rest = word[0], word[1:]
            for (i, j), c in self.algebra.xminus_pair(n, head).items():
                add_into(result, self._xminus_vector(i, self.xminus(j, rest)), c)
        self._minus[key] = result
        return result

    def _xi_vector(self, p: int, vector: Vector) -> Vector:
        result: Vector = {}
        for word, c in vector.items():
            add_into(result, self.xi(p, word), c)
        return result

    def xi(self, q: int, word: XWord) -> Vector:
        """ξ_q on a basis word.

        With p = q − 1, ξ_q x⁻_h = x⁻_h ξ_q + ξ_p x⁻_{h+1} − x⁻_{h+1} ξ_p
        − ξ_p x⁻_h − x⁻_h ξ_p, so every step only needs the mode below.
        """
        key = (q, word)
        if key in self._xi:
            return self._xi[key]
        unit = self.algebra.unit_index
        if q < unit:
            result: Vector = {}
        elif q == unit:
            result = {word: Fraction(1)}
        elif not word:
            value = self.top.coefficient(-q - 1)
            result = {(): value} if value else {}
        else:
            head, rest = word[0], word[1:]
            p = q - 1
            below = self.xi(p, rest)
            result = dict(self._xminus_vector(head, self.xi(q, rest)))
            add_into(result, self._xi_vector(p, self.xminus(head + 1, rest)))
            add_into(result, self._xminus_vector(head + 1, below), Fraction(-1))
            add_into(result, self.xi(p, word), Fraction(-1))
            add_into(result, self._xminus_vector(head, below), Fraction(-1))
        self._xi[key] = result
        return result

    def xplus(self, m: int, word: XWord) -> Vector:
        key = (m, word)
        if key in self._plus:
            return self._plus[key]
        if m < 0:
            raise ValueError(f"Undefined generator x+_{m}")
        if not word:
            result: Vector = {}
        else:
            head, rest = word[0], word[1:]
            result = dict(self._xminus_vector(head, self.xplus(m, rest)))
            add_into(result, self.xi(m + head, rest))
        self._plus[key] = result
        return result

    def act_on_basis(self, generator: Generator, index: int, label: Label) -> Vector:
        word = tuple(label)
        if generator == Generator.XMINUS:
            return dict(self.xminus(index, word))
        if generator == Generator.XI:
            return dict(self.xi(index, word))
        return dict(self.xplus(index, word))

    def word_spanning_set(
        self, level: int, max_bound: Optional[int] = None
    ) -> Tuple[List[XWord], Rows]:
        basis = self.basis(level)
        identity = [[Fraction(int(i == j)) for j in range(len(basis))] for i in range(len(basis))]
        return [tuple(w) for w in basis], identity

    def label_text(self, label: Label) -> str:
        return _word_text(label)


def make_verma(e: LinRat, depth: int, index_cap: Optional[int] = None) -> VermaModule:
    return VermaModule(e, depth, index_cap)


def make_simple(e: LinRat, depth: int) -> SimpleModule:
    return SimpleModule(e, depth)


def make_weyl(r: LinRat, s: LinRat, depth: int) -> WeylModule:
    return WeylModule(r, s, depth)


def pbw_dimension(level: int, bound: int) -> int:
    """Number of ascending words of length ``level`` in ``bound`` letters."""
    if bound == 0:
        return int(level == 0)
    return comb(level + bound - 1, bound - 1)
