"""Shifted Yangian of sl₂ in Drinfeld generators, with PBW straightening.

The algebra of shift s is generated by x⁺_n, x⁻_n (n ≥ 0) and ξ_p with
ξ_{−s−1} = 1 and ξ_p = 0 for p < −s−1. The defining relations used for
rewriting are

    [x⁺_m, x⁻_n] = ξ_{m+n}
    [ξ_{p+1}, x^±_n] − [ξ_p, x^±_{n+1}] = ±(ξ_p x^±_n + x^±_n ξ_p)
    [x^±_{m+1}, x^±_n] − [x^±_m, x^±_{n+1}] = ±(x^±_m x^±_n + x^±_n x^±_m)

and the ξ_p commute. Words are tuples of ``(Generator, index)`` letters; an
element is a dict from words to ``Fraction`` coefficients.
"""

import logging
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import sympy

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]


class Generator(IntEnum):
    """Drinfeld generators, ordered as in the triangular normal form."""

    XMINUS = 0
    XI = 1
    XPLUS = 2

    @property
    def symbol(self) -> str:
        return {0: "x-", 1: "xi", 2: "x+"}[int(self)]


Letter = Tuple[Generator, int]
Word = Tuple[Letter, ...]
Terms = Dict[Word, Fraction]

TRIANGULAR = "triangular"
XMINUS_ORDER = "xminus"


def generalized_binomial(top: int, k: int) -> Fraction:
    """C(top, k) = top(top−1)⋯(top−k+1)/k!, valid for negative ``top``."""
    value = Fraction(1)
    for j in range(k):
        value = value * (top - j) / (j + 1)
    return value


def _add(target: Terms, word: Word, coefficient: Fraction) -> None:
    value = target.get(word, Fraction(0)) + coefficient
    if value == 0:
        target.pop(word, None)
    else:
        target[word] = value


@dataclass
class AlgebraElement:
    """A finite ℚ-linear combination of words in the Drinfeld generators."""

    terms: Terms = field(default_factory=dict)

    @classmethod
    def word(cls, *letters: Letter, coefficient: Number = 1) -> "AlgebraElement":
        return cls({tuple((Generator(g), int(n)) for g, n in letters): Fraction(coefficient)})

    @classmethod
    def unit(cls) -> "AlgebraElement":
        return cls({(): Fraction(1)})

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        result = dict(self.terms)
        for word, c in other.terms.items():
            _add(result, word, c)
        return AlgebraElement(result)

    def __neg__(self) -> "AlgebraElement":
        return self.scale(-1)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, factor: Number) -> "AlgebraElement":
        factor = Fraction(factor)
        if factor == 0:
            return AlgebraElement()
        return AlgebraElement({w: c * factor for w, c in self.terms.items()})

    def concat(self, other: "AlgebraElement") -> "AlgebraElement":
        """Free product of words, without straightening."""
        result: Terms = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                _add(result, w1 + w2, c1 * c2)
        return AlgebraElement(result)

    def weight(self) -> Optional[int]:
        """Common weight (#x⁺ − #x⁻, in units of α), or None if mixed."""
        weights = {
            sum(1 if g == Generator.XPLUS else -1 if g == Generator.XMINUS else 0 for g, _ in w)
            for w in self.terms
        }
        if len(weights) > 1:
            return None
        return weights.pop() if weights else 0

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for word, c in sorted(self.terms.items()):
            letters = " ".join(f"{g.symbol}_{n}" for g, n in word) or "1"
            parts.append(f"{c}*{letters}")
        return " + ".join(parts)


class ShiftedYangianSL2:
    """Y_s(sl₂): relation tables and straightening for a fixed shift s."""

    def __init__(self, shift: int):
        self.shift = int(shift)
        self._xi_xminus: Dict[Tuple[int, int], Dict[Tuple[int, int], Fraction]] = {}
        self._xi_xplus: Dict[Tuple[int, int], Dict[Tuple[int, int], Fraction]] = {}
        self._minus_pairs: Dict[Tuple[int, int], Dict[Tuple[int, int], Fraction]] = {}
        self._plus_pairs: Dict[Tuple[int, int], Dict[Tuple[int, int], Fraction]] = {}

    @property
    def unit_index(self) -> int:
        """The index p with ξ_p = 1."""
        return -self.shift - 1

    def __repr__(self) -> str:
        return f"ShiftedYangianSL2(shift={self.shift})"

    # relation tables

    def xi_xminus_commutator(self, p: int, n: int) -> Dict[Tuple[int, int], Fraction]:
        """[ξ_p, x⁻_n] = Σ c · x⁻_k ξ_q, keyed by (k, q); q = −s−1 means ξ_q = 1."""
        key = (p, n)
        if key in self._xi_xminus:
            return self._xi_xminus[key]
        result: Dict[Tuple[int, int], Fraction] = {}
        if p > self.unit_index:
            for (k, q), c in self.xi_xminus_commutator(p - 1, n + 1).items():
                result[(k, q)] = result.get((k, q), Fraction(0)) + c
            for (k, q), c in self.xi_xminus_commutator(p - 1, n).items():
                result[(k, q)] = result.get((k, q), Fraction(0)) - c
            result[(n, p - 1)] = result.get((n, p - 1), Fraction(0)) - 2
            result = {k: c for k, c in result.items() if c != 0}
        self._xi_xminus[key] = result
        return result

    def xi_xplus_commutator(self, p: int, n: int) -> Dict[Tuple[int, int], Fraction]:
        """[ξ_p, x⁺_n] = Σ c · ξ_q x⁺_k, keyed by (q, k)."""
        key = (p, n)
        if key in self._xi_xplus:
            return self._xi_xplus[key]
        result: Dict[Tuple[int, int], Fraction] = {}
        if p > self.unit_index:
            for (q, k), c in self.xi_xplus_commutator(p - 1, n + 1).items():
                result[(q, k)] = result.get((q, k), Fraction(0)) + c
            for (q, k), c in self.xi_xplus_commutator(p - 1, n).items():
                result[(q, k)] = result.get((q, k), Fraction(0)) - c
            result[(p - 1, n)] = result.get((p - 1, n), Fraction(0)) + 2
            result = {k: c for k, c in result.items() if c != 0}
        self._xi_xplus[key] = result
        return result

    def _ordered_pairs(
        self, a: int, b: int, sign: int, memo: Dict[Tuple[int, int], Dict[Tuple[int, int], Fraction]]
    ) -> Dict[Tuple[int, int], Fraction]:
        if a <= b:
            return {(a, b): Fraction(1)}
        if (a, b) in memo:
            return memo[(a, b)]
        result: Dict[Tuple[int, int], Fraction] = {}

        def put(pairs: Mapping[Tuple[int, int], Fraction], factor: int) -> None:
            for k, c in pairs.items():
                result[k] = result.get(k, Fraction(0)) + factor * c

        if a == b + 1:
            put({(b, b + 1): Fraction(1)}, 1)
            put({(b, b): Fraction(1)}, sign)
        else:
            put({(b, a): Fraction(1)}, 1)
            put(self._ordered_pairs(a - 1, b + 1, sign, memo), 1)
            put({(b + 1, a - 1): Fraction(1)}, -1)
            put(self._ordered_pairs(a - 1, b, sign, memo), sign)
            put({(b, a - 1): Fraction(1)}, sign)
        result = {k: c for k, c in result.items() if c != 0}
        memo[(a, b)] = result
        return result

    def xminus_pair(self, a: int, b: int) -> Dict[Tuple[int, int], Fraction]:
        """x⁻_a x⁻_b as a combination of ordered products x⁻_i x⁻_j, i ≤ j."""
        return self._ordered_pairs(a, b, -1, self._minus_pairs)

    def xplus_pair(self, a: int, b: int) -> Dict[Tuple[int, int], Fraction]:
        """x⁺_a x⁺_b as a combination of ordered products x⁺_i x⁺_j, i ≤ j."""
        return self._ordered_pairs(a, b, 1, self._plus_pairs)

    # straightening

    def _clean(self, word: Word) -> Optional[Word]:
        """Drop ξ_{−s−1} letters; None if the word vanishes."""
        letters = []
        for g, n in word:
            if g == Generator.XI:
                if n < self.unit_index:
                    return None
                if n == self.unit_index:
                    continue
            elif n < 0:
                raise ValueError(f"Undefined generator {g.symbol}_{n}")
            letters.append((g, n))
        return tuple(letters)

    def _rewrite(self, left: Letter, right: Letter) -> Optional[List[Tuple[Tuple[Letter, ...], Fraction]]]:
        """Replacement for an out-of-order adjacent pair, or None if ordered."""
        (g, m), (h, n) = left, right
        if g < h:
            return None
        if g == h:
            if m <= n:
                return None
            if g == Generator.XI:
                return [((right, left), Fraction(1))]
            pairs = self.xminus_pair(m, n) if g == Generator.XMINUS else self.xplus_pair(m, n)
            return [(((g, i), (g, j)), c) for (i, j), c in pairs.items()]
        if g == Generator.XI and h == Generator.XMINUS:
            out = [((right, left), Fraction(1))]
            for (k, q), c in self.xi_xminus_commutator(m, n).items():
                out.append((((Generator.XMINUS, k), (Generator.XI, q)), c))
            return out
        if g == Generator.XPLUS and h == Generator.XMINUS:
            return [((right, left), Fraction(1)), (((Generator.XI, m + n),), Fraction(1))]
        # x⁺_m ξ_n = ξ_n x⁺_m − [ξ_n, x⁺_m]
        out = [((right, left), Fraction(1))]
        for (q, k), c in self.xi_xplus_commutator(n, m).items():
            out.append((((Generator.XI, q), (Generator.XPLUS, k)), -c))
        return out

    def straighten(
        self, element: Union[AlgebraElement, Mapping[Word, Number]], normal_order: str = TRIANGULAR
    ) -> AlgebraElement:
        """Rewrite into ordered monomials (x⁻ ascending)(ξ ascending)(x⁺ ascending).

        With ``normal_order="xminus"`` the input must consist of x⁻ letters
        only, and the result is a combination of ascending x⁻ words.

        Raises:
            ValueError: For a negative generator index or a non-x⁻ letter in
                x⁻ mode.
        """
        terms = element.terms if isinstance(element, AlgebraElement) else element
        if normal_order not in (TRIANGULAR, XMINUS_ORDER):
            raise ValueError(f"Unknown normal order {normal_order!r}")
        pending: Terms = {}
        for word, c in terms.items():
            word = tuple((Generator(g), int(n)) for g, n in word)
            if normal_order == XMINUS_ORDER and any(g != Generator.XMINUS for g, _ in word):
                raise ValueError("x⁻ normal order only applies to words in x⁻ generators")
            cleaned = self._clean(word)
            if cleaned is not None:
                _add(pending, cleaned, Fraction(c))

        result: Terms = {}
        steps = 0
        while pending:
            word, c = pending.popitem()
            for position in range(len(word) - 1):
                replacement = self._rewrite(word[position], word[position + 1])
                if replacement is not None:
                    break
            else:
                _add(result, word, c)
                continue
            steps += 1
            prefix, suffix = word[:position], word[position + 2 :]
            for middle, factor in replacement:
                new_word = self._clean(prefix + middle + suffix)
                if new_word is not None:
                    _add(pending, new_word, c * factor)
        logger.debug(f"Straightened {len(terms)} word(s) in {steps} rewrite steps")
        return AlgebraElement(result)

    def multiply(self, left: AlgebraElement, right: AlgebraElement) -> AlgebraElement:
        return self.straighten(left.concat(right))

    def commutator(self, left: AlgebraElement, right: AlgebraElement) -> AlgebraElement:
        return self.multiply(left, right) - self.multiply(right, left)

    # generator maps

    def shift_hom(self, letter: Letter, zeta: int, eta: int) -> Tuple["ShiftedYangianSL2", AlgebraElement]:
        """Shift homomorphism into Y_{s+ζ+η}: x⁺_n ↦ x⁺_{n−ζ}, x⁻_n ↦ x⁻_{n−η}, ξ_p ↦ ξ_{p−ζ−η}.

        Raises:
            ValueError: If ζ or η is positive.
        """
        if zeta > 0 or eta > 0:
            raise ValueError(f"Shift arguments must be antidominant, got ({zeta}, {eta})")
        target = ShiftedYangianSL2(self.shift + zeta + eta)
        g, n = Generator(letter[0]), int(letter[1])
        offset = {Generator.XPLUS: -zeta, Generator.XMINUS: -eta, Generator.XI: -zeta - eta}[g]
        image = target.straighten({((g, n + offset),): 1})
        return target, image

    def _tau_terms(self, letter: Letter) -> List[Tuple[int, Fraction, Letter]]:
        """Terms (power of the parameter, binomial, image letter) of τ on a letter."""
        g, p = Generator(letter[0]), int(letter[1])
        floor = self.unit_index if g == Generator.XI else 0
        if p < floor:
            return []
        return [(k, generalized_binomial(p, k), (g, p - k)) for k in range(p - floor + 1)]

    def tau(self, letter: Letter, a: Number) -> AlgebraElement:
        """Spectral shift τ_a: X_p ↦ Σ_n C(p, n) a^n X_{p−n}."""
        a = Fraction(a)
        image: Terms = {}
        for k, binomial, target in self._tau_terms(letter):
            cleaned = self._clean((target,))
            if cleaned is not None:
                _add(image, cleaned, binomial * a**k)
        return AlgebraElement(image)

    def tau_poly(self, letter: Letter, z: sympy.Symbol) -> Dict[Word, sympy.Expr]:
        """τ_z with coefficients polynomial in the symbol z."""
        image: Dict[Word, sympy.Expr] = {}
        for k, binomial, target in self._tau_terms(letter):
            cleaned = self._clean((target,))
            if cleaned is None:
                continue
            value = sympy.Rational(binomial.numerator, binomial.denominator) * z**k
            image[cleaned] = sympy.expand(image.get(cleaned, sympy.Integer(0)) + value)
        return {w: c for w, c in image.items() if c != 0}

    def apply_tau(self, element: AlgebraElement, a: Number) -> AlgebraElement:
        """Extend τ_a multiplicatively to words."""
        result = AlgebraElement()
        for word, c in element.terms.items():
            image = AlgebraElement.unit().scale(c)
            for letter in word:
                image = image.concat(self.tau(letter, a))
            result = result + image
        return result


def letters(spec: Iterable[Tuple[str, int]]) -> Word:
    """Build a word from ``("x-", 2), ("xi", 0), ...`` pairs."""
    lookup = {"x-": Generator.XMINUS, "xi": Generator.XI, "x+": Generator.XPLUS}
    return tuple((lookup[name], int(n)) for name, n in spec)
