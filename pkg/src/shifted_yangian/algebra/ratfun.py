"""Monic rational functions of u with rational roots, and Laurent series at ∞.

``LinRat`` stores ∏ (u − a)^{m_a} as a sorted tuple of (root, exponent) pairs
with nonzero exponents, so equal functions are equal as Python values.
``LaurentSeries`` stores coefficients of u^lead, u^(lead−1), ... known down
to (but excluding) u^(−order).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import sympy

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]


def _canonical(mapping: Mapping[Fraction, int]) -> Tuple[Tuple[Fraction, int], ...]:
    return tuple(sorted((Fraction(a), int(m)) for a, m in mapping.items() if m != 0))


@dataclass(frozen=True)
class LinRat:
    """A monic rational function ∏_a (u − a)^{m_a} with rational roots."""

    roots: Tuple[Tuple[Fraction, int], ...] = ()

    @classmethod
    def from_roots(cls, mapping: Mapping[Number, int]) -> "LinRat":
        merged: Dict[Fraction, int] = {}
        for a, m in mapping.items():
            key = Fraction(a)
            merged[key] = merged.get(key, 0) + int(m)
        return cls(_canonical(merged))

    @classmethod
    def from_multisets(
        cls, zeros: Iterable[Number] = (), poles: Iterable[Number] = ()
    ) -> "LinRat":
        merged: Dict[Fraction, int] = {}
        for a in zeros:
            merged[Fraction(a)] = merged.get(Fraction(a), 0) + 1
        for b in poles:
            merged[Fraction(b)] = merged.get(Fraction(b), 0) - 1
        return cls(_canonical(merged))

    @classmethod
    def one(cls) -> "LinRat":
        return cls(())

    @classmethod
    def linear(cls, a: Number) -> "LinRat":
        """The factor (u − a)."""
        return cls(((Fraction(a), 1),))

    def as_dict(self) -> Dict[Fraction, int]:
        return dict(self.roots)

    def exponent(self, a: Number) -> int:
        return self.as_dict().get(Fraction(a), 0)

    # group structure

    def __mul__(self, other: "LinRat") -> "LinRat":
        merged = self.as_dict()
        for a, m in other.roots:
            merged[a] = merged.get(a, 0) + m
        return LinRat(_canonical(merged))

    def __truediv__(self, other: "LinRat") -> "LinRat":
        return self * other.inverse()

    def __pow__(self, power: int) -> "LinRat":
        return LinRat(_canonical({a: m * power for a, m in self.roots}))

    def inverse(self) -> "LinRat":
        return LinRat(tuple((a, -m) for a, m in self.roots))

    def shift(self, c: Number) -> "LinRat":
        """Move every root a to a + c, i.e. f(u) ↦ f(u − c)."""
        c = Fraction(c)
        return LinRat(tuple((a + c, m) for a, m in self.roots))

    # numerator / denominator

    def numerator(self) -> "LinRat":
        return LinRat(tuple((a, m) for a, m in self.roots if m > 0))

    def denominator(self) -> "LinRat":
        return LinRat(tuple((a, -m) for a, m in self.roots if m < 0))

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.roots)

    @property
    def is_one(self) -> bool:
        return not self.roots

    @property
    def is_polynomial(self) -> bool:
        return all(m > 0 for _, m in self.roots)

    def zeros(self) -> List[Fraction]:
        """Zeros as a sorted multiset."""
        return [a for a, m in self.roots if m > 0 for _ in range(m)]

    def poles(self) -> List[Fraction]:
        """Poles as a sorted multiset."""
        return [a for a, m in self.roots if m < 0 for _ in range(-m)]

    def eval(self, q: Number) -> Fraction:
        """Evaluate at a rational point.

        Raises:
            ValueError: If q is a pole.
        """
        q = Fraction(q)
        value = Fraction(1)
        for a, m in self.roots:
            if a == q and m < 0:
                raise ValueError(f"{q} is a pole of {self}")
            value *= (q - a) ** m
        return value

    def poly_coefficients(self) -> List[Fraction]:
        """Coefficients c_0, ..., c_N of a polynomial LinRat, lowest degree first.

        Raises:
            ValueError: If the function has poles.
        """
        if not self.is_polynomial:
            raise ValueError(f"{self} is not a polynomial")
        coefficients = [Fraction(1)]
        for a in self.zeros():
            shifted = [Fraction(0)] + coefficients
            for k, c in enumerate(coefficients):
                shifted[k] -= a * c
            coefficients = shifted
        return coefficients

    # expansions at infinity

    def coefficient(self, power: int) -> Fraction:
        """Coefficient of u^power in the expansion at ∞."""
        index = self.degree - power
        if index < 0:
            return Fraction(0)
        size = 16
        while size <= index:
            size *= 2
        return _series_coefficients(self, size)[index]

    def expand(self, order: int) -> "LaurentSeries":
        """Expansion at ∞ known for powers > −order."""
        if order < -self.degree:
            raise ValueError(f"order {order} is below −degree of {self}")
        count = self.degree + order
        return LaurentSeries(
            self.degree, tuple(self.coefficient(self.degree - j) for j in range(count)), order
        )

    def to_expr(self, symbol: sympy.Symbol) -> sympy.Expr:
        expr = sympy.Integer(1)
        for a, m in self.roots:
            expr *= (symbol - sympy.Rational(a.numerator, a.denominator)) ** m
        return expr

    def __str__(self) -> str:
        num = [(a, m) for a, m in self.roots if m > 0]
        den = [(a, -m) for a, m in self.roots if m < 0]
        top = "*".join(_factor_text(a, m) for a, m in num) or "1"
        if not den:
            return top
        return f"{top}/({'*'.join(_factor_text(a, m) for a, m in den)})"


def _factor_text(a: Fraction, m: int) -> str:
    if a == 0:
        base = "u"
    elif a > 0:
        base = f"(u-{_fraction_text(a)})"
    else:
        base = f"(u+{_fraction_text(-a)})"
    return base if m == 1 else f"{base}^{m}"


def _fraction_text(a: Fraction) -> str:
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


@lru_cache(maxsize=4096)
def _series_coefficients(f: LinRat, size: int) -> Tuple[Fraction, ...]:
    """First ``size`` coefficients of u^{−deg} f(u) as a power series in 1/u."""
    series = [Fraction(0)] * size
    series[0] = Fraction(1)
    for a, m in f.roots:
        if m > 0:
            factor = [comb(m, j) * (-a) ** j for j in range(min(m, size - 1) + 1)]
        else:
            k = -m
            factor = [comb(k + j - 1, j) * a**j for j in range(size)]
        product = [Fraction(0)] * size
        for i, s in enumerate(series):
            if s == 0:
                continue
            for j, c in enumerate(factor):
                if i + j >= size:
                    break
                product[i + j] += s * c
        series = product
    return tuple(series)


@dataclass(frozen=True)
class LaurentSeries:
    """Truncated Laurent series in u^{-1}.

    ``coeffs[j]`` is the coefficient of u^(lead − j); every power > −order
    is known, so ``len(coeffs) == max(0, lead + order)``.
    """

    lead: int
    coeffs: Tuple[Fraction, ...]
    order: int

    def __post_init__(self) -> None:
        expected = max(0, self.lead + self.order)
        if len(self.coeffs) != expected:
            raise ValueError(
                f"Expected {expected} coefficients for lead {self.lead}, "
                f"order {self.order}; got {len(self.coeffs)}"
            )

    @classmethod
    def from_polynomial(cls, coefficients: Sequence[Number], order: int) -> "LaurentSeries":
        """Series of Σ c_k u^k (coefficients lowest degree first)."""
        lead = max(len(coefficients) - 1, 0)
        count = max(0, lead + order)
        values = []
        for j in range(count):
            power = lead - j
            values.append(
                Fraction(coefficients[power]) if 0 <= power < len(coefficients) else Fraction(0)
            )
        return cls(lead, tuple(values), order)

    @classmethod
    def zero(cls, order: int) -> "LaurentSeries":
        return cls(0, tuple(Fraction(0) for _ in range(max(0, order))), order)

    def coefficient(self, power: int) -> Fraction:
        if power <= -self.order:
            raise ValueError(f"Coefficient of u^{power} is beyond order {self.order}")
        if power > self.lead:
            return Fraction(0)
        return self.coeffs[self.lead - power]

    def truncate(self, order: int) -> "LaurentSeries":
        order = min(order, self.order)
        count = max(0, self.lead + order)
        return LaurentSeries(self.lead, self.coeffs[:count], order)

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        lead = max(self.lead, other.lead)
        order = min(self.order, other.order)
        count = max(0, lead + order)
        values = tuple(
            self.coefficient(lead - j) + other.coefficient(lead - j) for j in range(count)
        )
        return LaurentSeries(lead, values, order)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.lead, tuple(-c for c in self.coeffs), self.order)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def scale(self, factor: Number) -> "LaurentSeries":
        factor = Fraction(factor)
        return LaurentSeries(self.lead, tuple(factor * c for c in self.coeffs), self.order)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        lead = self.lead + other.lead
        order = min(self.order - other.lead, other.order - self.lead)
        count = max(0, lead + order)
        values = [Fraction(0)] * count
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= count:
                    break
                values[i + j] += a * b
        return LaurentSeries(lead, tuple(values), order)

    def inverse(self) -> "LaurentSeries":
        """Multiplicative inverse; the leading coefficient must be nonzero."""
        if not self.coeffs or self.coeffs[0] == 0:
            raise ValueError("Series has no invertible leading term")
        count = len(self.coeffs)
        a0 = self.coeffs[0]
        values = [Fraction(1) / a0]
        for n in range(1, count):
            acc = sum((self.coeffs[k] * values[n - k] for k in range(1, n + 1)), Fraction(0))
            values.append(-acc / a0)
        return LaurentSeries(-self.lead, tuple(values), count + self.lead)

    def __truediv__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self * other.inverse()

    def principal_part(self) -> "LaurentSeries":
        """⟨·⟩₊: keep exactly the coefficients of u^{−p−1}, p ≥ 0."""
        count = max(0, self.order - 1)
        values = tuple(self.coefficient(-1 - j) for j in range(count))
        return LaurentSeries(-1, values, self.order)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def agrees_with(self, other: "LaurentSeries", order: int) -> bool:
        """Equality of all coefficients of powers > −order."""
        if order > min(self.order, other.order):
            raise ValueError(f"Cannot compare beyond known order {order}")
        top = max(self.lead, other.lead)
        return all(
            self.coefficient(p) == other.coefficient(p) for p in range(top, -order, -1)
        )


def series_product(factors: Sequence[LaurentSeries]) -> LaurentSeries:
    result = factors[0]
    for factor in factors[1:]:
        result = result * factor
    return result
