"""Explicit module families over shifted Y(sl₂).

Each family is given by its generating currents on a basis (v_i): every
x^±(u) v_i and ξ(u) v_i is a scalar times a monic rational function times
one basis vector. The mode x^±_n (or ξ_n) is the coefficient of u^{−n−1}.

    Lplus(a)    one-dimensional, ξ(u) = u − a                        shift 1
    N(a)        two-dimensional, e_1 = v_0, e_2 = v_1                shift 0
    FrakL(a,b)  𝔏_b^a, basis v_0, v_1, ... (infinite)                shift 0
    L(a,b)      L_b^a, the submodule generated by v_0 in 𝔏_b^a        shift 0
    Lminus(b)   negative prefundamental L_b^−                         shift −1
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

from ..algebra.ratfun import LinRat
from ..algebra.yangian_sl2 import Generator
from ..core.exceptions import RealizationError
from .realization import Label, ModuleRealization, Vector, add_into

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]


@dataclass(frozen=True)
class CurrentTerm:
    """One term ``scalar · f(u) · v_target`` of a current applied to v_i."""

    target: int
    scalar: Fraction
    function: LinRat

    def mode(self, index: int) -> Fraction:
        return self.scalar * self.function.coefficient(-index - 1)

    def shifted(self, a: Fraction) -> "CurrentTerm":
        return CurrentTerm(self.target, self.scalar, self.function.shift(a))


CurrentTable = Callable[[int], Dict[Generator, List[CurrentTerm]]]


class ExplicitModule(ModuleRealization):
    """A module given by closed-form currents on the basis v_0, v_1, ...."""

    def __init__(
        self,
        name: str,
        top: LinRat,
        depth: int,
        currents: CurrentTable,
        size: Optional[int] = None,
    ):
        super().__init__(name, top, depth)
        self._currents = currents
        self._size = size
        self._table: Dict[int, Dict[Generator, List[CurrentTerm]]] = {}

    @property
    def max_level(self) -> Optional[int]:
        return None if self._size is None else self._size - 1

    def basis(self, level: int) -> List[Label]:
        if level < 0 or (self._size is not None and level >= self._size):
            return []
        return [level]

    def currents(self, label: int) -> Dict[Generator, List[CurrentTerm]]:
        if label not in self._table:
            self._table[label] = self._currents(label)
        return self._table[label]

    def act_on_basis(self, generator: Generator, index: int, label: Label) -> Vector:
        result: Vector = {}
        for term in self.currents(int(label)).get(generator, []):
            if self._size is not None and not 0 <= term.target < self._size:
                continue
            add_into(result, {term.target: term.mode(index)})
        return result

    def label_text(self, label: Label) -> str:
        return f"v{label}"

    def shifted(self, a: Number) -> "ExplicitModule":
        """The pullback τ_a^* of this module: every u becomes u − a."""
        a = Fraction(a)
        base = self._currents

        def currents(label: int) -> Dict[Generator, List[CurrentTerm]]:
            return {g: [t.shifted(a) for t in terms] for g, terms in base(label).items()}

        return ExplicitModule(
            f"tau({a})*{self.name}", self.top.shift(a), self.depth, currents, self._size
        )

    def to_dict(self, n_max: int) -> Dict[str, Any]:
        document = super().to_dict(n_max)
        currents = []
        for level in self.levels():
            for generator, terms in sorted(self.currents(level).items()):
                for term in terms:
                    if self._size is not None and not 0 <= term.target < self._size:
                        continue
                    currents.append(
                        {
                            "source": self.label_text(level),
                            "current": generator.symbol,
                            "target": self.label_text(term.target),
                            "entry": _entry_text(term),
                        }
                    )
        document["currents"] = currents
        return document


def _entry_text(term: CurrentTerm) -> str:
    scalar = term.scalar
    text = str(term.function)
    if scalar == 1:
        return text
    rendered = str(scalar.numerator) if scalar.denominator == 1 else f"{scalar}"
    return f"{rendered}*{text}" if text != "1" else rendered


def _is_natural(value: Fraction) -> bool:
    return value.denominator == 1 and value >= 0


def _term(target: int, scalar: Number, zeros=(), poles=()) -> CurrentTerm:
    return CurrentTerm(target, Fraction(scalar), LinRat.from_multisets(zeros, poles))


def positive_prefundamental(a: Number) -> ExplicitModule:
    a = Fraction(a)

    def currents(i: int) -> Dict[Generator, List[CurrentTerm]]:
        return {Generator.XI: [_term(i, 1, zeros=[a])]}

    return ExplicitModule(f"Lplus({a})", LinRat.linear(a), 0, currents, size=1)


def two_dimensional(a: Number) -> ExplicitModule:
    """N_a with ξ(u)e_1 = (u−a+1)/(u−a) e_1 and ξ(u)e_2 = (u−a−1)/(u−a) e_2."""
    a = Fraction(a)

    def currents(i: int) -> Dict[Generator, List[CurrentTerm]]:
        if i == 0:
            return {
                Generator.XI: [_term(0, 1, zeros=[a - 1], poles=[a])],
                Generator.XMINUS: [_term(1, 1, poles=[a])],
            }
        return {
            Generator.XI: [_term(1, 1, zeros=[a + 1], poles=[a])],
            Generator.XPLUS: [_term(0, 1, poles=[a])],
        }

    top = LinRat.from_multisets(zeros=[a - 1], poles=[a])
    return ExplicitModule(f"N({a})", top, 1, currents, size=2)


def _frak_currents(a: Fraction, b: Fraction) -> Callable[[int], Dict[Generator, List[CurrentTerm]]]:
    def currents(i: int) -> Dict[Generator, List[CurrentTerm]]:
        table: Dict[Generator, List[CurrentTerm]] = {
            Generator.XI: [_term(i, 1, zeros=[b + 1, a], poles=[b - i + 1, b - i])]
        }
        if i >= 1:
            table[Generator.XPLUS] = [_term(i - 1, 1, poles=[b - i + 1])]
        coefficient = (b - a - i) * (i + 1)
        if coefficient != 0:
            table[Generator.XMINUS] = [_term(i + 1, coefficient, poles=[b - i])]
        return table

    return currents


def asymptotic_module(a: Number, b: Number, depth: int) -> ExplicitModule:
    """𝔏_b^a on v_0, v_1, ...; reducible exactly when b − a ∈ ℕ."""
    a, b = Fraction(a), Fraction(b)
    top = LinRat.from_multisets(zeros=[a], poles=[b])
    return ExplicitModule(f"FrakL({a},{b})", top, depth, _frak_currents(a, b))


def string_module(a: Number, b: Number, depth: int) -> ExplicitModule:
    """L_b^a of highest ℓ-weight (u−a)/(u−b); dimension b − a + 1 when b − a ∈ ℕ."""
    a, b = Fraction(a), Fraction(b)
    top = LinRat.from_multisets(zeros=[a], poles=[b])
    size = int(b - a) + 1 if _is_natural(b - a) else None
    if size is not None:
        depth = min(depth, size - 1)
    return ExplicitModule(f"L({a},{b})", top, depth, _frak_currents(a, b), size=size)


def negative_prefundamental(b: Number, depth: int) -> ExplicitModule:
    """L_b^− over Y_{−1}(sl₂), truncated for iteration at v_depth."""
    b = Fraction(b)

    def currents(i: int) -> Dict[Generator, List[CurrentTerm]]:
        table = {
            Generator.XI: [_term(i, 1, zeros=[b + 1], poles=[b - i + 1, b - i])],
            Generator.XMINUS: [_term(i + 1, i + 1, poles=[b - i])],
        }
        if i >= 1:
            table[Generator.XPLUS] = [_term(i - 1, 1, poles=[b - i + 1])]
        return table

    return ExplicitModule(f"Lminus({b})", LinRat.from_multisets(poles=[b]), depth, currents)


_FAMILIES: Dict[str, Tuple[int, Callable[..., ExplicitModule]]] = {
    "Lplus": (1, lambda depth, a: positive_prefundamental(a)),
    "N": (1, lambda depth, a: two_dimensional(a)),
    "FrakL": (2, lambda depth, a, b: asymptotic_module(a, b, depth)),
    "L": (2, lambda depth, a, b: string_module(a, b, depth)),
    "Lba": (2, lambda depth, a, b: string_module(a, b, depth)),
    "Lminus": (1, lambda depth, b: negative_prefundamental(b, depth)),
    "KR": (2, lambda depth, k, a: make_kr(int(k), a, depth)),
}


def family_names() -> List[str]:
    return sorted(_FAMILIES)


def make_explicit(family: str, params: Tuple[Number, ...], depth: int) -> ExplicitModule:
    """Build one of the explicit families from its parameters.

    Raises:
        RealizationError: For an unknown family or a wrong parameter count.
    """
    if family not in _FAMILIES:
        raise RealizationError(
            f"Unknown module family {family!r}; expected one of {', '.join(family_names())}"
        )
    count, builder = _FAMILIES[family]
    if len(params) != count:
        raise RealizationError(f"{family} takes {count} parameter(s), got {len(params)}")
    module = builder(depth, *[Fraction(p) for p in params])
    logger.debug(f"Built explicit module {module.name} (shift {module.shift})")
    return module


def make_kr(k: int, a: Number, depth: Optional[int] = None) -> ExplicitModule:
    """KR module W_{k,a} = L(Ψ_{a−k}/Ψ_a), of dimension k + 1.

    Raises:
        RealizationError: If k is negative.
    """
    if k < 0:
        raise RealizationError(f"KR length must be nonnegative, got {k}")
    a = Fraction(a)
    module = string_module(a - k, a, k if depth is None else depth)
    module.name = f"KR({k},{a})"
    return module


def spectral_shift(module: ModuleRealization, a: Number) -> ModuleRealization:
    """The pullback τ_a^* V: ℓ-weights move by τ_a and weights by −a·shift."""
    a = Fraction(a)
    if a == 0:
        return module
    if isinstance(module, ExplicitModule):
        return module.shifted(a)
    return SpectralShiftModule(module, a)


class SpectralShiftModule(ModuleRealization):
    """τ_a^* V for a realization without closed-form currents."""

    def __init__(self, base: ModuleRealization, a: Fraction):
        super().__init__(f"tau({a})*{base.name}", base.top.shift(a), base.depth)
        self.base = base
        self.a = a

    @property
    def max_level(self) -> Optional[int]:
        return self.base.max_level

    def basis(self, level: int) -> List[Label]:
        return self.base.basis(level)

    def act_on_basis(self, generator: Generator, index: int, label: Label) -> Vector:
        result: Vector = {}
        for word, c in self.base.algebra.tau((generator, index), self.a).terms.items():
            if not word:
                add_into(result, {label: c})
                continue
            (g, n), = word
            add_into(result, self.base.act_on_basis(g, n, label), c)
        return result

    def label_text(self, label: Label) -> str:
        return self.base.label_text(label)
