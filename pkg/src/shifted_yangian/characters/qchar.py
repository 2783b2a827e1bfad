"""Depth-truncated q-characters, characters and Jordan–Hölder peeling.

A q-character is stored as its top ℓ-weight together with a table of
A⁻¹-monomials: the key ((i_1, a_1), ..., (i_k, a_k)) stands for the
ℓ-weight top · A_{i_1,a_1}^{−1} ⋯ A_{i_k,a_k}^{−1}. Only monomials of size at
most ``depth`` are kept.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import pandas as pd

from ..algebra.cartan import CartanData, build_cartan, root_vector_weight, root_weight
from ..algebra.lweight import (
    AKey,
    AMonomial,
    LWeight,
    Weight,
    generators,
    inverse_monomial_lweight,
    weight_and_coweight,
)
from ..algebra.ratfun import LinRat
from ..core.exceptions import RealizationError, TruncationInconclusiveError
from ..utils.serialization import dump_json, render_fraction
from .factorize import factor_families, standard_factorize

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]


def _merge(left: AMonomial, right: AMonomial) -> AMonomial:
    return tuple(sorted(left + right))


def _monomial_text(monomial: AMonomial) -> str:
    if not monomial:
        return "1"
    return "*".join(f"A({i},{render_fraction(a)})^-1" for i, a in monomial)


@dataclass
class QCharacter:
    """qc(V) truncated to A⁻¹-monomials of size ≤ depth."""

    cartan: CartanData
    top: LWeight
    terms: Dict[AMonomial, int]
    depth: int

    def __post_init__(self) -> None:
        self.terms = {
            tuple(sorted(m)): n
            for m, n in self.terms.items()
            if n != 0 and len(m) <= self.depth
        }

    @classmethod
    def one(cls, cd: CartanData, depth: int) -> "QCharacter":
        return cls(cd, LWeight.one(cd), {(): 1}, depth)

    def normalized(self) -> "QCharacter":
        """nqc: the same monomials over the trivial top."""
        return QCharacter(self.cartan, LWeight.one(self.cartan), dict(self.terms), self.depth)

    def truncate(self, depth: int) -> "QCharacter":
        return QCharacter(self.cartan, self.top, dict(self.terms), min(depth, self.depth))

    def lweight(self, monomial: AMonomial) -> LWeight:
        return self.top * inverse_monomial_lweight(self.cartan, monomial)

    def lweights(self) -> List[Tuple[LWeight, int]]:
        """Explicit ℓ-weights with multiplicities, ordered by monomial size."""
        return [(self.lweight(m), n) for m, n in sorted(self.terms.items(), key=_order)]

    def at_size(self, size: int) -> Dict[AMonomial, int]:
        return {m: n for m, n in self.terms.items() if len(m) == size}

    def __mul__(self, other: "QCharacter") -> "QCharacter":
        return qc_mul(self, other)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "top": str(self.top),
            "depth": self.depth,
            "terms": [
                {"monomial": [[i, render_fraction(a)] for i, a in m], "mult": n}
                for m, n in sorted(self.terms.items(), key=_order)
            ],
        }

    def to_json(self, indent: int = 2) -> str:
        return dump_json(self.to_dict(), indent)

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {
                "size": len(m),
                "monomial": _monomial_text(m),
                "lweight": str(self.lweight(m)),
                "mult": n,
            }
            for m, n in sorted(self.terms.items(), key=_order)
        ]
        return pd.DataFrame(rows, columns=["size", "monomial", "lweight", "mult"])


def _order(item: Tuple[AMonomial, int]) -> Tuple[int, AMonomial]:
    return len(item[0]), item[0]


@dataclass
class Character:
    """χ(V): weight multiplicities down to root height ``depth``."""

    cartan: CartanData
    terms: Dict[Weight, int] = field(default_factory=dict)
    depth: int = 0

    def __post_init__(self) -> None:
        self.terms = {w: n for w, n in self.terms.items() if n != 0}

    def total(self) -> int:
        return sum(self.terms.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "depth": self.depth,
            "terms": [
                {"weight": str(w), "mult": n}
                for w, n in sorted(self.terms.items(), key=lambda kv: kv[0].coeffs, reverse=True)
            ],
        }


def qc_mul(x: QCharacter, y: QCharacter) -> QCharacter:
    """qc(V ⊗ W) = qc(V) qc(W), truncated at the smaller depth.

    Raises:
        ValueError: If the Cartan types differ.
    """
    if x.cartan != y.cartan:
        raise ValueError(
            f"Cannot multiply {x.cartan.type_label} and {y.cartan.type_label} q-characters"
        )
    depth = min(x.depth, y.depth)
    terms: Dict[AMonomial, int] = {}
    for m1, n1 in x.terms.items():
        for m2, n2 in y.terms.items():
            if len(m1) + len(m2) > depth:
                continue
            key = _merge(m1, m2)
            terms[key] = terms.get(key, 0) + n1 * n2
    return QCharacter(x.cartan, x.top * y.top, terms, depth)


def qc_product(factors: Sequence[QCharacter], depth: Optional[int] = None) -> QCharacter:
    """Product of a non-empty list of q-characters."""
    if not factors:
        raise ValueError("qc_product needs at least one factor")
    result = factors[0]
    for factor in factors[1:]:
        result = qc_mul(result, factor)
    return result if depth is None else result.truncate(depth)


def _sl2() -> CartanData:
    return build_cartan("A1")


def _chain(start: Fraction, length: Optional[int], depth: int) -> Dict[AMonomial, int]:
    """1 + A_b^{−1} + A_b^{−1}A_{b−1}^{−1} + ⋯ with at most ``length`` factors."""
    limit = depth if length is None else min(depth, length)
    terms: Dict[AMonomial, int] = {(): 1}
    monomial: AMonomial = ()
    for k in range(limit):
        monomial = _merge(monomial, ((1, start - k),))
        terms[monomial] = 1
    return terms


def _string_length(a: Fraction, b: Fraction) -> Optional[int]:
    gap = b - a
    return int(gap) if gap.denominator == 1 and gap >= 0 else None


def _two_dimensional(cd: CartanData, i: int, a: Fraction, depth: int) -> QCharacter:
    top = generators(cd, "Psi", i, a - cd.di(i)) / generators(cd, "Psi", i, a)
    for j in cd.nodes:
        if j != i and cd.cij(i, j) < 0:
            top = top * generators(cd, "Psi", j, a - cd.dij(i, j))
    return QCharacter(cd, top, {(): 1, ((i, a),): 1}, depth)


def qc_closed_form(
    family: str,
    params: Sequence[Number],
    depth: int,
    cartan: Optional[CartanData] = None,
) -> QCharacter:
    """q-character of one of the explicit families.

    ``N`` accepts (a) for sl₂ or (i, a) together with a Cartan type; the
    other families are sl₂ modules: ``FrakL(a, b)``, ``L(a, b)`` (alias
    ``Lba``), ``Lplus(a)``, ``Lminus(b)`` and ``KR(k, a)`` = L(a − k, a).

    Raises:
        RealizationError: For an unknown family or invalid parameters.
    """
    values = tuple(Fraction(p) for p in params)
    if family == "N":
        cd = cartan or _sl2()
        if len(values) == 1:
            i, a = 1, values[0]
        elif len(values) == 2 and values[0].denominator == 1:
            i, a = int(values[0]), values[1]
        else:
            raise RealizationError(f"N takes (a) or (i, a), got {params}")
        if i not in cd.nodes:
            raise RealizationError(f"Node {i} is not in {cd.type_label}")
        return _two_dimensional(cd, i, a, depth)

    if cartan is not None and cartan.rank != 1:
        raise RealizationError(f"{family} has a closed form for sl₂ only")
    cd = _sl2()
    expected = {"FrakL": 2, "L": 2, "Lba": 2, "Lplus": 1, "Lminus": 1, "KR": 2}
    if family not in expected:
        raise RealizationError(f"No closed-form q-character for family {family!r}")
    if len(values) != expected[family]:
        raise RealizationError(
            f"{family} takes {expected[family]} parameter(s), got {len(values)}"
        )

    if family == "Lplus":
        return QCharacter(cd, LWeight.from_sl2(LinRat.linear(values[0])), {(): 1}, depth)
    if family == "Lminus":
        b = values[0]
        top = LWeight.from_sl2(LinRat.linear(b).inverse())
        return QCharacter(cd, top, _chain(b, None, depth), depth)
    if family == "KR":
        k, a = values
        if k.denominator != 1 or k < 0:
            raise RealizationError(f"KR length must be a nonnegative integer, got {k}")
        values = (a - k, a)
        family = "L"
    a, b = values
    top = LWeight.from_sl2(LinRat.from_multisets(zeros=[a], poles=[b]))
    length = None if family == "FrakL" else _string_length(a, b)
    return QCharacter(cd, top, _chain(b, length, depth), depth)


def qc_simple_sl2(e: LinRat, depth: int) -> QCharacter:
    """qc(L(e)) for sl₂ as the product over the standard factorization of e."""
    factors = [
        qc_closed_form(family, params, depth)
        for family, params in factor_families(standard_factorize(e))
    ]
    if not factors:
        return QCharacter.one(_sl2(), depth)
    return qc_product(factors)


def _weight_of(cd: CartanData, top_weight: Weight, monomial: AMonomial) -> Weight:
    result = top_weight
    for i, _ in monomial:
        result = result - Weight(tuple(Fraction(x) for x in root_weight(cd, i)))
    return result


def character(x: QCharacter) -> Character:
    """χ(V): apply the weight map to every term."""
    top_weight, _ = weight_and_coweight(x.top)
    terms: Dict[Weight, int] = {}
    for monomial, n in x.terms.items():
        w = _weight_of(x.cartan, top_weight, monomial)
        terms[w] = terms.get(w, 0) + n
    return Character(x.cartan, terms, x.depth)


def _root_vectors_to_character(
    cd: CartanData, top_weight: Weight, counts: Dict[Tuple[int, ...], int], depth: int
) -> Character:
    terms: Dict[Weight, int] = {}
    for vector, n in counts.items():
        shift = Weight(tuple(Fraction(x) for x in root_vector_weight(cd, vector)))
        w = top_weight - shift
        terms[w] = terms.get(w, 0) + n
    return Character(cd, terms, depth)


def prefundamental_character(cd: CartanData, i: int, a: Number, depth: int) -> Character:
    """e^{a d_i^{−1} ϖ_i} ∏_γ (1 − e^{−γ})^{−⟨ϖ_i^∨, γ⟩} expanded to root height ``depth``."""
    top_weight, _ = weight_and_coweight(generators(cd, "Psi", i, a).inverse())
    counts: Dict[Tuple[int, ...], int] = {tuple(0 for _ in cd.nodes): 1}
    for gamma in cd.pos_roots:
        height = sum(gamma)
        for _ in range(gamma[i - 1]):
            expanded: Dict[Tuple[int, ...], int] = {}
            for vector, n in counts.items():
                k = 0
                while sum(vector) + k * height <= depth:
                    key = tuple(v + k * g for v, g in zip(vector, gamma))
                    expanded[key] = expanded.get(key, 0) + n
                    k += 1
            counts = expanded
    return _root_vectors_to_character(cd, top_weight, counts, depth)


def classical_limit_character(cd: CartanData, i: int, a: Number, depth: int) -> Character:
    """Character of Sym(V) for V spanned by x⁻_γ ⊗ t^k, k < ⟨ϖ_i^∨, γ⟩.

    Counts PBW monomials in these vectors directly.
    """
    top_weight, _ = weight_and_coweight(generators(cd, "Psi", i, a).inverse())
    letters = [gamma for gamma in cd.pos_roots for _ in range(gamma[i - 1])]
    counts: Dict[Tuple[int, ...], int] = {}

    def extend(start: int, vector: Tuple[int, ...]) -> None:
        counts[vector] = counts.get(vector, 0) + 1
        for index in range(start, len(letters)):
            gamma = letters[index]
            if sum(vector) + sum(gamma) <= depth:
                extend(index, tuple(v + g for v, g in zip(vector, gamma)))

    extend(0, tuple(0 for _ in cd.nodes))
    return _root_vectors_to_character(cd, top_weight, counts, depth)


def product_character_check(cd: CartanData, i: int, a: Number, depth: int) -> bool:
    """Compare the product formula for χ(L⁻_{i,a}) with independent counts.

    The product expansion is compared with the PBW count of the classical
    limit and, for sl₂, with the character of the closed-form q-character.
    """
    expected = prefundamental_character(cd, i, a, depth)
    agrees = expected.terms == classical_limit_character(cd, i, a, depth).terms
    if cd.rank == 1:
        agrees = agrees and expected.terms == character(
            qc_closed_form("Lminus", (a,), depth)
        ).terms
    logger.debug(f"Product character check for L-({i},{a}) in {cd.type_label}: {agrees}")
    return agrees


@dataclass
class JordanHolderResult:
    """Composition factors [L(e)] with multiplicities, found within a depth window."""

    classes: Dict[LinRat, int]
    depth: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "depth": self.depth,
            "classes": [
                {"lweight": str(e), "mult": n}
                for e, n in sorted(self.classes.items(), key=lambda kv: str(kv[0]))
            ],
        }

    def to_frame(self) -> pd.DataFrame:
        rows = [{"class": f"L({e})", "mult": n} for e, n in self.classes.items()]
        return pd.DataFrame(rows, columns=["class", "mult"])


def jordan_holder_sl2(x: QCharacter, depth: Optional[int] = None) -> JordanHolderResult:
    """Peel irreducible q-characters off an sl₂ q-character.

    A term of minimal monomial size has maximal weight, so it is the top of
    a composition factor; its irreducible q-character is subtracted and the
    loop repeats until nothing is left.

    Raises:
        ValueError: If a multiplicity turns negative (not a genuine q-character).
        TruncationInconclusiveError: If a factor's top sits on the depth boundary.
    """
    if x.cartan.rank != 1:
        raise ValueError("Jordan–Hölder peeling is implemented for sl₂ only")
    depth = x.depth if depth is None else min(depth, x.depth)
    remaining = {m: n for m, n in x.terms.items() if len(m) <= depth}
    classes: Dict[LinRat, int] = {}
    while remaining:
        monomial = min(remaining, key=lambda m: (len(m), m))
        multiplicity = remaining[monomial]
        if multiplicity < 0:
            raise ValueError(
                f"Negative multiplicity {multiplicity} at {_monomial_text(monomial)}"
            )
        if len(monomial) == depth and depth > 0:
            raise TruncationInconclusiveError(
                f"A composition factor starts at depth {depth}; increase the depth"
            )
        e = x.lweight(monomial).component(1)
        classes[e] = classes.get(e, 0) + multiplicity
        simple = qc_simple_sl2(e, depth - len(monomial))
        for term, n in simple.terms.items():
            key = _merge(monomial, term)
            value = remaining.get(key, 0) - multiplicity * n
            if value == 0:
                remaining.pop(key, None)
            else:
                remaining[key] = value
        logger.debug(f"Peeled L({e}) with multiplicity {multiplicity}")
    return JordanHolderResult(classes, depth)


def kr_limit_agrees(k: int, a: Number, depth: Optional[int] = None) -> bool:
    """nqc(W_{k,a}) and nqc(L⁻_a) agree on monomials of size < k."""
    depth = k if depth is None else depth
    kr = qc_closed_form("KR", (k, a), depth).normalized()
    limit = qc_closed_form("Lminus", (a,), depth).normalized()
    window = min(k, depth + 1)
    restrict = lambda q: {m: n for m, n in q.terms.items() if len(m) < window}  # noqa: E731
    return restrict(kr) == restrict(limit)


def is_irreducible_onedim_tensor(s: LWeight, qc_w: QCharacter) -> bool:
    """L(s) ⊗ W is irreducible iff A_{i,a}^{−1} f ∉ lwt(W) for every root Ψ_{i,a} of s.

    Only ℓ-weights f strictly inside the depth window are tested.

    Raises:
        ValueError: If s has poles.
    """
    if not all(c.is_polynomial for c in s.components):
        raise ValueError(f"{s} is not a product of prefundamental weights")
    roots: List[AKey] = [
        (i, a) for i, c in zip(s.cartan.nodes, s.components) for a in set(c.zeros())
    ]
    present = {m for m, n in qc_w.terms.items() if n > 0}
    for monomial in present:
        if len(monomial) >= qc_w.depth:
            continue
        for key in roots:
            if _merge(monomial, (key,)) in present:
                logger.debug(f"A{key}^-1 links {_monomial_text(monomial)} inside lwt(W)")
                return False
    return True


def qc_from_specs(specs: Iterable[Tuple[str, Sequence[Number]]], depth: int) -> QCharacter:
    """Product of closed-form sl₂ q-characters named by (family, params) pairs."""
    factors = [qc_closed_form(name, params, depth) for name, params in specs]
    if not factors:
        return QCharacter.one(_sl2(), depth)
    return qc_product(factors)
