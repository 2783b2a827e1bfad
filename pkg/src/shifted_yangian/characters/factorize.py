"""Standard factorization of sl₂ ℓ-weights and the Tarasov irreducibility test.

Every monic rational function e factorizes uniquely as

    e = ∏_r (u − x_r) · ∏_s (u − y_s)/(u − z_s) · ∏_t 1/(u − w_t)

subject to the pairwise conditions checked by ``is_standard``; the factors
name the tensor product L⁺_{x_r} ⊗ L_{z_s}^{y_s} ⊗ L⁻_{w_t} ≅ L(e).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from ..algebra.ratfun import LinRat

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]


def _natural(value: Fraction) -> bool:
    return value.denominator == 1 and value >= 0


@dataclass(frozen=True)
class DeltaSet:
    """Δ_b^a: {0, ..., b−a−1} when b − a ∈ ℕ, otherwise all of ℕ."""

    size: Optional[int]

    @classmethod
    def of(cls, a: Number, b: Number) -> "DeltaSet":
        gap = Fraction(b) - Fraction(a)
        return cls(int(gap) if _natural(gap) else None)

    def __contains__(self, k: object) -> bool:
        k = Fraction(k)  # type: ignore[arg-type]
        if not _natural(k):
            return False
        return self.size is None or k < self.size

    def intersect(self, other: "DeltaSet") -> "DeltaSet":
        if self.size is None:
            return other
        if other.size is None:
            return self
        return DeltaSet(min(self.size, other.size))


def delta_contains(a: Number, b: Number, k: Number) -> bool:
    """k ∈ Δ_b^a."""
    return k in DeltaSet.of(a, b)


@dataclass(frozen=True)
class StandardFactorization:
    """Positive roots x, KR pairs (y, z) with z − y ∈ ℤ_{>0}, negative roots w."""

    positive: Tuple[Fraction, ...] = ()
    kr_pairs: Tuple[Tuple[Fraction, Fraction], ...] = ()
    negative: Tuple[Fraction, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "positive": list(self.positive),
            "kr_pairs": [list(pair) for pair in self.kr_pairs],
            "negative": list(self.negative),
        }

    def without(self, part: str, index: int) -> "StandardFactorization":
        """The factorization with one factor removed."""
        values = list(getattr(self, part))
        del values[index]
        return StandardFactorization(
            **{**self.__dict__, part: tuple(values)}  # type: ignore[arg-type]
        )


def reassemble(factorization: StandardFactorization) -> LinRat:
    """The ℓ-weight described by a factorization."""
    zeros = list(factorization.positive) + [y for y, _ in factorization.kr_pairs]
    poles = [z for _, z in factorization.kr_pairs] + list(factorization.negative)
    return LinRat.from_multisets(zeros=zeros, poles=poles)


def standard_factorize(e: LinRat) -> StandardFactorization:
    """The standard factorization of an sl₂ ℓ-weight.

    KR pairs are peeled off one at a time: among zeros y and poles z with
    z − y a positive integer, take the smallest gap, then the smallest y.
    Remaining zeros are positive factors and remaining poles negative ones.
    """
    zeros = e.zeros()
    poles = e.poles()
    pairs: List[Tuple[Fraction, Fraction]] = []
    while True:
        best: Optional[Tuple[Fraction, Fraction, int, int]] = None
        for i, y in enumerate(zeros):
            for j, z in enumerate(poles):
                gap = z - y
                if gap > 0 and gap.denominator == 1:
                    if best is None or (gap, y) < (best[1] - best[0], best[0]):
                        best = (y, z, i, j)
        if best is None:
            break
        y, z, i, j = best
        pairs.append((y, z))
        del zeros[i]
        del poles[j]
    factorization = StandardFactorization(
        positive=tuple(sorted(zeros)),
        kr_pairs=tuple(sorted(pairs)),
        negative=tuple(sorted(poles)),
    )
    logger.debug(
        f"Factorized {e}: {len(factorization.positive)} positive, "
        f"{len(pairs)} KR, {len(factorization.negative)} negative"
    )
    return factorization


def is_standard(factorization: StandardFactorization) -> bool:
    """Check every pairwise condition of a standard factorization."""
    pairs = factorization.kr_pairs
    for y, z in pairs:
        gap = z - y
        if not (gap > 0 and gap.denominator == 1):
            return False
    for s, (ys, zs) in enumerate(pairs):
        delta_s = DeltaSet.of(ys, zs)
        for l, (yl, zl) in enumerate(pairs):
            if s != l and (zs - yl) in delta_s.intersect(DeltaSet.of(yl, zl)):
                return False
        if any((zs - x) in delta_s for x in factorization.positive):
            return False
        if any((w - ys) in delta_s for w in factorization.negative):
            return False
    for w in factorization.negative:
        if any(_natural(w - x) for x in factorization.positive):
            return False
    return True


def factor_families(factorization: StandardFactorization) -> List[Tuple[str, Tuple[Fraction, ...]]]:
    """Tensor factors as (family, parameters): Lplus(x), L(y, z), Lminus(w)."""
    families: List[Tuple[str, Tuple[Fraction, ...]]] = []
    families.extend(("Lplus", (x,)) for x in factorization.positive)
    families.extend(("L", (y, z)) for y, z in factorization.kr_pairs)
    families.extend(("Lminus", (w,)) for w in factorization.negative)
    return families


def is_irreducible_tensor(factors: Sequence[Tuple[Number, Number]]) -> bool:
    """Tarasov's criterion for L_{b_1}^{a_1} ⊗ ⋯ ⊗ L_{b_n}^{a_n}, factors given as (a, b).

    Irreducible iff b_i − a_j ∉ Δ_{b_i}^{a_i} ∩ Δ_{b_j}^{a_j} for all i, j.
    """
    deltas = [DeltaSet.of(a, b) for a, b in factors]
    for i, (_, b_i) in enumerate(factors):
        for j, (a_j, _) in enumerate(factors):
            if (Fraction(b_i) - Fraction(a_j)) in deltas[i].intersect(deltas[j]):
                return False
    return True
