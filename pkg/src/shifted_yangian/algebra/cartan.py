"""Cartan matrices and root data for the finite types.

Nodes are numbered 1..r throughout the package, matching the usual Dynkin
labelling (Bourbaki, except that G2 puts the long root first as in B2).
Positive roots are generated once per type by closing the simple roots under
simple reflections and are cached.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..utils.linalg import solve

logger = logging.getLogger(__name__)

Root = Tuple[int, ...]

EXPECTED_POSITIVE_ROOTS = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "E": lambda n: {6: 36, 7: 63, 8: 120}[n],
    "F": lambda n: 24,
    "G": lambda n: 6,
}


@dataclass(frozen=True, eq=False)
class CartanData:
    """Immutable Cartan data of a finite type.

    ``c[i-1][j-1]`` is c_ij = 2(α_i, α_j)/(α_i, α_i); ``d[i-1]`` is d_i with
    (α_i, α_i) = 2 d_i; positive roots are coefficient vectors in the simple
    roots.
    """

    type_label: str
    c: np.ndarray
    d: Tuple[int, ...]
    pos_roots: Tuple[Root, ...]
    dual_coxeter: int
    bar: Tuple[int, ...] = field(repr=False)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CartanData) and other.type_label == self.type_label

    def __hash__(self) -> int:
        return hash(self.type_label)

    @property
    def rank(self) -> int:
        return len(self.d)

    @property
    def nodes(self) -> range:
        return range(1, self.rank + 1)

    @property
    def kappa(self) -> Fraction:
        """κ = ½ · max(d_i) · h^∨."""
        return Fraction(max(self.d) * self.dual_coxeter, 2)

    def cij(self, i: int, j: int) -> int:
        return int(self.c[i - 1, j - 1])

    def di(self, i: int) -> int:
        return self.d[i - 1]

    def dij(self, i: int, j: int) -> Fraction:
        """d_ij = (α_i, α_j)/2 = d_i c_ij / 2."""
        return Fraction(self.d[i - 1] * int(self.c[i - 1, j - 1]), 2)

    def neighbours(self, i: int) -> List[int]:
        """Nodes j with c_ji < 0."""
        return [j for j in self.nodes if j != i and self.cij(j, i) < 0]

    def bar_node(self, i: int) -> int:
        return self.bar[i - 1]

    def highest_root(self) -> Root:
        return self.pos_roots[-1]


def _dynkin(kind: str, n: int) -> Tuple[List[int], Dict[Tuple[int, int], int]]:
    """Root lengths d_i and off-diagonal (α_i, α_j) for a Dynkin type."""
    if kind == "A" and n >= 1:
        return [1] * n, {(i, i + 1): -1 for i in range(1, n)}
    if kind == "B" and n >= 2:
        return [2] * (n - 1) + [1], {(i, i + 1): -2 for i in range(1, n)}
    if kind == "C" and n >= 2:
        edges = {(i, i + 1): -1 for i in range(1, n - 1)}
        edges[(n - 1, n)] = -2
        return [1] * (n - 1) + [2], edges
    if kind == "D" and n >= 4:
        edges = {(i, i + 1): -1 for i in range(1, n - 1)}
        edges[(n - 2, n)] = -1
        return [1] * n, edges
    if kind == "E" and n in (6, 7, 8):
        chain = [1, 3, 4, 5, 6, 7, 8][: n - 1]
        edges = {(a, b): -1 for a, b in zip(chain, chain[1:])}
        edges[(2, 4)] = -1
        return [1] * n, edges
    if kind == "F" and n == 4:
        return [2, 2, 1, 1], {(1, 2): -2, (2, 3): -2, (3, 4): -1}
    if kind == "G" and n == 2:
        return [3, 1], {(1, 2): -3}
    raise ValueError(f"Unknown finite type {kind}{n}")


def _bar_involution(kind: str, n: int) -> Tuple[int, ...]:
    nodes = list(range(1, n + 1))
    if kind == "A":
        return tuple(n + 1 - i for i in nodes)
    if kind == "D" and n % 2 == 1:
        return tuple(nodes[: n - 2] + [n, n - 1])
    if kind == "E" and n == 6:
        return (6, 2, 5, 4, 3, 1)
    return tuple(nodes)


def _positive_roots(c: np.ndarray) -> Tuple[Root, ...]:
    rank = c.shape[0]
    simple = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            vector = np.array(beta, dtype=np.int64)
            pairings = c @ vector
            for i in range(rank):
                image = vector.copy()
                image[i] -= pairings[i]
                key = tuple(int(x) for x in image)
                if key not in seen:
                    seen.add(key)
                    nxt.append(key)
        frontier = nxt
    positive = [root for root in seen if all(x >= 0 for x in root)]
    return tuple(sorted(positive, key=lambda root: (sum(root), root)))


_LABEL = re.compile(r"^([A-G])(\d+)$")


@lru_cache(maxsize=None)
def build_cartan(type_label: str) -> CartanData:
    """Build the Cartan data of a finite type such as ``"A1"``, ``"B2"`` or ``"G2"``.

    Raises:
        ValueError: For an unknown type label.
    """
    match = _LABEL.match(type_label.strip().upper())
    if not match:
        raise ValueError(f"Unknown type label {type_label!r}")
    kind, n = match.group(1), int(match.group(2))
    lengths, edges = _dynkin(kind, n)

    form = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        form[i, i] = 2 * lengths[i]
    for (i, j), value in edges.items():
        form[i - 1, j - 1] = form[j - 1, i - 1] = value
    c = np.array(
        [[form[i, j] // lengths[i] for j in range(n)] for i in range(n)], dtype=np.int64
    )
    c.setflags(write=False)

    common = 0
    for length in lengths:
        common = gcd(common, length)
    d = tuple(length // common for length in lengths)

    roots = _positive_roots(c)
    expected = EXPECTED_POSITIVE_ROOTS[kind](n)
    if len(roots) != expected:
        raise RuntimeError(f"{type_label}: found {len(roots)} positive roots, not {expected}")

    theta = np.array(roots[-1], dtype=np.int64)
    theta_half_length = Fraction(int(theta @ form @ theta), 2)
    dual_coxeter = 1 + sum(
        Fraction(int(theta[i]) * lengths[i]) / theta_half_length for i in range(n)
    )
    if dual_coxeter.denominator != 1:
        raise RuntimeError(f"{type_label}: non-integral dual Coxeter number")

    data = CartanData(
        type_label=f"{kind}{n}",
        c=c,
        d=d,
        pos_roots=roots,
        dual_coxeter=int(dual_coxeter),
        bar=_bar_involution(kind, n),
    )
    logger.debug(
        f"Built {data.type_label}: {len(roots)} positive roots, h^∨={data.dual_coxeter}"
    )
    return data


def coweight_pairing(cd: CartanData, i: int, gamma: Sequence[int]) -> int:
    """⟨ϖ_i^∨, γ⟩, the coefficient of α_i in γ.

    Raises:
        ValueError: If γ is not a positive root.
    """
    gamma = tuple(int(x) for x in gamma)
    if gamma not in cd.pos_roots:
        raise ValueError(f"{gamma} is not a positive root of {cd.type_label}")
    return gamma[i - 1]


def pairing_sum(cd: CartanData, i: int) -> int:
    """Σ over positive roots γ of ⟨ϖ_i^∨, γ⟩."""
    return sum(root[i - 1] for root in cd.pos_roots)


def root_weight(cd: CartanData, i: int) -> Tuple[int, ...]:
    """α_i in fundamental-weight coordinates: α_i = Σ_j c_ji ϖ_j."""
    return tuple(int(cd.c[j, i - 1]) for j in range(cd.rank))


def root_vector_weight(cd: CartanData, gamma: Sequence[int]) -> Tuple[int, ...]:
    """A root-lattice vector Σ b_i α_i in fundamental-weight coordinates."""
    return tuple(int(x) for x in cd.c @ np.array(gamma, dtype=np.int64))


def coroot_coordinates(cd: CartanData, coweight: Sequence[int]) -> Tuple[Fraction, ...]:
    """Coefficients m with Σ_i m_i α_i^∨ equal to the given coweight.

    The coweight is given in fundamental-coweight coordinates; α_i^∨ = Σ_j c_ij ϖ_j^∨.
    """
    transpose = [[Fraction(int(cd.c[i, j])) for i in range(cd.rank)] for j in range(cd.rank)]
    return tuple(solve(transpose, [Fraction(k) for k in coweight]))
