"""Tests for standard factorization, q-characters and Jordan–Hölder peeling."""

import random
from fractions import Fraction

import pytest

from src.shifted_yangian.algebra.cartan import build_cartan
from src.shifted_yangian.algebra.lweight import LWeight, Weight, generators
from src.shifted_yangian.algebra.parsing import parse_linrat
from src.shifted_yangian.algebra.ratfun import LinRat
from src.shifted_yangian.characters.factorize import (
    StandardFactorization,
    delta_contains,
    factor_families,
    is_irreducible_tensor,
    is_standard,
    reassemble,
    standard_factorize,
)
from src.shifted_yangian.characters.qchar import (
    QCharacter,
    character,
    is_irreducible_onedim_tensor,
    jordan_holder_sl2,
    kr_limit_agrees,
    product_character_check,
    qc_closed_form,
    qc_from_specs,
    qc_mul,
    qc_simple_sl2,
)
from src.shifted_yangian.core.exceptions import (
    RealizationError,
    TruncationInconclusiveError,
)

F = Fraction


# Standard factorization


def test_factorize_without_kr_pairs():
    """Test e = (u-9)(u-3)/(u(u-2)) splits into prefundamental factors only."""
    result = standard_factorize(parse_linrat("(u-9)(u-3)/(u*(u-2))"))
    assert result.positive == (3, 9)
    assert result.negative == (0, 2)
    assert result.kr_pairs == ()
    assert is_standard(result)


def test_factorize_with_kr_pair():
    """Test that (u-5)/(u-6) is peeled off as a KR pair."""
    e = parse_linrat("(u-3)(u-9)(u-5)/((u-6)*u*(u-2))")
    result = standard_factorize(e)
    assert result.kr_pairs == ((5, 6),)
    assert result.positive == (3, 9)
    assert result.negative == (0, 2)
    assert result.to_dict()["kr_pairs"] == [[5, 6]]
    assert reassemble(result) == e
    assert factor_families(result)[2] == ("L", (5, 6))


def test_factorize_nested_strings():
    """Test the smallest gap is paired first for nested strings."""
    e = LinRat.from_multisets(zeros=[0, 1], poles=[2, 3])
    assert standard_factorize(e).kr_pairs == ((0, 3), (1, 2))


def test_is_standard_rejects_overlapping_strings():
    """Test the pairwise conditions on overlapping KR strings."""
    assert not is_standard(StandardFactorization(kr_pairs=((F(0), F(2)), (F(1), F(3)))))
    assert not is_standard(StandardFactorization(positive=(F(1),), kr_pairs=((F(0), F(3)),)))
    assert not is_standard(StandardFactorization(positive=(F(0),), negative=(F(2),)))
    assert is_standard(StandardFactorization(positive=(F(2),), negative=(F(1, 2),)))


def _random_standard(rng: random.Random) -> StandardFactorization:
    def root() -> Fraction:
        return F(rng.randint(-12, 12), rng.choice([1, 1, 2, 3]))

    positive = tuple(sorted(root() for _ in range(rng.randint(0, 3))))
    pairs = []
    for _ in range(rng.randint(0, 3)):
        y = root()
        pairs.append((y, y + rng.randint(1, 4)))
    negative = tuple(sorted(root() for _ in range(rng.randint(0, 3))))
    return StandardFactorization(positive, tuple(sorted(pairs)), negative)


def test_factorization_round_trips():
    """Test that 200 random standard factorizations are recovered exactly."""
    rng = random.Random(2024)
    checked = 0
    for _ in range(20_000):
        data = _random_standard(rng)
        if not is_standard(data):
            continue
        assert standard_factorize(reassemble(data)) == data
        checked += 1
        if checked == 200:
            break
    assert checked == 200


def test_delta_sets_and_tarasov_criterion():
    """Test Δ membership and irreducibility of two-factor tensor products."""
    assert delta_contains(0, 3, 2)
    assert not delta_contains(0, 3, 3)
    assert delta_contains(0, F(1, 2), 5)
    assert not delta_contains(0, 3, F(1, 2))

    assert not is_irreducible_tensor([(0, 2), (1, 3)])
    assert is_irreducible_tensor([(0, 3), (1, 2)])
    assert is_irreducible_tensor([(9, 0), (3, 2)])


# q-characters


def test_closed_form_families():
    """Test the string shapes of the explicit sl2 families."""
    lminus = qc_closed_form("Lminus", (0,), 4)
    assert len(lminus.terms) == 5
    assert lminus.terms[((1, F(-1)), (1, F(0)))] == 1
    assert lminus.top == LWeight.from_sl2(parse_linrat("1/u"))

    kr = qc_closed_form("KR", (2, 0), 6)
    assert kr.top == LWeight.from_sl2(parse_linrat("(u+2)/u"))
    assert len(kr.terms) == 3

    assert len(qc_closed_form("Lplus", (5,), 6).terms) == 1
    assert len(qc_closed_form("FrakL", (-2, 0), 6).terms) == 7
    assert len(qc_closed_form("N", (3,), 6).terms) == 2

    with pytest.raises(RealizationError):
        qc_closed_form("Nope", (0,), 4)
    with pytest.raises(RealizationError):
        qc_closed_form("KR", (F(1, 2), 0), 4)


def test_two_dimensional_in_b2():
    """Test the fundamental q-character N_{1,a} for B2."""
    b2 = build_cartan("B2")
    qc = qc_closed_form("N", (1, 0), 4, cartan=b2)
    assert qc.top.component(1) == parse_linrat("(u+2)/u")
    assert qc.top.component(2) == parse_linrat("(u-1)")
    assert qc.lweight(((1, F(0)),)) == qc.top / generators(b2, "A", 1, 0)


def test_simple_qcharacter_is_product_over_factorization():
    """Test qc(L(e)) for an irreducible tensor product of families."""
    e = parse_linrat("(u-9)(u-3)/(u*(u-2))")
    simple = qc_simple_sl2(e, 5)
    product = qc_from_specs([("Lba", (9, 0)), ("Lba", (3, 2))], 5)
    assert simple.terms == product.terms
    assert simple.top == product.top


def test_qcharacter_multiplication():
    """Test truncation and type checks of q-character products."""
    x = qc_closed_form("Lminus", (0,), 3)
    y = qc_closed_form("Lminus", (5,), 6)
    product = x * y
    assert product.depth == 3
    assert all(len(m) <= 3 for m in product.terms)
    assert product.terms[((1, F(0)), (1, F(5)))] == 1

    b2 = build_cartan("B2")
    with pytest.raises(ValueError):
        qc_mul(x, QCharacter.one(b2, 3))


def test_character_weights():
    """Test the weight map on qc(L-_0)."""
    chi = character(qc_closed_form("Lminus", (0,), 3))
    assert chi.terms == {Weight((F(-2 * k),)): 1 for k in range(4)}
    assert chi.total() == 4


@pytest.mark.parametrize("label, node, depth", [("A1", 1, 6), ("B2", 1, 5), ("G2", 2, 4)])
def test_product_character_formula(label, node, depth):
    """Test the product formula for prefundamental characters."""
    assert product_character_check(build_cartan(label), node, 0, depth)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
def test_kr_modules_converge_to_prefundamental(k):
    """Test nqc(W_{k,a}) agrees with nqc(L-_a) below size k."""
    assert kr_limit_agrees(k, F(1, 3), depth=6)


def test_qcharacter_frame():
    """Test the tabular form of a q-character."""
    frame = qc_closed_form("KR", (1, 0), 4).to_frame()
    assert list(frame.columns) == ["size", "monomial", "lweight", "mult"]
    assert list(frame["size"]) == [0, 1]
    assert frame["monomial"].iloc[1] == "A(1,0)^-1"


# Jordan–Hölder


def test_jordan_holder_irreducible_tensor():
    """Test that L(9,0) ⊗ L(3,2) has a single composition factor."""
    qc = qc_from_specs([("Lba", (9, 0)), ("Lba", (3, 2))], 10)
    result = jordan_holder_sl2(qc)
    assert result.classes == {parse_linrat("(u-9)(u-3)/(u*(u-2))"): 1}
    assert result.to_dict()["classes"][0]["mult"] == 1


def test_jordan_holder_prefundamental_pair():
    """Test that L+_b ⊗ L-_b has two composition factors."""
    qc = qc_from_specs([("Lplus", (1,)), ("Lminus", (1,))], 6)
    result = jordan_holder_sl2(qc)
    assert result.classes == {LinRat.one(): 1, parse_linrat("(u-2)/u"): 1}
    assert len(result.to_frame()) == 2


def test_jordan_holder_depth_boundary():
    """Test that a factor starting at the depth boundary is inconclusive."""
    qc = qc_from_specs([("Lplus", (0,)), ("Lminus", (0,))], 1)
    with pytest.raises(TruncationInconclusiveError):
        jordan_holder_sl2(qc)


def test_jordan_holder_rejects_negative_multiplicity():
    """Test that a difference of q-characters is not peeled."""
    a1 = build_cartan("A1")
    bogus = QCharacter(a1, LWeight.one(a1), {(): 1, ((1, F(0)),): -1}, 4)
    with pytest.raises(ValueError):
        jordan_holder_sl2(bogus)


def test_onedim_tensor_irreducibility():
    """Test L(s) ⊗ L-_b reducibility against the roots of s."""
    a1 = build_cartan("A1")
    w = qc_closed_form("Lminus", (0,), 6)
    assert not is_irreducible_onedim_tensor(generators(a1, "Psi", 1, 0), w)
    assert is_irreducible_onedim_tensor(generators(a1, "Psi", 1, F(1, 2)), w)
    with pytest.raises(ValueError):
        is_irreducible_onedim_tensor(generators(a1, "Psi", 1, 0).inverse(), w)
