"""Tests for GKLO series, truncation checks and the s ↦ s̄ map."""

import random
from fractions import Fraction

import pytest

from src.shifted_yangian.algebra.cartan import build_cartan
from src.shifted_yangian.algebra.lweight import LWeight
from src.shifted_yangian.algebra.parsing import parse_linrat
from src.shifted_yangian.algebra.ratfun import LinRat
from src.shifted_yangian.core.exceptions import RealizationError
from src.shifted_yangian.intertwiners.truncation import (
    TruncatablePair,
    check_difference_equation,
    conjugation_check,
    denominator_membership,
    enumerate_truncation_candidates_sl2,
    fund_ratios,
    gklo_action,
    sbar_map,
    solve_shift_product,
    truncation_check,
)
from src.shifted_yangian.modules.families import negative_prefundamental
from src.shifted_yangian.modules.tensor import tensor_onedim
from src.shifted_yangian.modules.verma import make_weyl

F = Fraction


def _random_polynomial(rng: random.Random) -> LinRat:
    zeros = [F(rng.randint(-6, 6), rng.choice([1, 2])) for _ in range(rng.randint(0, 3))]
    return LinRat.from_multisets(zeros=zeros)


# s ↦ s̄


@pytest.mark.parametrize("label", ["A1", "B2", "G2"])
def test_sbar_is_spectral_shift_by_kappa(label):
    """Test s̄ = τ_κ(s) for random polynomial s of degree at most three."""
    cd = build_cartan(label)
    ratios = fund_ratios(label)
    rng = random.Random(5)
    for _ in range(5):
        s = LWeight.from_components(cd, {i: _random_polynomial(rng) for i in cd.nodes})
        sbar, g = sbar_map(cd, ratios, s)
        assert sbar == s.spectral_shift(cd.kappa)
        assert set(g) == set(cd.nodes)


def test_sbar_errors():
    """Test refusal of mismatched types and missing ratios."""
    b2 = build_cartan("B2")
    s = LWeight.from_components(b2, {1: LinRat.linear(0), 2: LinRat.one()})
    with pytest.raises(ValueError):
        sbar_map(build_cartan("A1"), fund_ratios("A1"), s)
    with pytest.raises(ValueError):
        sbar_map(b2, {1: fund_ratios("B2")[1]}, s)
    with pytest.raises(ValueError):
        fund_ratios("C3")


# truncatable pairs and candidates


def test_truncatable_pair():
    """Test m for (μ, r) and refusal of non-integral differences."""
    pair = TruncatablePair.sl2(-1, parse_linrat("(u-1)"))
    assert pair.m == (1,)
    assert pair.to_dict()["m"] == [1]
    with pytest.raises(ValueError):
        TruncatablePair.sl2(0, LinRat.linear(0))


def test_solve_shift_product():
    """Test g(u)g(u-1) = h for rational g and refusal when no g exists."""
    g = parse_linrat("(u-2)(u-3)/(u+1/2)")
    assert solve_shift_product(g * g.shift(1)) == g
    assert solve_shift_product(parse_linrat("u*(u-1)")) == LinRat.linear(0)
    with pytest.raises(RealizationError):
        solve_shift_product(LinRat.linear(0))


@pytest.mark.parametrize("b", [0, 3, F(-1, 2)])
def test_candidates_for_negative_prefundamental(b):
    """Test that g = u - b is the candidate with e = 1/(u - b)."""
    pair = TruncatablePair.sl2(-1, LinRat.linear(b + 1))
    candidates = enumerate_truncation_candidates_sl2(pair)
    assert [c.g for c in candidates] == [LinRat.linear(b)]
    assert candidates[0].e == LinRat.linear(b).inverse()


def test_candidates_with_m_zero():
    """Test that m = 0 leaves the single candidate g = 1."""
    pair = TruncatablePair.sl2(1, LinRat.linear(3))
    (candidate,) = enumerate_truncation_candidates_sl2(pair)
    assert candidate.g == LinRat.one()
    assert candidate.e == LinRat.linear(3)
    assert candidate.to_dict() == {"g": "1", "e": "(u-3)"}


def test_denominator_membership():
    """Test the A_a^{-k} e ℓ-weights forced by poles of e."""
    assert denominator_membership(parse_linrat("(u-9)(u-3)/(u*(u-2))"), 4).passed
    report = denominator_membership(parse_linrat("1/u^2"), 4)
    assert report.passed
    assert report.checks == 2


# GKLO series


def test_gklo_on_negative_prefundamental():
    """Test A(u) = u on ω of L-_0 and agreement of both routes."""
    W = negative_prefundamental(0, 6)
    pair = TruncatablePair.sl2(-1, LinRat.linear(1))
    action = gklo_action(pair, W, order=8)
    assert action.m == 1
    assert action.eigenvalue_on_top() == LinRat.linear(0)
    assert all(action.principal_part_vanishes(level) for level in action.series)
    assert action.check_routes().passed
    assert action.to_dict()["principal_part_vanishes"]["0"] is True

    with pytest.raises(ValueError):
        gklo_action(TruncatablePair.sl2(1, LinRat.linear(0) ** 3), W)


@pytest.mark.parametrize("b", [0, F(5, 2)])
def test_truncation_on_negative_prefundamental(b):
    """Test ⟨A(u)⟩₊ = 0 on L-_b together with A(u) = t(u)."""
    W = negative_prefundamental(b, 10)
    report = truncation_check(LinRat.linear(b), W, order=20)
    assert report.passed, report.violations[:3]
    assert report.details["m"] == 1


def test_truncation_on_weyl_module():
    """Test ⟨A(u)⟩₊ = 0 on W(1, s) for deg s = 2."""
    s = parse_linrat("(u-1)(u-4)")
    W = make_weyl(LinRat.one(), s, 6)
    report = truncation_check(s, W, order=12)
    assert report.passed, report.violations[:3]
    assert report.details["m"] == 2


def test_truncation_with_twist():
    """Test the twisted pair on L(u-2) ⊗ L-_0."""
    W = tensor_onedim(LinRat.linear(2), negative_prefundamental(0, 6))
    report = truncation_check(LinRat.linear(0), W, order=12, r=LinRat.linear(2))
    assert report.passed, report.violations[:3]

    with pytest.raises(ValueError):
        truncation_check(LinRat.linear(1), W)


def test_difference_equation():
    """Test R(u + 1) = R(u) Ā(u) on L-_0."""
    W = negative_prefundamental(0, 10)
    pair = TruncatablePair.sl2(-1, LinRat.linear(1))
    report = check_difference_equation(pair, W, order=20)
    assert report.passed, report.violations[:3]


def test_conjugation():
    """Test A(u) x-_n A(u)^-1 on L-_b."""
    W = negative_prefundamental(F(1, 2), 5)
    pair = TruncatablePair.sl2(-1, LinRat.linear(F(3, 2)))
    report = conjugation_check(pair, W, n_max=3, order=6)
    assert report.passed, report.violations[:3]
