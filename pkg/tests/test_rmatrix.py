"""Tests for the Baxter operator, the TQ relation and R-matrices."""

import random
from fractions import Fraction

import pytest
import sympy

from src.shifted_yangian.algebra.cartan import build_cartan
from src.shifted_yangian.algebra.lweight import generators
from src.shifted_yangian.algebra.parsing import parse_linrat
from src.shifted_yangian.algebra.ratfun import LinRat
from src.shifted_yangian.core.exceptions import (
    NotAMonomialError,
    RealizationError,
    SamplePointError,
)
from src.shifted_yangian.intertwiners.rmatrix import (
    baxter_R,
    check_baxter_operator,
    check_factorization_consistency,
    check_short_exact_sequence,
    check_tq_relation,
    check_ybe,
    fundamental_position,
    intertwiner_at,
    lambda_poly,
    negative_polynomial,
    rhat_findim,
    rhat_fund_negative,
    rhat_positive_fundamental,
    t_lowest,
)
from src.shifted_yangian.modules.families import negative_prefundamental, two_dimensional
from src.shifted_yangian.modules.verma import make_weyl

F = Fraction
U = sympy.Symbol("u")
A1 = build_cartan("A1")


def _is_zero(expression) -> bool:
    return sympy.expand(expression) == 0


# Baxter operator


def test_baxter_eigenvalues_on_negative_prefundamental():
    """Test R_1(u) = (-u)(-u-1)...(-u-i+1) on level i of L-_0."""
    R = baxter_R(negative_prefundamental(0, 12))
    assert R.polynomial
    for level in range(13):
        expected = sympy.Mul(*[-U - t for t in range(level)])
        assert R.matrix(level).shape == (1, 1)
        assert _is_zero(R.matrix(level)[0, 0] - expected)


def test_baxter_specializations_agree():
    """Test R_s for s = v - 3 against R_1(u) evaluated at u = 3."""
    W = negative_prefundamental(F(1, 2), 4)
    polynomial = baxter_R(W)
    assert baxter_R(W, a=3).blocks == polynomial.at(3).blocks
    assert baxter_R(W, s=LinRat.linear(3)).blocks == polynomial.at(3).blocks

    with pytest.raises(ValueError):
        baxter_R(W, s=LinRat.linear(3), a=3)
    with pytest.raises(ValueError):
        baxter_R(W, s=parse_linrat("1/u"))
    with pytest.raises(ValueError):
        polynomial.at(3).at(4)


def test_baxter_operator_document():
    """Test the serialized form of a polynomial operator."""
    document = baxter_R(negative_prefundamental(0, 2)).to_dict()
    assert document["polynomial"] is True
    assert document["symbol"] == "u"
    assert document["blocks"]["0"] == [["1"]]
    assert document["blocks"]["1"] == [["-u"]]


@pytest.mark.parametrize(
    "module",
    [
        negative_prefundamental(F(1, 2), 5),
        make_weyl(LinRat.one(), parse_linrat("(u-1)(u-4)"), 3),
    ],
)
def test_baxter_operator_invariants(module):
    """Test R(ω) = ω, commutation with ξ and the closed eigenvalues."""
    report = check_baxter_operator(module, n_max=4)
    assert report.passed, report.violations[:3]


# TQ relation


def test_lambda_is_shifted_s():
    """Test λ_{N(a), L(s^-1)} = s(u + a) for random polynomials s."""
    rng = random.Random(11)
    for _ in range(5):
        s = LinRat.from_multisets(
            zeros=[rng.randint(-5, 5) for _ in range(rng.randint(0, 3))]
        )
        a = F(rng.randint(-4, 4), rng.choice([1, 2]))
        top = two_dimensional(a).top_lweight
        lowest = top / generators(A1, "A", 1, a)
        assert lambda_poly(top / lowest, s) == s.shift(-a)


def test_lambda_rejects_bad_input():
    """Test that inverse monomials and rational s are refused."""
    with pytest.raises(NotAMonomialError):
        lambda_poly(generators(A1, "A", 1, 0).inverse(), LinRat.linear(0))
    with pytest.raises(ValueError):
        lambda_poly(generators(A1, "A", 1, 0), parse_linrat("1/u"))


def test_t_lowest_on_negative_prefundamental():
    """Test t(u) = u - b + i on level i of L-_b."""
    t = t_lowest([(1, 0)], negative_prefundamental(2, 5))
    for level in range(6):
        assert _is_zero(t.matrix(level)[0, 0] - (U - 2 + level))


@pytest.mark.parametrize("b", [0, F(1, 2), -3])
def test_tq_relation_on_negative_prefundamental(b):
    """Test the TQ identity and the eigenvalue formulas on L-_b."""
    report = check_tq_relation([(1, 0)], negative_prefundamental(b, 8))
    assert report.passed, report.violations[:3]
    assert report.details["lambda"] == str(LinRat.linear(b))


def test_tq_relation_on_weyl_module():
    """Test the TQ identity with two positions on W(1, s)."""
    W = make_weyl(LinRat.one(), parse_linrat("(u-1)(u-4)"), 3)
    report = check_tq_relation([(1, 0), (1, 2)], W)
    assert report.passed, report.violations[:3]


def test_negative_polynomial():
    """Test recovery of s from W = L(s^-1)."""
    assert negative_polynomial(negative_prefundamental(3, 2)) == LinRat.linear(3)
    with pytest.raises(RealizationError):
        negative_polynomial(two_dimensional(0))


# R-matrices


def test_fundamental_rmatrix_entries():
    """Test Ř_{N,L-_0}(u) = [[1, a+], [a-, u + a+a-]] level by level."""
    rmatrix = rhat_fund_negative(None, negative_prefundamental(0, 12))
    assert rmatrix.polynomial
    for level in range(12):
        assert rmatrix.entry(0, 0).matrix(level) == sympy.Matrix([[1]])
        assert rmatrix.entry(0, 1).matrix(level) == sympy.Matrix([[level + 1]])
        assert _is_zero(rmatrix.entry(1, 1).matrix(level)[0, 0] - (U + level))
        if level >= 1:
            assert rmatrix.entry(1, 0).matrix(level) == sympy.Matrix([[1]])


def test_fundamental_rmatrix_evaluated():
    """Test Ř(e2 ⊗ v0) at u = 2 and the x- spot check."""
    rmatrix = rhat_fund_negative(2, negative_prefundamental(0, 6))
    assert rmatrix.apply(1, 0) == {(1, 0): F(1), (0, 1): F(2)}
    assert rmatrix.spot_check(n_max=3).passed
    assert rmatrix.to_dict()["parameter"] == "2"

    with pytest.raises(RealizationError):
        rmatrix.apply(0, 6)
    with pytest.raises(ValueError):
        rmatrix.at(3)


def test_fundamental_rmatrix_requires_prefundamental():
    """Test refusal of modules that are not L-_b."""
    with pytest.raises(RealizationError):
        rhat_fund_negative(0, two_dimensional(0))
    with pytest.raises(RealizationError):
        rhat_fund_negative(0, make_weyl(LinRat.one(), parse_linrat("(u-1)(u-2)"), 3))
    with pytest.raises(ValueError):
        rhat_fund_negative(0, negative_prefundamental(0, 0))


def test_rhat_findim():
    """Test the normalized R-matrix of N(0) and N(2)."""
    rmatrix = rhat_findim(two_dimensional(0), two_dimensional(2))
    assert rmatrix.apply(7, {(0, 0): F(1)}) == {(0, 0): F(1)}
    assert intertwiner_at(two_dimensional(0), two_dimensional(2), 7) == rmatrix.at(7)
    assert rmatrix.is_morphism_at(7)
    assert rmatrix.is_morphism_at(F(-5, 2))

    found = rmatrix.poles()
    assert found and found <= {F(1), F(3)}
    with pytest.raises(SamplePointError):
        rmatrix.at(min(found))
    assert set(rmatrix.to_dict()["blocks"]) == {"0", "1", "2"}


def test_fundamental_position():
    """Test c with a module isomorphic to N(c)."""
    assert fundamental_position(two_dimensional(3)) == 3
    with pytest.raises(RealizationError):
        fundamental_position(negative_prefundamental(0, 3))


def test_yang_baxter_equation():
    """Test the YBE on N(1) ⊗ N(5) ⊗ L-_0 at five sample points."""
    samples = [(0, 1), (2, 1), (7, 3), (F(1, 2), 4), (10, -2)]
    report = check_ybe(
        two_dimensional(1), two_dimensional(5), negative_prefundamental(0, 8), samples
    )
    assert report.passed, report.violations[:3]
    assert report.details["samples"] == 5


def test_factorization_consistency_on_two_negative_prefundamentals():
    """Test Ř on L(1/((u-1)(u-4))) against the composite of the two L- factors."""
    report = check_factorization_consistency(LinRat.linear(1), LinRat.linear(4), depth=4)
    assert report.passed, report.violations[:3]
    assert report.details["levels"] == 4
    assert report.checks == 8


def test_factorization_consistency_detects_a_wrong_module(mocker):
    """Test that a Weyl module with the wrong s breaks the comparison."""
    wrong = make_weyl(LinRat.one(), parse_linrat("(u-1)(u-5)"), 3)
    mocker.patch("src.shifted_yangian.intertwiners.rmatrix.make_weyl", return_value=wrong)
    report = check_factorization_consistency(LinRat.linear(1), LinRat.linear(4), depth=3)
    assert not report.passed
    assert any("level 0" in v for v in report.violations)

    with pytest.raises(ValueError):
        check_factorization_consistency(parse_linrat("(u-1)(u-2)"), LinRat.linear(4))


def test_rhat_positive_fundamental_blocks():
    """Test that Ř(L+_2, N(2)) keeps the top vector and kills the lower one."""
    assert rhat_positive_fundamental(2) == {0: [[F(1)]], 1: [[F(0)]]}


@pytest.mark.parametrize("a", [0, 3, F(1, 2)])
def test_short_exact_sequence(a):
    """Test kernel Ψ_{a+1} and image Ψ_{a-1} of Ř(L+_a, N(a))."""
    report = check_short_exact_sequence(a)
    assert report.passed, report.violations[:3]
    assert report.details["kernel_level"] == 1
    assert report.details["image_level"] == 0
