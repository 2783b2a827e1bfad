"""Tests for rational functions, parsing, Cartan data and ℓ-weights."""

import random
from fractions import Fraction

import pytest

from src.shifted_yangian.algebra.cartan import (
    build_cartan,
    coroot_coordinates,
    pairing_sum,
    root_weight,
)
from src.shifted_yangian.algebra.lweight import (
    LWeight,
    Weight,
    a_monomial,
    a_monomial_decompose,
    generators,
    in_monoid_D,
    monomial_from_exponents,
    parse_lweight,
    sl2_simple_root,
    weight_and_coweight,
)
from src.shifted_yangian.algebra.parsing import (
    FamilySpec,
    parse_family_specs,
    parse_linrat,
)
from src.shifted_yangian.algebra.ratfun import LaurentSeries, LinRat
from src.shifted_yangian.core.exceptions import NotAMonomialError, ParseError

A1 = build_cartan("A1")
B2 = build_cartan("B2")


# Rational functions


def test_linrat_canonical_form():
    """Test that equal functions are equal values regardless of construction."""
    built = LinRat.from_multisets(zeros=[9, 3], poles=[2, 0])
    parsed = parse_linrat("(u-3)(u-9)/(u*(u-2))")

    assert built == parsed
    assert built.zeros() == [3, 9]
    assert built.poles() == [0, 2]
    assert built.degree == 0
    assert (built / built).is_one


def test_linrat_shift_moves_roots():
    """Test that shift(c) sends f(u) to f(u - c)."""
    f = parse_linrat("(u-1)/(u+2)")
    assert f.shift(3) == parse_linrat("(u-4)/(u-1)")
    assert f.shift(Fraction(1, 2)).zeros() == [Fraction(3, 2)]


def test_linrat_eval_and_pole():
    """Test exact evaluation and refusal at a pole."""
    f = parse_linrat("(u-1)/(u+1)")
    assert f.eval(3) == Fraction(1, 2)
    with pytest.raises(ValueError):
        f.eval(-1)


def test_linrat_polynomial_coefficients():
    """Test the coefficient list of a polynomial, lowest degree first."""
    assert parse_linrat("(u-1)(u-2)").poly_coefficients() == [2, -3, 1]
    with pytest.raises(ValueError):
        parse_linrat("1/u").poly_coefficients()


def test_linrat_expansion_at_infinity():
    """Test the expansion (u-1)/(u-2) = 1 + u^-1 + 2u^-2 + 4u^-3 + ..."""
    f = parse_linrat("(u-1)/(u-2)")
    assert [f.coefficient(p) for p in (1, 0, -1, -2, -3)] == [0, 1, 1, 2, 4]

    series = f.expand(5)
    assert series.lead == 0
    assert series.coeffs == (1, 1, 2, 4, 8)
    assert series.principal_part().coeffs == (1, 2, 4, 8)


def test_linrat_str_round_trip():
    """Test that the printed form parses back to the same function."""
    f = parse_linrat("(u-3)(u-9)/(u*(u-2))")
    assert str(f) == "(u-3)*(u-9)/(u*(u-2))"
    assert parse_linrat(str(f)) == f

    g = parse_linrat("(u+1/2)^2/(u-3)")
    assert g.exponent(Fraction(-1, 2)) == 2
    assert parse_linrat(str(g)) == g


def test_laurent_series_inverse():
    """Test that series inversion matches the expansion of the reciprocal."""
    f = parse_linrat("(u-1)/(u-2)")
    series = f.expand(6)

    assert series.inverse() == f.inverse().expand(6)
    assert series * series.inverse() == LaurentSeries.from_polynomial([1], 6)


def test_laurent_series_agreement_order():
    """Test that comparisons beyond the known order are refused."""
    a = LinRat.linear(0).expand(3)
    with pytest.raises(ValueError):
        a.agrees_with(a, 5)
    assert a.agrees_with(LaurentSeries.from_polynomial([0, 1], 3), 3)


# Parsing


@pytest.mark.parametrize("text", ["", "2(u-1)", "(u-1", "(u-1/0)", "u)"])
def test_parse_linrat_rejects_malformed_input(text):
    """Test that malformed or non-monic input raises ParseError."""
    with pytest.raises(ParseError):
        parse_linrat(text)


def test_parse_family_specs():
    """Test splitting of module specs into names and arguments."""
    specs = parse_family_specs("Lba(9,0)*Lba(3,2)")
    assert specs == [FamilySpec("Lba", ("9", "0")), FamilySpec("Lba", ("3", "2"))]
    assert specs[0].rationals(2) == (9, 0)
    with pytest.raises(ParseError):
        specs[0].rationals(1)

    (weyl,) = parse_family_specs("Weyl((u-1)(u-2);(u-1)(u-2))")
    assert weyl.args == ("(u-1)(u-2)", "(u-1)(u-2)")

    (simple,) = parse_family_specs("Simple((u-1)/u)")
    assert simple.args == ("(u-1)/u",)

    with pytest.raises(ParseError):
        parse_family_specs("Lba(9,0")


# Cartan data


@pytest.mark.parametrize(
    "label, dual_coxeter",
    [
        ("A1", 2),
        ("A3", 4),
        ("B3", 5),
        ("C3", 4),
        ("D4", 6),
        ("E6", 12),
        ("E7", 18),
        ("E8", 30),
        ("F4", 9),
        ("G2", 4),
    ],
)
def test_dual_coxeter_numbers(label, dual_coxeter):
    """Test dual Coxeter numbers computed from the generated root systems."""
    assert build_cartan(label).dual_coxeter == dual_coxeter


def test_kappa_values():
    """Test κ for the types with shipped fundamental data."""
    assert build_cartan("A1").kappa == 1
    assert build_cartan("B2").kappa == 3
    assert build_cartan("G2").kappa == 6


def test_g2_conventions():
    """Test that G2 puts the long root first."""
    g2 = build_cartan("g2")
    assert g2.d == (3, 1)
    assert g2.cij(1, 2) == -1
    assert g2.cij(2, 1) == -3
    assert g2.neighbours(1) == [2]
    assert g2.dij(1, 2) == Fraction(-3, 2)
    assert len(g2.pos_roots) == 6
    assert g2.highest_root() == (2, 3)


def test_cartan_helpers():
    """Test root weights, pairing sums and coroot coordinates."""
    a2 = build_cartan("A2")
    assert root_weight(a2, 1) == (2, -1)
    assert pairing_sum(a2, 1) == 2
    assert coroot_coordinates(A1, (-1,)) == (Fraction(-1, 2),)
    assert coroot_coordinates(a2, (1, 0)) == (Fraction(2, 3), Fraction(1, 3))


@pytest.mark.parametrize("label", ["X9", "A0", "E9", "G3"])
def test_unknown_types_rejected(label):
    """Test that unknown type labels raise ValueError."""
    with pytest.raises(ValueError):
        build_cartan(label)


# ℓ-weights


def test_sl2_generators():
    """Test Ψ, Y and A for sl2."""
    assert generators(A1, "A", 1, 0).component(1) == sl2_simple_root(0)
    assert sl2_simple_root(0) == parse_linrat("(u+1)/(u-1)")
    assert generators(A1, "Y", 1, 2).component(1) == parse_linrat("(u-3/2)/(u-5/2)")
    assert generators(A1, "Psi", 1, 4) == LWeight.from_sl2(LinRat.linear(4))
    with pytest.raises(ValueError):
        generators(A1, "Psi", 2, 0)


def test_weight_and_coweight():
    """Test that Y has weight ϖ and A has weight α in sl2."""
    weight, coweight = weight_and_coweight(generators(A1, "Y", 1, 5))
    assert weight == Weight((Fraction(1),))
    assert coweight == (0,)

    weight, _ = weight_and_coweight(generators(A1, "A", 1, 5))
    assert weight == Weight((Fraction(2),))

    assert Weight((Fraction(0),)).leq(Weight((Fraction(2),)), A1)
    assert not Weight((Fraction(2),)).leq(Weight((Fraction(0),)), A1)


def test_a_monomial_decompose_sl2():
    """Test recovering exponents of a product of simple roots."""
    exponents = {(1, Fraction(0)): 1, (1, Fraction(2)): -1}
    f = a_monomial(A1, exponents)
    assert f.component(1) == parse_linrat("(u+1)(u-3)/(u-1)^2")
    assert a_monomial_decompose(f) == exponents
    assert a_monomial_decompose(LWeight.one(A1)) == {}


def test_a_monomial_decompose_b2():
    """Test decomposition with unequal root lengths."""
    exponents = {(1, Fraction(1, 2)): 2, (2, Fraction(3)): 1}
    assert a_monomial_decompose(a_monomial(B2, exponents)) == exponents


@pytest.mark.parametrize("label", ["A1", "A2", "B2", "C3", "G2"])
def test_a_monomial_decompose_round_trips_random_monomials(label):
    """Test that random products of at most six simple roots are recovered."""
    cd = build_cartan(label)
    rng = random.Random(f"decompose-{label}")
    for _ in range(60):
        exponents = {}
        for _ in range(rng.randint(1, 6)):
            key = (rng.choice(list(cd.nodes)), Fraction(rng.randint(-8, 8), 2))
            exponents[key] = exponents.get(key, 0) + rng.choice([-2, -1, 1, 2])
        exponents = {key: n for key, n in exponents.items() if n}
        assert a_monomial_decompose(a_monomial(cd, exponents)) == exponents


def test_a_monomial_decompose_matches_exhaustive_search():
    """Test (u−1)(u+1)/((u−3)(u+3)) against every small sl₂ candidate."""
    target = LWeight.from_sl2(parse_linrat("(u-1)(u+1)/((u-3)(u+3))"))
    keys = [(1, Fraction(a)) for a in range(-4, 5)]
    powers = [n for n in range(-3, 4) if n]
    candidates = [{key: n} for key in keys for n in powers]
    candidates += [
        {first: n, second: m}
        for x, first in enumerate(keys)
        for second in keys[x + 1 :]
        for n in powers
        for m in powers
    ]
    matches = [c for c in candidates if a_monomial(A1, c) == target]
    assert matches == [{(1, Fraction(-2)): -1, (1, Fraction(2)): 1}]
    assert a_monomial_decompose(target) == matches[0]


def _random_lweight(cd, rng):
    result = LWeight.one(cd)
    for _ in range(rng.randint(1, 5)):
        node = rng.choice(list(cd.nodes))
        factor = generators(cd, "Psi", node, Fraction(rng.randint(-8, 8), 2))
        result = result * factor ** rng.choice([-1, 1])
    return result


@pytest.mark.parametrize("label", ["A1", "B2", "G2"])
def test_weight_and_coweight_are_additive(label):
    """Test that weight and coweight turn products into sums."""
    cd = build_cartan(label)
    rng = random.Random(f"additive-{label}")
    for _ in range(40):
        e, f = _random_lweight(cd, rng), _random_lweight(cd, rng)
        weight_e, coweight_e = weight_and_coweight(e)
        weight_f, coweight_f = weight_and_coweight(f)
        weight, coweight = weight_and_coweight(e * f)
        assert weight == weight_e + weight_f
        assert coweight == tuple(a + b for a, b in zip(coweight_e, coweight_f))


def test_spectral_shift_composes_and_moves_the_weight():
    """Test τ_a τ_b = τ_{a+b} and ϖ(τ_a e) = ϖ(e) − a μ̃ with μ̃_i = k_i/d_i."""
    rng = random.Random("spectral-shift")
    for label in ("A1", "B2", "G2"):
        cd = build_cartan(label)
        for _ in range(20):
            e = _random_lweight(cd, rng)
            a, b = Fraction(rng.randint(-6, 6), 2), Fraction(rng.randint(-6, 6), 3)
            assert e.spectral_shift(a).spectral_shift(b) == e.spectral_shift(a + b)

            weight, coweight = weight_and_coweight(e)
            shifted_weight, shifted_coweight = weight_and_coweight(e.spectral_shift(a))
            correction = Weight(tuple(Fraction(k, cd.di(i)) for i, k in zip(cd.nodes, coweight)))
            assert shifted_coweight == coweight
            assert shifted_weight == weight - correction.scale(a)


@pytest.mark.parametrize("text", ["u", "u/(u-1/2)"])
def test_a_monomial_decompose_rejects(text):
    """Test that non-monomials raise NotAMonomialError."""
    with pytest.raises(NotAMonomialError):
        a_monomial_decompose(LWeight.from_sl2(parse_linrat(text)))


def test_parse_lweight():
    """Test parsing of Ψ-products for a rank-two type."""
    parsed = parse_lweight(B2, "Psi(1,3)*Psi(2,-1)^-1")
    expected = LWeight.from_components(
        B2, {1: LinRat.linear(3), 2: LinRat.linear(-1).inverse()}
    )
    assert parsed == expected
    assert parsed.coweight() == (1, -1)
    assert not in_monoid_D(parsed)
    assert in_monoid_D(parsed.spectral_shift(2) * parse_lweight(B2, "Psi(2,1)"))

    with pytest.raises(ParseError):
        parse_lweight(A1, "Psi(3,0)")
    with pytest.raises(ParseError):
        parse_lweight(A1, "Q(1,0)")


def test_monomial_from_exponents():
    """Test expanding exponents into a sorted key multiset."""
    keys = monomial_from_exponents({(1, Fraction(2)): 2, (1, Fraction(0)): 1})
    assert keys == ((1, 0), (1, 2), (1, 2))
    with pytest.raises(NotAMonomialError):
        monomial_from_exponents({(1, Fraction(0)): -1})
