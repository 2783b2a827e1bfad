"""Tests for the shifted Yangian of sl2 and its straightening rules."""

from fractions import Fraction

import pytest

from src.shifted_yangian.algebra.yangian_sl2 import (
    XMINUS_ORDER,
    AlgebraElement,
    Generator,
    ShiftedYangianSL2,
    generalized_binomial,
    letters,
)

XM, XI, XP = Generator.XMINUS, Generator.XI, Generator.XPLUS


def word(*spec):
    return AlgebraElement.word(*spec)


def is_normal_ordered(w):
    return all(
        (g1, n1) <= (g2, n2) for (g1, n1), (g2, n2) in zip(w, w[1:])
    )


@pytest.mark.parametrize("shift", [0, 1, 2])
@pytest.mark.parametrize("m, n", [(0, 0), (1, 0), (0, 2), (2, 1)])
def test_plus_minus_commutator(shift, m, n):
    """Test [x+_m, x-_n] = xi_{m+n}."""
    y = ShiftedYangianSL2(shift)
    assert y.commutator(word((XP, m)), word((XM, n))) == word((XI, m + n))


def test_unit_index_and_cartan_action():
    """Test that xi_{-s-1} = 1 and [xi_0, x-_n] = -2 x-_n in Y_0."""
    y = ShiftedYangianSL2(0)
    assert y.unit_index == -1
    assert y.straighten(word((XI, -1), (XM, 3))) == word((XM, 3))
    assert y.straighten(word((XI, -2))).is_zero()
    assert y.commutator(word((XI, 0)), word((XM, 2))) == word((XM, 2)).scale(-2)
    assert y.commutator(word((XI, 0)), word((XP, 1))) == word((XP, 1)).scale(2)


@pytest.mark.parametrize("shift", [0, 1, -1])
@pytest.mark.parametrize("p_offset, n", [(0, 0), (1, 1), (2, 0)])
@pytest.mark.parametrize("generator, sign", [(XM, -1), (XP, 1)])
def test_cartan_current_relation(shift, p_offset, n, generator, sign):
    """Test [xi_{p+1}, x_n] - [xi_p, x_{n+1}] = ±(xi_p x_n + x_n xi_p)."""
    y = ShiftedYangianSL2(shift)
    p = y.unit_index + p_offset
    lhs = y.commutator(word((XI, p + 1)), word((generator, n))) - y.commutator(
        word((XI, p)), word((generator, n + 1))
    )
    rhs = y.straighten(
        (word((XI, p), (generator, n)) + word((generator, n), (XI, p))).scale(sign)
    )
    assert (lhs - rhs).is_zero()


@pytest.mark.parametrize("m, n", [(0, 0), (1, 0), (2, 0), (0, 3), (3, 1)])
@pytest.mark.parametrize("generator, sign", [(XM, -1), (XP, 1)])
def test_same_type_relation(m, n, generator, sign):
    """Test [x_{m+1}, x_n] - [x_m, x_{n+1}] = ±(x_m x_n + x_n x_m)."""
    y = ShiftedYangianSL2(0)
    lhs = y.commutator(word((generator, m + 1)), word((generator, n))) - y.commutator(
        word((generator, m)), word((generator, n + 1))
    )
    rhs = y.straighten(
        (word((generator, m), (generator, n)) + word((generator, n), (generator, m))).scale(
            sign
        )
    )
    assert (lhs - rhs).is_zero()


def test_xminus_reordering():
    """Test x-_1 x-_0 = x-_0 x-_1 - x-_0 x-_0."""
    y = ShiftedYangianSL2(0)
    assert y.xminus_pair(1, 0) == {(0, 1): 1, (0, 0): -1}
    assert y.xplus_pair(1, 0) == {(0, 1): 1, (0, 0): 1}
    result = y.straighten(word((XM, 1), (XM, 0)), normal_order=XMINUS_ORDER)
    assert result == word((XM, 0), (XM, 1)) - word((XM, 0), (XM, 0))


def test_straighten_produces_triangular_words():
    """Test that every output word is ordered x- then xi then x+."""
    y = ShiftedYangianSL2(1)
    element = word((XP, 2), (XI, 0), (XM, 1), (XM, 0))
    result = y.straighten(element)
    assert not result.is_zero()
    assert all(is_normal_ordered(w) for w in result.terms)
    assert result.weight() == -1


def test_straighten_rejects_bad_input():
    """Test errors for negative indices and mixed words in x- order."""
    y = ShiftedYangianSL2(0)
    with pytest.raises(ValueError):
        y.straighten(word((XM, -1)))
    with pytest.raises(ValueError):
        y.straighten(word((XM, 0), (XI, 0)), normal_order=XMINUS_ORDER)
    with pytest.raises(ValueError):
        y.straighten(word((XM, 0)), normal_order="lexicographic")


def test_shift_homomorphism():
    """Test that the unit of Y_0 maps to the unit of the target algebra."""
    y = ShiftedYangianSL2(0)
    target, image = y.shift_hom((XI, -1), -1, -1)
    assert target.shift == -2
    assert image == AlgebraElement.unit()

    _, image = y.shift_hom((XP, 3), -2, 0)
    assert image == word((XP, 5))
    with pytest.raises(ValueError):
        y.shift_hom((XP, 0), 1, 0)


def test_spectral_shift():
    """Test tau_a on single generators and on words."""
    y = ShiftedYangianSL2(0)
    a = Fraction(3)
    assert y.tau((XM, 2), a) == word((XM, 2)) + word((XM, 1)).scale(6) + word(
        (XM, 0)
    ).scale(9)
    assert y.tau((XI, 1), a) == word((XI, 1)) + word((XI, 0)).scale(3)

    shifted = ShiftedYangianSL2(1)
    assert shifted.tau((XI, -1), a) == word((XI, -1)) - AlgebraElement.unit().scale(3)

    image = y.apply_tau(word((XM, 1), (XP, 0)), a)
    expected = word((XM, 1), (XP, 0)) + word((XM, 0), (XP, 0)).scale(3)
    assert image == expected


def test_generalized_binomial():
    """Test binomials with negative upper argument."""
    assert generalized_binomial(5, 2) == 10
    assert generalized_binomial(-1, 3) == -1
    assert generalized_binomial(2, 3) == 0


def test_letters_and_weight():
    """Test word construction from names and weight bookkeeping."""
    w = letters([("x-", 2), ("xi", 0), ("x+", 1)])
    assert w == ((XM, 2), (XI, 0), (XP, 1))
    assert AlgebraElement({w: Fraction(1)}).weight() == 0
    assert (word((XM, 0)) + word((XP, 0))).weight() is None
    assert str(AlgebraElement()) == "0"
