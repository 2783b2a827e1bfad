"""Tests for one-dimensional twists, Y(sl2) tensor products and extreme actions."""

from fractions import Fraction

import pytest
import sympy

from src.shifted_yangian.algebra.parsing import parse_linrat
from src.shifted_yangian.algebra.ratfun import LinRat
from src.shifted_yangian.algebra.yangian_sl2 import Generator
from src.shifted_yangian.characters.qchar import qc_closed_form
from src.shifted_yangian.core.exceptions import RealizationError
from src.shifted_yangian.modules.analysis import lweight_decomposition, verify_relations
from src.shifted_yangian.modules.families import (
    asymptotic_module,
    negative_prefundamental,
    two_dimensional,
)
from src.shifted_yangian.modules.tensor import (
    LEFT,
    RIGHT,
    ExtremeActions,
    TwistedModule,
    cyclicity_witness,
    extreme_actions,
    tensor_onedim,
    tensor_poly_parameter,
    tensor_Y0,
)
from src.shifted_yangian.utils.interpolation import evaluate

F = Fraction


@pytest.mark.parametrize("side", [LEFT, RIGHT])
def test_onedim_twist_keeps_relations(side):
    """Test that L(u-3) ⊗ L-_0 and L-_0 ⊗ L(u-3) are modules over Y(sl2)."""
    twisted = tensor_onedim(LinRat.linear(3), negative_prefundamental(0, 5), side)
    assert twisted.shift == 0
    assert twisted.top == parse_linrat("(u-3)/u")
    report = verify_relations(twisted, n_max=5)
    assert report.passed, report.violations[:3]


def test_onedim_twist_multiplies_qcharacter():
    """Test qc(L(s) ⊗ V) = [s] qc(V) on a negative prefundamental."""
    twisted = tensor_onedim(LinRat.linear(3), negative_prefundamental(0, 4))
    decomposed = lweight_decomposition(twisted)
    assert decomposed.terms == qc_closed_form("Lminus", (0,), 4).terms


def test_onedim_twist_errors():
    """Test rejection of rational twists and of an unknown side."""
    module = negative_prefundamental(0, 3)
    assert tensor_onedim(LinRat.one(), module) is module
    with pytest.raises(RealizationError):
        tensor_onedim(parse_linrat("1/u"), module)
    with pytest.raises(RealizationError):
        TwistedModule(module, LinRat.linear(0), "middle")


def test_tensor_of_two_dimensional_modules():
    """Test the coproduct on N(1) ⊗ N(5): relations and q-character."""
    module = tensor_Y0(two_dimensional(1), two_dimensional(5))
    assert [module.dimension(k) for k in range(3)] == [1, 2, 1]
    assert module.label_text((0, 1)) == "v0⊗v1"

    report = verify_relations(module, n_max=4)
    assert report.passed, report.violations[:3]

    decomposed = lweight_decomposition(module)
    expected = qc_closed_form("N", (1,), 2) * qc_closed_form("N", (5,), 2)
    assert decomposed.terms == expected.terms
    assert decomposed.top == expected.top


def test_tensor_requires_finite_unshifted_factors():
    """Test that shifted or infinite factors are refused."""
    with pytest.raises(RealizationError):
        tensor_Y0(negative_prefundamental(0, 3), two_dimensional(0))
    with pytest.raises(RealizationError):
        tensor_Y0(two_dimensional(0), asymptotic_module(0, F(1, 2), 3))


def test_cyclicity_witness():
    """Test that N(a) ⊗ N(b) is cyclic on the top vector unless b = a + 1."""
    assert cyclicity_witness(tensor_Y0(two_dimensional(1), two_dimensional(5)), 1) == (2, 2)
    # x-_1 ω = (a+1) v1⊗w0 + b v0⊗w1 is proportional to x-_0 ω when b = a+1
    reducible = tensor_Y0(two_dimensional(1), two_dimensional(2))
    assert cyclicity_witness(reducible, 1, bound=2) == (1, 2)


def test_poly_parameter_tensor():
    """Test matrices in QQ[z] against specializations of the parameter."""
    poly = tensor_poly_parameter(two_dimensional(0), two_dimensional(0))
    z = poly.symbol
    assert poly.dimension(1) == 2

    matrix = poly.matrix(Generator.XMINUS, 1, 0)
    assert isinstance(matrix, sympy.Matrix)
    # level one is ordered v0⊗w1, v1⊗w0
    assert sympy.expand(matrix[0, 0] - z) == 0
    assert sympy.expand(matrix[1, 0] - 1) == 0

    xi = poly.matrix(Generator.XI, 1, 1)
    specialized = tensor_Y0(two_dimensional(0), two_dimensional(7)).matrix(Generator.XI, 1, 1)
    assert [
        [evaluate(xi[i, j], z, F(7)) for j in range(xi.cols)] for i in range(xi.rows)
    ] == specialized

    assert cyclicity_witness(poly, 1, bound=2) == (2, 2)


def test_extreme_actions():
    """Test the partial actions on N(0) ⊗ L-_3 at its extreme vectors."""
    actions = extreme_actions(two_dimensional(0), negative_prefundamental(3, 4))
    assert actions.lowest == 1

    # ξ(u)(v1 ⊗ ω) = (u-1)/u · 1/(u-3)
    product = LinRat.from_multisets(zeros=[1], poles=[0, 3])
    for p in range(5):
        assert actions.xi_on_extreme(p) == product.coefficient(-p - 1)

    assert actions.xminus_on_lowest(1, 0) == {(1, 1): F(3)}
    assert actions.xminus_on_top(2, 0) == {(0, 1): F(9), (1, 0): F(3)}


def test_extreme_actions_errors():
    """Test refusal of non-extreme vectors and infinite left factors."""
    with pytest.raises(RealizationError):
        ExtremeActions(two_dimensional(0), negative_prefundamental(3, 4), lowest=0)
    with pytest.raises(RealizationError):
        extreme_actions(negative_prefundamental(0, 4), two_dimensional(0))
