"""Tests for exact linear algebra, interpolation, serialization and reports."""

import json
import logging
from fractions import Fraction

import pytest
import sympy
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from src.shifted_yangian.core.report import CheckReport
from src.shifted_yangian.utils.interpolation import (
    evaluate,
    interpolate_matrix,
    poles,
    rational_interpolate,
    sample_points,
)
from src.shifted_yangian.utils.linalg import (
    generalized_eigenspace,
    inverse,
    matmul,
    nullspace,
    rank,
    rational_eigenvalues,
    solve,
)
from src.shifted_yangian.utils.serialization import (
    SCHEMA_VERSION,
    dump_json,
    render_fraction,
    to_jsonable,
)

F = Fraction
U = sympy.Symbol("u")


def test_solve_and_inverse():
    """Test exact solutions of a small system."""
    matrix = [[F(2), F(1)], [F(1), F(3)]]
    assert solve(matrix, [F(3), F(5)]) == [F(4, 5), F(7, 5)]
    assert matmul(matrix, inverse(matrix)) == [[1, 0], [0, 1]]

    with pytest.raises(ValueError):
        solve([[F(1), F(2)], [F(2), F(4)]], [F(1), F(2)])
    with pytest.raises(ValueError):
        inverse([[F(1), F(2)], [F(2), F(4)]])


def test_nullspace_and_rank():
    """Test the kernel basis of a rank-one matrix."""
    rows = [[F(1), F(2), F(3)], [F(2), F(4), F(6)]]
    assert rank(rows, 3) == 1
    kernel = nullspace(rows, 3)
    assert len(kernel) == 2
    for vector in kernel:
        assert sum(a * b for a, b in zip(rows[0], vector)) == 0


def test_rational_eigenvalues():
    """Test eigenvalues and a generalized eigenspace of a Jordan block."""
    jordan = [[F(2), F(1), F(0)], [F(0), F(2), F(0)], [F(0), F(0), F(-1, 2)]]
    assert rational_eigenvalues(jordan) == {F(2): 2, F(-1, 2): 1}
    assert len(generalized_eigenspace(jordan, F(2), 2)) == 2

    with pytest.raises(ValueError):
        rational_eigenvalues([[F(0), F(2)], [F(1), F(0)]])


def test_sample_points_skip_avoided_values():
    """Test deterministic sample points avoiding poles."""
    assert sample_points(4, avoid={F(1), F(3)}, start=0) == [0, 2, 4, 5]
    assert sample_points(2, start=7) == [7, 8]


def test_interpolate_matrix():
    """Test entrywise interpolation with a held-out check point."""
    points = [F(0), F(1), F(2), F(3)]
    samples = [[[x, x * x], [F(1), F(0)]] for x in points]
    matrix = interpolate_matrix(points, samples, U)
    assert sympy.expand(matrix[0, 1] - U**2) == 0
    assert matrix[1, 0] == 1

    broken = [[[x**3]] for x in points]
    with pytest.raises(ValueError):
        interpolate_matrix(points, broken, U)


def test_rational_interpolate_recovers_function():
    """Test recovering (u+1)/(u-2) from exact samples."""
    data = [(F(x), F(x + 1, x - 2)) for x in (3, 4, 5, 6, 7)]
    expression = rational_interpolate(data, 1, 1, U)
    assert sympy.simplify(expression - (U + 1) / (U - 2)) == 0
    assert poles(expression, U) == {F(2)}
    assert evaluate(expression, U, F(4)) == F(5, 2)


def test_render_fraction_is_exact():
    """Test that rationals are rendered as strings, never floats."""
    assert render_fraction(F(7)) == "7"
    assert render_fraction(F(-3, 2)) == "-3/2"
    assert to_jsonable({F(1, 2): [F(2), {3, 1}]}) == {"1/2": ["2", [1, 3]]}


def test_dump_json_is_canonical():
    """Test that key order does not change the rendered document."""
    first = dump_json({"sch": SCHEMA_VERSION, "b": F(1, 3), "a": True})
    second = dump_json({"a": True, "b": F(1, 3), "sch": SCHEMA_VERSION})
    assert first == second
    assert json.loads(first) == {"a": True, "b": "1/3", "sch": 1}


def test_check_report_records_and_merges(caplog):
    """Test counting, merging and summary logging of check reports."""
    report = CheckReport("relations")
    assert report.record(True, "fine")
    assert not report.record(False, "broken at n=3")
    assert report.checks == 2
    assert not report.passed

    other = CheckReport("extra")
    other.record(False, "bad")
    report.merge(other, prefix="tensor")
    assert report.checks == 3
    assert report.violations == ["broken at n=3", "tensor: bad"]

    with caplog.at_level(logging.ERROR):
        report.log_summary(logging.getLogger("test_report"))
    assert "2 of 3 checks failed" in caplog.text

    document = report.to_dict()
    assert document["passed"] is False
    assert document["checks"] == 3


def test_check_report_caps_violations():
    """Test that only the first violations are kept."""
    report = CheckReport("many", max_violations=2)
    for k in range(5):
        report.record(False, f"v{k}")
    assert report.violations == ["v0", "v1"]
    assert report.details["truncated_violations"] is True


def test_check_report_counts_failures_past_the_cap(caplog):
    """Test that the failure count and merges respect the violation cap."""
    report = CheckReport("many", max_violations=2)
    for k in range(5):
        report.record(False, f"v{k}")
    assert report.failures == 5
    assert report.to_dict()["failures"] == 5

    with caplog.at_level(logging.ERROR):
        report.log_summary(logging.getLogger("test_report"))
    assert "5 of 5 checks failed" in caplog.text

    target = CheckReport("target", max_violations=3)
    target.record(False, "own")
    target.merge(report, prefix="inner")
    assert target.failures == 6
    assert target.checks == 6
    assert target.violations == ["own", "inner: v0", "inner: v1"]
    assert target.details["truncated_violations"] is True

    full = CheckReport("full", max_violations=1)
    full.record(False, "first")
    full.merge(CheckReport("quiet"))
    assert full.passed is False
    assert full.violations == ["first"]
    assert "truncated_violations" not in full.details


def test_inverse_only_translates_singularity(mocker):
    """Test that a singular matrix becomes ValueError and other faults propagate."""
    with pytest.raises(ValueError, match="Singular matrix") as info:
        inverse([[F(0), F(0)], [F(0), F(0)]])
    assert isinstance(info.value.__cause__, (DMNonInvertibleMatrixError, ZeroDivisionError))

    mocker.patch.object(DomainMatrix, "inv", side_effect=TypeError("bad domain"))
    with pytest.raises(TypeError, match="bad domain"):
        inverse([[F(1), F(0)], [F(0), F(1)]])
