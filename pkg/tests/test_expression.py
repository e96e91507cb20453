import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from CompoundCert.Expression import ExpressionParseError, MatrixExpression, entry_matrix, parse_matrix_expression, serialize_matrix


# ############################################################################
# PARSING AND EVALUATION
# ############################################################################

def test_time_varying_expression():
    expression = MatrixExpression("[[-1, 0], [-2*cos(t), 0]]")
    assert expression.depends_on_time
    assert expression.shape == (2, 2)
    assert_allclose(expression(0.0), [[-1.0, 0.0], [-2.0, 0.0]])
    assert_allclose(expression.evaluate(math.pi), [[-1.0, 0.0], [2.0, 0.0]], atol=1e-15)


def test_constant_expression():
    expression = MatrixExpression("[[1.5, -2e-3], [pi, exp(1) - e]]")
    assert not expression.depends_on_time
    assert_allclose(expression(), [[1.5, -2e-3], [math.pi, 0.0]], atol=1e-15)


def test_parse_matrix_expression_at_time():
    assert_allclose(parse_matrix_expression("[[sin(t) + -(t*2)]]", 1.0), [[math.sin(1.0) - 2.0]])


@pytest.mark.parametrize('text', [
    "[[t**2]]",
    "[[t/2]]",
    "[[abs(t)]]",
    "[[x]]",
    "[[__import__('os')]]",
    "[[1, 2], [3]]",
    "[1, 2]",
    "[[True]]",
    "[['a']]",
    "[[sin(t, t)]]",
    "[[1,",
    "[]",
])
def test_rejected_expressions(text):
    with pytest.raises(ExpressionParseError) as info:
        MatrixExpression(text)
    assert 0 <= info.value.position <= len(text)


def test_parse_error_position_points_at_the_token():
    with pytest.raises(ExpressionParseError) as info:
        MatrixExpression("[[1, y]]")
    assert info.value.position == 5


# ############################################################################
# LITERALS
# ############################################################################

def test_entry_matrix_mixes_numbers_and_expressions():
    matrix = entry_matrix([[-1, 0], ["-2*cos(t)", 0.5]])
    assert matrix.depends_on_time
    assert_allclose(matrix(0.0), [[-1.0, 0.0], [-2.0, 0.5]])


@pytest.mark.parametrize('literal', [[], [1, 2], [[None]], [[True]], "[[t**2]]", [[1, 2], [3]], [[1], []]])
def test_entry_matrix_rejects_bad_literals(literal):
    with pytest.raises(ExpressionParseError):
        entry_matrix(literal)


def test_entries_are_parsed_on_their_own():
    with pytest.raises(ExpressionParseError) as info:
        entry_matrix([[1, "1),(2"]])
    assert (info.value.row, info.value.column) == (1, 2)
    assert "entry (1, 2)" in info.value.message


def test_entry_error_position_is_relative_to_the_entry():
    with pytest.raises(ExpressionParseError) as info:
        entry_matrix([[0, 0], [0, "1 + y"]])
    assert (info.value.position, info.value.row, info.value.column) == (4, 2, 2)


def test_whole_text_errors_carry_no_entry():
    with pytest.raises(ExpressionParseError) as info:
        MatrixExpression("[[1, y]]")
    assert info.value.row is None
    assert info.value.column is None


def test_serialized_matrix_parses_back_exactly(rng):
    A = rng.normal(size=(3, 4))
    assert_array_equal(parse_matrix_expression(serialize_matrix(A)), A)
