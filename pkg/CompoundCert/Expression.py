"""
CompoundCert.Expression
~~~~~~~~~~~~

This module implements the whitelisted matrix expressions used for time-varying system matrices,
e.g. "[[-1, 0], [-2*cos(t), 0]]".

Grammar: a list of equal-length lists whose entries are numbers, the names t, pi and e,
unary + and -, binary +, - and *, parentheses and the functions sin, cos and exp.
Nothing is ever passed to eval.
"""

# Import the required modules
import ast
import json
import math
import numpy as np
from typing import Any, Callable

# Exception Classes
class ExpressionParseError(Exception):
    """
    An exception for matrix expressions outside the whitelisted grammar.
    """

    def __init__(self, message: str, position: int, row: int = None, column: int = None) -> None:
        """
        Initialize the ExpressionParseError object.

        Args:
            message (str): The error message.
            position (int): The 0-based character offset of the offending token.
            row (int) = None: The 1-based row of the offending matrix-literal entry.
            column (int) = None: The 1-based column of the offending matrix-literal entry.
        """

        self.position: int = position
        self.row: int | None = row
        self.column: int | None = column

        where: str = f"at position {position}" if row is None else f"in entry ({row}, {column}) at position {position}"
        self.message: str = f"{message} ({where})"
        super().__init__(self.message)

# Whitelists
_FUNCTIONS: dict[str, Callable[[float], float]] = {"sin": math.sin, "cos": math.cos, "exp": math.exp}
_CONSTANTS: dict[str, float] = {"pi": math.pi, "e": math.e}
_BINARY: dict[type, Callable[[float, float], float]] = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b
}
_UNARY: dict[type, Callable[[float], float]] = {
    ast.UAdd: lambda a: +a,
    ast.USub: lambda a: -a
}

class _Source:
    """
    Parses one piece of text and maps AST nodes back to character offsets in it.
    """

    def __init__(self, text: str, row: int = None, column: int = None) -> None:
        self.text: str = text
        self.row: int | None = row
        self.column: int | None = column

        self.__line_starts: list[int] = [0]
        for line in text.splitlines(keepends = True):
            self.__line_starts.append(self.__line_starts[-1] + len(line))

    def error(self, message: str, position: int) -> ExpressionParseError:
        """
        Returns the parse error for an offset in this text.
        """
        return ExpressionParseError(message, position, self.row, self.column)

    def offset(self, lineno: int, col: int) -> int:
        """
        Convert a (1-based line, 0-based column) pair into a character offset.
        """
        return self.__line_starts[min(lineno, len(self.__line_starts)) - 1] + col

    def position(self, node: ast.AST) -> int:
        """
        Returns the character offset of a node.
        """
        return self.offset(getattr(node, "lineno", 1), getattr(node, "col_offset", 0))

    def parse(self) -> ast.AST:
        """
        Parse the text as a single Python expression.
        """

        try:
            return ast.parse(self.text, mode = 'eval').body
        except SyntaxError as exc:
            raise self.error(f"syntax error: {exc.msg}", self.offset(exc.lineno or 1, (exc.offset or 1) - 1))

    def validate(self, node: ast.AST) -> bool:
        """
        Reject every node outside the grammar.

        Returns:
            bool: True when the node refers to t.
        """

        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
                raise self.error(f"unsupported literal {node.value!r}", self.position(node))
            return False

        if isinstance(node, ast.Name):
            if node.id == "t":
                return True
            if node.id not in _CONSTANTS:
                raise self.error(f"unknown name '{node.id}'", self.position(node))
            return False

        if isinstance(node, ast.UnaryOp):
            if type(node.op) not in _UNARY:
                raise self.error("unsupported unary operator", self.position(node))
            return self.validate(node.operand)

        if isinstance(node, ast.BinOp):
            if type(node.op) not in _BINARY:
                raise self.error("unsupported operator, only +, - and * are allowed", self.position(node.right) - 1)
            left: bool = self.validate(node.left)
            return self.validate(node.right) or left

        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCTIONS:
                raise self.error("unknown function, only sin, cos and exp are allowed", self.position(node))
            if len(node.args) != 1 or node.keywords:
                raise self.error(f"{node.func.id} takes exactly one argument", self.position(node))
            return self.validate(node.args[0])

        raise self.error(f"unsupported token {type(node).__name__}", self.position(node))

def _evaluate(node: ast.AST, t: float) -> float:
    """
    Evaluate a validated node.
    """

    if isinstance(node, ast.Constant):
        return float(node.value)

    if isinstance(node, ast.Name):
        return float(t) if node.id == "t" else _CONSTANTS[node.id]

    if isinstance(node, ast.UnaryOp):
        return _UNARY[type(node.op)](_evaluate(node.operand, t))

    if isinstance(node, ast.BinOp):
        return _BINARY[type(node.op)](_evaluate(node.left, t), _evaluate(node.right, t))

    return _FUNCTIONS[node.func.id](_evaluate(node.args[0], t))

# MatrixExpression Class
class MatrixExpression:
    """
    A class for a parsed, validated matrix expression that can be evaluated at any time t.
    """

    def __init__(self, text: str) -> None:
        """
        Initialize the MatrixExpression object.

        Args:
            text (str): The expression text.

        Returns:
            None
        """

        self.text: str = text
        source: _Source = _Source(text)

        # Parse with Python's grammar, then accept only the whitelisted node types
        body: ast.AST = source.parse()
        if not isinstance(body, ast.List) or not body.elts:
            raise source.error("expected a non-empty list of rows", source.position(body))

        self.__rows: list[list[ast.AST]] = []
        for row in body.elts:
            if not isinstance(row, ast.List) or not row.elts:
                raise source.error("expected a non-empty list of entries", source.position(row))
            self.__rows.append(row.elts)

        if len({len(row) for row in self.__rows}) != 1:
            raise source.error("rows have different lengths", source.position(body))

        self.depends_on_time: bool = False
        for row in self.__rows:
            for entry in row:
                self.depends_on_time = source.validate(entry) or self.depends_on_time

    @classmethod
    def from_entries(cls, literal: list[list[Any]]) -> "MatrixExpression":
        """
        Build a matrix expression from a literal whose entries are numbers or scalar expression strings.

        Each string entry is parsed on its own, so errors carry the entry's row, column and
        the position inside that entry.

        Args:
            literal (list[list[Any]]): A non-empty list of equal-length, non-empty rows.

        Returns:
            MatrixExpression: The validated expression.
        """

        if not isinstance(literal, list) or not literal or not all(isinstance(row, list) and row for row in literal):
            raise ExpressionParseError("a matrix literal must be a non-empty list of non-empty rows", 0)

        if len({len(row) for row in literal}) != 1:
            raise ExpressionParseError("rows have different lengths", 0)

        expression: MatrixExpression = cls.__new__(cls)
        expression.text = json.dumps(literal)
        expression.depends_on_time = False
        expression.__rows = []

        for i, row in enumerate(literal, start = 1):
            nodes: list[ast.AST] = []
            for j, entry in enumerate(row, start = 1):
                if isinstance(entry, bool) or not isinstance(entry, (int, float, str)):
                    raise ExpressionParseError(f"unsupported literal {entry!r}", 0, i, j)

                if isinstance(entry, str):
                    source: _Source = _Source(entry, i, j)
                    node: ast.AST = source.parse()
                    expression.depends_on_time = source.validate(node) or expression.depends_on_time
                else:
                    node = ast.Constant(float(entry))
                nodes.append(node)
            expression.__rows.append(nodes)

        return expression

    def __str__(self) -> str:
        return f"MatrixExpression('{self.text}')"

    def __repr__(self) -> str:
        return self.__str__()

    def __call__(self, t: float = 0.0) -> np.ndarray:
        return self.evaluate(t)

    @property
    def shape(self) -> tuple[int, int]:
        """
        Returns the shape of the matrix.
        """
        return len(self.__rows), len(self.__rows[0])

    def evaluate(self, t: float = 0.0) -> np.ndarray:
        """
        Evaluate the matrix at time t.

        Args:
            t (float) = 0.0: The time.

        Returns:
            np.ndarray: The matrix.
        """

        return np.array([[_evaluate(entry, t) for entry in row] for row in self.__rows], dtype = float)

def parse_matrix_expression(text: str, t: float = 0.0) -> np.ndarray:
    """
    Parse a whitelisted matrix expression and evaluate it at time t.

    Args:
        text (str): The expression, e.g. "[[-1,0],[-2*cos(t),0]]".
        t (float) = 0.0: The time.

    Returns:
        np.ndarray: The matrix.
    """

    return MatrixExpression(text).evaluate(t)

def serialize_matrix(A: Any) -> str:
    """
    Serialize a numeric matrix as an expression literal with shortest round-trip floats.

    Args:
        A (Any): The matrix.

    Returns:
        str: Text such as "[[1.0,-2.5],[0.0,3.0]]" that parses back to the same floats.
    """

    rows: np.ndarray = np.atleast_2d(np.asarray(A, dtype = float))
    return "[" + ",".join("[" + ",".join(repr(float(value)) for value in row) + "]" for row in rows) + "]"

def entry_matrix(literal: Any) -> MatrixExpression:
    """
    Build t -> A(t) from a JSON matrix literal whose entries are numbers or expression strings.

    Args:
        literal (Any): A list of rows; each entry a number or a scalar expression such as "-2*cos(t)".
            A whole-matrix expression string is accepted as well.

    Returns:
        MatrixExpression: The matrix callback.
    """

    if isinstance(literal, str):
        return MatrixExpression(literal)

    return MatrixExpression.from_entries(literal)
