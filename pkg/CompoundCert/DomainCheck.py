"""
CompoundCert.DomainCheck
~~~~~~~~~~~~

This module implements the DomainCheck Tool for validating the inputs of the package.
"""

# Import the required modules
import numpy as np
from typing import Any

# Exception Classes
class DomainError(Exception):
    """
    An exception for inputs outside the domain of an operation.
    """

    def __init__(self, message: str) -> None:
        """
        Initialize the DomainError object.

        Args:
            message (str): The error message.
        """

        self.message: str = message
        super().__init__(self.message)

class UnsupportedDomainError(DomainError):
    """
    An exception for inputs that are valid matrices but fall outside what the package will compute,
    e.g. a real matrix power of a matrix with an eigenvalue on the closed negative real axis.
    """

    def __init__(self, message: str, value: Any = None) -> None:
        """
        Initialize the UnsupportedDomainError object.

        Args:
            message (str): The error message.
            value (Any) = None: The offending value (for example an eigenvalue).
        """

        self.value: Any = value
        super().__init__(message)

# DomainCheck Class
class DomainCheck:
    """
    A class for checking the inputs of the numerical operations.
    """

    RAISE_ERROR: bool = True

    @staticmethod
    def _fail(message: str) -> bool:
        """
        Raise a DomainError, or return False when RAISE_ERROR is off.
        """

        if DomainCheck.RAISE_ERROR:
            raise DomainError(message)

        return False

    @staticmethod
    def as_matrix(A: Any, name: str = "A") -> np.ndarray:
        """
        Convert the input to a finite 2-D float64 array (the dense matrix carrier).

        Args:
            A (Any): The matrix-like input.
            name (str) = "A": The name used in error messages.

        Returns:
            np.ndarray: The matrix as a float64 array of shape (rows, cols).
        """

        # Convert to a float64 array
        try:
            matrix: np.ndarray = np.array(A, dtype = np.float64)
        except (TypeError, ValueError) as exc:
            raise DomainError(f"{name} is not a real matrix: {exc}")

        # Promote scalars, reject anything that is not 2-D
        if matrix.ndim == 0:
            matrix = matrix.reshape(1, 1)

        if matrix.ndim != 2 or matrix.shape[0] == 0 or matrix.shape[1] == 0:
            raise DomainError(f"{name} must be a non-empty 2-D matrix, got shape {matrix.shape}")

        # All entries must be finite on construction
        if not np.all(np.isfinite(matrix)):
            raise DomainError(f"{name} contains non-finite entries")

        return matrix

    @staticmethod
    def as_vector(x: Any, name: str = "x") -> np.ndarray:
        """
        Convert the input to a finite, non-empty 1-D float64 array.

        Args:
            x (Any): The vector-like input.
            name (str) = "x": The name used in error messages.

        Returns:
            np.ndarray: The vector.
        """

        try:
            vector: np.ndarray = np.array(x, dtype = np.float64).reshape(-1)
        except (TypeError, ValueError) as exc:
            raise DomainError(f"{name} is not a real vector: {exc}")

        if vector.size == 0:
            raise DomainError(f"{name} must be non-empty")

        if not np.all(np.isfinite(vector)):
            raise DomainError(f"{name} contains non-finite entries")

        return vector

    @staticmethod
    def check_square(A: np.ndarray, name: str = "A") -> bool:
        """
        Check that a matrix is square.

        Args:
            A (np.ndarray): The matrix.
            name (str) = "A": The name used in error messages.

        Returns:
            bool: True if the matrix is square.
        """

        if A.shape[0] != A.shape[1]:
            return DomainCheck._fail(f"{name} must be square, got shape {A.shape}")

        return True

    @staticmethod
    def check_order(k: int, low: int, high: int, name: str = "k") -> bool:
        """
        Check that an integer order lies in [low, high].

        Args:
            k (int): The order.
            low (int): The smallest allowed value.
            high (int): The largest allowed value.
            name (str) = "k": The name used in error messages.

        Returns:
            bool: True if the order is in range.
        """

        # Reject booleans and non-integral values
        if isinstance(k, bool) or int(k) != k:
            return DomainCheck._fail(f"{name} must be an integer, got {k!r}")

        if not low <= int(k) <= high:
            return DomainCheck._fail(f"{name}={k} is out of range [{low}, {high}]")

        return True

    @staticmethod
    def check_dimension(n: int, limit: int, name: str = "n") -> bool:
        """
        Check that an ambient dimension is positive and within the configured cap.

        Args:
            n (int): The dimension.
            limit (int): The cap.
            name (str) = "n": The name used in error messages.

        Returns:
            bool: True if the dimension is accepted.
        """

        if n < 1:
            return DomainCheck._fail(f"{name} must be positive, got {n}")

        if n > limit:
            return DomainCheck._fail(f"{name}={n} exceeds the dimension cap {limit}")

        return True

    @staticmethod
    def check_positive(value: float, name: str) -> bool:
        """
        Check that a scalar is strictly positive.

        Args:
            value (float): The scalar.
            name (str): The name used in error messages.

        Returns:
            bool: True if the scalar is positive.
        """

        if not value > 0:
            return DomainCheck._fail(f"{name} must be positive, got {value}")

        return True
