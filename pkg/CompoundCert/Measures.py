"""
CompoundCert.Measures
~~~~~~~~~~~~

This module implements vector norms, induced matrix norms and matrix measures (logarithmic norms)
for the L1, L2 and LInf norms, together with the closed-form measures of additive compounds.
"""

# Import the required modules
import numpy as np
from typing import Any, TypeAlias, Literal
from CompoundCert.Combinat import lex_sequences
from CompoundCert.DomainCheck import DomainCheck, DomainError

# Type Alias
_MeasureKind: TypeAlias = Literal['L1', 'L2', 'LInf']

class MeasureKind:
    """
    A class selecting the norm (and therefore the induced measure).
    """

    # Constants
    L1: _MeasureKind = 'L1'
    L2: _MeasureKind = 'L2'
    LInf: _MeasureKind = 'LInf'

    # All kinds, in a fixed order
    ALL: tuple[_MeasureKind, ...] = ('L1', 'L2', 'LInf')

    @staticmethod
    def check(kind: str) -> _MeasureKind:
        """
        Validate a measure kind.

        Args:
            kind (str): The kind to validate.

        Returns:
            _MeasureKind: The kind.
        """

        if kind not in MeasureKind.ALL:
            raise DomainError(f"unknown measure kind {kind!r}, expected one of {', '.join(MeasureKind.ALL)}")

        return kind

# numpy norm orders for each kind
_ORDERS: dict[str, float] = {'L1': 1, 'L2': 2, 'LInf': np.inf}

def vector_norm(x: Any, kind: _MeasureKind) -> float:
    """
    Compute the L1, L2 or LInf norm of a vector.

    Args:
        x (Any): The non-empty vector.
        kind (_MeasureKind): The norm.

    Returns:
        float: The norm.
    """

    x = DomainCheck.as_vector(x)
    return float(np.linalg.norm(x, _ORDERS[MeasureKind.check(kind)]))

def matrix_norm(A: Any, kind: _MeasureKind) -> float:
    """
    Compute the induced matrix norm.

    L1 is the largest column abs-sum, L2 the largest singular value and LInf the largest row abs-sum.

    Args:
        A (Any): The matrix.
        kind (_MeasureKind): The norm.

    Returns:
        float: The induced norm.
    """

    A = DomainCheck.as_matrix(A)
    return float(np.linalg.norm(A, _ORDERS[MeasureKind.check(kind)]))

def measure(A: Any, kind: _MeasureKind) -> float:
    """
    Compute the matrix measure mu(A) induced by a norm.

    Args:
        A (Any): The square matrix.
        kind (_MeasureKind): The norm.

    Returns:
        float: mu_1 = max_j (a_jj + sum_{i != j} |a_ij|), mu_2 = lambda_max((A + A^T)/2)
            or mu_inf = max_i (a_ii + sum_{j != i} |a_ij|).
    """

    A = DomainCheck.as_matrix(A)
    DomainCheck.check_square(A)
    kind = MeasureKind.check(kind)

    if kind == MeasureKind.L2:
        return float(np.linalg.eigvalsh((A + A.T) / 2.0)[-1])

    # Off-diagonal magnitudes with the signed diagonal added back
    magnitudes: np.ndarray = np.abs(A)
    np.fill_diagonal(magnitudes, np.diag(A))

    axis: int = 0 if kind == MeasureKind.L1 else 1
    return float(np.max(magnitudes.sum(axis = axis)))

def compound_measure(A: Any, k: int, kind: _MeasureKind) -> float:
    """
    Compute mu(A^[k]) in closed form, without forming the additive compound.

    L1 maximises sum_{p in alpha} (a_pp + sum_{j not in alpha} |a_jp|) over alpha in Q(k,n), LInf is the
    row analogue and L2 is the sum of the k largest eigenvalues of (A + A^T)/2.

    Args:
        A (Any): The square n x n matrix.
        k (int): The order, 1 <= k <= n.
        kind (_MeasureKind): The norm on the compound space.

    Returns:
        float: The measure of the k-additive compound.
    """

    A = DomainCheck.as_matrix(A)
    DomainCheck.check_square(A)
    kind = MeasureKind.check(kind)

    n: int = A.shape[0]
    DomainCheck.check_order(k, 1, n)

    if kind == MeasureKind.L2:
        eigenvalues: np.ndarray = np.linalg.eigvalsh((A + A.T) / 2.0)
        return float(np.sum(eigenvalues[n - k:]))

    # k = n is the 1 x 1 compound [trace(A)]
    if k == n:
        return float(np.trace(A))

    # Work with columns for L1 and rows (columns of A^T) for LInf
    base: np.ndarray = A if kind == MeasureKind.L1 else A.T
    magnitudes: np.ndarray = np.abs(base)
    diagonal: np.ndarray = np.diag(base)

    best: float = -np.inf
    for s in lex_sequences(k, n):
        inside: list[int] = [i - 1 for i in s]
        outside: list[int] = [i - 1 for i in s.complement()]

        value: float = float(diagonal[inside].sum() + magnitudes[np.ix_(outside, inside)].sum())
        best = max(best, value)

    return best

def measure_limit(A: Any, kind: _MeasureKind, eps: float = 1e-6) -> float:
    """
    Evaluate the defining limit (||I + eps A|| - 1)/eps of the matrix measure at a finite eps.

    The error is first order in eps, so agreement with measure() is expected to about 1e-4 at eps = 1e-6.

    Args:
        A (Any): The square matrix.
        kind (_MeasureKind): The norm.
        eps (float) = 1e-6: The step.

    Returns:
        float: The finite-eps approximation of mu(A).
    """

    A = DomainCheck.as_matrix(A)
    DomainCheck.check_square(A)
    DomainCheck.check_positive(eps, "eps")

    return (matrix_norm(np.eye(A.shape[0]) + eps * A, kind) - 1.0) / eps

def coppel_bound(eta: float, t: Any) -> Any:
    """
    The decay envelope exp(-eta t) that bounds ||Phi^(k)(t)|| when mu(A^[k]) <= -eta.

    Args:
        eta (float): The contraction margin.
        t (Any): A time or an array of times.

    Returns:
        Any: exp(-eta t), with the shape of t.
    """

    return np.exp(-float(eta) * np.asarray(t, dtype = float))
