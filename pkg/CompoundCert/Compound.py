"""
CompoundCert.Compound
~~~~~~~~~~~~

This module implements the multiplicative, additive and alpha compounds of dense real matrices,
together with the Kronecker product and Kronecker sum they are built from.
"""

# Import the required modules
import math
import numpy as np
from scipy.linalg import fractional_matrix_power
from functools import lru_cache
from typing import Any, TypeAlias, Literal, Sequence
from CompoundCert.Combinat import IndexSet, lex_sequences, binomial
from CompoundCert.Configuration import Configuration
from CompoundCert.DomainCheck import DomainCheck, DomainError, UnsupportedDomainError
from CompoundCert.Debugger import show_debug

# Type Alias
_CompoundKind: TypeAlias = Literal['multiplicative', 'additive']

class CompoundKind:
    """
    A class selecting the kind of a compound matrix.
    """

    # Constants
    MULTIPLICATIVE: _CompoundKind = 'multiplicative'
    ADDITIVE: _CompoundKind = 'additive'

@lru_cache(maxsize = 256)
def _labels(k: int, n: int) -> tuple[tuple[int, ...], ...]:
    """
    Cached Q(k,n) as plain tuples.
    """
    return tuple(s.elements for s in lex_sequences(k, n))

@lru_cache(maxsize = 256)
def _label_ranks(k: int, n: int) -> dict[tuple[int, ...], int]:
    """
    Cached map from an index tuple to its lexicographic rank.
    """
    return {labels: position for position, labels in enumerate(_labels(k, n))}

# CompoundMatrix Class
class CompoundMatrix:
    """
    A class for a compound matrix together with the data it was built from.
    """

    def __init__(self, matrix: np.ndarray, base_rows: int, base_cols: int, order: int, kind: _CompoundKind) -> None:
        """
        Initialize the CompoundMatrix object.

        Args:
            matrix (np.ndarray): The compound, of shape C(n,k) x C(m,k).
            base_rows (int): The row count n of the base matrix.
            base_cols (int): The column count m of the base matrix.
            order (int): The order k.
            kind (_CompoundKind): 'multiplicative' or 'additive'.

        Returns:
            None
        """

        self.matrix: np.ndarray = matrix
        self.base_rows: int = base_rows
        self.base_cols: int = base_cols
        self.order: int = order
        self.kind: _CompoundKind = kind

        # The shape must follow from the base dimensions
        if matrix.shape != (binomial(base_rows, order), binomial(base_cols, order)):
            raise DomainError(f"compound shape {matrix.shape} does not match C({base_rows},{order}) x C({base_cols},{order})")

        if kind == CompoundKind.ADDITIVE and base_rows != base_cols:
            raise DomainError("an additive compound needs a square base matrix")

    def __str__(self) -> str:
        return f"CompoundMatrix(kind='{self.kind}', order={self.order}, base=({self.base_rows}x{self.base_cols}), shape={self.matrix.shape})"

    def __repr__(self) -> str:
        return self.__str__()

    def __array__(self, dtype: Any = None, copy: Any = None) -> np.ndarray:
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    @property
    def shape(self) -> tuple[int, int]:
        """
        Returns the shape of the compound.
        """
        return self.matrix.shape

    @property
    def row_sets(self) -> list[IndexSet]:
        """
        Returns the row labels Q(k,n).
        """
        return lex_sequences(self.order, self.base_rows)

    @property
    def col_sets(self) -> list[IndexSet]:
        """
        Returns the column labels Q(k,m).
        """
        return lex_sequences(self.order, self.base_cols)

    def entry(self, alpha: IndexSet | Sequence[int], beta: IndexSet | Sequence[int]) -> float:
        """
        Read the entry labelled by a pair of index sets.

        Args:
            alpha (IndexSet | Sequence[int]): The row index set.
            beta (IndexSet | Sequence[int]): The column index set.

        Returns:
            float: The entry of the compound at (rank(alpha), rank(beta)).
        """

        row: int = _label_ranks(self.order, self.base_rows)[tuple(alpha)]
        col: int = _label_ranks(self.order, self.base_cols)[tuple(beta)]

        return float(self.matrix[row, col])

def _index_array(s: IndexSet | Sequence[int], limit: int, name: str) -> np.ndarray:
    """
    Turn a 1-based index set into a 0-based numpy index array, checking the bounds.
    """

    indices: np.ndarray = np.array(list(s), dtype = int) - 1

    if indices.size == 0 or indices.min() < 0 or indices.max() >= limit:
        raise DomainError(f"{name}={list(s)} is outside 1..{limit}")

    if np.any(np.diff(indices) <= 0):
        raise DomainError(f"{name}={list(s)} is not strictly increasing")

    return indices

def minor(A: Any, alpha: IndexSet | Sequence[int], beta: IndexSet | Sequence[int]) -> float:
    """
    Compute the minor A[alpha|beta], the determinant of the submatrix with rows alpha and columns beta.

    The determinant is computed by LU factorisation with partial pivoting (LAPACK getrf via numpy).

    Args:
        A (Any): The matrix.
        alpha (IndexSet | Sequence[int]): The 1-based row indices.
        beta (IndexSet | Sequence[int]): The 1-based column indices.

    Returns:
        float: The minor.
    """

    A = DomainCheck.as_matrix(A)

    # Both index sets need the same cardinality
    if len(alpha) != len(beta):
        raise DomainError(f"|alpha|={len(alpha)} and |beta|={len(beta)} differ")

    rows: np.ndarray = _index_array(alpha, A.shape[0], "alpha")
    cols: np.ndarray = _index_array(beta, A.shape[1], "beta")

    return float(np.linalg.det(A[np.ix_(rows, cols)]))

def det_cofactor(A: Any) -> float:
    """
    Determinant by cofactor expansion along the first row.

    Exponential cost; kept as an independent oracle for tests and the selftest.

    Args:
        A (Any): The square matrix.

    Returns:
        float: The determinant.
    """

    A = DomainCheck.as_matrix(A)
    DomainCheck.check_square(A)

    n: int = A.shape[0]
    if n == 1:
        return float(A[0, 0])

    if n == 2:
        return float(A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0])

    total: float = 0.0
    for j in range(n):
        if A[0, j] == 0.0:
            continue
        sub: np.ndarray = np.delete(A[1:], j, axis = 1)
        total += (-1) ** j * A[0, j] * det_cofactor(sub)

    return total

def mult_compound(A: Any, k: int) -> CompoundMatrix:
    """
    Compute the k-multiplicative compound A^(k), the matrix of all k x k minors.

    Args:
        A (Any): The n x m matrix.
        k (int): The order, 1 <= k <= min(n, m).

    Returns:
        CompoundMatrix: The C(n,k) x C(m,k) compound, rows and columns in lexicographic order.
    """

    A = DomainCheck.as_matrix(A)
    n, m = A.shape

    # Validate the order
    DomainCheck.check_order(k, 1, min(n, m))

    # k = 1 is A itself
    if k == 1:
        return CompoundMatrix(A.copy(), n, m, 1, CompoundKind.MULTIPLICATIVE)

    # Gather every k x k submatrix into one stack, then take all determinants in a single batched LU
    rows: np.ndarray = np.array(_labels(k, n), dtype = int) - 1
    cols: np.ndarray = np.array(_labels(k, m), dtype = int) - 1
    stack: np.ndarray = A[rows[:, None, :, None], cols[None, :, None, :]]

    show_debug(f"Computing {rows.shape[0] * cols.shape[0]} minors of order {k}", importance = 'LOW')

    return CompoundMatrix(np.linalg.det(stack), n, m, k, CompoundKind.MULTIPLICATIVE)

def add_compound(A: Any, k: int) -> CompoundMatrix:
    """
    Compute the k-additive compound A^[k] entrywise from the explicit index formula.

    Entry (alpha, beta) is the sum of the diagonal entries a_ii over alpha when alpha = beta,
    (-1)^(l+m) a_{i_l j_m} when alpha and beta agree except for one index i_l (in alpha) and j_m (in beta),
    and 0 otherwise.

    Args:
        A (Any): The square n x n matrix.
        k (int): The order, 1 <= k <= n.

    Returns:
        CompoundMatrix: The C(n,k) x C(n,k) additive compound.
    """

    A = DomainCheck.as_matrix(A)
    DomainCheck.check_square(A)

    n: int = A.shape[0]
    DomainCheck.check_order(k, 1, n)

    # k = 1 is A itself
    if k == 1:
        return CompoundMatrix(A.copy(), n, n, 1, CompoundKind.ADDITIVE)

    labels: tuple[tuple[int, ...], ...] = _labels(k, n)
    ranks: dict[tuple[int, ...], int] = _label_ranks(k, n)
    result: np.ndarray = np.zeros((len(labels), len(labels)))

    for row, alpha in enumerate(labels):
        # Diagonal: sum of the diagonal entries picked by alpha
        diagonal: float = 0.0
        for i in alpha:
            diagonal += A[i - 1, i - 1]
        result[row, row] = diagonal

        # Off-diagonal: replace one index i_l of alpha by some j outside alpha
        members: set[int] = set(alpha)
        for l, i in enumerate(alpha):
            for j in range(1, n + 1):
                if j in members or A[i - 1, j - 1] == 0.0:
                    continue

                beta: tuple[int, ...] = tuple(sorted(alpha[:l] + alpha[l + 1:] + (j,)))
                m: int = beta.index(j)

                # (-1)^((l+1)+(m+1)) with 0-based positions
                result[row, ranks[beta]] = (-1) ** (l + m) * A[i - 1, j - 1]

    return CompoundMatrix(result, n, n, k, CompoundKind.ADDITIVE)

def add_compound_oracle(A: Any, k: int, h: float = None) -> CompoundMatrix:
    """
    Compute A^[k] independently as the derivative at 0 of (I + eps A)^(k).

    Every entry of (I + eps A)^(k) is a polynomial of degree <= k in eps, so sampling it at the
    k+1 nodes eps = h, 2h, ..., (k+1)h and interpolating recovers the linear coefficient exactly
    up to rounding.

    Args:
        A (Any): The square n x n matrix.
        k (int): The order, 1 <= k <= n.
        h (float) = None: The node spacing. Defaults to 1/(k+1).

    Returns:
        CompoundMatrix: The C(n,k) x C(n,k) additive compound.
    """

    A = DomainCheck.as_matrix(A)
    DomainCheck.check_square(A)

    n: int = A.shape[0]
    DomainCheck.check_order(k, 1, n)

    h = 1.0 / (k + 1) if h is None else float(h)
    DomainCheck.check_positive(h, "h")

    # Nodes and the weights w with p'(0) = sum_i w_i p(eps_i) for any polynomial p of degree <= k
    nodes: np.ndarray = h * np.arange(1, k + 2)
    vandermonde: np.ndarray = np.vander(nodes, k + 1, increasing = True)
    weights: np.ndarray = np.linalg.solve(vandermonde.T, np.eye(k + 1)[1])

    identity: np.ndarray = np.eye(n)
    result: np.ndarray = np.zeros((binomial(n, k), binomial(n, k)))

    for eps, weight in zip(nodes, weights):
        result += weight * mult_compound(identity + eps * A, k).matrix

    return CompoundMatrix(result, n, n, k, CompoundKind.ADDITIVE)

def kron_product(A: Any, B: Any) -> np.ndarray:
    """
    Compute the Kronecker product A (x) B.

    Args:
        A (Any): The p x q matrix.
        B (Any): The r x s matrix.

    Returns:
        np.ndarray: The pr x qs Kronecker product.
    """

    return np.kron(DomainCheck.as_matrix(A, "A"), DomainCheck.as_matrix(B, "B"))

def kron_sum(A: Any, B: Any) -> np.ndarray:
    """
    Compute the Kronecker sum A (+) B = A (x) I_q + I_p (x) B.

    Args:
        A (Any): The square p x p matrix.
        B (Any): The square q x q matrix.

    Returns:
        np.ndarray: The pq x pq Kronecker sum.
    """

    A = DomainCheck.as_matrix(A, "A")
    B = DomainCheck.as_matrix(B, "B")
    DomainCheck.check_square(A, "A")
    DomainCheck.check_square(B, "B")

    return np.kron(A, np.eye(B.shape[0])) + np.kron(np.eye(A.shape[0]), B)

def split_alpha(alpha: float, n: int) -> tuple[int, float]:
    """
    Split a real order alpha in [1, n] into its integer part k and fractional part s.

    Args:
        alpha (float): The real order.
        n (int): The dimension.

    Returns:
        tuple[int, float]: (k, s) with alpha = k + s and 0 <= s < 1.
    """

    alpha = float(alpha)
    if not math.isfinite(alpha) or not 1.0 <= alpha <= n:
        raise DomainError(f"alpha={alpha} is out of range [1, {n}]")

    k: int = int(math.floor(alpha))
    return k, alpha - k

def alpha_add_compound(A: Any, alpha: float) -> np.ndarray:
    """
    Compute the alpha-additive compound A^[alpha] = ((1-s) A^[k]) (+) (s A^[k+1]) for alpha = k + s.

    An integral alpha returns the integer additive compound A^[k].

    Args:
        A (Any): The square n x n matrix.
        alpha (float): The real order, 1 <= alpha <= n.

    Returns:
        np.ndarray: The C(n,k) C(n,k+1) square matrix (C(n,k) for integral alpha).
    """

    A = DomainCheck.as_matrix(A)
    DomainCheck.check_square(A)

    k, s = split_alpha(alpha, A.shape[0])

    # Integral orders delegate to the integer compound
    if s == 0.0:
        return add_compound(A, k).matrix

    return kron_sum((1.0 - s) * add_compound(A, k).matrix, s * add_compound(A, k + 1).matrix)

def real_matrix_power(M: Any, p: float) -> np.ndarray:
    """
    Compute the principal real power M^p with scipy.linalg.fractional_matrix_power.

    Args:
        M (Any): The square matrix.
        p (float): The exponent.

    Returns:
        np.ndarray: The real matrix M^p.

    Raises:
        UnsupportedDomainError: If an eigenvalue lies on the closed negative real axis, or the result is not real.
    """

    M = DomainCheck.as_matrix(M, "M")
    DomainCheck.check_square(M, "M")

    eigenvalues: np.ndarray = np.linalg.eigvals(M)
    scale: float = max(1.0, float(np.max(np.abs(eigenvalues))))

    # The principal power is only real and unique off the closed negative real axis
    for value in eigenvalues:
        if abs(value.imag) <= 1e-12 * scale and value.real <= 1e-12 * scale:
            raise UnsupportedDomainError(
                f"real matrix power undefined: eigenvalue {complex(value)} lies on the closed negative real axis "
                "(only the principal branch off that axis is supported)",
                complex(value)
            )

    result: np.ndarray = np.asarray(fractional_matrix_power(M, p))
    if not np.all(np.isfinite(result)):
        raise UnsupportedDomainError(f"real matrix power M^{p} is not finite")

    if np.iscomplexobj(result):
        residue: float = float(np.max(np.abs(result.imag)))
        if residue > Configuration.POWER_IMAG_RELATIVE_TOL * max(1.0, float(np.max(np.abs(result.real)))):
            raise UnsupportedDomainError(f"real matrix power M^{p} has an imaginary part of size {residue:.3e}", residue)
        result = result.real

    return np.array(result, dtype = float)

def alpha_mult_compound(A: Any, alpha: float) -> np.ndarray:
    """
    Compute the alpha-multiplicative compound A^(alpha) = (A^(k))^(1-s) (x) (A^(k+1))^s for alpha = k + s.

    An integral alpha returns the integer multiplicative compound A^(k).

    Args:
        A (Any): The square, non-singular n x n matrix.
        alpha (float): The real order, 1 <= alpha <= n.

    Returns:
        np.ndarray: The C(n,k) C(n,k+1) square matrix (C(n,k) for integral alpha).
    """

    A = DomainCheck.as_matrix(A)
    DomainCheck.check_square(A)

    n: int = A.shape[0]
    k, s = split_alpha(alpha, n)

    # The alpha compound is only defined for non-singular matrices
    if np.linalg.matrix_rank(A) < n:
        raise DomainError("alpha_mult_compound needs a non-singular matrix")

    if s == 0.0:
        return mult_compound(A, k).matrix

    lower: np.ndarray = real_matrix_power(mult_compound(A, k).matrix, 1.0 - s)
    upper: np.ndarray = real_matrix_power(mult_compound(A, k + 1).matrix, s)

    return np.kron(lower, upper)
