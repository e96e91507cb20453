"""
CompoundCert.SignVariation
~~~~~~~~~~~~

This module implements the sign-variation counts s- and s+, the cones P^k_- and P^k_+,
and the sign-regularity tests of order k.
"""

# Import the required modules
import numpy as np
from typing import Any, TypeAlias, Literal
from CompoundCert.Compound import mult_compound
from CompoundCert.Configuration import Configuration
from CompoundCert.DomainCheck import DomainCheck
from CompoundCert.Debugger import show_debug

# Type Alias
_ConeVariant: TypeAlias = Literal['closed', 'open']
_SignRegularity: TypeAlias = Literal['NonNegative', 'NonPositive', 'Positive', 'Negative', 'Mixed']

class ConeVariant:
    """
    A class selecting the cone: the closed P^k_- (by s-) or the open P^k_+ (by s+).
    """

    # Constants
    CLOSED: _ConeVariant = 'closed'
    OPEN: _ConeVariant = 'open'

class SignRegularity:
    """
    A class naming the common sign of all k-minors of a matrix.
    """

    # Constants
    NON_NEGATIVE: _SignRegularity = 'NonNegative'
    NON_POSITIVE: _SignRegularity = 'NonPositive'
    POSITIVE: _SignRegularity = 'Positive'
    NEGATIVE: _SignRegularity = 'Negative'
    MIXED: _SignRegularity = 'Mixed'

# SignVariationResult Class
class SignVariationResult:
    """
    A class for the pair (s-, s+) of a vector.
    """

    def __init__(self, s_minus: int, s_plus: int) -> None:
        """
        Initialize the SignVariationResult object.

        Args:
            s_minus (int): The number of sign changes after deleting zeros.
            s_plus (int): The largest number of sign changes over all +-1 fills of the zeros.

        Returns:
            None
        """

        self.s_minus: int = s_minus
        self.s_plus: int = s_plus

    def __str__(self) -> str:
        return f"SignVariationResult(s_minus={self.s_minus}, s_plus={self.s_plus})"

    def __repr__(self) -> str:
        return self.__str__()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignVariationResult):
            return NotImplemented
        return (self.s_minus, self.s_plus) == (other.s_minus, other.s_plus)

    def to_tuple(self) -> tuple[int, int]:
        """
        Returns (s_minus, s_plus).
        """
        return self.s_minus, self.s_plus

def sign_vector(x: Any, tol: float = None) -> np.ndarray:
    """
    Compute the tolerance-aware sign pattern of a vector.

    Args:
        x (Any): The non-empty vector.
        tol (float) = None: Entries with |x_i| <= tol count as zero. Defaults to
            Configuration.ZERO_RELATIVE_TOL times the infinity norm of x.

    Returns:
        np.ndarray: An integer array of -1, 0 and +1.
    """

    x = DomainCheck.as_vector(x)

    if tol is None:
        tol = Configuration.ZERO_RELATIVE_TOL * float(np.max(np.abs(x)))

    signs: np.ndarray = np.sign(x).astype(int)
    signs[np.abs(x) <= tol] = 0

    return signs

def s_minus(x: Any, tol: float = None) -> int:
    """
    Count the sign changes of x after deleting its zero entries.

    Args:
        x (Any): The non-empty vector.
        tol (float) = None: The zero tolerance (see sign_vector).

    Returns:
        int: s-(x); 0 for the zero vector.
    """

    signs: np.ndarray = sign_vector(x, tol)
    nonzero: np.ndarray = signs[signs != 0]

    return int(np.count_nonzero(nonzero[1:] != nonzero[:-1]))

def s_plus(x: Any, tol: float = None) -> int:
    """
    Compute the largest number of sign changes over all +-1 fills of the zero entries of x.

    Runs a dynamic program over the sign of the last entry, so it is exact and linear in len(x).

    Args:
        x (Any): The non-empty vector.
        tol (float) = None: The zero tolerance (see sign_vector).

    Returns:
        int: s+(x); n - 1 for the zero vector of length n.
    """

    signs: np.ndarray = sign_vector(x, tol)

    # best[sign] = most changes of a fill of the prefix that ends with that sign
    unreachable: float = -np.inf
    best: dict[int, float] = {-1: unreachable, 1: unreachable}
    for sign in ((-1, 1) if signs[0] == 0 else (int(signs[0]),)):
        best[sign] = 0

    for value in signs[1:]:
        choices: tuple[int, ...] = (-1, 1) if value == 0 else (int(value),)
        updated: dict[int, float] = {-1: unreachable, 1: unreachable}

        for sign in choices:
            updated[sign] = max(best[sign], best[-sign] + 1)

        best = updated

    return int(max(best.values()))

def sign_variations(x: Any, tol: float = None) -> SignVariationResult:
    """
    Compute s- and s+ of a vector together.

    Args:
        x (Any): The non-empty vector.
        tol (float) = None: The zero tolerance (see sign_vector).

    Returns:
        SignVariationResult: The pair of counts.
    """

    return SignVariationResult(s_minus(x, tol), s_plus(x, tol))

def in_cone(x: Any, k: int, variant: _ConeVariant = 'closed', tol: float = None) -> bool:
    """
    Test membership in P^k_- = {s-(x) <= k-1} (closed) or P^k_+ = {s+(x) <= k-1} (open).

    Args:
        x (Any): The vector.
        k (int): The order, 1 <= k <= n.
        variant (_ConeVariant) = 'closed': 'closed' for P^k_-, 'open' for P^k_+.
        tol (float) = None: The zero tolerance (see sign_vector).

    Returns:
        bool: True if x lies in the cone.
    """

    x = DomainCheck.as_vector(x)
    DomainCheck.check_order(k, 1, x.size)

    if variant == ConeVariant.CLOSED:
        return s_minus(x, tol) <= k - 1

    if variant == ConeVariant.OPEN:
        return s_plus(x, tol) <= k - 1

    return DomainCheck._fail(f"unknown cone variant {variant!r}")

def sign_regular_order(A: Any, k: int, strict: bool = False, tol: float = None) -> _SignRegularity:
    """
    Classify the common sign of all k-minors of A.

    Without strict, minors in [-tol, inf) give NonNegative and minors in (-inf, tol] give NonPositive.
    With strict, all minors > tol give Positive and all < -tol give Negative; when the strict test
    fails the weak class is returned instead.

    Args:
        A (Any): The matrix (rectangular allowed).
        k (int): The order, 1 <= k <= min dimensions.
        strict (bool) = False: Whether to test strict sign-regularity.
        tol (float) = None: The band around zero. Defaults to
            Configuration.METZLER_RELATIVE_TOL times the largest minor magnitude.

    Returns:
        _SignRegularity: NonNegative, NonPositive, Positive, Negative or Mixed.
    """

    A = DomainCheck.as_matrix(A)

    if max(A.shape) > Configuration.SIGN_REGULAR_WARN_DIMENSION:
        show_debug(f"Sign-regularity of a {A.shape[0]}x{A.shape[1]} matrix enumerates every {k}-minor, this can be slow", type = 'WARNING', importance = 'HIGH')

    minors: np.ndarray = mult_compound(A, k).matrix
    if tol is None:
        tol = Configuration.METZLER_RELATIVE_TOL * float(np.max(np.abs(minors)))

    if strict:
        if np.all(minors > tol):
            return SignRegularity.POSITIVE
        if np.all(minors < -tol):
            return SignRegularity.NEGATIVE

    if np.all(minors >= -tol):
        return SignRegularity.NON_NEGATIVE
    if np.all(minors <= tol):
        return SignRegularity.NON_POSITIVE

    return SignRegularity.MIXED

def competitive_transform(A: Any, tol: float = None) -> tuple[np.ndarray, bool]:
    """
    Change coordinates with T = diag(1, -1, 1, ...) and test whether -T A T^-1 is Metzler.

    This holds exactly when A has the sign pattern that makes A^[n-1] Metzler, so a (n-1)-positive
    system is competitive in the new coordinates.

    Args:
        A (Any): The square matrix.
        tol (float) = None: The Metzler tolerance. Defaults to
            Configuration.METZLER_RELATIVE_TOL times max |a_ij|.

    Returns:
        tuple[np.ndarray, bool]: The matrix T and whether -T A T^-1 is Metzler.
    """

    A = DomainCheck.as_matrix(A)
    DomainCheck.check_square(A)

    n: int = A.shape[0]
    T: np.ndarray = np.diag([(-1.0) ** i for i in range(n)])

    if tol is None:
        tol = Configuration.METZLER_RELATIVE_TOL * float(np.max(np.abs(A)))

    # T is its own inverse
    transformed: np.ndarray = -T @ A @ T
    off_diagonal: np.ndarray = transformed[~np.eye(n, dtype = bool)]

    return T, bool(np.all(off_diagonal >= -tol))
