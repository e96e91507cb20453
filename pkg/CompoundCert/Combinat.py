"""
CompoundCert.Combinat
~~~~~~~~~~~~

This module implements the lexicographic enumeration, ranking and unranking of the index sets Q(k,n)
that label the rows and columns of compound matrices.
"""

# Import the required modules
import math
from itertools import combinations
from typing import Iterable, Iterator
from CompoundCert.Configuration import Configuration
from CompoundCert.DomainCheck import DomainCheck, DomainError

# Largest value a rank may take so that it still fits a signed 64-bit integer
_INT64_MAX: int = 2 ** 63 - 1

def binomial(n: int, k: int) -> int:
    """
    Compute C(n,k) with the dimension cap and an overflow guard.

    Args:
        n (int): The ambient dimension.
        k (int): The cardinality.

    Returns:
        int: The binomial coefficient.
    """

    # Enforce the dimension cap
    DomainCheck.check_dimension(n, Configuration.MAX_DIMENSION)
    DomainCheck.check_order(k, 0, n)

    # Compute the coefficient exactly, then make sure it fits the storage type
    value: int = math.comb(n, k)
    if value > _INT64_MAX:
        raise DomainError(f"C({n},{k}) overflows a 64-bit index")

    return value

# IndexSet Class
class IndexSet:
    """
    A class for a strictly increasing k-tuple of 1-based indices drawn from {1, ..., n}.
    """

    def __init__(self, elements: Iterable[int], n: int) -> None:
        """
        Initialize the IndexSet object.

        Args:
            elements (Iterable[int]): The 1-based indices, strictly increasing.
            n (int): The ambient dimension.

        Returns:
            None
        """

        self.__elements: tuple[int, ...] = tuple(int(e) for e in elements)
        self.__n: int = int(n)

        # Validate the set
        DomainCheck.check_dimension(self.__n, Configuration.MAX_DIMENSION)

        if not self.__elements:
            raise DomainError("an index set needs at least one element")

        if any(b <= a for a, b in zip(self.__elements, self.__elements[1:])):
            raise DomainError(f"index set {list(self.__elements)} is not strictly increasing")

        if self.__elements[0] < 1 or self.__elements[-1] > self.__n:
            raise DomainError(f"index set {list(self.__elements)} leaves the range 1..{self.__n}")

    def __str__(self) -> str:
        return "{" + ",".join(str(e) for e in self.__elements) + "}"

    def __repr__(self) -> str:
        return f"IndexSet({list(self.__elements)}, n={self.__n})"

    def __len__(self) -> int:
        return len(self.__elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.__elements)

    def __getitem__(self, index: int) -> int:
        return self.__elements[index]

    def __contains__(self, value: int) -> bool:
        return value in self.__elements

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IndexSet):
            return NotImplemented
        return self.__elements == other.elements and self.__n == other.n

    def __lt__(self, other: "IndexSet") -> bool:
        return self.__elements < other.elements

    def __hash__(self) -> int:
        return hash((self.__elements, self.__n))

    @property
    def elements(self) -> tuple[int, ...]:
        """
        Returns the 1-based indices.
        """
        return self.__elements

    @property
    def n(self) -> int:
        """
        Returns the ambient dimension.
        """
        return self.__n

    @property
    def k(self) -> int:
        """
        Returns the cardinality.
        """
        return len(self.__elements)

    def rank(self) -> int:
        """
        Returns the 0-based lexicographic position of the set in Q(k,n).
        """
        return rank(self)

    def complement(self) -> list[int]:
        """
        Returns the indices of {1, ..., n} that are not in the set, in increasing order.
        """
        members: set[int] = set(self.__elements)
        return [i for i in range(1, self.__n + 1) if i not in members]

    def to_list(self) -> list[int]:
        """
        Returns the elements as a plain list (for JSON reports).
        """
        return list(self.__elements)

def lex_sequences(k: int, n: int) -> list[IndexSet]:
    """
    Enumerate Q(k,n) in lexicographic order.

    Args:
        k (int): The cardinality, 1 <= k <= n.
        n (int): The ambient dimension.

    Returns:
        list[IndexSet]: All C(n,k) index sets in strict lexicographic order.
    """

    # Validate the parameters
    DomainCheck.check_dimension(n, Configuration.MAX_DIMENSION)
    DomainCheck.check_order(k, 1, n)

    # itertools.combinations emits the tuples in lexicographic order
    return [IndexSet(c, n) for c in combinations(range(1, n + 1), k)]

def rank(s: IndexSet) -> int:
    """
    Compute the 0-based lexicographic rank of an index set.

    Args:
        s (IndexSet): The index set.

    Returns:
        int: The position of s in lex_sequences(s.k, s.n).
    """

    n: int = s.n
    k: int = s.k
    position: int = 0
    previous: int = 0

    # Count the sets that start with a smaller value at each position
    for p, element in enumerate(s.elements, start = 1):
        for v in range(previous + 1, element):
            position += math.comb(n - v, k - p)
        previous = element

    return position

def unrank(r: int, k: int, n: int) -> IndexSet:
    """
    Invert rank: return the index set at a given lexicographic position.

    Args:
        r (int): The rank, 0 <= r < C(n,k).
        k (int): The cardinality.
        n (int): The ambient dimension.

    Returns:
        IndexSet: The index set with rank r.
    """

    # Validate the parameters
    total: int = binomial(n, k)
    DomainCheck.check_order(k, 1, n)

    if isinstance(r, bool) or int(r) != r or not 0 <= r < total:
        raise DomainError(f"rank {r} is out of range [0, {total})")

    r = int(r)
    elements: list[int] = []
    v: int = 1

    # Greedily skip whole blocks of sets sharing a prefix
    for p in range(1, k + 1):
        while True:
            block: int = math.comb(n - v, k - p)
            if r < block:
                break
            r -= block
            v += 1
        elements.append(v)
        v += 1

    return IndexSet(elements, n)
