import math

import pytest

from CompoundCert.Combinat import IndexSet, binomial, lex_sequences, rank, unrank
from CompoundCert.DomainCheck import DomainError


# ############################################################################
# BINOMIAL COEFFICIENTS
# ############################################################################

@pytest.mark.parametrize('n, k, expected', [
    (1, 1, 1),
    (4, 2, 6),
    (5, 0, 1),
    (10, 3, 120),
    (20, 10, 184756),
])
def test_binomial(n, k, expected):
    assert binomial(n, k) == expected


@pytest.mark.parametrize('n, k', [(21, 3), (0, 0), (4, 5), (4, -1)])
def test_binomial_rejects_out_of_domain(n, k):
    with pytest.raises(DomainError):
        binomial(n, k)


# ############################################################################
# INDEX SETS
# ############################################################################

def test_index_set_basics():
    s = IndexSet((1, 3, 4), 5)
    assert s.k == 3
    assert s.n == 5
    assert list(s) == [1, 3, 4]
    assert 3 in s and 2 not in s
    assert s.complement() == [2, 5]
    assert str(s) == "{1,3,4}"
    assert s == IndexSet([1, 3, 4], 5)
    assert s != IndexSet([1, 3, 4], 6)


@pytest.mark.parametrize('elements, n', [
    ((), 3),
    ((2, 1), 3),
    ((1, 1), 3),
    ((0, 2), 3),
    ((1, 4), 3),
])
def test_index_set_validation(elements, n):
    with pytest.raises(DomainError):
        IndexSet(elements, n)


def test_lex_sequences_order():
    labels = [s.to_list() for s in lex_sequences(2, 4)]
    assert labels == [[1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]]


def test_lex_sequences_q23():
    assert [s.to_list() for s in lex_sequences(2, 3)] == [[1, 2], [1, 3], [2, 3]]


@pytest.mark.parametrize('k, n', [(1, 1), (1, 5), (3, 6), (4, 7), (7, 7)])
def test_lex_sequences_size_and_strict_order(k, n):
    sets = lex_sequences(k, n)
    assert len(sets) == math.comb(n, k)
    assert all(a < b for a, b in zip(sets, sets[1:]))


# ############################################################################
# RANK AND UNRANK
# ############################################################################

@pytest.mark.parametrize('k, n', [(1, 4), (2, 5), (3, 6), (5, 9)])
def test_rank_matches_enumeration(k, n):
    for position, s in enumerate(lex_sequences(k, n)):
        assert rank(s) == position
        assert s.rank() == position
        assert unrank(position, k, n) == s


def test_rank_of_known_set():
    assert IndexSet((1, 3), 3).rank() == 1
    assert IndexSet((2, 3, 4), 4).rank() == 3


@pytest.mark.parametrize('r', [-1, 6, 2.5, True])
def test_unrank_rejects_bad_rank(r):
    with pytest.raises(DomainError):
        unrank(r, 2, 4)
