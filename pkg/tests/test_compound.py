import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from scipy.linalg import fractional_matrix_power

from CompoundCert.Compound import (
    CompoundMatrix, add_compound, add_compound_oracle, alpha_add_compound, alpha_mult_compound,
    det_cofactor, kron_product, kron_sum, minor, mult_compound, real_matrix_power, split_alpha
)
from CompoundCert.DomainCheck import DomainError, UnsupportedDomainError
from CompoundCert.Systems import EXAMPLE8_MATRIX, thomas_system


# ############################################################################
# MINORS
# ############################################################################

def test_minor_matches_cofactor_expansion(rng):
    A = rng.normal(size=(5, 5))
    assert minor(A, (1, 2, 3, 4, 5), (1, 2, 3, 4, 5)) == pytest.approx(det_cofactor(A), rel=1e-10)
    assert minor(A, (2, 4), (1, 5)) == pytest.approx(A[1, 0] * A[3, 4] - A[1, 4] * A[3, 0], rel=1e-12)


@pytest.mark.parametrize('alpha, beta', [
    ((1, 2), (1,)),
    ((2, 1), (1, 2)),
    ((1, 4), (1, 2)),
])
def test_minor_rejects_bad_index_sets(alpha, beta):
    with pytest.raises(DomainError):
        minor(np.eye(3), alpha, beta)


# ############################################################################
# MULTIPLICATIVE COMPOUND
# ############################################################################

def test_mult_compound_of_order_one_is_the_matrix(rng):
    A = rng.normal(size=(3, 4))
    assert_array_equal(mult_compound(A, 1).matrix, A)


def test_mult_compound_rectangular_shape(rng):
    compound = mult_compound(rng.normal(size=(3, 4)), 2)
    assert compound.shape == (3, 6)
    assert [s.to_list() for s in compound.col_sets][-1] == [3, 4]


def test_mult_compound_full_order_is_determinant(rng):
    A = rng.normal(size=(4, 4))
    assert mult_compound(A, 4).matrix[0, 0] == pytest.approx(np.linalg.det(A), rel=1e-10)


def test_mult_compound_upper_triangular_closed_form(rng):
    A = np.triu(rng.uniform(-2.0, 2.0, (3, 3)))
    a = lambda i, j: A[i - 1, j - 1]
    expected = np.array([
        [a(1, 1) * a(2, 2), a(1, 1) * a(2, 3), a(1, 2) * a(2, 3) - a(1, 3) * a(2, 2)],
        [0.0, a(1, 1) * a(3, 3), a(1, 2) * a(3, 3)],
        [0.0, 0.0, a(2, 2) * a(3, 3)],
    ])
    assert_allclose(mult_compound(A, 2).matrix, expected, atol=1e-12)


@pytest.mark.parametrize('k', [1, 2, 3])
def test_mult_compound_is_multiplicative(rng, k):
    # Cauchy-Binet
    A = rng.normal(size=(4, 5))
    B = rng.normal(size=(5, 3))
    assert_allclose(mult_compound(A @ B, k).matrix, mult_compound(A, k).matrix @ mult_compound(B, k).matrix, atol=1e-10)


def test_mult_compound_entries_are_minors(rng):
    A = rng.normal(size=(4, 4))
    compound = mult_compound(A, 2)
    for alpha in compound.row_sets:
        for beta in compound.col_sets:
            assert compound.entry(alpha, beta) == pytest.approx(minor(A, alpha, beta), abs=1e-12)


@pytest.mark.parametrize('k', [1, 2, 3])
def test_mult_compound_of_inverse(rng, k):
    A = rng.normal(size=(4, 4)) + 4.0 * np.eye(4)
    assert_allclose(mult_compound(np.linalg.inv(A), k).matrix, np.linalg.inv(mult_compound(A, k).matrix), atol=1e-8)


def test_mult_compound_eigenvalues_are_pair_products(rng):
    A = rng.normal(size=(4, 4))
    A = A + A.T
    eigenvalues = np.linalg.eigvalsh(A)
    products = sorted(eigenvalues[i] * eigenvalues[j] for i in range(4) for j in range(i + 1, 4))
    assert_allclose(np.linalg.eigvalsh(mult_compound(A, 2).matrix), products, atol=1e-9)


def test_mult_compound_rejects_bad_order():
    with pytest.raises(DomainError):
        mult_compound(np.eye(3), 4)
    with pytest.raises(DomainError):
        mult_compound(np.eye(3), 0)


# ############################################################################
# ADDITIVE COMPOUND
# ############################################################################

def test_add_compound_two_positive_example():
    expected = np.array([[0.0, 0.1, 2.0], [0.0, 0.0, 1.0], [3.0, 0.0, 2.0]])
    assert_array_equal(add_compound(EXAMPLE8_MATRIX, 2).matrix, expected)


def test_add_compound_single_entry():
    A = np.array([[10.0 * i + j for j in range(1, 5)] for i in range(1, 5)])
    compound = add_compound(A, 3)
    assert compound.entry((1, 2, 4), (2, 3, 4)) == -13.0
    assert compound.entry((1, 2, 3), (1, 2, 3)) == A[0, 0] + A[1, 1] + A[2, 2]


def test_add_compound_three_by_three_closed_form(rng):
    A = rng.normal(size=(3, 3))
    a = lambda i, j: A[i - 1, j - 1]
    expected = np.array([
        [a(1, 1) + a(2, 2), a(2, 3), -a(1, 3)],
        [a(3, 2), a(1, 1) + a(3, 3), a(1, 2)],
        [-a(3, 1), a(2, 1), a(2, 2) + a(3, 3)],
    ])
    assert_allclose(add_compound(A, 2).matrix, expected, atol=0.0)


@pytest.mark.parametrize('n', [3, 4, 5])
def test_add_compound_matches_oracle(rng, n):
    A = 0.5 * rng.normal(size=(n, n))
    for k in range(1, n + 1):
        assert_allclose(add_compound(A, k).matrix, add_compound_oracle(A, k).matrix, atol=1e-8)


def test_add_compound_full_order_is_trace(rng):
    A = rng.normal(size=(4, 4))
    assert add_compound(A, 4).matrix[0, 0] == pytest.approx(np.trace(A), abs=1e-12)


def test_add_compound_is_linear(rng):
    A = rng.normal(size=(4, 4))
    B = rng.normal(size=(4, 4))
    assert_allclose(add_compound(2.0 * A - B, 2).matrix, 2.0 * add_compound(A, 2).matrix - add_compound(B, 2).matrix, atol=1e-12)


def test_add_compound_eigenvalues_are_pair_sums(rng):
    A = rng.normal(size=(4, 4))
    A = A + A.T
    eigenvalues = np.linalg.eigvalsh(A)
    pair_sums = sorted(eigenvalues[i] + eigenvalues[j] for i in range(4) for j in range(i + 1, 4))
    assert_allclose(np.linalg.eigvalsh(add_compound(A, 2).matrix), pair_sums, atol=1e-10)


def test_add_compound_needs_square_matrix():
    with pytest.raises(DomainError):
        add_compound(np.ones((2, 3)), 1)


def test_compound_matrix_checks_shape():
    with pytest.raises(DomainError):
        CompoundMatrix(np.zeros((2, 2)), 3, 3, 2, 'additive')
    with pytest.raises(DomainError):
        CompoundMatrix(np.zeros((3, 6)), 3, 4, 2, 'additive')


# ############################################################################
# ALPHA COMPOUNDS
# ############################################################################

@pytest.mark.parametrize('alpha, n, expected', [
    (1.0, 3, (1, 0.0)),
    (2.5, 3, (2, 0.5)),
    (3.0, 3, (3, 0.0)),
])
def test_split_alpha(alpha, n, expected):
    k, s = split_alpha(alpha, n)
    assert k == expected[0]
    assert s == pytest.approx(expected[1])


@pytest.mark.parametrize('alpha', [0.5, 3.5, float("nan"), float("inf")])
def test_split_alpha_rejects_out_of_range(alpha):
    with pytest.raises(DomainError):
        split_alpha(alpha, 3)


def test_alpha_add_compound_integral_order(rng):
    A = rng.normal(size=(4, 4))
    assert_array_equal(alpha_add_compound(A, 2.0), add_compound(A, 2).matrix)


def test_alpha_add_compound_fractional_order(rng):
    A = rng.normal(size=(4, 4))
    result = alpha_add_compound(A, 2.25)
    assert result.shape == (math.comb(4, 2) * math.comb(4, 3),) * 2
    expected = kron_sum(0.75 * add_compound(A, 2).matrix, 0.25 * add_compound(A, 3).matrix)
    assert_allclose(result, expected, atol=0.0)


def test_kron_sum_definition(rng):
    A = rng.normal(size=(2, 2))
    B = rng.normal(size=(3, 3))
    assert_allclose(kron_sum(A, B), np.kron(A, np.eye(3)) + np.kron(np.eye(2), B), atol=0.0)


def test_alpha_mult_compound_of_scaled_identity():
    assert_allclose(alpha_mult_compound(2.0 * np.eye(3), 2.5), 2.0 ** 2.5 * np.eye(3), atol=1e-12)


def test_alpha_mult_compound_integral_order(rng):
    A = np.eye(3) + 0.1 * rng.normal(size=(3, 3))
    assert_allclose(alpha_mult_compound(A, 2.0), mult_compound(A, 2).matrix, atol=1e-12)


def test_alpha_mult_compound_rejects_singular_matrix():
    with pytest.raises(DomainError):
        alpha_mult_compound(np.diag([1.0, 2.0, 0.0]), 1.5)


def test_alpha_mult_compound_rejects_negative_eigenvalue():
    with pytest.raises(UnsupportedDomainError):
        alpha_mult_compound(np.diag([-1.0, 1.0, 2.0]), 1.5)


def test_real_matrix_power_square_root(rng):
    B = rng.normal(size=(3, 3))
    M = B @ B.T + 3.0 * np.eye(3)
    root = real_matrix_power(M, 0.5)
    assert_allclose(root @ root, M, atol=1e-10)


def test_real_matrix_power_of_jordan_block():
    J = np.array([[2.0, 1.0, 0.0], [0.0, 2.0, 1.0], [0.0, 0.0, 2.0]])
    root = real_matrix_power(J, 0.5)
    assert_allclose(root @ root, J, atol=1e-10)
    assert root[0, 1] == pytest.approx(1.0 / (2.0 * math.sqrt(2.0)), abs=1e-10)
    assert root[0, 2] == pytest.approx(-1.0 / (16.0 * math.sqrt(2.0)), abs=1e-10)
    assert_allclose(root, np.real(fractional_matrix_power(J, 0.5)), atol=1e-12)


def test_alpha_mult_compound_of_jordan_block():
    J = np.array([[2.0, 1.0, 0.0], [0.0, 2.0, 1.0], [0.0, 0.0, 2.0]])
    expected = np.kron(real_matrix_power(J, 0.5), real_matrix_power(mult_compound(J, 2).matrix, 0.5))
    result = alpha_mult_compound(J, 1.5)
    assert_allclose(result, expected, atol=1e-10)
    assert abs(result[0, 1]) > 0.1


def test_real_matrix_power_of_rotation_scaling():
    M = np.array([[1.0, -1.0], [1.0, 1.0]])
    root = real_matrix_power(M, 0.5)
    assert root.dtype == np.float64
    assert_allclose(root @ root, M, atol=1e-12)


def test_real_matrix_power_rejects_zero_eigenvalue():
    with pytest.raises(UnsupportedDomainError) as info:
        real_matrix_power(np.diag([0.0, 1.0]), 0.5)
    assert info.value.value == 0.0


# ############################################################################
# PROPERTY SUITES
# ############################################################################

def _assert_same_multiset(actual, expected, tol):
    remaining = list(np.asarray(actual, dtype=complex))
    assert len(remaining) == len(expected)
    for value in expected:
        distances = [abs(candidate - value) for candidate in remaining]
        index = int(np.argmin(distances))
        assert distances[index] <= tol, (value, remaining)
        remaining.pop(index)


def test_cauchy_binet_on_random_triples(rng):
    for _ in range(200):
        n, m, p = (int(value) for value in rng.integers(1, 7, size=3))
        A = rng.normal(size=(n, m))
        B = rng.normal(size=(m, p))
        for k in range(1, min(n, m, p) + 1):
            left = mult_compound(A @ B, k).matrix
            right = mult_compound(A, k).matrix @ mult_compound(B, k).matrix
            scale = max(1.0, float(np.max(np.abs(right))))
            assert np.max(np.abs(left - right)) <= 1e-9 * scale


@pytest.mark.parametrize('n', [3, 4, 5])
def test_spectral_properties_with_complex_spectra(rng, n):
    from itertools import combinations
    for _ in range(10):
        A = rng.normal(size=(n, n))
        eigenvalues = np.linalg.eigvals(A)
        scale = max(1.0, float(np.max(np.abs(eigenvalues)))) ** n
        for k in range(1, n + 1):
            products = [np.prod(eigenvalues[list(index)]) for index in combinations(range(n), k)]
            sums = [np.sum(eigenvalues[list(index)]) for index in combinations(range(n), k)]
            _assert_same_multiset(np.linalg.eigvals(mult_compound(A, k).matrix), products, 1e-7 * scale)
            _assert_same_multiset(np.linalg.eigvals(add_compound(A, k).matrix), sums, 1e-7 * scale)


def test_add_compound_matches_oracle_on_many_matrices(rng):
    for n in range(2, 7):
        for _ in range(20):
            A = 0.5 * rng.normal(size=(n, n))
            for k in range(1, n + 1):
                assert_allclose(add_compound(A, k).matrix, add_compound_oracle(A, k).matrix, atol=1e-8)


@pytest.mark.parametrize('k', [1, 2, 3, 4])
def test_oracle_is_additive(rng, k):
    A = 0.5 * rng.normal(size=(4, 4))
    B = 0.5 * rng.normal(size=(4, 4))
    expected = add_compound_oracle(A, k).matrix + add_compound_oracle(B, k).matrix
    assert_allclose(add_compound_oracle(A + B, k).matrix, expected, atol=1e-8)
    assert_allclose(add_compound(A + B, k).matrix, add_compound(A, k).matrix + add_compound(B, k).matrix, atol=1e-12)


@pytest.mark.parametrize('k', [1, 2, 3])
def test_compounds_of_zero_matrix(k):
    assert_array_equal(add_compound(np.zeros((3, 3)), k).matrix, np.zeros((math.comb(3, k),) * 2))
    assert_allclose(add_compound_oracle(np.zeros((3, 3)), k).matrix, 0.0, atol=1e-12)


@pytest.mark.parametrize('n', range(1, 7))
def test_identity_compounds(n):
    for k in range(1, n + 1):
        size = math.comb(n, k)
        assert_array_equal(mult_compound(np.eye(n), k).matrix, np.eye(size))
        assert_array_equal(add_compound(np.eye(n), k).matrix, k * np.eye(size))


def test_alpha_add_compound_eigenvalues_are_weighted_sums(rng):
    from itertools import combinations
    A = rng.normal(size=(4, 4))
    A = A + A.T
    eigenvalues = np.linalg.eigvalsh(A)
    s = 0.3
    pairs = [sum(eigenvalues[list(index)]) for index in combinations(range(4), 2)]
    triples = [sum(eigenvalues[list(index)]) for index in combinations(range(4), 3)]
    expected = sorted((1.0 - s) * pair + s * triple for pair in pairs for triple in triples)
    assert_allclose(np.linalg.eigvalsh(alpha_add_compound(A, 2.0 + s)), expected, atol=1e-7)


@pytest.mark.parametrize('s', [0.2, 0.5, 0.8])
def test_thomas_alpha_compound_display(rng, s):
    b = 0.1
    system = thomas_system(b)
    for x in rng.uniform(-10.0, 10.0, size=(10, 3)):
        c1, c2, c3 = np.cos(x)
        expected = np.array([
            [-(2.0 + s) * b, (1.0 - s) * c3, 0.0],
            [0.0, -(2.0 + s) * b, (1.0 - s) * c2],
            [-(1.0 - s) * c1, 0.0, -(2.0 + s) * b],
        ])
        assert_allclose(alpha_add_compound(system.jacobian_at(0.0, x), 2.0 + s), expected, atol=1e-12)


def test_alpha_mult_compound_of_diagonal_matrix():
    result = alpha_mult_compound(np.diag([1.0, 2.0, 3.0]), 2.1)
    expected = np.diag([p ** 0.9 * 6.0 ** 0.1 for p in (2.0, 3.0, 6.0)])
    assert_allclose(result, expected, rtol=1e-12, atol=1e-12)


def test_kron_product_block_structure(rng):
    A = rng.normal(size=(2, 3))
    B = rng.normal(size=(3, 2))
    K = kron_product(A, B)
    assert K.shape == (6, 6)
    for i in range(2):
        for j in range(3):
            assert_allclose(K[3 * i:3 * i + 3, 2 * j:2 * j + 2], A[i, j] * B, atol=0.0)
    assert_array_equal(kron_product(np.eye(2), B[:2, :2]), np.block([[B[:2, :2], np.zeros((2, 2))], [np.zeros((2, 2)), B[:2, :2]]]))


def test_kron_sum_eigenvalues_are_pairwise_sums(rng):
    A = rng.normal(size=(3, 3))
    B = rng.normal(size=(3, 3))
    a = np.linalg.eigvals(A)
    b = np.linalg.eigvals(B)
    _assert_same_multiset(np.linalg.eigvals(kron_sum(A, B)), [x + y for x in a for y in b], 1e-8 * 10.0)
    assert_array_equal(kron_sum([[2.0]], [[3.0]]), [[5.0]])
