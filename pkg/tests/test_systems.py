import numpy as np
import pytest
from numpy.testing import assert_allclose

from CompoundCert.Classify import metzler_compound_pattern
from CompoundCert.DomainCheck import DomainError
from CompoundCert.Systems import (
    BUILTIN_SYSTEMS, EXAMPLE8_MATRIX, SystemDef, Trajectory, builtin_system, cyclic_system, example5_matrix,
    example5_transition, jacobi_system, ltv_system, thomas_alpha_bound, thomas_gain_bound, thomas_system,
    thomas_threshold
)


def _finite_difference_jacobian(system, x, h=1e-6):
    columns = []
    for i in range(system.dimension):
        e = np.zeros(system.dimension)
        e[i] = h
        columns.append((system.rhs(0.0, x + e) - system.rhs(0.0, x - e)) / (2.0 * h))
    return np.array(columns).T


# ############################################################################
# SYSTEM DEFINITIONS
# ############################################################################

def test_ltv_system_from_matrix():
    system = ltv_system(EXAMPLE8_MATRIX, "example8")
    assert system.is_ltv
    assert system.constant
    assert system.dimension == 3
    assert_allclose(system.rhs(0.0, np.ones(3)), EXAMPLE8_MATRIX @ np.ones(3))


def test_ltv_system_from_callable():
    system = ltv_system(example5_matrix)
    assert not system.constant
    assert_allclose(system.matrix_at(np.pi), [[-1.0, 0.0], [2.0, 0.0]], atol=1e-15)


def test_system_definition_validation():
    with pytest.raises(DomainError):
        SystemDef('LTV', 2)
    with pytest.raises(DomainError):
        SystemDef('Nonlinear', 2, field=lambda t, x: x)
    with pytest.raises(DomainError):
        SystemDef('Nonlinear', 2, field=lambda t, x: x, jacobian=lambda t, x: np.eye(3))
    with pytest.raises(DomainError):
        SystemDef('Hybrid', 2, matrix=lambda t: np.eye(2))
    with pytest.raises(DomainError):
        ltv_system(np.ones((2, 3)))


def test_system_to_dict():
    description = thomas_system(0.2).to_dict()
    assert description["kind"] == 'Nonlinear'
    assert description["parameters"] == {"b": 0.2, "c": 0.0}
    assert description["state_space"]["upper"] == [5.0, 5.0, 5.0]


# ############################################################################
# TRAJECTORIES
# ############################################################################

def test_trajectory_access():
    trajectory = Trajectory([0.0, 0.5, 1.0], [[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
    assert len(trajectory) == 3
    t, state = trajectory[1]
    assert t == 0.5
    assert state.tolist() == [3.0, 4.0]
    assert trajectory.final.tolist() == [5.0, 6.0]
    assert trajectory.at(0.6).tolist() == [3.0, 4.0]
    assert trajectory.to_rows()[2] == [1.0, 5.0, 6.0]


@pytest.mark.parametrize('times, states', [
    ([0.0, 0.0], [[1.0], [2.0]]),
    ([0.0, 1.0], [[1.0]]),
    ([], []),
    ([0.0, 1.0], [[1.0], [np.nan]]),
])
def test_trajectory_validation(times, states):
    with pytest.raises(DomainError):
        Trajectory(times, states)


# ############################################################################
# BUILTIN SYSTEMS
# ############################################################################

@pytest.mark.parametrize('t', [0.0, 0.7, 2.0])
def test_shrinking_squares_transition_solves_the_ode(t):
    h = 1e-6
    derivative = (example5_transition(t + h) - example5_transition(t - h)) / (2.0 * h)
    assert_allclose(derivative, example5_matrix(t) @ example5_transition(t), atol=1e-8)


@pytest.mark.parametrize('c', [0.0, -0.3])
def test_thomas_jacobian_matches_finite_differences(rng, c):
    system = thomas_system(0.1, c)
    x = rng.uniform(-10.0, 10.0, 3)
    assert_allclose(system.jacobian_at(0.0, x), _finite_difference_jacobian(system, x), atol=1e-7)


def test_thomas_state_space_is_invariant():
    system = thomas_system(0.1)
    # On each face of the box the field points inwards
    for i in range(3):
        x = np.zeros(3)
        x[i] = 10.0
        assert system.rhs(0.0, x)[i] <= 0.0
        x[i] = -10.0
        assert system.rhs(0.0, x)[i] >= 0.0


def test_thomas_bounds():
    assert thomas_threshold(0.1) == pytest.approx(0.8 / 1.1)
    assert thomas_alpha_bound(0.1, thomas_threshold(0.1)) == pytest.approx(0.0, abs=1e-15)
    assert thomas_gain_bound(0.1, 0.0) == pytest.approx(-0.8)
    assert thomas_gain_bound(0.1, 0.5) == pytest.approx(-0.25 / 1.5)


@pytest.mark.parametrize('b, s', [(0.0, 0.5), (-1.0, 0.5), (0.1, 1.0), (0.1, -0.1)])
def test_thomas_gain_bound_domain(b, s):
    with pytest.raises(DomainError):
        thomas_gain_bound(b, s)


def test_thomas_requires_positive_friction():
    with pytest.raises(DomainError):
        thomas_system(0.0)


@pytest.mark.parametrize('delta1', [-1, 1])
def test_cyclic_jacobian_matches_finite_differences(rng, delta1):
    system = cyclic_system(5, delta1)
    x = rng.uniform(-2.0, 2.0, 5)
    assert_allclose(system.jacobian_at(0.0, x), _finite_difference_jacobian(system, x), atol=1e-7)


def test_cyclic_negative_feedback_sign_pattern(rng):
    system = cyclic_system(4, -1)
    for x in rng.uniform(-2.0, 2.0, (10, 4)):
        J = system.jacobian_at(0.0, x)
        assert J[0, 3] < 0.0
        assert J[0, 1] == 0.0
        assert metzler_compound_pattern(J, 2) == (True, 'even')


def test_cyclic_system_validation():
    with pytest.raises(DomainError):
        cyclic_system(2)
    with pytest.raises(DomainError):
        cyclic_system(4, 0)


def test_jacobi_system():
    A = np.diag([-1.0, -2.0, -3.0]) + np.diag([1.0, 2.0], 1) + np.diag([0.5, 0.5], -1)
    assert jacobi_system(A).constant
    with pytest.raises(DomainError):
        jacobi_system(A + np.diag([1.0], 2))
    with pytest.raises(DomainError):
        jacobi_system(A - 2.0 * np.diag([1.0, 2.0], 1))


@pytest.mark.parametrize('name', BUILTIN_SYSTEMS)
def test_builtin_systems(name):
    system = builtin_system(name)
    assert system.name == name


def test_unknown_builtin_system():
    with pytest.raises(DomainError):
        builtin_system("lorenz")
