import numpy as np
import pytest

from lib.optimize import (
    OptimizerBudget, givens_parameter_count, multi_start_minimize, polish, start_points,
    unitary_from_angles,
)


def _shifted_bowl(x):
    return float(np.sum((x - 1.0) ** 2))


def _rastrigin(x):
    return float(10 * x.size + np.sum(x ** 2 - 10 * np.cos(2 * np.pi * x)))


def test_budget_rejects_empty():
    with pytest.raises(ValueError):
        OptimizerBudget(starts=0)
    with pytest.raises(ValueError):
        OptimizerBudget(iterations=0)


@pytest.mark.parametrize('dim', [2, 3, 4])
def test_unitary_from_angles(dim):
    n = givens_parameter_count(dim)
    assert n == dim * (dim - 1)
    np.testing.assert_allclose(unitary_from_angles(np.zeros(n), dim), np.eye(dim), atol=0)
    angles = np.random.default_rng(dim).uniform(-np.pi, np.pi, n)
    u = unitary_from_angles(angles, dim)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(dim), atol=1e-12)


def _givens_product(angles, dim):
    u = np.eye(dim, dtype=complex)
    k = 0
    for i in range(dim - 1):
        for j in range(i + 1, dim):
            theta, phase = angles[k], angles[k + 1]
            k += 2
            g = np.eye(dim, dtype=complex)
            g[i, i] = g[j, j] = np.cos(theta)
            g[i, j] = -np.exp(-1j * phase) * np.sin(theta)
            g[j, i] = np.exp(1j * phase) * np.sin(theta)
            u = u @ g
    return u


@pytest.mark.parametrize('dim', [2, 3, 4])
def test_unitary_from_angles_matches_rotation_product(dim):
    angles = np.random.default_rng(10 + dim).uniform(-np.pi, np.pi, givens_parameter_count(dim))
    np.testing.assert_allclose(unitary_from_angles(angles, dim), _givens_product(angles, dim),
                               atol=1e-12)


def test_unitary_from_angles_checks_count():
    with pytest.raises(ValueError):
        unitary_from_angles(np.zeros(3), 2)


def test_start_points_are_prefix_stable():
    small = start_points(4, OptimizerBudget(starts=5, seed=3))
    large = start_points(4, OptimizerBudget(starts=10, seed=3))
    np.testing.assert_array_equal(small, large[:5])
    np.testing.assert_array_equal(small[0], np.zeros(4))


def test_multi_start_finds_minimum():
    result = multi_start_minimize(_shifted_bowl, 3, OptimizerBudget(starts=4, iterations=2000))
    np.testing.assert_allclose(result.x, np.ones(3), atol=1e-6)
    assert result.fun < 1e-10
    assert result.trace.starts_tried == 4
    assert result.trace.iterations > 0


def test_more_starts_never_worse():
    values = []
    for starts in (1, 4, 16):
        result = multi_start_minimize(_rastrigin, 2, OptimizerBudget(starts=starts, iterations=400, seed=5))
        values.append(result.fun)
    assert values[1] <= values[0]
    assert values[2] <= values[1]


def test_extra_starts_are_tried_first():
    result = multi_start_minimize(_shifted_bowl, 2, OptimizerBudget(starts=1, iterations=400),
                                  extra_starts=[np.ones(2)])
    assert result.trace.starts_tried == 2
    assert result.trace.best_start == 0


def test_zero_dimension():
    result = multi_start_minimize(lambda x: 0.25, 0, OptimizerBudget(starts=3))
    assert result.fun == 0.25
    assert result.x.size == 0


def test_polish_never_worse():
    budget = OptimizerBudget(starts=1, iterations=50)
    x0 = np.array([0.7, 1.4])
    x, fun = polish(_shifted_bowl, x0, _shifted_bowl(x0), budget)
    assert fun <= _shifted_bowl(x0)
    assert fun == pytest.approx(_shifted_bowl(x), abs=0)
