import math

import numpy as np
import pytest

from lib.errors import ValidationError
from lib.linalg import DimSignature
from lib.states import (
    DensityMatrix, ExampleFamilyParams, OneWayMcSpec, PureState, bell_state, dephase,
    example_family, is_ppt, make_one_way_mc, make_pseudo_pure, make_werner, purify,
    random_density_matrix, random_pure_state, schmidt_decompose,
)
from lib.thresholds import MAX_TOTAL_DIM


def test_pure_state_must_be_normalized(qubits):
    with pytest.raises(ValidationError):
        PureState(np.array([1.0, 0.0, 0.0, 1.0]), qubits)
    psi = PureState.normalized(np.array([1.0, 0.0, 0.0, 1.0]), qubits)
    np.testing.assert_allclose(psi.amplitudes, bell_state().amplitudes, atol=1e-15)


def test_pure_state_amplitude_count(qubits):
    with pytest.raises(ValidationError):
        PureState(np.array([1.0, 0.0]), qubits)


def test_density_matrix_rejects_bad_trace(qubits):
    with pytest.raises(ValidationError):
        DensityMatrix(np.eye(4) / 2, qubits)


def test_density_matrix_rejects_negative_eigenvalue():
    sig = DimSignature((2,), ('a',))
    with pytest.raises(ValidationError):
        DensityMatrix(np.diag([1.1, -0.1]), sig)


def test_density_matrix_rejects_non_hermitian():
    sig = DimSignature((2,), ('a',))
    with pytest.raises(ValidationError):
        DensityMatrix(np.array([[0.5, 0.2], [0.0, 0.5]]), sig)


def test_bell_density(bell_rho):
    assert bell_rho.is_pure
    assert bell_rho.rank == 1
    np.testing.assert_allclose(bell_rho.reduce(['a']).matrix, np.eye(2) / 2, atol=1e-15)


def test_random_states_are_seeded(qubits):
    a = random_density_matrix(qubits, 2, seed=11)
    b = random_density_matrix(qubits, 2, seed=11)
    np.testing.assert_array_equal(a.matrix, b.matrix)
    assert a.rank == 2
    c = random_density_matrix(qubits, 2, seed=12)
    assert not np.allclose(a.matrix, c.matrix)
    psi = random_pure_state(qubits, seed=[0, 3, 0])
    assert psi.amplitudes.size == 4


def test_random_density_rank_bounds(qubits):
    with pytest.raises(ValidationError):
        random_density_matrix(qubits, 5, seed=0)


def test_werner_ppt_threshold():
    assert not is_ppt(make_werner(0.9)).ppt
    assert is_ppt(make_werner(0.2)).ppt
    assert is_ppt(make_werner(1 / 3)).ppt
    with pytest.raises(ValidationError):
        make_werner(1.5)


def test_is_ppt_bell(bell_rho):
    verdict = is_ppt(bell_rho)
    assert not verdict.ppt
    assert verdict.min_eigenvalue == pytest.approx(-0.5, abs=1e-12)
    assert verdict.decides_separability
    assert verdict.separable is False


def test_is_ppt_not_decisive_in_higher_dimension():
    sig = DimSignature((3, 3), ('a', 'b'))
    verdict = is_ppt(DensityMatrix.maximally_mixed(sig))
    assert verdict.ppt
    assert not verdict.decides_separability
    assert verdict.separable is None


def test_is_ppt_needs_bipartite():
    sig = DimSignature.of([2, 2, 2])
    with pytest.raises(ValidationError):
        is_ppt(DensityMatrix.maximally_mixed(sig))


def test_dephase_bell(bell_rho):
    out = dephase(bell_rho, 'a')
    np.testing.assert_allclose(out.matrix, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)


def test_purify_reproduces_state():
    sig = DimSignature((2, 3), ('a', 'b'))
    rho = random_density_matrix(sig, 3, seed=4)
    psi = purify(rho)
    assert psi.sig.labels == ('a', 'b', 'c')
    assert psi.sig.dims[-1] == 3
    np.testing.assert_allclose(psi.reduce(['a', 'b']).matrix, rho.matrix, atol=1e-9)


def test_purify_picks_free_label():
    sig = DimSignature((2, 2), ('a', 'c'))
    psi = purify(random_density_matrix(sig, 2, seed=1))
    assert psi.sig.labels == ('a', 'c', 'd')


def test_schmidt_decomposition():
    psi = random_pure_state(DimSignature.of([2, 3]), seed=9)
    schmidt = schmidt_decompose(psi, ['a'])
    coeffs = schmidt.coefficients
    assert schmidt.rank == 2
    assert np.all(np.diff(coeffs) <= 0)
    assert float(np.sum(coeffs ** 2)) == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(schmidt.reconstruct().amplitudes, psi.amplitudes, atol=1e-12)


def test_schmidt_decomposition_across_middle_subsystem():
    psi = random_pure_state(DimSignature.of([2, 2, 2]), seed=2)
    schmidt = schmidt_decompose(psi, ['b'])
    np.testing.assert_allclose(schmidt.reconstruct().amplitudes, psi.amplitudes, atol=1e-12)
    with pytest.raises(ValidationError):
        schmidt_decompose(psi, ['a', 'b', 'c'])


def test_pseudo_pure_mixture(bell, product_pure):
    rho = make_pseudo_pure([(0.5, bell), (0.5, product_pure)])
    assert rho.sig.labels == ('a', 'b', 'f')
    assert rho.sig.dims == (2, 2, 2)
    np.testing.assert_allclose(sorted(rho.eigenvalues)[-2:], [0.5, 0.5], atol=1e-12)
    flag = rho.reduce(['f']).matrix
    np.testing.assert_allclose(flag, np.diag([0.5, 0.5]), atol=1e-12)


def test_pseudo_pure_rejects_bad_weights(bell, product_pure):
    with pytest.raises(ValidationError):
        make_pseudo_pure([(0.6, bell), (0.6, product_pure)])
    with pytest.raises(ValidationError):
        make_pseudo_pure([(1.0, bell)], flag_label='a')
    with pytest.raises(ValidationError):
        make_pseudo_pure([(0.5, bell), (0.5, product_pure)], flag_dim=1)


def test_one_way_mc_spec_validation():
    with pytest.raises(ValidationError):
        OneWayMcSpec(np.array([1.0]), (np.array([1.0, 0.0]),), ())
    with pytest.raises(ValidationError):
        OneWayMcSpec(np.array([1.0, 1.0]), (np.array([1.0, 0.0]),) * 2, (np.array([1.0, 0.0]),) * 2)
    s = 1 / math.sqrt(2)
    spec = OneWayMcSpec(np.array([s, s]), (np.array([1.0, 0.0]),) * 2,
                        (np.array([1.0, 0.0]), np.array([0.0, 1.0])))
    assert spec.has_repeated_a_states


def test_one_way_mc_state(quarter_point):
    psi, rho_ab = make_one_way_mc(quarter_point.to_spec())
    assert psi.sig.dims == (2, 2, 2)
    assert rho_ab.sig.labels == ('a', 'b')
    assert rho_ab.rank == 2


def test_example_family_complement_is_ppt(quarter_point):
    _, sigma_ab, rho_ac = example_family(quarter_point)
    assert is_ppt(rho_ac).ppt
    assert not is_ppt(sigma_ab).ppt


def test_example_family_edges():
    _, sigma_ab, _ = example_family(ExampleFamilyParams(math.pi / 3, 0.0))
    assert sigma_ab.is_pure
    _, sigma_ab, _ = example_family(ExampleFamilyParams(math.pi / 3, math.pi / 2))
    assert is_ppt(sigma_ab).ppt
    with pytest.raises(ValidationError):
        ExampleFamilyParams(2.0, 0.0)


def _unit(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


@pytest.mark.parametrize('n', [2, 3, 4])
@pytest.mark.parametrize('seed', range(5))
def test_one_way_mc_reduced_state_formula(n, seed):
    # rho_ab = sum_ij alpha_i alpha_j* <c_j|c_i> |a_i><a_j| (x) |i><j|
    rng = np.random.default_rng([n, seed])
    alphas = _unit(rng, n)
    a_states = tuple(_unit(rng, 2) for _ in range(n))
    c_states = tuple(_unit(rng, 3) for _ in range(n))
    _, rho_ab = make_one_way_mc(OneWayMcSpec(alphas, a_states, c_states))

    expected = np.zeros((2 * n, 2 * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            flags = np.zeros((n, n))
            flags[i, j] = 1.0
            coeff = alphas[i] * alphas[j].conj() * np.vdot(c_states[j], c_states[i])
            expected += coeff * np.kron(np.outer(a_states[i], a_states[j].conj()), flags)
    np.testing.assert_allclose(rho_ab.matrix, expected, atol=1e-12)


@pytest.mark.parametrize('seed', range(5))
def test_pseudo_pure_unchanged_by_flag_dephasing(seed):
    sig = DimSignature.of([2, 3])
    weights = np.random.default_rng(seed).dirichlet(np.ones(3))
    pairs = [(float(w), random_pure_state(sig, [seed, k])) for k, w in enumerate(weights)]
    rho = make_pseudo_pure(pairs)
    np.testing.assert_array_equal(dephase(rho, 'f').matrix, rho.matrix)


def test_purify_then_trace_over_many_states():
    for seed in range(500):
        rng = np.random.default_rng(seed)
        sig = DimSignature(tuple(int(d) for d in rng.integers(2, 4, size=2)), ('a', 'b'))
        rank = int(rng.integers(1, min(sig.total, MAX_TOTAL_DIM // sig.total) + 1))
        rho = random_density_matrix(sig, rank, [seed, 1])
        back = purify(rho).reduce(sig.labels)
        np.testing.assert_allclose(back.matrix, rho.matrix, atol=1e-9)
