import math
from types import SimpleNamespace

import numpy as np
import pytest

from lib import entanglement
from lib.conversions import angle_grid
from lib.entanglement import (
    Bound, ConditionRecord, classify_state, complement_certificates, concurrence_2q,
    entanglement_report, eof_2q, eof_ensemble_oracle, eof_from_concurrence, eof_via_koashi_winter,
    example_family_closed_form, irreversibility_conditions, ree_estimate,
    separable_complement_report, strict_gap_check,
)
from lib.entropies import conditional_entropy
from lib.errors import UnsupportedDimensionError, ValidationError
from lib.linalg import DimSignature
from lib.optimize import OptimizerBudget
from lib.qa import find_chain_violations
from lib.states import (
    DensityMatrix, ExampleFamilyParams, PureState, bell_state, example_family, is_ppt,
    make_pseudo_pure, make_werner, random_density_matrix, random_pure_state,
)

# (theta, phi) = (pi/2, pi/4)
E_C_QUARTER = 0.600876
E_D_QUARTER = 0.399124
DELTA_QUARTER = 0.201752


# ============================================================
# TWO-QUBIT CLOSED FORMS
# ============================================================

def test_concurrence_extremes(bell_rho, product_rho):
    assert concurrence_2q(bell_rho) == pytest.approx(1.0, abs=1e-9)
    assert eof_2q(bell_rho) == pytest.approx(1.0, abs=1e-9)
    assert concurrence_2q(product_rho) == pytest.approx(0.0, abs=1e-9)
    assert eof_from_concurrence(0.0) == 0.0


def test_werner_concurrence():
    for p in (0.5, 0.9):
        assert concurrence_2q(make_werner(p)) == pytest.approx((3 * p - 1) / 2, abs=1e-9)
    assert concurrence_2q(make_werner(0.2)) == 0.0


@pytest.mark.parametrize('phi', [0.0, math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2])
def test_family_concurrence_is_cos_phi(phi):
    _, sigma_ab, _ = example_family(ExampleFamilyParams(math.pi / 2, phi))
    assert concurrence_2q(sigma_ab) == pytest.approx(math.cos(phi), abs=1e-9)


GRID = angle_grid(0.0, math.pi / 2, 17)


@pytest.mark.parametrize('theta', GRID)
def test_family_concurrence_on_grid(theta):
    for phi in GRID:
        _, sigma_ab, _ = example_family(ExampleFamilyParams(theta, phi))
        expected = math.cos(phi) * math.sin(theta)
        assert concurrence_2q(sigma_ab) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize('theta', GRID)
def test_family_distillable_is_minus_conditional_entropy(theta):
    for phi in GRID:
        _, sigma_ab, _ = example_family(ExampleFamilyParams(theta, phi))
        expected = example_family_closed_form(theta, phi)['E_D']
        assert -conditional_entropy(sigma_ab, 'a', 'b') == pytest.approx(expected, abs=1e-9)


def test_closed_form_quarter_point():
    closed = example_family_closed_form(math.pi / 2, math.pi / 4)
    assert closed['E_C'] == pytest.approx(E_C_QUARTER, abs=1e-6)
    assert closed['E_D'] == pytest.approx(E_D_QUARTER, abs=1e-6)
    assert closed['Delta'] == pytest.approx(DELTA_QUARTER, abs=1e-6)


def test_closed_form_edges():
    theta = math.pi / 3
    closed = example_family_closed_form(theta, 0.0)
    assert closed['Delta'] == pytest.approx(0.0, abs=1e-12)
    closed = example_family_closed_form(theta, math.pi / 2)
    assert closed['E_C'] == pytest.approx(0.0, abs=1e-9)
    assert closed['E_D'] == pytest.approx(0.0, abs=1e-12)


def test_two_qubit_formula_rejects_other_shapes():
    sig = DimSignature((2, 3), ('a', 'b'))
    with pytest.raises(UnsupportedDimensionError):
        concurrence_2q(DensityMatrix.maximally_mixed(sig))


# ============================================================
# ORACLE AND DISCORD ROUTE
# ============================================================

def test_oracle_pure_state(bell_rho):
    value, decomposition = eof_ensemble_oracle(bell_rho)
    assert value == pytest.approx(1.0, abs=1e-12)
    assert len(decomposition.members) == 1


def test_oracle_pseudo_pure_is_average_entanglement(bell, product_pure):
    rho = make_pseudo_pure([(0.5, bell), (0.5, product_pure)])
    value, decomposition = eof_ensemble_oracle(rho)
    assert value == pytest.approx(0.5, abs=1e-6)
    np.testing.assert_allclose(decomposition.density(), rho.matrix, atol=1e-9)


def test_oracle_is_an_upper_bound(qubits):
    rho = random_density_matrix(qubits, 2, seed=31)
    value, decomposition = eof_ensemble_oracle(rho, m=2, budget=OptimizerBudget(starts=4, iterations=500))
    assert value >= eof_2q(rho) - 1e-9
    np.testing.assert_allclose(np.sum(decomposition.weights), 1.0, atol=1e-12)
    np.testing.assert_allclose(decomposition.density(), rho.matrix, atol=1e-9)


@pytest.mark.slow
def test_oracle_matches_closed_form(qubits):
    rho = random_density_matrix(qubits, 2, seed=32)
    value, _ = eof_ensemble_oracle(rho, m=4)
    assert value == pytest.approx(eof_2q(rho), abs=1e-5)


def test_oracle_ensemble_size_bounds(qubits):
    rho = random_density_matrix(qubits, 2, seed=33)
    with pytest.raises(ValidationError):
        eof_ensemble_oracle(rho, m=1)
    with pytest.raises(ValidationError):
        eof_ensemble_oracle(rho, m=5)


def test_koashi_winter_bell_times_ancilla():
    sig = DimSignature.of([2, 2, 2])
    psi = PureState(np.kron(bell_state().amplitudes, [1.0, 0.0]), sig)
    assert eof_via_koashi_winter(psi) == pytest.approx(1.0, abs=1e-6)


def test_koashi_winter_matches_closed_form(quarter_point):
    psi, _, _ = example_family(quarter_point)
    assert eof_via_koashi_winter(psi) == pytest.approx(E_C_QUARTER, abs=1e-4)


def test_koashi_winter_random_state():
    psi = random_pure_state(DimSignature.of([2, 2, 2]), seed=[0, 7, 0])
    exact = eof_2q(psi.reduce(['a', 'b']))
    value = eof_via_koashi_winter(psi)
    assert exact - 1e-9 <= value <= exact + 1e-4


# ============================================================
# RELATIVE ENTROPY OF ENTANGLEMENT
# ============================================================

def test_ree_of_product_state(product_rho):
    result = ree_estimate(product_rho)
    assert result.value <= 1e-6
    np.testing.assert_allclose(np.trace(result.witness.matrix()).real, 1.0, atol=1e-9)


def _ppt_draws(sig, seeds):
    draws = (random_density_matrix(sig, 4, seed) for seed in seeds)
    return [rho for rho in draws if is_ppt(rho).ppt]


def test_ree_of_ppt_draws(qubits):
    # PPT is separability for two qubits, so the estimate must reach 0
    draws = _ppt_draws(qubits, range(30))[:2]
    assert draws
    for rho in draws:
        result = ree_estimate(rho)
        assert 0.0 <= result.value <= 1e-5


@pytest.mark.slow
def test_ree_of_ppt_draws_wide(qubits):
    for rho in _ppt_draws(qubits, range(60)):
        assert ree_estimate(rho).value <= 1e-5


def test_ree_rejects_large_shapes():
    sig = DimSignature((3, 3), ('a', 'b'))
    with pytest.raises(UnsupportedDimensionError):
        ree_estimate(DensityMatrix.maximally_mixed(sig))


@pytest.mark.slow
def test_ree_of_bell(bell_rho):
    assert ree_estimate(bell_rho).value == pytest.approx(1.0, abs=1e-3)


@pytest.mark.slow
def test_ree_on_family_matches_distillable(quarter_point):
    _, sigma_ab, _ = example_family(quarter_point)
    assert ree_estimate(sigma_ab).value == pytest.approx(E_D_QUARTER, abs=1e-3)


# ============================================================
# CLASSIFICATION AND REPORTS
# ============================================================

def test_classify_state(bell_rho, quarter_point):
    assert classify_state(bell_rho) == 'pure'
    assert classify_state(make_werner(0.2)) == 'separable'
    assert classify_state(make_werner(0.9)) == 'mixed-entangled'
    _, sigma_ab, _ = example_family(quarter_point)
    assert classify_state(sigma_ab) == 'mixed-entangled'


def test_complement_certificates(quarter_point):
    _, sigma_ab, _ = example_family(quarter_point)
    assert complement_certificates(sigma_ab)['ac']
    # full-rank purification marginals are 2x4 and never certified
    assert complement_certificates(make_werner(0.9)) == {'ac': False, 'bc': False}


def test_report_bell(bell_rho):
    report = entanglement_report(bell_rho)
    assert report.classification == 'pure'
    assert report.e_cost == Bound.exact(report.e_cost.upper, 'exact-pure')
    assert report.e_cost.value == pytest.approx(1.0, abs=1e-12)
    assert report.e_distillable.value == pytest.approx(1.0, abs=1e-12)
    assert report.delta_loss == 0.0
    assert report.concurrence == pytest.approx(1.0, abs=1e-9)


def test_report_separable():
    report = entanglement_report(make_werner(0.2))
    assert report.classification == 'separable'
    assert report.e_cost.value == 0.0
    assert report.e_distillable.provenance == 'exact-separable'


def test_report_certified_complement(quarter_point):
    _, sigma_ab, _ = example_family(quarter_point)
    report = entanglement_report(sigma_ab)
    assert report.complement in ('ac', 'bc')
    assert report.e_distillable.provenance == 'exact-by-theorem'
    assert report.e_cost.provenance == 'exact-by-additivity'
    assert report.e_cost.value == pytest.approx(E_C_QUARTER, abs=1e-6)
    assert report.e_distillable.value == pytest.approx(E_D_QUARTER, abs=1e-6)
    assert report.delta_loss == pytest.approx(DELTA_QUARTER, abs=1e-6)
    assert find_chain_violations([report]) == []


def test_report_uncertified_interval():
    report = entanglement_report(make_werner(0.9))
    assert report.classification == 'mixed-entangled'
    assert report.complement is None
    assert report.e_cost.provenance == 'interval'
    assert report.e_cost.value is None
    assert report.delta_loss is None
    assert report.e_cost.lower == pytest.approx(report.coherent_information)
    assert report.e_cost.upper == pytest.approx(report.eof)
    assert report.e_cost.lower < report.e_cost.upper
    assert find_chain_violations([report]) == []


def test_report_needs_bipartite_state(bell, product_pure):
    rho = make_pseudo_pure([(0.5, bell), (0.5, product_pure)])
    with pytest.raises(ValidationError):
        entanglement_report(rho)


def test_separable_complement_report_quarter_point(quarter_point):
    report = separable_complement_report(quarter_point)
    assert report.complement == 'ac'
    assert not report.conditional
    assert report.e_distillable.value == pytest.approx(E_D_QUARTER, abs=1e-6)
    assert report.e_cost.value == pytest.approx(E_C_QUARTER, abs=1e-6)
    assert report.delta_loss == pytest.approx(DELTA_QUARTER, abs=1e-6)
    assert report.ree_upper == report.e_distillable.value
    assert report.key_rate.value == report.e_distillable.value
    assert abs(report.cross_checks['discord_deviation']) <= 1e-4
    assert report.cross_checks['ppt_ac_min_eigenvalue'] >= -1e-10


def test_separable_complement_report_edges():
    theta = math.pi / 3
    report = separable_complement_report(ExampleFamilyParams(theta, 0.0))
    assert report.classification == 'pure'
    expected = example_family_closed_form(theta, 0.0)['E_C']
    assert report.e_cost.value == pytest.approx(expected, abs=1e-9)
    assert report.e_distillable.value == pytest.approx(expected, abs=1e-9)
    assert report.delta_loss == 0.0

    report = separable_complement_report(ExampleFamilyParams(theta, math.pi / 2))
    assert report.classification == 'separable'
    assert report.e_cost.value == pytest.approx(0.0, abs=1e-9)
    assert report.e_distillable.value == pytest.approx(0.0, abs=1e-9)
    assert report.delta_loss == pytest.approx(0.0, abs=1e-9)


def test_separable_complement_report_from_pure_state(quarter_point):
    psi, _, _ = example_family(quarter_point)
    report = separable_complement_report(psi)
    assert not report.conditional
    assert report.e_distillable.value == pytest.approx(E_D_QUARTER, abs=1e-6)


def test_separable_complement_report_conditional():
    # W state: rho_ac is entangled, so nothing certifies the complement
    sig = DimSignature.of([2, 2, 2])
    w = np.zeros(8)
    w[[1, 2, 4]] = 1 / math.sqrt(3)
    psi = PureState(w, sig)
    assert not is_ppt(psi.reduce(['a', 'c'])).ppt
    report = separable_complement_report(psi)
    assert report.conditional
    assert report.e_cost.provenance == 'conditional'
    assert report.e_cost.value is None


def test_strict_gap_werner():
    verdict = strict_gap_check(make_werner(0.9))
    assert verdict.applies
    assert verdict.holds
    assert verdict.gap > 0.2


def test_strict_gap_not_applicable(bell_rho):
    verdict = strict_gap_check(bell_rho)
    assert verdict.classification == 'pure'
    assert not verdict.applies
    assert verdict.holds is None
    assert verdict.gap == pytest.approx(0.0, abs=1e-9)
    verdict = strict_gap_check(make_werner(0.2))
    assert verdict.gap == 0.0


def test_irreversibility_conditions(bell_rho, quarter_point):
    _, sigma_ab, _ = example_family(quarter_point)
    record = irreversibility_conditions(sigma_ab)
    assert record.irreversibility_type == 'AB'
    assert record.single_copy_distillable
    assert record.verdict == 'irreversible (separable complement)'
    assert record.additivity_certified
    assert record.separable_iff_zero_conditional

    record = irreversibility_conditions(bell_rho)
    assert record.verdict == 'reversible (pure)'
    assert record.irreversibility_type == 'O'
    record = irreversibility_conditions(make_werner(0.9))
    assert record.verdict == 'no certificate'
    assert record.irreversibility_type == 'O'
    assert not record.both_complements
    assert irreversibility_conditions(make_werner(0.2)).irreversibility_type == 'O'


def test_irreversibility_both_orientations(quarter_point):
    # theta = pi/2 makes the a-states orthogonal, so rho_ab is maximally correlated
    _, sigma_ab, _ = example_family(quarter_point)
    record = irreversibility_conditions(sigma_ab)
    assert record.both_complements
    assert 'both orientations' in record.note

    _, sigma_ab, _ = example_family(ExampleFamilyParams(math.pi / 3, math.pi / 4))
    record = irreversibility_conditions(sigma_ab)
    assert record.complement == 'ac'
    assert not record.both_complements
    assert record.irreversibility_type == 'AB'


def test_irreversibility_single_copy_from_ree(monkeypatch):
    # an REE estimate meeting the coherent information certifies type B alone
    rho = make_werner(0.9)
    ic = entanglement_report(rho).coherent_information
    monkeypatch.setattr(entanglement, 'ree_estimate',
                        lambda state, budget: SimpleNamespace(value=ic))
    record = irreversibility_conditions(rho, with_ree=True)
    assert record.irreversibility_type == 'B'
    assert record.single_copy_distillable
    assert not record.additivity_certified
    assert record.verdict == 'no certificate'


def test_report_types_reject_unknown_labels():
    with pytest.raises(ValueError):
        Bound(0.0, 1.0, 'guess')
    with pytest.raises(ValueError):
        ConditionRecord('pure', None, False, True, 'C', 'x', 'y')
    with pytest.raises(ValueError):
        ConditionRecord('entangled', None, False, True, 'O', 'x', 'y')
