"""
Classical correlation J, discord and the zero-discord structural test.

J is maximized over rank-1 projective measurements on the measured
subsystem, parameterized by a Givens-angle unitary whose columns are the
measurement basis. The value is a lower bound on the POVM supremum.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.special import entr

from lib.conversions import LN2
from lib.entropies import entropy_of_spectrum
from lib.errors import UnsupportedDimensionError, ValidationError
from lib.linalg import permute_subsystems
from lib.optimize import (
    DISCORD_BUDGET, OptimizerBudget, OptimizerTrace, givens_parameter_count,
    multi_start_minimize, unitary_from_angles,
)
from lib.states import DensityMatrix
from lib.thresholds import (
    CUTOFFS, MAX_MEASURED_DIM, VALIDATION_TOLERANCES, VERDICT_TOLERANCES,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Measurement:
    """POVM elements on one subsystem; rank-one projective when generated from angles."""
    elements: np.ndarray  # (outcomes, d, d)
    rank_one: bool
    parameters: Optional[np.ndarray] = None

    def __post_init__(self):
        elements = np.asarray(self.elements, dtype=complex)
        if elements.ndim != 3 or elements.shape[1] != elements.shape[2]:
            raise ValidationError(f"POVM elements must have shape (k, d, d), got {elements.shape}")
        tol = VALIDATION_TOLERANCES['povm_completeness']
        d = elements.shape[1]
        err = float(np.max(np.abs(elements.sum(axis=0) - np.eye(d))))
        if err > tol:
            raise ValidationError(f"POVM elements sum to identity only within {err:.3g} > {tol:g}")
        min_eig = float(np.min(np.linalg.eigvalsh(elements)))
        if min_eig < -tol:
            raise ValidationError(f"POVM element has eigenvalue {min_eig:.3g} < -{tol:g}")
        object.__setattr__(self, 'elements', elements)

    @classmethod
    def from_basis(cls, basis: np.ndarray, parameters: Optional[np.ndarray] = None) -> 'Measurement':
        """Projectors onto the columns of a unitary."""
        basis = np.asarray(basis, dtype=complex)
        elements = np.einsum('ik,jk->kij', basis, basis.conj())
        return cls(elements, True, parameters)

    @property
    def outcomes(self) -> int:
        return self.elements.shape[0]


@dataclass(frozen=True)
class DiscordResult:
    discord: float
    classical_correlation: float
    mutual_information: float
    optimal_measurement: Measurement
    optimizer_trace: OptimizerTrace
    povm_gap: Optional[float] = None

    @property
    def povm_beats_projective(self) -> bool:
        return self.povm_gap is not None and self.povm_gap > VERDICT_TOLERANCES['povm_gap']


@dataclass(frozen=True, eq=False)
class ZeroDiscordVerdict:
    zero_discord: bool
    basis: Optional[np.ndarray]
    max_coherence: float


# ============================================================
# TENSOR HELPERS
# ============================================================

def split_tensor(rho: DensityMatrix, target: str | Sequence[str],
                 measured: str) -> np.ndarray:
    """
    View rho (reduced to target and measured) as R[t, m, t', m'].

    Returns:
        4-index array with the target block first
    """
    targets = (target,) if isinstance(target, str) else tuple(target)
    if measured in targets:
        raise ValidationError(f"Measured label '{measured}' is also a target")
    reduced = rho.reduce(targets + (measured,))
    matrix, sig = permute_subsystems(reduced.matrix, reduced.sig, targets + (measured,))
    d_m = sig.dims[-1]
    d_t = sig.total // d_m
    return matrix.reshape(d_t, d_m, d_t, d_m)


def conditional_blocks(tensor: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Unnormalized target states p_k rho_k for projective outcomes on the columns of basis."""
    return np.einsum('mk,ambn,nk->kab', basis.conj(), tensor, basis)


def povm_blocks(tensor: np.ndarray, elements: np.ndarray) -> np.ndarray:
    """Unnormalized target states Tr_m[(1 x E_k) rho] for general elements."""
    return np.einsum('knm,ambn->kab', elements, tensor)


def averaged_conditional_entropy(blocks: np.ndarray) -> float:
    """sum_k p_k S(rho_k) in bits from unnormalized blocks; p_k <= cutoff contributes 0."""
    lam = np.clip(np.linalg.eigvalsh(blocks), 0.0, None)
    p = lam.sum(axis=1)
    live = p > CUTOFFS['outcome_probability']
    if not np.any(live):
        return 0.0
    return float((np.sum(entr(lam[live])) - np.sum(entr(p[live]))) / LN2)


def _target_entropy(tensor: np.ndarray) -> float:
    rho_t = np.einsum('ambm->ab', tensor)
    return entropy_of_spectrum(np.linalg.eigvalsh((rho_t + rho_t.conj().T) / 2))


def _check_measured_dim(dim: int) -> None:
    if dim > MAX_MEASURED_DIM:
        raise UnsupportedDimensionError(
            f"Measured subsystem dimension {dim} exceeds supported {MAX_MEASURED_DIM}")


# ============================================================
# OPERATIONS
# ============================================================

def classical_correlation_for(rho: DensityMatrix, target: str, measured: str,
                              measurement: Measurement) -> float:
    """J for one given measurement on the measured subsystem."""
    tensor = split_tensor(rho, target, measured)
    if measurement.elements.shape[1] != tensor.shape[1]:
        raise ValidationError(
            f"Measurement acts on dimension {measurement.elements.shape[1]}, "
            f"subsystem '{measured}' has {tensor.shape[1]}")
    blocks = povm_blocks(tensor, measurement.elements)
    return _target_entropy(tensor) - averaged_conditional_entropy(blocks)


def povm_probe(rho: DensityMatrix, target: str, measured: str,
               trials: int, seed: int = 0) -> Tuple[float, Optional[Measurement]]:
    """
    Best J over random rank-1 POVMs with d^2 outcomes.

    Returns:
        (best J, its measurement); (-inf, None) when trials is 0
    """
    tensor = split_tensor(rho, target, measured)
    d = tensor.shape[1]
    s_target = _target_entropy(tensor)
    rng = np.random.default_rng(seed)
    best_j, best_m = -np.inf, None
    for _ in range(trials):
        g = rng.standard_normal((d * d, d)) + 1j * rng.standard_normal((d * d, d))
        q, _ = np.linalg.qr(g)
        w = q.conj()
        elements = np.einsum('ki,kj->kij', w, w.conj())
        j = s_target - averaged_conditional_entropy(povm_blocks(tensor, elements))
        if j > best_j:
            best_j, best_m = j, Measurement(elements, False)
    return best_j, best_m


def classical_correlation(rho: DensityMatrix, target: str, measured: str,
                          budget: OptimizerBudget = DISCORD_BUDGET,
                          povm_trials: int = 0) -> DiscordResult:
    """
    Maximize J_{target|measured} over projective measurements.

    Args:
        rho: State containing both labels (others are traced out)
        target: Label whose entropy reduction is measured
        measured: Label that is measured (dimension <= 4)
        budget: Multi-start Nelder-Mead budget
        povm_trials: Random POVM probes run after the optimization

    Returns:
        DiscordResult; its classical_correlation is a lower bound on J
    """
    tensor = split_tensor(rho, target, measured)
    d = tensor.shape[1]
    _check_measured_dim(d)

    s_target = _target_entropy(tensor)
    s_measured = entropy_of_spectrum(np.linalg.eigvalsh(np.einsum('aman->mn', tensor)))
    s_joint = entropy_of_spectrum(rho.reduce((target, measured)).eigenvalues)
    mi = s_target + s_measured - s_joint

    def objective(angles: np.ndarray) -> float:
        return averaged_conditional_entropy(conditional_blocks(tensor, unitary_from_angles(angles, d)))

    result = multi_start_minimize(objective, givens_parameter_count(d), budget)
    basis = unitary_from_angles(result.x, d)
    best = result.fun

    # eigenbasis of the measured marginal; adopted only if strictly better
    marginal = np.einsum('aman->mn', tensor)
    _, eig_basis = np.linalg.eigh((marginal + marginal.conj().T) / 2)
    eig_value = averaged_conditional_entropy(conditional_blocks(tensor, eig_basis))
    params = result.x
    if eig_value < best:
        best, basis, params = eig_value, eig_basis, None

    j = s_target - best
    logger.debug("J_{%s|%s} = %.12g (%d starts, %d iterations)", target, measured, j,
                 result.trace.starts_tried, result.trace.iterations)

    povm_gap = None
    if povm_trials > 0:
        j_povm, _ = povm_probe(rho, target, measured, povm_trials, budget.seed)
        povm_gap = max(0.0, j_povm - j)
        if povm_gap > VERDICT_TOLERANCES['povm_gap']:
            logger.warning("POVM probe beats projective J_{%s|%s} by %.3g", target, measured, povm_gap)

    return DiscordResult(
        discord=mi - j,
        classical_correlation=j,
        mutual_information=mi,
        optimal_measurement=Measurement.from_basis(basis, params),
        optimizer_trace=result.trace,
        povm_gap=povm_gap,
    )


def discord(rho: DensityMatrix, target: str, measured: str,
            budget: OptimizerBudget = DISCORD_BUDGET,
            povm_trials: int = 0) -> DiscordResult:
    """delta_{target|measured} = I - J with J from classical_correlation."""
    return classical_correlation(rho, target, measured, budget, povm_trials)


def _degenerate_groups(values: np.ndarray, tol: float) -> list[list[int]]:
    groups = [[0]]
    for i in range(1, values.size):
        if values[i] - values[groups[-1][-1]] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def zero_discord_check(rho: DensityMatrix, measured: str,
                       target: Optional[str | Sequence[str]] = None) -> ZeroDiscordVerdict:
    """
    Decide whether rho = sum_i p_i rho_i (x) |i><i| for some basis of `measured`.

    The candidate basis is the eigenbasis of the measured marginal. Inside a
    degenerate eigenspace the conditioned blocks are simultaneously
    diagonalized through a fixed random combination of their Hermitian and
    anti-Hermitian parts. The verdict holds when every block is diagonal in
    the resulting basis within the zero-discord tolerance.
    """
    if target is None:
        target = rho.sig.others((measured,))
    tensor = split_tensor(rho, target, measured)
    marginal = np.einsum('aman->mn', tensor)
    values, vectors = np.linalg.eigh((marginal + marginal.conj().T) / 2)

    basis = vectors.copy()
    rng = np.random.default_rng(0)
    for group in _degenerate_groups(values, CUTOFFS['degeneracy']):
        if len(group) < 2:
            continue
        sub = vectors[:, group]
        blocks = np.einsum('mi,ambn,nj->abij', sub.conj(), tensor, sub)
        herm = (blocks + blocks.conj().swapaxes(-1, -2)) / 2
        anti = (blocks - blocks.conj().swapaxes(-1, -2)) / 2j
        parts = np.concatenate([herm.reshape(-1, len(group), len(group)),
                                anti.reshape(-1, len(group), len(group))])
        weights = rng.standard_normal(parts.shape[0])
        combo = np.einsum('k,kij->ij', weights, parts)
        _, q = np.linalg.eigh((combo + combo.conj().T) / 2)
        basis[:, group] = sub @ q

    blocks = np.einsum('mi,ambn,nj->abij', basis.conj(), tensor, basis)
    d = basis.shape[0]
    off = blocks * (1 - np.eye(d))
    max_coherence = float(np.max(np.abs(off))) if off.size else 0.0
    zero = max_coherence <= VERDICT_TOLERANCES['zero_discord']
    return ZeroDiscordVerdict(zero, basis if zero else None, max_coherence)
