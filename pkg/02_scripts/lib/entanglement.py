"""
Entanglement measures and bound-level reports.

Contents:
    - Wootters concurrence and formation entanglement for two qubits
    - ensemble-minimization formation oracle (upper bound, any small state)
    - formation from discord with the purifying system
    - relative entropy of entanglement estimator with a separable witness
    - reports carrying provenance for cost, distillable entanglement,
      relative entropy and key rate
    - strict formation / coherent-information gap check
    - irreversibility certificate record
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize
from scipy.special import entr

from lib.conversions import LN2
from lib.correlations import discord, zero_discord_check
from lib.entropies import binary_entropy, von_neumann_entropy
from lib.errors import SupportError, UnsupportedDimensionError, ValidationError
from lib.linalg import DimSignature, permute_subsystems, permute_vector
from lib.schema import CLASSIFICATIONS, IRREVERSIBILITY_TYPES, PROVENANCE_TYPES
from lib.optimize import (
    DISCORD_BUDGET, ORACLE_BUDGET, REE_BUDGET, REE_PPT_ITERATIONS, REE_PPT_TARGET,
    REE_PPT_TERMS_PER_DIM2, REE_STALL_RELATIVE, REE_STALL_WINDOW,
    OptimizerBudget, givens_parameter_count, multi_start_minimize, polish,
    unitary_from_angles,
)
from lib.states import (
    DensityMatrix, ExampleFamilyParams, OneWayMcSpec, PureState, dephase, example_family,
    is_ppt, make_one_way_mc, purify,
)
from lib.thresholds import (
    CUTOFFS, MAX_ORACLE_DIM, VERDICT_TOLERANCES, ppt_decides_separability,
)

logger = logging.getLogger(__name__)

_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


# ============================================================
# TYPES
# ============================================================

def _check_classification(name: str) -> None:
    if name not in CLASSIFICATIONS:
        raise ValueError(f"Unknown classification '{name}'. Known: {sorted(CLASSIFICATIONS)}")


@dataclass(frozen=True)
class Bound:
    """A measure known to lie in [lower, upper], with where that knowledge comes from."""
    lower: float
    upper: float
    provenance: str

    def __post_init__(self):
        if self.provenance not in PROVENANCE_TYPES:
            raise ValueError(f"Unknown provenance '{self.provenance}'. Known: {sorted(PROVENANCE_TYPES)}")

    @classmethod
    def exact(cls, value: float, provenance: str) -> 'Bound':
        return cls(value, value, provenance)

    @property
    def is_exact(self) -> bool:
        return self.provenance.startswith('exact')

    @property
    def value(self) -> Optional[float]:
        return self.upper if self.is_exact else None


@dataclass(frozen=True, eq=False)
class EnsembleDecomposition:
    weights: np.ndarray
    members: Tuple[PureState, ...]
    isometry_params: np.ndarray

    def density(self) -> np.ndarray:
        return sum(w * np.outer(m.amplitudes, m.amplitudes.conj())
                   for w, m in zip(self.weights, self.members))


@dataclass(frozen=True, eq=False)
class SeparableWitness:
    """sigma = sum_k weights[k] |a_k><a_k| (x) |b_k><b_k|."""
    weights: np.ndarray
    a_factors: np.ndarray
    b_factors: np.ndarray
    sig: DimSignature

    def matrix(self) -> np.ndarray:
        prods = np.einsum('ka,kb->kab', self.a_factors, self.b_factors).reshape(self.weights.size, -1)
        return np.einsum('k,ki,kj->ij', self.weights, prods, prods.conj())

    @property
    def terms(self) -> int:
        return self.weights.size


@dataclass(frozen=True, eq=False)
class ReeResult:
    value: float
    witness: SeparableWitness
    iterations: int
    duality_gap: float
    converged: bool


@dataclass(frozen=True)
class EntanglementReport:
    classification: str
    concurrence: Optional[float]
    eof: float
    eof_provenance: str
    e_cost: Bound
    e_distillable: Bound
    delta_loss: Optional[float]
    ree_upper: float
    ree_lower: float
    key_rate: Bound
    coherent_information: float
    s_cond_ab: float
    complement: Optional[str] = None
    conditional: bool = False
    repeated_a_states: bool = False
    cross_checks: Dict[str, Optional[float]] = field(default_factory=dict)

    def __post_init__(self):
        _check_classification(self.classification)


@dataclass(frozen=True)
class GapVerdict:
    classification: str
    eof: float
    coherent_information: float
    gap: float
    applies: bool
    holds: Optional[bool]


@dataclass(frozen=True)
class ConditionRecord:
    classification: str
    complement: Optional[str]
    additivity_certified: bool
    single_copy_distillable: bool
    irreversibility_type: str
    verdict: str
    note: str
    separable_iff_zero_conditional: Optional[bool] = None
    both_complements: bool = False

    def __post_init__(self):
        _check_classification(self.classification)
        if self.irreversibility_type not in IRREVERSIBILITY_TYPES:
            raise ValueError(f"Unknown irreversibility type '{self.irreversibility_type}'")


# ============================================================
# TWO-QUBIT CLOSED FORMS
# ============================================================

def _require_two_qubits(rho: DensityMatrix) -> None:
    if rho.sig.dims != (2, 2):
        raise UnsupportedDimensionError(f"Two-qubit formula needs dims (2, 2), got {rho.sig.dims}")


def concurrence_2q(rho: DensityMatrix) -> float:
    """
    Wootters concurrence max{0, r1 - r2 - r3 - r4}.

    The r_i are the singular values of W^T (Y x Y) W for rho = W W^dagger.
    """
    _require_two_qubits(rho)
    lam, vec = np.linalg.eigh(rho.matrix)
    keep = lam > CUTOFFS['concurrence_eigenvalue']
    if not keep.any():
        return 0.0
    w = vec[:, keep] * np.sqrt(lam[keep])
    tau = w.T @ _YY @ w
    r = np.zeros(4)
    sv = np.sort(np.linalg.svd(tau, compute_uv=False))[::-1]
    r[:len(sv)] = sv
    return float(min(max(0.0, r[0] - r[1] - r[2] - r[3]), 1.0))


def eof_from_concurrence(c: float) -> float:
    return binary_entropy((1 + math.sqrt(max(0.0, 1 - c * c))) / 2)


def eof_2q(rho: DensityMatrix) -> float:
    """Formation entanglement of two qubits in bits."""
    return eof_from_concurrence(concurrence_2q(rho))


def example_family_closed_form(theta: float, phi: float) -> Dict[str, float]:
    """Closed forms for sigma_ab of the two-angle family."""
    c = math.cos(phi) * math.sin(theta)
    e_c = eof_from_concurrence(c)
    e_d = (binary_entropy((1 + math.cos(phi) * math.cos(theta)) / 2)
           - binary_entropy((1 + math.cos(phi)) / 2))
    return {'concurrence': c, 'E_C': e_c, 'E_D': e_d, 'Delta': e_c - e_d}


# ============================================================
# ENSEMBLE ORACLE
# ============================================================

def _ensemble_objective_terms(psi: np.ndarray, d_left: int, d_right: int) -> float:
    """sum_i p_i S(Tr_right psi_i) from unnormalized member rows."""
    s = np.linalg.svd(psi.reshape(-1, d_left, d_right), compute_uv=False)
    lam = s ** 2
    p = lam.sum(axis=1)
    live = p > CUTOFFS['outcome_probability']
    return float((np.sum(entr(lam[live])) - np.sum(entr(p[live]))) / LN2)


def eof_ensemble_oracle(rho: DensityMatrix, m: Optional[int] = None,
                        budget: OptimizerBudget = ORACLE_BUDGET,
                        left: Optional[Sequence[str]] = None
                        ) -> Tuple[float, EnsembleDecomposition]:
    """
    Minimize average entanglement over size-m ensembles of rho.

    Members are rows of U[:, :r] sqrt(Lambda) V^T with U an m x m Givens
    unitary, which reaches every size-m ensemble.

    Args:
        rho: State of total dimension <= 16
        m: Ensemble size in [rank, rank^2], defaults to rank
        budget: Multi-start budget
        left: Labels on the left of the cut, defaults to the first label

    Returns:
        (upper bound on formation entanglement, the minimizing ensemble)
    """
    if rho.dim > MAX_ORACLE_DIM:
        raise UnsupportedDimensionError(f"Oracle supports total dimension <= {MAX_ORACLE_DIM}, got {rho.dim}")
    left = (rho.sig.labels[0],) if left is None else tuple(left)
    right = rho.sig.others(left)
    if not right:
        raise ValidationError("Oracle needs a non-trivial bipartition")
    order = rho.sig.restrict(left).labels + right
    matrix, split_sig = permute_subsystems(rho.matrix, rho.sig, order)
    d_left = rho.sig.restrict(left).total
    d_right = rho.dim // d_left

    lam, vec = np.linalg.eigh(matrix)
    support = lam > CUTOFFS['rank']
    lam, vec = lam[support], vec[:, support]
    r = lam.size
    m = r if m is None else int(m)
    if m < r:
        raise ValidationError(f"Ensemble size m = {m} is below rank {r}")
    if m > r * r:
        raise ValidationError(f"Ensemble size m = {m} exceeds rank^2 = {r * r}")
    base = np.sqrt(lam)[:, None] * vec.T  # rows sqrt(l_k) v_k

    def members(angles: np.ndarray) -> np.ndarray:
        return unitary_from_angles(angles, m)[:, :r] @ base

    def objective(angles: np.ndarray) -> float:
        return _ensemble_objective_terms(members(angles), d_left, d_right)

    result = multi_start_minimize(objective, givens_parameter_count(m), budget)
    best_x, best_f = polish(objective, result.x, result.fun, budget)

    rows = members(best_x)
    weights = np.sum(np.abs(rows) ** 2, axis=1)
    keep = weights > CUTOFFS['outcome_probability']
    decomposition = EnsembleDecomposition(
        weights=weights[keep] / weights[keep].sum(),
        members=tuple(PureState.normalized(permute_vector(row, split_sig, rho.sig.labels)[0], rho.sig)
                      for row in rows[keep]),
        isometry_params=best_x,
    )
    logger.debug("oracle: m=%d value=%.12g", m, best_f)
    return max(best_f, 0.0), decomposition


# ============================================================
# DISCORD ROUTE
# ============================================================

def eof_via_koashi_winter(psi: PureState, budget: OptimizerBudget = DISCORD_BUDGET) -> float:
    """
    Formation of rho_ab from delta_{a|c}(rho_ac) - S_{a|b}(rho_ab).

    Labels are taken in signature order (a, b, c). The projective J
    under-estimates J, so the result over-estimates formation.
    """
    if len(psi.sig) != 3:
        raise ValidationError(f"Need a tripartite pure state, got labels {list(psi.sig.labels)}")
    a, b, c = psi.sig.labels
    rho = psi.density()
    d_ac = discord(rho, a, c, budget).discord
    rho_ab = rho.reduce((a, b))
    s_cond = von_neumann_entropy(rho_ab) - von_neumann_entropy(rho_ab.reduce((b,)))
    return d_ac - s_cond


# ============================================================
# RELATIVE ENTROPY OF ENTANGLEMENT
# ============================================================

def _safe_eigh(sigma: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    s, q = np.linalg.eigh((sigma + sigma.conj().T) / 2)
    return np.maximum(s, CUTOFFS['ree_eigenvalue_floor']), q


def relative_entropy(rho: np.ndarray, sigma: np.ndarray) -> float:
    """S(rho || sigma) = Tr rho (log2 rho - log2 sigma)."""
    lam = np.clip(np.linalg.eigvalsh(rho), 0.0, None)
    s, q = _safe_eigh(sigma)
    cross = np.real(np.einsum('ij,ji->', rho, (q * np.log(s)) @ q.conj().T))
    return float((-np.sum(entr(lam)) - cross) / LN2)


def _relative_entropy_gradient(rho: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """Gradient in sigma of -Tr rho log2 sigma (Frechet derivative of log)."""
    s, q = _safe_eigh(sigma)
    ls = np.log(s)
    ds = s[:, None] - s[None, :]
    dl = ls[:, None] - ls[None, :]
    close = np.abs(ds) <= 1e-12 * np.maximum(s[:, None], s[None, :])
    with np.errstate(divide='ignore', invalid='ignore'):
        ratio = np.where(close, 2.0 / (s[:, None] + s[None, :]), dl / np.where(close, 1.0, ds))
    rho_q = q.conj().T @ rho @ q
    return -(q @ (rho_q * ratio) @ q.conj().T) / LN2


def _best_product(grad: np.ndarray, d_a: int, d_b: int, restarts: int,
                  rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray, float]:
    """Minimize <ab|G|ab> over product unit vectors by alternating eigenproblems."""
    t = grad.reshape(d_a, d_b, d_a, d_b)
    best = (None, None, np.inf)
    for r in range(restarts + 1):
        if r == 0:
            m_b = np.einsum('abad->bd', t)
            beta = np.linalg.eigh((m_b + m_b.conj().T) / 2)[1][:, 0]
        else:
            beta = rng.standard_normal(d_b) + 1j * rng.standard_normal(d_b)
            beta /= np.linalg.norm(beta)
        value = np.inf
        for _ in range(100):
            m_a = np.einsum('b,abcd,d->ac', beta.conj(), t, beta)
            alpha = np.linalg.eigh((m_a + m_a.conj().T) / 2)[1][:, 0]
            m_b = np.einsum('a,abcd,c->bd', alpha.conj(), t, alpha)
            vals, vecs = np.linalg.eigh((m_b + m_b.conj().T) / 2)
            beta = vecs[:, 0]
            if value - vals[0] <= 1e-14 * (1 + abs(vals[0])):
                value = vals[0]
                break
            value = vals[0]
        if value < best[2]:
            best = (alpha, beta, float(value))
    return best


def _projectors(a_factors: np.ndarray, b_factors: np.ndarray) -> np.ndarray:
    prods = np.einsum('ka,kb->kab', a_factors, b_factors).reshape(a_factors.shape[0], -1)
    return np.einsum('ki,kj->kij', prods, prods.conj())


def _reweight(rho: np.ndarray, projectors: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Minimize S(rho || sum w_k P_k) over the simplex."""

    def fun(w):
        return relative_entropy(rho, np.einsum('k,kij->ij', w, projectors))

    def jac(w):
        grad = _relative_entropy_gradient(rho, np.einsum('k,kij->ij', w, projectors))
        return np.real(np.einsum('ij,kji->k', grad, projectors))

    res = minimize(fun, weights, jac=jac, method='SLSQP',
                   bounds=[(0.0, 1.0)] * weights.size,
                   constraints=[{'type': 'eq', 'fun': lambda w: np.sum(w) - 1.0,
                                 'jac': lambda w: np.ones_like(w)}],
                   options={'maxiter': 200, 'ftol': 1e-15})
    w = np.clip(res.x, 0.0, None)
    w = w / w.sum()
    return w if fun(w) <= fun(weights) else weights


def ree_estimate(rho: DensityMatrix, budget: OptimizerBudget = REE_BUDGET,
                 max_terms: int = 16) -> ReeResult:
    """
    Upper bound on the relative entropy of entanglement for 2x2 and 2x3 states.

    Frank-Wolfe over mixtures of product states: each step adds the product
    state minimizing the linearized objective (alternating eigenproblems,
    `budget.starts` random restarts) and re-optimizes all weights on the
    simplex. At most `max_terms` product states are kept.

    The initial terms are the products of the marginal eigenbases and the
    eigen-decomposition of rho dephased on the second subsystem. PPT inputs
    are separable here, so they get a larger term cap and more iterations,
    and the stall rule only stops them once the value is near 0.

    Raises:
        UnsupportedDimensionError: Outside 2x2 and 2x3
        SupportError: Witness misses part of the support of rho
    """
    if len(rho.sig) != 2 or not ppt_decides_separability(rho.sig.dims):
        raise UnsupportedDimensionError(f"REE estimator supports 2x2 and 2x3, got {rho.sig.dims}")
    d_a, d_b = rho.sig.dims
    d = rho.dim
    eps = CUTOFFS['ree_regularization']
    target = rho.matrix if rho.rank == d else (1 - eps) * rho.matrix + eps * np.eye(d) / d
    rng = np.random.default_rng(budget.seed)

    ppt = is_ppt(rho).ppt
    term_cap = max(max_terms, REE_PPT_TERMS_PER_DIM2 * d * d) if ppt else max_terms
    iterations = max(budget.iterations, REE_PPT_ITERATIONS) if ppt else budget.iterations

    # product of marginal eigenbases mixed with I/d
    la, va = np.linalg.eigh(rho.reduce((rho.sig.labels[0],)).matrix)
    lb, vb = np.linalg.eigh(rho.reduce((rho.sig.labels[1],)).matrix)
    a_factors = np.repeat(va.T, d_b, axis=0)
    b_factors = np.tile(vb.T, (d_a, 1))
    weights = 0.5 * np.outer(np.clip(la, 0, None), np.clip(lb, 0, None)).reshape(-1) + 0.5 / d
    weights /= weights.sum()

    # dephased on b: sum_j A_j (x) |j><j|, one product term per eigenvector of A_j
    blocks = dephase(rho, rho.sig.labels[1]).matrix.reshape(d_a, d_b, d_a, d_b)
    deph_a, deph_b, deph_w = [], [], []
    for j in range(d_b):
        lj, vj = np.linalg.eigh(blocks[:, j, :, j])
        for k in range(d_a):
            deph_a.append(vj[:, k])
            deph_b.append(np.eye(d_b)[j])
            deph_w.append(max(float(lj[k]), 0.0))
    deph_w = np.array(deph_w)
    a_factors = np.vstack([a_factors, np.array(deph_a)])
    b_factors = np.vstack([b_factors, np.array(deph_b, dtype=complex)])
    weights = np.concatenate([weights, deph_w / deph_w.sum()]) / 2
    weights = _reweight(target, _projectors(a_factors, b_factors), weights)

    value = relative_entropy(target, np.einsum('k,kij->ij', weights, _projectors(a_factors, b_factors)))
    history = [value]
    gap, converged, it = np.inf, False, 0
    for it in range(1, iterations + 1):
        projectors = _projectors(a_factors, b_factors)
        sigma = np.einsum('k,kij->ij', weights, projectors)
        grad = _relative_entropy_gradient(target, sigma)
        alpha, beta, lin = _best_product(grad, d_a, d_b, budget.starts, rng)
        current = float(np.real(np.einsum('ij,ji->', grad, sigma)))
        gap = current - lin
        if gap <= 1e-13 * (1 + abs(current)):
            converged = True
            break

        a_factors = np.vstack([a_factors, alpha])
        b_factors = np.vstack([b_factors, beta])
        weights = np.append(weights * 0.9, 0.1)
        if weights.size > term_cap:
            drop = int(np.argmin(weights[:-1]))
            a_factors = np.delete(a_factors, drop, axis=0)
            b_factors = np.delete(b_factors, drop, axis=0)
            weights = np.delete(weights, drop)
            weights /= weights.sum()
        weights = _reweight(target, _projectors(a_factors, b_factors), weights)
        value = relative_entropy(target, np.einsum('k,kij->ij', weights, _projectors(a_factors, b_factors)))
        history.append(value)
        if len(history) > REE_STALL_WINDOW and not (ppt and value > REE_PPT_TARGET):
            improvement = history[-REE_STALL_WINDOW - 1] - value
            if improvement <= REE_STALL_RELATIVE * max(abs(value), 1e-12):
                converged = True
                break

    witness = SeparableWitness(weights, a_factors, b_factors, rho.sig)
    sigma = witness.matrix()
    s, q = np.linalg.eigh((sigma + sigma.conj().T) / 2)
    null = q[:, s <= 1e-14]
    leak = float(np.real(np.trace(null.conj().T @ rho.matrix @ null))) if null.size else 0.0
    if leak > CUTOFFS['support_leak']:
        raise SupportError(f"Witness support misses weight {leak:.3g} of rho")
    final = max(relative_entropy(rho.matrix, sigma), 0.0)
    logger.debug("ree: value=%.12g after %d iterations (gap %.3g)", final, it, gap)
    return ReeResult(final, witness, it, float(gap), converged)


# ============================================================
# CLASSIFICATION AND REPORTS
# ============================================================

def _bipartite_labels(rho: DensityMatrix) -> Tuple[str, str]:
    if len(rho.sig) != 2:
        raise ValidationError(f"Need a bipartite state, got labels {list(rho.sig.labels)}")
    return rho.sig.labels


def _certified_separable(rho: DensityMatrix) -> bool:
    if not ppt_decides_separability(rho.sig.dims):
        return False
    return is_ppt(rho).ppt


def complement_certificates(rho: DensityMatrix) -> Dict[str, bool]:
    """Which purification marginals (a with ancilla, b with ancilla) are certified separable."""
    a, b = _bipartite_labels(rho)
    psi = purify(rho)
    c = psi.sig.labels[-1]
    return {
        'ac': _certified_separable(psi.reduce((a, c))),
        'bc': _certified_separable(psi.reduce((b, c))),
    }


def classify_state(rho: DensityMatrix) -> str:
    """pure, separable, pseudo-pure or mixed-entangled."""
    a, b = _bipartite_labels(rho)
    if rho.is_pure:
        return 'pure'
    verdict = is_ppt(rho)
    if verdict.ppt and verdict.decides_separability:
        return 'separable'
    psi = purify(rho)
    c = psi.sig.labels[-1]
    for side in (a, b):
        marginal = psi.reduce((side, c))
        if marginal.sig.dims[-1] <= 1 or zero_discord_check(marginal, c).zero_discord:
            return 'pseudo-pure'
    return 'mixed-entangled'


def _formation(rho: DensityMatrix) -> Tuple[float, str, Optional[float]]:
    """(formation value, provenance, concurrence)."""
    if rho.sig.dims == (2, 2):
        c = concurrence_2q(rho)
        return eof_from_concurrence(c), 'closed-form', c
    value, _ = eof_ensemble_oracle(rho)
    return value, 'oracle-upper-bound', None


def _conditional_entropies(rho: DensityMatrix) -> Tuple[float, float, float, float]:
    a, b = _bipartite_labels(rho)
    s_ab = von_neumann_entropy(rho)
    s_a = von_neumann_entropy(rho.reduce((a,)))
    s_b = von_neumann_entropy(rho.reduce((b,)))
    return s_ab - s_b, s_ab - s_a, s_a, s_b


def _exact_report(classification: str, value: float, provenance: str,
                  s_cond_ab: float, ic: float, concurrence: Optional[float],
                  eof: float, **extra) -> EntanglementReport:
    bound = Bound.exact(value, provenance)
    return EntanglementReport(
        classification=classification, concurrence=concurrence, eof=eof,
        eof_provenance='closed-form' if concurrence is not None else 'exact',
        e_cost=bound, e_distillable=bound, delta_loss=0.0,
        ree_upper=value, ree_lower=value, key_rate=bound,
        coherent_information=ic, s_cond_ab=s_cond_ab, **extra)


def entanglement_report(rho: DensityMatrix, with_ree: bool = False,
                        ree_budget: OptimizerBudget = REE_BUDGET) -> EntanglementReport:
    """
    Bound-level report for a bipartite state.

    Exact values are claimed for pure and certified-separable states, and
    when a purification marginal is certified separable (distillable
    entanglement equals minus the conditional entropy and formation is
    additive). Otherwise cost and distillable entanglement are intervals
    between the coherent information and the formation / REE upper bounds.
    """
    s_cond_ab, s_cond_ba, s_a, s_b = _conditional_entropies(rho)
    ic = max(0.0, -s_cond_ab, -s_cond_ba)
    classification = classify_state(rho)

    if classification == 'pure':
        c = concurrence_2q(rho) if rho.sig.dims == (2, 2) else None
        return _exact_report('pure', s_a, 'exact-pure', s_cond_ab, ic, c, s_a)
    if classification == 'separable':
        c = concurrence_2q(rho) if rho.sig.dims == (2, 2) else None
        return _exact_report('separable', 0.0, 'exact-separable', s_cond_ab, ic, c, 0.0)

    eof, eof_provenance, c = _formation(rho)
    certs = complement_certificates(rho)
    cross: Dict[str, Optional[float]] = {}

    ree_numeric = None
    if with_ree and ppt_decides_separability(rho.sig.dims):
        ree_numeric = ree_estimate(rho, ree_budget).value
        cross['ree_numeric'] = ree_numeric

    if certs['ac'] or certs['bc']:
        complement = 'ac' if certs['ac'] else 'bc'
        e_d = max(0.0, -s_cond_ab if certs['ac'] else -s_cond_ba)
        if certs['ac'] and certs['bc']:
            e_d = max(0.0, -s_cond_ab, -s_cond_ba)
        exact_cost = eof_provenance == 'closed-form'
        e_cost = (Bound.exact(eof, 'exact-by-additivity') if exact_cost
                  else Bound(e_d, eof, 'upper-bound'))
        if ree_numeric is not None:
            cross['ree_deviation'] = ree_numeric - e_d
        return EntanglementReport(
            classification=classification, concurrence=c, eof=eof,
            eof_provenance=eof_provenance, e_cost=e_cost,
            e_distillable=Bound.exact(e_d, 'exact-by-theorem'),
            delta_loss=eof - e_d if exact_cost else None,
            ree_upper=e_d, ree_lower=e_d, key_rate=Bound.exact(e_d, 'exact-by-theorem'),
            coherent_information=ic, s_cond_ab=s_cond_ab, complement=complement,
            cross_checks=cross)

    ree_upper = eof if ree_numeric is None else min(ree_numeric, eof)
    return EntanglementReport(
        classification=classification, concurrence=c, eof=eof,
        eof_provenance=eof_provenance,
        e_cost=Bound(ic, eof, 'interval'),
        e_distillable=Bound(ic, ree_upper, 'lower-bound'),
        delta_loss=None, ree_upper=ree_upper, ree_lower=ic,
        key_rate=Bound(ic, ree_upper, 'interval'),
        coherent_information=ic, s_cond_ab=s_cond_ab, cross_checks=cross)


def separable_complement_report(source: OneWayMcSpec | ExampleFamilyParams | PureState,
                                budget: OptimizerBudget = DISCORD_BUDGET,
                                with_ree: bool = False,
                                ree_budget: OptimizerBudget = REE_BUDGET) -> EntanglementReport:
    """
    Exact measure chain for rho_ab whose complement rho_ac is separable.

    For a 1-MC spec (or the example family) rho_ac is an explicit mixture of
    product states, so the hypothesis holds by construction; the PPT verdict
    is still computed and must agree. For a general tripartite pure state the
    PPT verdict is the certificate and the report is conditional when it is
    not decisive.

    Returns:
        EntanglementReport with exact distillable entanglement, REE and key
        rate equal to -S_{a|b}, and formation as the exact cost when a closed
        form exists. Cross-checks carry the numerical discord and, when
        requested, the REE estimate.
    """
    repeated = False
    if isinstance(source, ExampleFamilyParams):
        psi, rho_ab, rho_ac = example_family(source)
        by_construction = True
    elif isinstance(source, OneWayMcSpec):
        psi, rho_ab = make_one_way_mc(source)
        rho_ac = psi.reduce((psi.sig.labels[0], psi.sig.labels[2]))
        by_construction = True
        repeated = source.has_repeated_a_states
    elif isinstance(source, PureState):
        if len(source.sig) != 3:
            raise ValidationError(f"Need a tripartite pure state, got labels {list(source.sig.labels)}")
        psi = source
        a, b, c = psi.sig.labels
        rho_ab, rho_ac = psi.reduce((a, b)), psi.reduce((a, c))
        by_construction = False
    else:
        raise ValidationError(f"Unsupported report source {type(source).__name__}")

    a, b = rho_ab.sig.labels
    ppt_ac = is_ppt(rho_ac)
    if by_construction and not ppt_ac.ppt:
        raise ValidationError(
            f"Complement built as a product mixture fails PPT (min eigenvalue {ppt_ac.min_eigenvalue:.3g})")
    certified = by_construction or ppt_ac.separable is True

    s_cond_ab, s_cond_ba, s_a, s_b = _conditional_entropies(rho_ab)
    ic = max(0.0, -s_cond_ab, -s_cond_ba)
    e_d = max(0.0, -s_cond_ab)

    cross: Dict[str, Optional[float]] = {'ppt_ac_min_eigenvalue': ppt_ac.min_eigenvalue}
    if rho_ab.sig.dim(b) <= 4:
        numeric = discord(rho_ab, a, b, budget).discord
        cross['discord_ab_numeric'] = numeric
        cross['discord_deviation'] = numeric - e_d
    if with_ree and ppt_decides_separability(rho_ab.sig.dims):
        ree_numeric = ree_estimate(rho_ab, ree_budget).value
        cross['ree_numeric'] = ree_numeric
        cross['ree_deviation'] = ree_numeric - e_d

    if rho_ab.sig.dims == (2, 2):
        c = concurrence_2q(rho_ab)
        eof, eof_provenance = eof_from_concurrence(c), 'closed-form'
    else:
        c = None
        eof, eof_provenance = eof_via_koashi_winter(psi, budget), 'koashi-winter-upper-bound'

    if not certified:
        return EntanglementReport(
            classification=classify_state(rho_ab) if rho_ab.sig.dims == (2, 2) else 'mixed-entangled',
            concurrence=c, eof=eof, eof_provenance=eof_provenance,
            e_cost=Bound(ic, eof, 'conditional'), e_distillable=Bound(ic, eof, 'conditional'),
            delta_loss=None, ree_upper=eof, ree_lower=ic, key_rate=Bound(ic, eof, 'conditional'),
            coherent_information=ic, s_cond_ab=s_cond_ab, conditional=True,
            repeated_a_states=repeated, cross_checks=cross)

    if rho_ab.is_pure:
        return _exact_report('pure', e_d, 'exact-pure', s_cond_ab, ic, c, e_d,
                             complement='ac', repeated_a_states=repeated, cross_checks=cross)

    if e_d <= VERDICT_TOLERANCES['entangled_margin']:
        classification = 'separable'
    else:
        classification = 'mixed-entangled'
    exact_cost = eof_provenance == 'closed-form'
    e_cost = Bound.exact(eof, 'exact-by-additivity') if exact_cost else Bound(e_d, eof, 'upper-bound')
    return EntanglementReport(
        classification=classification, concurrence=c, eof=eof, eof_provenance=eof_provenance,
        e_cost=e_cost, e_distillable=Bound.exact(e_d, 'exact-by-theorem'),
        delta_loss=max(eof - e_d, 0.0) if exact_cost else None,
        ree_upper=e_d, ree_lower=e_d, key_rate=Bound.exact(e_d, 'exact-by-theorem'),
        coherent_information=ic, s_cond_ab=s_cond_ab, complement='ac',
        repeated_a_states=repeated, cross_checks=cross)


def strict_gap_check(rho: DensityMatrix) -> GapVerdict:
    """Formation minus coherent information; strictly positive for mixed entangled non-PP states."""
    _require_two_qubits(rho)
    classification = classify_state(rho)
    eof = eof_2q(rho)
    s_cond_ab, s_cond_ba, _, _ = _conditional_entropies(rho)
    ic = max(0.0, -s_cond_ab, -s_cond_ba)
    gap = eof - ic
    applies = classification == 'mixed-entangled'
    return GapVerdict(classification, eof, ic, gap, applies, gap > 0 if applies else None)


def _type_label(additive: bool, single_copy: bool) -> str:
    return {(True, True): 'AB', (True, False): 'A', (False, True): 'B'}.get((additive, single_copy), 'O')


def irreversibility_conditions(rho: DensityMatrix, with_ree: bool = False,
                               ree_budget: OptimizerBudget = REE_BUDGET) -> ConditionRecord:
    """
    Single-copy irreversibility certificates for a two-qubit state.

    Type A means formation is additive, so the cost equals one-copy formation.
    Type B means distillable entanglement is the one-copy coherent information
    and sits strictly below formation. AB states are irreversible; pure,
    separable and uncertified states are type O. Nothing here ever claims
    reversibility of a mixed state.

    Args:
        rho: Two-qubit state
        with_ree: Also try the REE estimate as a type-B certificate when no
            purification marginal is certified separable
        ree_budget: Budget for that estimate

    Returns:
        ConditionRecord with the type label and verdict
    """
    _require_two_qubits(rho)
    classification = classify_state(rho)
    if classification == 'pure':
        return ConditionRecord(classification, None, False, True, 'O', 'reversible (pure)',
                               'pure states dilute and distill at the same rate; no certificate needed')
    if classification == 'separable':
        return ConditionRecord(classification, None, False, False, 'O', 'no entanglement',
                               'separable state')

    certs = complement_certificates(rho)
    eof = eof_2q(rho)
    s_cond_ab, s_cond_ba, _, _ = _conditional_entropies(rho)
    margin = VERDICT_TOLERANCES['entangled_margin']

    if not (certs['ac'] or certs['bc']):
        single_copy = False
        note = 'neither purification marginal is certified separable'
        if with_ree:
            ic = max(0.0, -s_cond_ab, -s_cond_ba)
            ree = ree_estimate(rho, ree_budget).value
            single_copy = ree <= ic + VERDICT_TOLERANCES['ree_pinch'] and eof - ic > margin
            if single_copy:
                note += f'; REE {ree:.9g} meets the coherent information {ic:.9g}'
        return ConditionRecord(classification, None, False, single_copy,
                               _type_label(False, single_copy), 'no certificate', note)

    complement = 'ac' if certs['ac'] else 'bc'
    both = certs['ac'] and certs['bc']
    s_cond = s_cond_ab if certs['ac'] else s_cond_ba
    if both:
        s_cond = min(s_cond_ab, s_cond_ba)
    e_d = max(0.0, -s_cond)
    single_copy = eof - e_d > margin
    label = _type_label(True, single_copy)
    consistent = is_ppt(rho).ppt == (abs(s_cond) <= margin)
    note = (f'rho_{complement} is separable: formation is additive and distillable entanglement '
            f'equals the one-copy coherent information')
    if both:
        note += '; rho_ac and rho_bc are both separable, so the certificate holds in both orientations'
    verdict = 'irreversible (separable complement)' if label == 'AB' else 'no certificate'
    return ConditionRecord(classification, complement, True, single_copy, label, verdict, note,
                           separable_iff_zero_conditional=consistent, both_complements=both)
