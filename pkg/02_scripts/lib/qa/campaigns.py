"""
Seeded verification campaigns.

Each campaign draws states (or grid points) per trial, evaluates an identity
or inequality with independent evaluators on both sides, and records the
deviation. Trial i uses the generator seeded with (seed, i), so a trial can
be rerun alone and results do not depend on the number of workers.

Campaigns:
    koashi-winter    formation of rho_ab vs discord of rho_ac minus S_{a|b}
    dual-identity    formation of rho_ab + J_{a|c} vs S_a
    strict-gap       formation strictly above coherent information
    complement-grid  discord delta_{a|b} vs -S_{a|b} on the example grid
    chain            bound-chain audit of random reports
    eof-oracle       ensemble oracle vs closed-form formation
    purification     purify then trace out the ancilla
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from lib.conversions import angle_grid
from lib.correlations import classical_correlation, discord
from lib.entanglement import (
    entanglement_report, eof_2q, eof_ensemble_oracle, eof_via_koashi_winter,
    ree_estimate, separable_complement_report, strict_gap_check,
)
from lib.entropies import conditional_entropy, von_neumann_entropy
from lib.linalg import DimSignature
from lib.optimize import DISCORD_BUDGET, ORACLE_CAMPAIGN_BUDGET, OptimizerBudget
from lib.qa.utils import find_chain_violations, worst_violation
from lib.schema import CAMPAIGN_TYPES
from lib.states import (
    ExampleFamilyParams, example_family, is_ppt, purify, random_density_matrix,
    random_pure_state,
)
from lib.thresholds import AUDIT_SLACKS, MAX_TOTAL_DIM, VERDICT_TOLERANCES

logger = logging.getLogger(__name__)

# name -> (default trials, default tolerance)
CAMPAIGN_DEFAULTS: Dict[str, Tuple[int, float]] = {
    'koashi-winter': (200, 1e-4),
    'dual-identity': (300, 1e-4),
    'strict-gap': (300, 1e-6),
    'complement-grid': (17, 1e-4),  # trials = grid points per axis
    'chain': (1000, AUDIT_SLACKS['chain']),
    'eof-oracle': (200, 1e-5),
    'purification': (500, 1e-9),
}

# entangled draws for strict-gap need a partial transpose at least this negative
STRICT_GAP_PT_MARGIN = -1e-3
STRICT_GAP_MAX_DRAWS = 200
REE_SUBGRID_SIDE = 5

QUBITS_2 = DimSignature((2, 2), ('a', 'b'))
QUBITS_3 = DimSignature((2, 2, 2), ('a', 'b', 'c'))


# ============================================================
# TYPES
# ============================================================

@dataclass(frozen=True)
class CampaignConfig:
    name: str
    trials: Optional[int] = None
    seed: int = 0
    tolerance: Optional[float] = None
    budget: OptimizerBudget = field(default=DISCORD_BUDGET)
    workers: int = 1
    with_ree: bool = False

    def __post_init__(self):
        if self.name not in CAMPAIGN_TYPES:
            raise ValueError(f"Unknown campaign '{self.name}'. Known campaigns: {sorted(CAMPAIGN_TYPES)}")
        trials, tolerance = CAMPAIGN_DEFAULTS[self.name]
        if self.trials is None:
            object.__setattr__(self, 'trials', trials)
        if self.tolerance is None:
            object.__setattr__(self, 'tolerance', tolerance)
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be > 0, got {self.tolerance}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")

    @property
    def trial_count(self) -> int:
        """Number of trials actually run (grid campaigns run trials^2 points)."""
        return self.trials ** 2 if self.name == 'complement-grid' else self.trials


@dataclass(frozen=True)
class TrialOutcome:
    trial: int
    deviation: float
    passed: bool
    detail: str = ''


@dataclass(frozen=True)
class CampaignResult:
    config: CampaignConfig
    outcomes: Tuple[TrialOutcome, ...]

    @property
    def failures(self) -> int:
        return sum(not o.passed for o in self.outcomes)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    @property
    def worst_deviation(self) -> float:
        return max((o.deviation for o in self.outcomes), default=0.0)

    def trial_rows(self) -> List[dict]:
        return [{
            'campaign': self.config.name,
            'trial': o.trial,
            'seed': self.config.seed,
            'deviation': o.deviation,
            'passed': o.passed,
            'detail': o.detail,
        } for o in self.outcomes]

    def summary_row(self) -> dict:
        return {
            'campaign': self.config.name,
            'trials': len(self.outcomes),
            'seed': self.config.seed,
            'tolerance': self.config.tolerance,
            'worst_deviation': self.worst_deviation,
            'failures': self.failures,
            'passed': self.passed,
        }


def trial_rng(config: CampaignConfig, index: int, attempt: int = 0) -> np.random.Generator:
    return np.random.default_rng([config.seed, index, attempt])


def _seed(config: CampaignConfig, index: int, attempt: int = 0) -> List[int]:
    return [config.seed, index, attempt]


# ============================================================
# TRIALS
# ============================================================

def _koashi_winter_trial(config: CampaignConfig, index: int) -> TrialOutcome:
    psi = random_pure_state(QUBITS_3, _seed(config, index))
    exact = eof_2q(psi.reduce(('a', 'b')))
    via_discord = eof_via_koashi_winter(psi, config.budget)
    signed = via_discord - exact
    # the discord route can only over-estimate
    passed = -AUDIT_SLACKS['chain'] <= signed <= config.tolerance
    return TrialOutcome(index, abs(signed), passed,
                        f"eof={exact:.12g} discord route={via_discord:.12g}")


def _dual_identity_trial(config: CampaignConfig, index: int) -> TrialOutcome:
    psi = random_pure_state(QUBITS_3, _seed(config, index))
    rho = psi.density()
    e_ab = eof_2q(rho.reduce(('a', 'b')))
    j_ac = classical_correlation(rho, 'a', 'c', config.budget).classical_correlation
    s_a = von_neumann_entropy(rho.reduce(('a',)))
    signed = e_ab + j_ac - s_a
    # projective J under-estimates, so the left side never exceeds S_a
    passed = -config.tolerance <= signed <= AUDIT_SLACKS['chain']
    return TrialOutcome(index, abs(signed), passed,
                        f"E_ab={e_ab:.12g} J_a|c={j_ac:.12g} S_a={s_a:.12g}")


def _strict_gap_trial(config: CampaignConfig, index: int) -> TrialOutcome:
    for attempt in range(STRICT_GAP_MAX_DRAWS):
        rho = random_density_matrix(QUBITS_2, 4, _seed(config, index, attempt))
        if is_ppt(rho).min_eigenvalue > STRICT_GAP_PT_MARGIN:
            continue
        verdict = strict_gap_check(rho)
        if not verdict.applies:
            continue
        passed = verdict.gap >= config.tolerance
        # deviation is the shortfall below the required gap
        return TrialOutcome(index, max(0.0, config.tolerance - verdict.gap), passed,
                            f"gap={verdict.gap:.12g} eof={verdict.eof:.12g} "
                            f"I_C={verdict.coherent_information:.12g} draw={attempt}")
    return TrialOutcome(index, config.tolerance, False,
                        f"no mixed entangled draw in {STRICT_GAP_MAX_DRAWS} attempts")


def _on_ree_subgrid(i: int, j: int, side: int) -> bool:
    if side < REE_SUBGRID_SIDE or (side - 1) % (REE_SUBGRID_SIDE - 1):
        return False
    stride = (side - 1) // (REE_SUBGRID_SIDE - 1)
    return i % stride == 0 and j % stride == 0


def _complement_grid_trial(config: CampaignConfig, index: int) -> TrialOutcome:
    side = config.trials
    i, j = divmod(index, side)
    grid = angle_grid(0.0, math.pi / 2, side) if side > 1 else np.array([math.pi / 4])
    theta, phi = float(grid[i]), float(grid[j])
    psi, sigma_ab, rho_ac = example_family(ExampleFamilyParams(theta, phi))

    s_cond = conditional_entropy(sigma_ab, 'a', 'b')
    numeric = discord(sigma_ab, 'a', 'b', config.budget).discord
    deviation = abs(numeric + s_cond)
    problems = []
    if deviation > config.tolerance:
        problems.append(f"|delta + S| = {deviation:.3g}")

    # PPT of sigma_ab exactly when the conditional entropy vanishes
    ppt_ab = is_ppt(sigma_ab).ppt
    if ppt_ab != (abs(s_cond) <= VERDICT_TOLERANCES['entangled_margin']):
        problems.append(f"PPT {ppt_ab} but S_a|b = {s_cond:.3g}")
    if not is_ppt(rho_ac).ppt:
        problems.append("rho_ac fails PPT")

    if config.with_ree and _on_ree_subgrid(i, j, side):
        ree = ree_estimate(sigma_ab).value
        ree_dev = abs(ree + s_cond)
        if ree_dev > AUDIT_SLACKS['exact_vs_numeric_ree']:
            problems.append(f"|REE + S| = {ree_dev:.3g}")

    detail = f"theta={theta:.12g} phi={phi:.12g}"
    if problems:
        detail += ' ' + '; '.join(problems)
    return TrialOutcome(index, deviation, not problems, detail)


def _chain_trial(config: CampaignConfig, index: int) -> TrialOutcome:
    rng = trial_rng(config, index)
    if index % 5 == 4:
        theta, phi = rng.uniform(0.0, math.pi / 2, size=2)
        report = separable_complement_report(ExampleFamilyParams(theta, phi), config.budget,
                                             with_ree=config.with_ree)
        source = f"example theta={theta:.6g} phi={phi:.6g}"
    else:
        rank = index % 4 + 1
        rho = random_density_matrix(QUBITS_2, rank, _seed(config, index))
        report = entanglement_report(rho, with_ree=config.with_ree)
        source = f"random rank {rank}"
    violations = find_chain_violations([report], slack=config.tolerance)
    detail = source if not violations else source + ' ' + '; '.join(v['check'] for v in violations)
    return TrialOutcome(index, worst_violation(violations), not violations, detail)


def _eof_oracle_trial(config: CampaignConfig, index: int) -> TrialOutcome:
    rank = index % 3 + 2
    rho = random_density_matrix(QUBITS_2, rank, _seed(config, index))
    exact = eof_2q(rho)
    value, _ = eof_ensemble_oracle(rho, m=4, budget=replace(ORACLE_CAMPAIGN_BUDGET, seed=config.seed))
    signed = value - exact
    # the oracle evaluates a real ensemble, so it cannot go below the closed form
    passed = -AUDIT_SLACKS['chain'] <= signed <= config.tolerance
    return TrialOutcome(index, abs(signed), passed,
                        f"rank={rank} oracle={value:.12g} closed form={exact:.12g}")


def _purification_trial(config: CampaignConfig, index: int) -> TrialOutcome:
    rng = trial_rng(config, index)
    dims = tuple(int(d) for d in rng.integers(2, 4, size=2))
    sig = DimSignature(dims, ('a', 'b'))
    # the ancilla has dimension rank, so the purified state must stay within MAX_TOTAL_DIM
    rank = int(rng.integers(1, min(sig.total, MAX_TOTAL_DIM // sig.total) + 1))
    rho = random_density_matrix(sig, rank, _seed(config, index, 1))
    back = purify(rho).reduce(sig.labels)
    deviation = float(np.max(np.abs(back.matrix - rho.matrix)))
    return TrialOutcome(index, deviation, deviation <= config.tolerance,
                        f"dims={list(dims)} rank={rank}")


TRIAL_FUNCTIONS: Dict[str, Callable[[CampaignConfig, int], TrialOutcome]] = {
    'koashi-winter': _koashi_winter_trial,
    'dual-identity': _dual_identity_trial,
    'strict-gap': _strict_gap_trial,
    'complement-grid': _complement_grid_trial,
    'chain': _chain_trial,
    'eof-oracle': _eof_oracle_trial,
    'purification': _purification_trial,
}


# ============================================================
# RUNNER
# ============================================================

def run_trial(config: CampaignConfig, index: int) -> TrialOutcome:
    """Run one trial of the configured campaign."""
    return TRIAL_FUNCTIONS[config.name](config, index)


def run_campaign(config: CampaignConfig) -> CampaignResult:
    """
    Run every trial and collect outcomes in trial order.

    Args:
        config: Campaign name, trial count, seed, tolerance, budget, workers

    Returns:
        CampaignResult; identical for a fixed config regardless of workers
    """
    n = config.trial_count
    logger.info("Campaign %s: %d trials, seed %d, tolerance %g, %d workers",
                config.name, n, config.seed, config.tolerance, config.workers)
    worker = partial(run_trial, config)
    outcomes: List[TrialOutcome] = []
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(worker, range(n), chunksize=max(1, n // (4 * config.workers))))
    else:
        step = max(1, n // 10)
        for index in range(n):
            outcomes.append(worker(index))
            if (index + 1) % step == 0:
                logger.info("Campaign %s: %d/%d trials", config.name, index + 1, n)

    result = CampaignResult(config, tuple(outcomes))
    log = logger.info if result.passed else logger.warning
    log("Campaign %s: %s (%d failures, worst deviation %.3g)", config.name,
        'PASS' if result.passed else 'FAIL', result.failures, result.worst_deviation)
    return result
