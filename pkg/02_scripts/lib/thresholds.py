"""
Numerical tolerances used across the measures library.

Every bound that an invariant check, a cutoff or a verdict depends on is
named here once. Values are absolute unless noted.

Tolerance groups:
- VALIDATION: gates applied when states are constructed or loaded
- CUTOFFS: values treated as exact zeros inside computations
- VERDICTS: thresholds deciding boolean classifications
- AUDIT: slacks used when checking reported bound chains
"""
from typing import Dict

# ============================================================
# VALIDATION (state invariants)
# ============================================================

VALIDATION_TOLERANCES = {
    'hermiticity': 1e-12,      # max |M - M^dagger| entrywise
    'trace': 1e-10,            # |Tr rho - 1|
    'positivity': 1e-10,       # smallest eigenvalue >= -tol
    'normalization': 1e-12,    # | ||psi|| - 1 |
    'probability_sum': 1e-10,  # mixture weights summing to 1
    'binary_entropy_arg': 1e-12,
    'povm_completeness': 1e-10,
}

# ============================================================
# CUTOFFS (treated as zero)
# ============================================================

CUTOFFS = {
    'entropy_eigenvalue': 1e-12,  # eigenvalues at or below contribute 0
    'outcome_probability': 1e-12, # measurement outcomes skipped
    'rank': 1e-10,                # purification rank
    'schmidt': 1e-10,             # Schmidt coefficients dropped
    'degeneracy': 1e-9,           # eigenvalue grouping in zero-discord check
    'pure_purity': 1e-10,         # 1 - Tr rho^2 below this means pure
    'ree_regularization': 1e-9,   # weight of I/d mixed into rho
    'ree_eigenvalue_floor': 1e-15,
    'concurrence_eigenvalue': 1e-14,  # spectral weight dropped before the concurrence
    'support_leak': 1e-9,         # rho weight outside witness support
}

# ============================================================
# VERDICTS
# ============================================================

VERDICT_TOLERANCES = {
    'ppt': 1e-10,             # min eigenvalue of partial transpose
    'zero_discord': 1e-9,     # largest off-diagonal block entry
    'entangled_margin': 1e-9, # -S_{a|b} above this counts as distillable
    'povm_gap': 1e-6,         # POVM probe beating projective optimum
    'repeated_state': 1e-12,  # 1 - |<a_i|a_j>| for repeated 1-MC states
    'ree_pinch': 1e-6,        # REE estimate this close to I_C fixes distillable entanglement
}

# ============================================================
# AUDIT (bound-chain slacks)
# ============================================================

AUDIT_SLACKS = {
    'chain': 1e-9,
    'exact_vs_numeric_ree': 1e-3,
}

# Separability is decided by PPT only for these (sorted) bipartite shapes
PPT_DECISIVE_SHAPES = {(2, 2), (2, 3)}

# Design limits of the numerical evaluators
MAX_MEASURED_DIM = 4
MAX_ORACLE_DIM = 16
MAX_TOTAL_DIM = 64


def all_tolerances() -> Dict[str, float]:
    """Flattened view of every named tolerance (used in report metadata)."""
    merged: Dict[str, float] = {}
    for group in (VALIDATION_TOLERANCES, CUTOFFS, VERDICT_TOLERANCES, AUDIT_SLACKS):
        merged.update(group)
    return merged


def ppt_decides_separability(dims: tuple) -> bool:
    """True when PPT is necessary and sufficient for the bipartite shape."""
    return tuple(sorted(dims)) in PPT_DECISIVE_SHAPES
