"""
QA utility functions for entanglement reports.

Functions for auditing the bound chain
formation >= cost >= regularized REE >= key rate >= distillable >= coherent information
at the level of what each report actually asserts.
"""
from __future__ import annotations

from typing import Iterable, Optional

from lib.entanglement import EntanglementReport
from lib.schema import CHAIN_VIOLATION_COLUMNS
from lib.thresholds import AUDIT_SLACKS, VALIDATION_TOLERANCES


def _check(violations: list[dict], report: int | str, check: str,
           left: Optional[float], right: Optional[float], slack: float) -> None:
    """Record a violation unless left + slack >= right."""
    if left is None or right is None:
        return
    if left + slack < right:
        violations.append(dict(zip(CHAIN_VIOLATION_COLUMNS, (report, check, left, right, slack))))


def find_chain_violations(reports: Iterable[EntanglementReport],
                          slack: Optional[float] = None) -> list[dict]:
    """
    Check every report against the bound-chain invariants.

    Args:
        reports: Reports to audit; their position is used as the report id
        slack: Absolute slack, defaults to the audit chain slack

    Returns:
        List of dicts with keys: report, check, left, right, slack
        (each violation means left + slack < right)
    """
    slack = AUDIT_SLACKS['chain'] if slack is None else slack
    ree_slack = AUDIT_SLACKS['exact_vs_numeric_ree']
    violations: list[dict] = []

    for idx, r in enumerate(reports):
        # formation sits on top of the chain
        _check(violations, idx, 'eof >= e_cost.upper', r.eof, r.e_cost.upper, slack)
        _check(violations, idx, 'eof >= ree_upper', r.eof, r.ree_upper, slack)

        # regularized REE bracket
        _check(violations, idx, 'ree_upper >= ree_lower', r.ree_upper, r.ree_lower, slack)
        _check(violations, idx, 'ree_upper >= key_rate.upper', r.ree_upper, r.key_rate.upper, slack)
        _check(violations, idx, 'ree_upper >= e_distillable.lower',
               r.ree_upper, r.e_distillable.lower, slack)

        # distillable entanglement above coherent information
        _check(violations, idx, 'key_rate.lower >= e_distillable.lower',
               r.key_rate.lower, r.e_distillable.lower, slack)
        _check(violations, idx, 'e_cost.lower >= e_distillable.lower',
               r.e_cost.lower, r.e_distillable.lower, slack)
        _check(violations, idx, 'e_distillable.lower >= I_C',
               r.e_distillable.lower, r.coherent_information, slack)

        # every interval well formed
        for name in ('e_cost', 'e_distillable', 'key_rate'):
            bound = getattr(r, name)
            _check(violations, idx, f'{name}.upper >= {name}.lower', bound.upper, bound.lower, slack)

        # exact distillable value against the numerical REE estimate
        ree_numeric = r.cross_checks.get('ree_numeric')
        if r.e_distillable.is_exact and ree_numeric is not None:
            _check(violations, idx, 'ree_numeric >= e_distillable (exact)',
                   ree_numeric, r.e_distillable.upper, ree_slack)

        # loss equals cost minus distillable when both are exact
        if r.e_cost.is_exact and r.e_distillable.is_exact and r.delta_loss is not None:
            expected = r.e_cost.upper - r.e_distillable.upper
            _check(violations, idx, 'delta_loss >= e_cost - e_distillable', r.delta_loss, expected, slack)
            _check(violations, idx, 'e_cost - e_distillable >= delta_loss', expected, r.delta_loss, slack)

        if r.concurrence is not None:
            _check(violations, idx, 'concurrence >= 0', r.concurrence, 0.0,
                   VALIDATION_TOLERANCES['binary_entropy_arg'])
            _check(violations, idx, '1 >= concurrence', 1.0, r.concurrence,
                   VALIDATION_TOLERANCES['binary_entropy_arg'])

    return violations


def worst_violation(violations: Iterable[dict]) -> float:
    """Largest amount right - left over the violations (0.0 when none)."""
    return max((v['right'] - v['left'] for v in violations), default=0.0)
