"""
Measure names and single-state report assembly for the `measure` command.
"""
from __future__ import annotations

import logging
import re
from typing import Any, Dict, Iterable, List, Optional

from lib.conversions import round_sig
from lib.correlations import discord
from lib.entanglement import Bound, entanglement_report, irreversibility_conditions
from lib.entropies import entropy_report
from lib.errors import ValidationError
from lib.linalg import permute_subsystems
from lib.optimize import DISCORD_BUDGET, REE_BUDGET, OptimizerBudget
from lib.schema import MEASURE_TYPES
from lib.states import DensityMatrix, is_ppt

logger = logging.getLogger(__name__)


# =============================================================================
# MEASURE NAMES
# =============================================================================

# Lowercase alias -> standard measure name
MEASURE_ALIASES = {
    # entropies
    'entropy': 'entropy',
    'entropies': 'entropy',
    's': 'entropy',
    'von-neumann': 'entropy',
    'vn': 'entropy',
    'conditional-entropy': 'entropy',

    # discord and classical correlation
    'discord': 'discord',
    'qd': 'discord',
    'delta': 'discord',
    'classical-correlation': 'discord',
    'j': 'discord',

    # entanglement measures and bounds
    'entanglement': 'entanglement',
    'eof': 'entanglement',
    'formation': 'entanglement',
    'e_f': 'entanglement',
    'concurrence': 'entanglement',
    'bounds': 'entanglement',
    'ree': 'entanglement',

    # partial transpose
    'ppt': 'ppt',
    'peres': 'ppt',
    'partial-transpose': 'ppt',
}


def normalize_measure_name(name: str) -> str:
    """
    Normalize a measure name to standard form.
    Args:
        name: Raw measure name from the command line
    Returns:
        One of schema.MEASURE_TYPES
    Raises:
        ValueError: If the name is not a known alias
    """
    if name is None:
        raise ValueError(f"Measure name is missing. Input: {name!r}")

    clean = str(name).strip().lower()
    if clean in MEASURE_ALIASES:
        return MEASURE_ALIASES[clean]

    # underscores and spaces are accepted in place of dashes
    clean_dashed = re.sub(r'[\s_]+', '-', clean)
    if clean_dashed in MEASURE_ALIASES:
        return MEASURE_ALIASES[clean_dashed]

    raise ValueError(
        f"Unknown measure '{name}'. Known measures: {sorted(MEASURE_TYPES)} "
        f"(aliases: {', '.join(sorted(MEASURE_ALIASES))})")


def parse_measure_list(text: str | Iterable[str]) -> List[str]:
    """Comma-separated (or listed) names to unique standard names in input order."""
    items = text.split(',') if isinstance(text, str) else list(text)
    out: List[str] = []
    for item in items:
        if not str(item).strip():
            continue
        std = normalize_measure_name(item)
        if std not in out:
            out.append(std)
    if not out:
        raise ValueError("No measures requested")
    return out


# =============================================================================
# REPORT ASSEMBLY
# =============================================================================

def _bound_doc(bound: Bound) -> Dict[str, Any]:
    return {
        'lower': round_sig(bound.lower),
        'upper': round_sig(bound.upper),
        'provenance': bound.provenance,
    }


def _entropy_doc(rho: DensityMatrix) -> Dict[str, Any]:
    report = entropy_report(rho)
    doc: Dict[str, Any] = {'S_' + ''.join(rho.sig.labels): round_sig(report.s_joint)}
    for label, value in report.s_marginals.items():
        doc[f'S_{label}'] = round_sig(value)
    doc['S_cond'] = {f'{t}|{g}': round_sig(v) for (t, g), v in report.s_conditional.items()}
    doc['I'] = round_sig(report.mutual_information)
    doc['I_C'] = round_sig(report.coherent_information)
    return doc


def _discord_doc(rho: DensityMatrix, target: str, measured: str,
                 budget: OptimizerBudget, povm_trials: int) -> Dict[str, Any]:
    result = discord(rho, target, measured, budget, povm_trials)
    trace = result.optimizer_trace
    return {
        'target': target,
        'measured': measured,
        'discord': round_sig(result.discord),
        'J': round_sig(result.classical_correlation),
        'I': round_sig(result.mutual_information),
        'povm_gap': round_sig(result.povm_gap),
        'optimizer': {
            'starts_tried': trace.starts_tried,
            'iterations': trace.iterations,
            'achieved_tolerance': round_sig(trace.achieved_tolerance),
            'best_start': trace.best_start,
        },
    }


def _entanglement_doc(rho: DensityMatrix, with_ree: bool,
                      ree_budget: OptimizerBudget) -> Dict[str, Any]:
    report = entanglement_report(rho, with_ree=with_ree, ree_budget=ree_budget)
    doc = {
        'classification': report.classification,
        'concurrence': round_sig(report.concurrence),
        'E_F': round_sig(report.eof),
        'E_F_provenance': report.eof_provenance,
        'E_C': _bound_doc(report.e_cost),
        'E_D': _bound_doc(report.e_distillable),
        'K': _bound_doc(report.key_rate),
        'Delta': round_sig(report.delta_loss),
        'ree_upper': round_sig(report.ree_upper),
        'ree_lower': round_sig(report.ree_lower),
        'I_C': round_sig(report.coherent_information),
        'S_cond_ab': round_sig(report.s_cond_ab),
        'complement': report.complement,
        'conditional': report.conditional,
        'cross_checks': {k: round_sig(v) for k, v in report.cross_checks.items()},
    }
    if rho.sig.dims == (2, 2):
        record = irreversibility_conditions(rho, with_ree=with_ree, ree_budget=ree_budget)
        doc['irreversibility'] = {
            'type': record.irreversibility_type,
            'verdict': record.verdict,
            'additivity_certified': record.additivity_certified,
            'single_copy_distillable': record.single_copy_distillable,
            'both_complements': record.both_complements,
            'note': record.note,
        }
    return doc


def _ppt_doc(rho: DensityMatrix, measured: str) -> Dict[str, Any]:
    verdict = is_ppt(rho, measured)
    return {
        'ppt': verdict.ppt,
        'min_eigenvalue': round_sig(verdict.min_eigenvalue),
        'decides_separability': verdict.decides_separability,
        'separable': verdict.separable,
    }


def _ordered_pair(rho: DensityMatrix, target: str, measured: str) -> DensityMatrix:
    """Reduce to (target, measured) in that order."""
    pair = rho if len(rho.sig) == 2 else rho.reduce((target, measured))
    if pair.sig.labels == (target, measured):
        return pair
    matrix, sig = permute_subsystems(pair.matrix, pair.sig, (target, measured))
    return DensityMatrix(matrix, sig)


def measure_state(rho: DensityMatrix, measures: Iterable[str],
                  budget: OptimizerBudget = DISCORD_BUDGET,
                  target: Optional[str] = None,
                  measured: Optional[str] = None,
                  with_ree: bool = False,
                  ree_budget: OptimizerBudget = REE_BUDGET,
                  povm_trials: int = 0) -> Dict[str, Any]:
    """
    Evaluate the requested measures and return a JSON-ready document.

    Entropies cover every subsystem. Discord, entanglement and PPT act on the
    (target, measured) pair, reduced from larger states; by default the first
    two labels.

    Args:
        rho: State to measure
        measures: Measure names or aliases
        budget: Optimizer budget for the discord
        target: Target label, defaults to the first label
        measured: Measured label, defaults to the second label
        with_ree: Also run the numerical REE estimate
        ree_budget: Budget for the REE estimate
        povm_trials: Random POVM probes after the projective discord

    Returns:
        Dict with 'dims', 'labels' and one section per measure, floats
        rounded to 9 significant digits
    """
    names = parse_measure_list(measures)
    labels = rho.sig.labels
    if len(labels) < 2 and any(n != 'entropy' for n in names):
        raise ValidationError(f"Measures {names} need at least two subsystems, got {list(labels)}")
    target = labels[0] if target is None else target
    measured = (labels[1] if labels[1] != target else labels[0]) if measured is None else measured
    for label in (target, measured):
        if label not in labels:
            raise ValidationError(f"Unknown label '{label}', state has {list(labels)}")
    if target == measured and any(n != 'entropy' for n in names):
        raise ValidationError(f"Target and measured label are both '{target}'")

    doc: Dict[str, Any] = {'dims': list(rho.sig.dims), 'labels': list(labels)}
    pair = None
    for name in names:
        logger.info("Measuring %s", name)
        if name == 'entropy':
            doc['entropy'] = _entropy_doc(rho)
            continue
        if pair is None:
            pair = _ordered_pair(rho, target, measured)
        if name == 'discord':
            doc['discord'] = _discord_doc(pair, target, measured, budget, povm_trials)
        elif name == 'entanglement':
            doc['entanglement'] = _entanglement_doc(pair, with_ree, ree_budget)
        elif name == 'ppt':
            doc['ppt'] = _ppt_doc(pair, measured)
    return doc
