"""
Entropic functionals in bits.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Dict, Tuple

import numpy as np
from scipy.special import entr

from lib.conversions import nats_to_bits
from lib.errors import ValidationError
from lib.states import DensityMatrix
from lib.thresholds import CUTOFFS, VALIDATION_TOLERANCES


@dataclass(frozen=True)
class EntropyReport:
    s_joint: float
    s_marginals: Dict[str, float]
    s_conditional: Dict[Tuple[str, str], float]  # (target, given) -> S_{target|given}
    mutual_information: float
    coherent_information: float


def binary_entropy(p: float) -> float:
    """h(p) = -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0."""
    tol = VALIDATION_TOLERANCES['binary_entropy_arg']
    if not (-tol <= p <= 1 + tol):
        raise ValidationError(f"binary_entropy argument {p!r} outside [0, 1]")
    p = min(max(float(p), 0.0), 1.0)
    return float(nats_to_bits(entr(p) + entr(1.0 - p)))


def entropy_of_spectrum(eigenvalues: np.ndarray) -> float:
    """
    Shannon entropy in bits of a spectrum.

    Values within the cutoff of 0 count as 0 and values within the cutoff
    of 1 count as 1, so pure spectra give exactly 0.
    """
    cutoff = CUTOFFS['entropy_eigenvalue']
    lam = np.asarray(eigenvalues, dtype=float)
    lam = np.where(lam > cutoff, lam, 0.0)
    lam = np.where(lam >= 1.0 - cutoff, 1.0, lam)
    return float(max(nats_to_bits(np.sum(entr(lam))), 0.0))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S(rho) in bits."""
    return entropy_of_spectrum(rho.eigenvalues)


def _entropy_of(rho: DensityMatrix, labels) -> float:
    labels = list(labels)
    if set(labels) == set(rho.sig.labels):
        return von_neumann_entropy(rho)
    return von_neumann_entropy(rho.reduce(labels))


def _check_labels(rho: DensityMatrix, x: str, y: str) -> None:
    rho.sig.indices((x, y))
    if x == y:
        raise ValidationError(f"Labels must be distinct, got '{x}' twice")


def conditional_entropy(rho: DensityMatrix, target: str, given: str) -> float:
    """S_{target|given} = S(rho_{target,given}) - S(rho_given); may be negative."""
    _check_labels(rho, target, given)
    return _entropy_of(rho, (target, given)) - _entropy_of(rho, (given,))


def mutual_information(rho: DensityMatrix, x: str, y: str) -> float:
    """I(x:y) = S_x + S_y - S_xy."""
    _check_labels(rho, x, y)
    return _entropy_of(rho, (x,)) + _entropy_of(rho, (y,)) - _entropy_of(rho, (x, y))


def coherent_information(rho: DensityMatrix, a: str = 'a', b: str = 'b') -> float:
    """max{0, -S_{a|b}, -S_{b|a}}."""
    _check_labels(rho, a, b)
    s_ab = _entropy_of(rho, (a, b))
    s_a = _entropy_of(rho, (a,))
    s_b = _entropy_of(rho, (b,))
    return max(0.0, s_b - s_ab, s_a - s_ab)


def entropy_report(rho: DensityMatrix) -> EntropyReport:
    """All entropies of a state, conditional ones for every ordered label pair."""
    labels = rho.sig.labels
    s_joint = von_neumann_entropy(rho)
    marginals = {l: _entropy_of(rho, (l,)) for l in labels}

    conditional: Dict[Tuple[str, str], float] = {}
    for target, given in permutations(labels, 2):
        conditional[(target, given)] = conditional_entropy(rho, target, given)

    if len(labels) == 2:
        a, b = labels
        mi = marginals[a] + marginals[b] - s_joint
        ic = max(0.0, -conditional[(a, b)], -conditional[(b, a)])
    else:
        a, b = labels[0], labels[1]
        mi = mutual_information(rho, a, b)
        ic = coherent_information(rho, a, b)
    return EntropyReport(s_joint, marginals, conditional, mi, ic)
