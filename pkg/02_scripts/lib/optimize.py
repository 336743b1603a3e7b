"""
Multi-start Nelder-Mead driver and unitary parameterization.

Start points come from one seeded generator drawn in a fixed order, so the
start set of a smaller budget is always a prefix of a larger one. Together
with strict-improvement merging this makes the optimum monotone in budget.
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OptimizerBudget:
    starts: int = 24
    iterations: int = 200
    seed: int = 0
    xatol: float = 1e-8
    fatol: float = 1e-12
    simplex_step: float = 0.3

    def __post_init__(self):
        if self.starts < 1 or self.iterations < 1:
            raise ValueError(f"Budget needs starts >= 1 and iterations >= 1, got {self}")


DISCORD_BUDGET = OptimizerBudget()
ORACLE_BUDGET = OptimizerBudget(starts=12, iterations=2000)
# per-trial budget of the eof-oracle campaign; start 0 is the eigen-ensemble
ORACLE_CAMPAIGN_BUDGET = OptimizerBudget(starts=4, iterations=1500, xatol=1e-7, fatol=1e-11)
# starts = restarts of the product-state search, iterations = outer steps
REE_BUDGET = OptimizerBudget(starts=3, iterations=200)
REE_STALL_WINDOW = 50
REE_STALL_RELATIVE = 1e-8
# PPT inputs of decisive shapes have REE 0: run longer and only stall out near 0
REE_PPT_ITERATIONS = 2000
REE_PPT_TARGET = 1e-8
REE_PPT_TERMS_PER_DIM2 = 2


@dataclass(frozen=True)
class OptimizerTrace:
    starts_tried: int
    iterations: int
    achieved_tolerance: float
    best_start: int


@dataclass(frozen=True)
class MinimizeResult:
    x: np.ndarray
    fun: float
    trace: OptimizerTrace


def start_points(dimension: int, budget: OptimizerBudget, scale: float = np.pi) -> np.ndarray:
    """Start 0 is the origin; the rest are uniform in [-scale, scale]."""
    rng = np.random.default_rng(budget.seed)
    draws = rng.uniform(-scale, scale, size=(max(budget.starts - 1, 0), dimension))
    return np.vstack([np.zeros((1, dimension)), draws])


def multi_start_minimize(objective: Callable[[np.ndarray], float],
                         dimension: int,
                         budget: OptimizerBudget,
                         extra_starts: Optional[Sequence[np.ndarray]] = None,
                         scale: float = np.pi) -> MinimizeResult:
    """
    Minimize from every start and keep the first strictly best result.

    Args:
        objective: Function of a real parameter vector
        dimension: Number of parameters
        budget: Starts, iterations per start and tolerances
        extra_starts: Deterministic starts tried before the random ones
        scale: Half-width of the random start box

    Returns:
        MinimizeResult with the best point, its value and an OptimizerTrace
    """
    starts = list(extra_starts or []) + list(start_points(dimension, budget, scale))
    if dimension == 0:
        return MinimizeResult(np.zeros(0), float(objective(np.zeros(0))),
                              OptimizerTrace(1, 0, 0.0, 0))

    best_x, best_f, best_idx, best_spread = None, np.inf, -1, np.inf
    total_iterations = 0
    for idx, x0 in enumerate(starts):
        res = nelder_mead(objective, x0, budget)
        total_iterations += int(res.nit)
        logger.debug("start %d: f=%.12g after %d iterations", idx, res.fun, res.nit)
        if res.fun < best_f:
            values = res.final_simplex[1]
            best_x, best_f, best_idx = res.x, float(res.fun), idx
            best_spread = float(np.max(values) - np.min(values))

    trace = OptimizerTrace(len(starts), total_iterations, best_spread, best_idx)
    return MinimizeResult(np.asarray(best_x), best_f, trace)


def nelder_mead(objective: Callable[[np.ndarray], float], x0: np.ndarray,
                budget: OptimizerBudget, step: Optional[float] = None):
    """One Nelder-Mead run from x0 with an axis-aligned initial simplex."""
    x0 = np.asarray(x0, dtype=float)
    step = budget.simplex_step if step is None else step
    simplex = np.vstack([x0, x0 + step * np.eye(x0.size)])
    return minimize(objective, x0, method='Nelder-Mead', options={
        'maxiter': budget.iterations,
        'xatol': budget.xatol,
        'fatol': budget.fatol,
        'initial_simplex': simplex,
        'adaptive': x0.size > 4,
    })


def polish(objective: Callable[[np.ndarray], float], x: np.ndarray, fun: float,
           budget: OptimizerBudget, rounds: int = 3, step: float = 0.05):
    """
    Restart Nelder-Mead from the current best until it stops improving.

    Returns:
        (x, fun) no worse than the input
    """
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return x, fun
    for _ in range(rounds):
        res = nelder_mead(objective, x, budget, step)
        if res.fun < fun:
            x, fun = res.x, float(res.fun)
        else:
            break
    return x, fun


def givens_parameter_count(dim: int) -> int:
    """Angles and phases for a unitary modulo diagonal phases."""
    return dim * (dim - 1)


def unitary_from_angles(angles: np.ndarray, dim: int) -> np.ndarray:
    """
    Ordered product of complex Givens rotations G(i, j; theta, phase).

    All-zero angles give the identity.
    """
    angles = np.asarray(angles, dtype=float)
    if angles.size != givens_parameter_count(dim):
        raise ValueError(f"Need {givens_parameter_count(dim)} angles for dim {dim}, got {angles.size}")
    u = np.eye(dim, dtype=complex)
    k = 0
    for i in range(dim - 1):
        for j in range(i + 1, dim):
            theta, phase = float(angles[k]), float(angles[k + 1])
            k += 2
            c, s = math.cos(theta), math.sin(theta)
            e = cmath.exp(1j * phase)
            # right-multiplying by G(i, j) only mixes columns i and j
            col_i, col_j = u[:, i].copy(), u[:, j]
            u[:, i] = c * col_i + e * s * col_j
            u[:, j] = c * col_j - e.conjugate() * s * col_i
    return u
