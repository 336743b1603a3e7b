"""
Parameter sweep over the two-angle example family.

One row per (theta, phi): cost and distillable entanglement of sigma_ab from
the separable-complement report, their difference, the numerical discord,
the conditional entropy, the REE upper bound and the PPT verdict of rho_ac.
Rows come back ordered by theta (as given) and then phi (ascending),
whatever the number of workers.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Optional, Sequence, Tuple

from lib.conversions import angle_grid
from lib.entanglement import example_family_closed_form, separable_complement_report
from lib.optimize import DISCORD_BUDGET, OptimizerBudget
from lib.schema import OUTPUT_FORMATS
from lib.states import ExampleFamilyParams
from lib.thresholds import VERDICT_TOLERANCES

logger = logging.getLogger(__name__)

DEFAULT_THETAS = (math.pi / 6, math.pi / 4)
DEFAULT_PHI_STEPS = 65


@dataclass(frozen=True)
class SweepConfig:
    theta_values: Tuple[float, ...] = DEFAULT_THETAS
    phi_steps: int = DEFAULT_PHI_STEPS
    budget: OptimizerBudget = field(default=DISCORD_BUDGET)
    output_path: Optional[Path] = None
    format: str = 'csv'
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'theta_values', tuple(float(t) for t in self.theta_values))
        if not self.theta_values:
            raise ValueError("Sweep needs at least one theta value")
        for theta in self.theta_values:
            if not (0.0 <= theta <= math.pi / 2 + 1e-12):
                raise ValueError(f"theta = {theta!r} outside [0, pi/2]")
        if self.phi_steps < 2:
            raise ValueError(f"phi_steps must be >= 2, got {self.phi_steps}")
        if self.format not in OUTPUT_FORMATS:
            raise ValueError(f"format must be one of {sorted(OUTPUT_FORMATS)}, got '{self.format}'")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")

    def points(self) -> list[Tuple[float, float]]:
        """(theta, phi) pairs in emission order."""
        phis = angle_grid(0.0, math.pi / 2, self.phi_steps)
        return [(theta, float(phi)) for theta in self.theta_values for phi in phis]


def sweep_point(point: Tuple[float, float], budget: OptimizerBudget = DISCORD_BUDGET) -> dict:
    """Unrounded sweep row for one (theta, phi)."""
    theta, phi = point
    report = separable_complement_report(ExampleFamilyParams(theta, phi), budget)
    e_c = report.e_cost.upper
    e_d = report.e_distillable.upper
    return {
        'phi': phi,
        'theta': theta,
        'E_C': e_c,
        'E_D': e_d,
        'Delta': e_c - e_d,
        'discord_ab_numeric': report.cross_checks.get('discord_ab_numeric'),
        'S_cond_ab': report.s_cond_ab,
        'ree_upper': report.ree_upper,
        'ppt_ac': bool(report.cross_checks['ppt_ac_min_eigenvalue'] >= -VERDICT_TOLERANCES['ppt']),
    }


def run_sweep(config: SweepConfig) -> list[dict]:
    """
    Evaluate every sweep point.

    Returns:
        Unrounded rows in (theta, phi) order; pass them through
        dataframes.create_sweep_df for emission
    """
    points = config.points()
    logger.info("Sweep: %d theta values x %d phi steps = %d points (%d workers)",
                len(config.theta_values), config.phi_steps, len(points), config.workers)
    worker = partial(sweep_point, budget=config.budget)
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(worker, points))
    else:
        rows = [worker(p) for p in points]
    logger.info("Sweep finished: %d rows", len(rows))
    return rows


def closed_form_rows(theta_values: Sequence[float], phi_steps: int) -> list[dict]:
    """Closed-form E_C, E_D and Delta on the same grid (reference curves)."""
    rows = []
    for theta, phi in SweepConfig(tuple(theta_values), phi_steps).points():
        closed = example_family_closed_form(theta, phi)
        rows.append({'phi': phi, 'theta': theta, 'E_C': closed['E_C'],
                     'E_D': closed['E_D'], 'Delta': closed['Delta']})
    return rows
