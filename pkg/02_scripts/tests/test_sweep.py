import math
from decimal import Decimal

import pytest

from lib.dataframes import create_sweep_df
from lib.schema import SWEEP_COLUMNS
from lib.sweep import SweepConfig, closed_form_rows, run_sweep, sweep_point


def test_config_validation():
    with pytest.raises(ValueError):
        SweepConfig(theta_values=())
    with pytest.raises(ValueError):
        SweepConfig(theta_values=(2.0,))
    with pytest.raises(ValueError):
        SweepConfig(phi_steps=1)
    with pytest.raises(ValueError):
        SweepConfig(format='xlsx')
    with pytest.raises(ValueError):
        SweepConfig(workers=0)


def test_points_are_theta_major():
    config = SweepConfig(theta_values=(0.3, 0.1), phi_steps=3)
    points = config.points()
    assert [t for t, _ in points] == [0.3, 0.3, 0.3, 0.1, 0.1, 0.1]
    assert [p for _, p in points[:3]] == [0.0, math.pi / 4, math.pi / 2]


def test_rows_follow_closed_forms(fast_budget):
    config = SweepConfig(theta_values=(math.pi / 3,), phi_steps=4, budget=fast_budget)
    rows = run_sweep(config)
    reference = closed_form_rows(config.theta_values, config.phi_steps)
    assert len(rows) == len(reference) == 4
    for row, ref in zip(rows, reference):
        assert (row['theta'], row['phi']) == (ref['theta'], ref['phi'])
        for key in ('E_C', 'E_D', 'Delta'):
            assert row[key] == pytest.approx(ref[key], abs=1e-9)
        assert row['E_C'] >= row['E_D'] - 1e-12


def test_point_cross_checks(fast_budget):
    row = sweep_point((math.pi / 2, math.pi / 4), fast_budget)
    assert row['ppt_ac']
    # discord of sigma_ab equals -S(a|b) on this family
    assert row['discord_ab_numeric'] == pytest.approx(-row['S_cond_ab'], abs=1e-5)
    assert row['ree_upper'] <= row['E_C'] + 1e-9


def test_sweep_df_columns(fast_budget):
    rows = run_sweep(SweepConfig(theta_values=(math.pi / 4,), phi_steps=2, budget=fast_budget))
    df = create_sweep_df(rows)
    assert list(df.columns) == SWEEP_COLUMNS
    for e_c, e_d, delta in zip(df['E_C'], df['E_D'], df['Delta']):
        assert Decimal(repr(float(delta))) == Decimal(repr(float(e_c))) - Decimal(repr(float(e_d)))


def test_sweep_df_delta_is_rounded():
    # E_D rounded on its own would carry digits below the E_C quantum
    rows = [{'phi': 0.1, 'theta': 0.2, 'E_C': 0.6008756029712345, 'E_D': 0.0012345678987654,
             'discord_ab_numeric': None, 'S_cond_ab': None, 'ree_upper': None, 'ppt_ac': True}]
    row = create_sweep_df(rows).iloc[0]
    assert (row['E_C'], row['E_D'], row['Delta']) == (0.600875603, 0.001234568, 0.599641035)
