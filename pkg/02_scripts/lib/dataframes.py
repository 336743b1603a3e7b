"""
DataFrame creation utilities for sweep and campaign tables.

Functions for creating standardized DataFrames from row dicts and
applying the schema columns before export.
"""

import pandas as pd

from lib.conversions import round_difference, round_sig
from lib.schema import (
    SWEEP_COLUMNS,
    SWEEP_FLOAT_COLUMNS,
    TRIAL_COLUMNS,
    SUMMARY_COLUMNS,
)


# ============================================================
# DATAFRAME CREATION FUNCTIONS
# ============================================================

def _with_columns(data: list[dict], columns: list[str]) -> pd.DataFrame:
    df = pd.DataFrame(data)
    # Ensure all columns exist
    for col in columns:
        if col not in df.columns:
            df[col] = None
    # Reorder and select only standard columns
    return df[columns]


def create_sweep_df(data: list[dict]) -> pd.DataFrame:
    """
    Create a sweep DataFrame with standard schema.

    Float columns are rounded to 9 significant digits. E_C and E_D share one
    decimal quantum, so Delta = E_C - E_D holds exactly on the emitted
    decimals and Delta carries no more than 9 significant digits.
    """
    rows = []
    for row in data:
        out = dict(row)
        for col in SWEEP_FLOAT_COLUMNS:
            if col not in ('E_C', 'E_D'):
                out[col] = round_sig(out.get(col))
        out['E_C'], out['E_D'], out['Delta'] = round_difference(out.get('E_C'), out.get('E_D'))
        rows.append(out)
    if not rows:
        return pd.DataFrame(columns=SWEEP_COLUMNS)
    return _with_columns(rows, SWEEP_COLUMNS)


def create_trials_df(data: list[dict]) -> pd.DataFrame:
    """Create a per-trial campaign DataFrame with standard schema."""
    if not data:
        return pd.DataFrame(columns=TRIAL_COLUMNS)
    return _with_columns(data, TRIAL_COLUMNS)


def create_summary_df(data: list[dict]) -> pd.DataFrame:
    """Create a campaign summary DataFrame (one row per campaign)."""
    if not data:
        return pd.DataFrame(columns=SUMMARY_COLUMNS)
    return _with_columns(data, SUMMARY_COLUMNS)
