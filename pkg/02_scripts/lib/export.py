"""
Export utilities for saving sweep tables, campaign tables and reports.
"""
from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

import pandas as pd

logger = logging.getLogger(__name__)


def save_to_csv(df: pd.DataFrame,
                filepath: str | Path,
                encoding: str = 'utf-8') -> Path:
    """
    Save DataFrame to CSV without index.

    Args:
        df: DataFrame to save
        filepath: Output path
        encoding: File encoding (plain utf-8 keeps the header byte-stable)

    Returns:
        Path to saved file
    """
    filepath = Path(filepath)
    filepath.parent.mkdir(parents=True, exist_ok=True)

    df.to_csv(filepath, index=False, encoding=encoding, lineterminator='\n')
    logger.info("Saved: %s (%d rows)", filepath, len(df))

    return filepath


def dataframe_to_records(df: pd.DataFrame) -> list[dict]:
    """Rows as plain dicts; NaN and NA become None."""
    clean = df.astype(object).where(pd.notna(df), None)
    return clean.to_dict(orient='records')


def dumps_document(document: Any) -> str:
    """Stable JSON text: two-space indent, insertion-ordered keys, trailing newline."""
    return json.dumps(document, indent=2, allow_nan=False) + '\n'


def save_to_json(document: pd.DataFrame | Any,
                 filepath: str | Path) -> Path:
    """
    Save a DataFrame (as a list of row records) or a plain document to JSON.

    Args:
        document: DataFrame or JSON-serializable object
        filepath: Output path

    Returns:
        Path to saved file
    """
    filepath = Path(filepath)
    filepath.parent.mkdir(parents=True, exist_ok=True)

    if isinstance(document, pd.DataFrame):
        payload = dataframe_to_records(document)
        rows = len(document)
    else:
        payload = document
        rows = len(document) if isinstance(document, list) else 1

    filepath.write_text(dumps_document(payload), encoding='utf-8')
    logger.info("Saved: %s (%d rows)", filepath, rows)

    return filepath
