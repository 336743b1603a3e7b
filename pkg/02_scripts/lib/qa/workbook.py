"""
Campaign workbook generation.

Creates an Excel workbook summarizing verification campaigns for review.
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Sequence

from lib.dataframes import create_summary_df, create_trials_df
from lib.qa.campaigns import CampaignResult
from lib.thresholds import all_tolerances

logger = logging.getLogger(__name__)


def create_campaign_workbook(filepath: str | Path, results: Sequence[CampaignResult]) -> Path:
    """
    Create a workbook with one summary row per campaign and every trial.

    Args:
        filepath: Path where the Excel workbook will be saved
        results: Campaign results in the order they were run

    Sheets created:
        - Summary: campaign, trials, seed, tolerance, worst deviation,
          failures and verdict (green pass, red fail)
        - Trials: every trial with its deviation and detail, failed rows red
        - Tolerances: the named numerical tolerances in effect

    Returns:
        Path to saved workbook
    """
    from openpyxl import Workbook
    from openpyxl.styles import Font, PatternFill, Alignment, Border, Side
    from openpyxl.utils.dataframe import dataframe_to_rows
    from openpyxl.utils import get_column_letter

    filepath = Path(filepath)
    filepath.parent.mkdir(parents=True, exist_ok=True)
    wb = Workbook()

    summary_df = create_summary_df([r.summary_row() for r in results])
    trials_df = create_trials_df([row for r in results for row in r.trial_rows()])

    # Define styles
    header_font = Font(bold=True, color="FFFFFF")
    header_fill = PatternFill(start_color="4472C4", end_color="4472C4", fill_type="solid")
    error_fill = PatternFill(start_color="FFC7CE", end_color="FFC7CE", fill_type="solid")
    ok_fill = PatternFill(start_color="C6EFCE", end_color="C6EFCE", fill_type="solid")
    thin_border = Border(
        left=Side(style='thin'),
        right=Side(style='thin'),
        top=Side(style='thin'),
        bottom=Side(style='thin')
    )

    def write_table(ws, df, passed_column: str) -> None:
        passed_idx = list(df.columns).index(passed_column)
        for i, row in enumerate(dataframe_to_rows(df, index=False, header=True), start=1):
            fill = None
            if i > 1:
                fill = ok_fill if row[passed_idx] else error_fill
            for j, value in enumerate(row, start=1):
                cell = ws.cell(row=i, column=j, value=value)
                cell.border = thin_border
                if i == 1:
                    cell.font = header_font
                    cell.fill = header_fill
                elif fill is not None:
                    cell.fill = fill
        ws.freeze_panes = 'A2'
        for col_idx, col in enumerate(df.columns, start=1):
            ws.column_dimensions[get_column_letter(col_idx)].width = max(len(str(col)) + 2, 14)

    # =========================================================================
    # SHEET 1: Summary
    # =========================================================================
    ws_summary = wb.active
    ws_summary.title = "Summary"
    write_table(ws_summary, summary_df, 'passed')

    overall_row = len(summary_df) + 3
    ws_summary.cell(row=overall_row, column=1, value="Overall").font = Font(bold=True)
    overall_ok = all(r.passed for r in results)
    overall = ws_summary.cell(row=overall_row, column=2, value="PASS" if overall_ok else "FAIL")
    overall.fill = ok_fill if overall_ok else error_fill

    # =========================================================================
    # SHEET 2: Trials
    # =========================================================================
    ws_trials = wb.create_sheet("Trials")
    if len(trials_df) > 0:
        write_table(ws_trials, trials_df, 'passed')
        ws_trials.column_dimensions[get_column_letter(len(trials_df.columns))].width = 70
        for row in ws_trials.iter_rows(min_row=2, min_col=len(trials_df.columns),
                                       max_col=len(trials_df.columns)):
            row[0].alignment = Alignment(wrap_text=True, vertical='top')
    else:
        ws_trials.cell(row=1, column=1, value="No trials run")

    # =========================================================================
    # SHEET 3: Tolerances
    # =========================================================================
    ws_tol = wb.create_sheet("Tolerances")
    for j, header in enumerate(('Name', 'Value'), start=1):
        cell = ws_tol.cell(row=1, column=j, value=header)
        cell.font = header_font
        cell.fill = header_fill
        cell.border = thin_border
    for i, (name, value) in enumerate(sorted(all_tolerances().items()), start=2):
        ws_tol.cell(row=i, column=1, value=name).border = thin_border
        ws_tol.cell(row=i, column=2, value=value).border = thin_border
    ws_tol.column_dimensions['A'].width = 25
    ws_tol.column_dimensions['B'].width = 12
    ws_tol.freeze_panes = 'A2'

    # Save workbook
    wb.save(filepath)
    logger.info("Saved: %s (%d campaigns, %d trials)", filepath, len(summary_df), len(trials_df))
    return filepath
