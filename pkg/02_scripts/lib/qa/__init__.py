"""
QA (Quality Assurance) utilities for the measures library.

This module provides the verification campaigns, the bound-chain audit and
the review workbook.
"""

from lib.qa.utils import find_chain_violations, worst_violation
from lib.qa.campaigns import (
    CAMPAIGN_DEFAULTS,
    CampaignConfig,
    CampaignResult,
    TrialOutcome,
    run_campaign,
    run_trial,
)
from lib.qa.workbook import create_campaign_workbook

__all__ = [
    'find_chain_violations',
    'worst_violation',
    'CAMPAIGN_DEFAULTS',
    'CampaignConfig',
    'CampaignResult',
    'TrialOutcome',
    'run_campaign',
    'run_trial',
    'create_campaign_workbook',
]
