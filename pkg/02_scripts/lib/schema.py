"""
Standard schemas for measure reports, sweep tables and campaign output.

All commands should use these names to keep emitted documents stable
across runs and versions.

This module defines only constants.
For DataFrame creation functions, see lib/dataframes.py
"""

# ============================================================
# SUBSYSTEM LABELS
# ============================================================

DEFAULT_LABELS = ('a', 'b', 'c')
ANCILLA_LABELS = 'cdefghijklmnopqrstuvwxyz'  # purification picks the first free one
FLAG_LABEL = 'f'  # pseudo-pure flag subsystem

# ============================================================
# VALID VALUES
# ============================================================

PROVENANCE_TYPES = {
    'exact-by-theorem',     # separable complement fixes the value
    'exact-by-additivity',  # formation is additive, closed form available
    'exact-pure',           # pure state, all measures equal the entropy
    'exact-separable',      # separable state, all measures vanish
    'upper-bound',
    'lower-bound',
    'interval',
    'conditional',          # hypothesis could not be certified
}

CLASSIFICATIONS = {
    'pure',
    'separable',
    'pseudo-pure',
    'mixed-entangled',
}

IRREVERSIBILITY_TYPES = {
    'A',   # formation additivity certified
    'B',   # distillable value attained at one copy and below formation
    'AB',  # both
    'O',   # nothing certified
}

MEASURE_TYPES = {
    'entropy',
    'discord',
    'entanglement',
    'ppt',
}

CAMPAIGN_TYPES = {
    'koashi-winter',    # formation vs discord with the purifying system
    'dual-identity',    # formation + classical correlation = marginal entropy
    'strict-gap',       # formation strictly above coherent information
    'complement-grid',  # discord vs conditional entropy on the example grid
    'chain',            # bound-chain audit over random reports
    'eof-oracle',       # ensemble oracle vs closed form
    'purification',     # purify / partial trace round trip
}

OUTPUT_FORMATS = {'csv', 'json'}

# ============================================================
# STATE DOCUMENT KEYS
# ============================================================

STATE_REQUIRED_KEYS = ['dims', 'labels', 're']
STATE_OPTIONAL_KEYS = ['im']

# ============================================================
# TABLE COLUMNS
# ============================================================

SWEEP_COLUMNS = [
    'phi',
    'theta',
    'E_C',
    'E_D',
    'Delta',
    'discord_ab_numeric',
    'S_cond_ab',
    'ree_upper',
    'ppt_ac',
]

# Sweep columns rounded before emission (ppt_ac is boolean, Delta is derived)
SWEEP_FLOAT_COLUMNS = ['phi', 'theta', 'E_C', 'E_D', 'discord_ab_numeric',
                       'S_cond_ab', 'ree_upper']

TRIAL_COLUMNS = [
    'campaign',
    'trial',
    'seed',
    'deviation',      # worst deviation for the trial
    'passed',
    'detail',
]

SUMMARY_COLUMNS = [
    'campaign',
    'trials',
    'seed',
    'tolerance',
    'worst_deviation',
    'failures',
    'passed',
]

CHAIN_VIOLATION_COLUMNS = [
    'report',
    'check',
    'left',
    'right',
    'slack',
]
