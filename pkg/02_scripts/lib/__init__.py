"""
Quantum correlation and entanglement measures library.

Modules:
    - linalg: Dimension signatures, Hermitian eigendecomposition, partial trace/transpose
    - states: Density matrices, pure states and the named constructions
    - entropies: Von Neumann and conditional entropies
    - optimize: Multi-start Nelder-Mead driver and unitary parameterization
    - correlations: Classical correlation, discord and the zero-discord check
    - entanglement: Formation, cost/distillable bounds, REE and the reports
    - measures: Measure-name aliases and per-state report assembly
    - sweep: Example-family parameter sweep
    - conversions: Angle literals and significant-digit rounding
    - dataframes: DataFrame creation utilities
    - export: CSV and JSON export utilities
    - schema: Column lists and valid value sets
    - thresholds: Numerical tolerances
    - errors: Exception hierarchy
    - parser: State and spec document readers/writers
    - qa: Verification campaigns, chain audit and the campaign workbook
"""
